//! Builds surface profiles from harmonic coefficients and runs the
//! admissibility checks: pole smoothness, strict positivity of the radius
//! between the poles, and the harmonic parity rules.

use std::f64::consts::PI;

use revmol::profile::{Profile, Surface};

fn main() {
    // A two-harmonic radius with a quadratic-well potential.
    let good = Profile::from_pairs(
        PI,
        Surface::ProjectivePlane,
        &[(1, 0.4), (3, 0.2)],
        &[(0, 0.45), (1, -0.45)],
    );
    let report = good.validate(1e-9);
    println!("two-harmonic profile");
    println!("  slope sum at the pole: {}", report.slope_sum);
    println!("  slope defect: {:e}", report.slope_defect);
    if let Some(pos) = &report.positivity {
        println!(
            "  radius minimum {:e} at r = {}",
            pos.min_value, pos.min_at
        );
    }
    println!("  admissible: {}", report.ok());

    // Same shape handed to the full validation entry point.
    let validated = good.validated(1e-9).expect("admissible profile");
    println!(
        "  f(L/2) = {}, V(0) = {}",
        validated.radius(0.5 * PI),
        validated.potential(0.0)
    );

    // The slope condition normalizes the coefficients: scaling them breaks
    // the smooth closure at the poles.
    let tilted = Profile::from_pairs(PI, Surface::Sphere, &[(1, 1.1)], &[]);
    match tilted.validated(1e-9) {
        Err(err) => println!("tilted profile rejected: {err}"),
        Ok(_) => unreachable!(),
    }

    // A radius that dips negative between the poles is not a surface.
    let dipping = Profile::from_pairs(PI, Surface::Sphere, &[(1, -0.2), (3, 0.4)], &[]);
    match dipping.validated(1e-9) {
        Err(err) => println!("dipping profile rejected: {err}"),
        Ok(_) => unreachable!(),
    }

    // Even radial harmonics would break the mirror symmetry of the metric.
    let even = Profile::from_pairs(PI, Surface::Sphere, &[(2, 1.0)], &[]);
    match even.validated(1e-9) {
        Err(err) => println!("even harmonic rejected: {err}"),
        Ok(_) => unreachable!(),
    }
}
