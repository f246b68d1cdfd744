//! Integrates the reduced geodesic flow with and without potential and
//! watches the conserved quantities: the energy drifts only through
//! integration error while the angular momentum is preserved structurally,
//! term by term, by the right-hand side.

use std::f64::consts::PI;

use revmol::oracle::{energy, integrate_flow, torus_point};
use revmol::profile::{PhasePoint, Profile, Surface};

fn main() {
    // Round metric, no potential.
    let round = Profile::from_pairs(PI, Surface::Sphere, &[(1, 1.0)], &[])
        .validated(1e-9)
        .unwrap();
    let start = PhasePoint::new(0.3, 0.5, 1.2, 0.0);
    println!("round sphere, h = {}", energy(&round, &start));
    let report = integrate_flow(&round, start, 1e-3, 100_000, 1e-6).unwrap();
    println!("  steps = {}, dt = {}", report.steps, report.dt);
    println!("  |dH| = {:e}", report.h_drift_max);
    println!("  |dK| = {:e}", report.k_drift_max);
    println!("  r range = [{:.6}, {:.6}]", report.r_min, report.r_max);

    // Two-harmonic metric with a central well; start on a specific torus.
    let well = Profile::from_pairs(
        PI,
        Surface::ProjectivePlane,
        &[(1, 0.4), (3, 0.2)],
        &[(0, 0.45), (1, -0.45)],
    )
    .validated(1e-9)
    .unwrap();
    let (h, k) = (1.0, 0.2);
    let start = torus_point(&well, h, k, 1.1, 0.0).expect("point on the torus");
    println!(
        "central well, h = {}, k = {}",
        energy(&well, &start),
        start.p_phi
    );
    let report = integrate_flow(&well, start, 1e-3, 100_000, 1e-6).unwrap();
    println!("  |dH| = {:e}", report.h_drift_max);
    println!("  |dK| = {:e}", report.k_drift_max);
    println!("  r range = [{:.6}, {:.6}]", report.r_min, report.r_max);

    // A meridian orbit has zero angular momentum and runs into the pole;
    // the guard reports the approach instead of integrating through it.
    let meridian = PhasePoint::new(1.0, 0.0, 1.5, 0.0);
    match integrate_flow(&round, meridian, 1e-3, 10_000, 1e-3) {
        Err(err) => println!("meridian orbit: {err}"),
        Ok(_) => unreachable!(),
    }
}
