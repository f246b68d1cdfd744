//! Computes the effective potential of the reduced radial motion at a fixed
//! energy and reports its positivity components and critical points. Each
//! component carries one piece of the foliation; its critical points are the
//! bifurcation levels of the momentum.

use std::f64::consts::PI;

use revmol::effective::{EffectivePotential, Tolerances};
use revmol::profile::{Profile, Surface};

fn main() {
    let profile = Profile::from_pairs(
        PI,
        Surface::ProjectivePlane,
        &[(1, 0.4), (3, 0.2)],
        &[(0, 0.45), (1, -0.45)],
    )
    .validated(1e-9)
    .expect("admissible profile");
    let tol = Tolerances::default();

    for h in [0.45, 1.0] {
        println!("h = {h}");
        let potential = EffectivePotential::new(&profile, h);
        let analyses = potential.critical_structure(&tol).expect("regular energy");
        for analysis in &analyses {
            let iv = &analysis.interval;
            println!(
                "  component [{:.6}, {:.6}] quotient={}",
                iv.lo,
                iv.hi,
                iv.is_quotient()
            );
            for point in &analysis.critical_points {
                println!(
                    "    {:?} at r = {:.6}, U = {:.6}, central = {}",
                    point.kind, point.r, point.value, point.is_central
                );
            }
        }
    }

    // Energies on a critical level of the potential have no well-defined
    // molecule and are reported as singular.
    let potential = EffectivePotential::new(&profile, 0.9);
    match potential.critical_structure(&tol) {
        Err(err) => println!("h = 0.9 rejected: {err}"),
        Ok(_) => unreachable!(),
    }
}
