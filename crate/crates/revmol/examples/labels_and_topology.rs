//! Decorates molecules with their numerical labels: gluing matrices for each
//! edge, the rational and sign marks read off them, integer marks on saddle
//! families, and the resulting 3-manifold topology with its torsion
//! cross-check.

use std::f64::consts::PI;

use revmol::effective::Tolerances;
use revmol::labels::label_molecule;
use revmol::molecule::build_molecule;
use revmol::profile::{Profile, Surface};

fn analyze(name: &str, profile: &revmol::profile::ValidatedProfile, h: f64) {
    let tol = Tolerances::default();
    let molecule = build_molecule(profile, h, &tol).unwrap();
    let labeled = label_molecule(molecule).unwrap();
    println!("{name}: h = {h}");
    for (comp, labels) in labeled
        .molecule
        .components
        .iter()
        .zip(&labeled.components)
    {
        println!("  class {}", comp.class.name());
        for edge in &labels.edges {
            let ends = &comp.edges[edge.edge];
            println!(
                "    edge {}->{}: matrix {}, r = {}, eps = {}",
                ends.lower, ends.upper, edge.matrix, edge.r, edge.eps
            );
        }
        for family in &labels.families {
            println!("    family over atoms {:?}: n = {}", family.atoms, family.n);
        }
        println!("    topology {}", labels.topology);
        if let Some(topalov) = &labels.topalov {
            println!(
                "    torsion check: N = {}, |H1| = {}, consistent = {}",
                topalov.big_n, topalov.expected, topalov.consistent
            );
        }
    }
}

fn main() {
    // Zero potential: a single elliptic pair over the equator.
    let round = Profile::from_pairs(PI, Surface::ProjectivePlane, &[(1, 1.0)], &[])
        .validated(1e-9)
        .unwrap();
    analyze("round quotient", &round, 1.0);

    // A central well deep enough to split the equatorial circle.
    let well = Profile::from_pairs(
        PI,
        Surface::ProjectivePlane,
        &[(1, 0.4), (3, 0.2)],
        &[(0, 0.45), (1, -0.45)],
    )
    .validated(1e-9)
    .unwrap();
    analyze("central well", &well, 1.0);

    // A sphere with an equatorial barrier: two elliptic wells joined by a
    // saddle, the classic dumbbell.
    let dumbbell = Profile::from_pairs(
        PI,
        Surface::Sphere,
        &[(1, 0.4), (3, 0.2)],
        &[],
    )
    .validated(1e-9)
    .unwrap();
    analyze("dumbbell", &dumbbell, 0.5);
}
