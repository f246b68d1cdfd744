//! Builds the molecule of the Liouville foliation on one isoenergy level:
//! atoms at the bifurcation momenta, edges for the torus families between
//! them, mirrored across zero momentum and joined through the central edge.

use std::f64::consts::PI;

use revmol::effective::Tolerances;
use revmol::molecule::build_molecule;
use revmol::profile::{Profile, Surface};

fn print_molecule(profile: &str, molecule: &revmol::molecule::Molecule) {
    println!("{profile}: h = {}", molecule.h);
    for comp in &molecule.components {
        println!(
            "  component {} on [{:.6}, {:.6}]",
            comp.class.name(),
            comp.interval.lo,
            comp.interval.hi
        );
        match comp.word() {
            Some(word) => println!("    molecule {word}"),
            None => println!(
                "    branched molecule: {} atoms, {} edges",
                comp.atoms.len(),
                comp.edges.len()
            ),
        }
        for (i, atom) in comp.atoms.iter().enumerate() {
            println!(
                "    atom {i}: {} at k = {:.6}, central = {}",
                atom.name(),
                atom.level_k,
                atom.is_central
            );
        }
        for edge in &comp.edges {
            println!(
                "    edge {} -> {} over k in [{:.6}, {:.6}]",
                edge.lower, edge.upper, edge.k_lo, edge.k_hi
            );
        }
    }
}

fn main() {
    let tol = Tolerances::default();

    // A central potential well: the top circle splits into a star pair.
    let well = Profile::from_pairs(
        PI,
        Surface::ProjectivePlane,
        &[(1, 0.4), (3, 0.2)],
        &[(0, 0.45), (1, -0.45)],
    )
    .validated(1e-9)
    .unwrap();
    print_molecule("central well", &build_molecule(&well, 1.0, &tol).unwrap());

    // The same surface as a sphere: no quotient, the level splits into
    // separate components.
    let sphere = Profile::from_pairs(
        PI,
        Surface::Sphere,
        &[(1, 0.4), (3, 0.2)],
        &[(0, 0.45), (2, -0.45)],
    )
    .validated(1e-9)
    .unwrap();
    print_molecule("two wells", &build_molecule(&sphere, 0.5, &tol).unwrap());
}
