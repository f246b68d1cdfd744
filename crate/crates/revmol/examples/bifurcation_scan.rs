//! Locates the bifurcation momenta of an isoenergy level with a
//! derivative-free grid scan and compares them against the critical levels
//! the molecule builder found, then counts torus families between events.

use std::f64::consts::PI;

use revmol::effective::Tolerances;
use revmol::molecule::build_molecule;
use revmol::oracle::{bifurcation_scan, verify_molecule, LevelCounter};
use revmol::profile::{Profile, Surface};

fn main() {
    let profile = Profile::from_pairs(
        PI,
        Surface::ProjectivePlane,
        &[(1, 0.4), (3, 0.2)],
        &[(0, 0.45), (1, -0.45)],
    )
    .validated(1e-9)
    .unwrap();
    let h = 1.0;

    let scan = bifurcation_scan(&profile, h).unwrap();
    println!("scan events at h = {h}:");
    for k in &scan.events {
        println!("  k = {k:.12}");
    }

    let molecule = build_molecule(&profile, h, &Tolerances::default()).unwrap();
    let radius = 1e-9 * profile.length;
    println!("molecule event levels:");
    for k in molecule.event_levels(radius) {
        println!("  k = {k:.12}");
    }

    let counter = LevelCounter::new(&profile, h);
    println!("torus counts between events:");
    let mut edges = vec![0.0];
    edges.extend(scan.events.iter().rev().copied());
    for pair in edges.windows(2) {
        let k = 0.5 * (pair[0] + pair[1]);
        println!("  k = {k:.6}: {} tori", counter.count(k));
    }

    let report = verify_molecule(&profile, &molecule).unwrap();
    println!(
        "verification: {} events, {} count samples agree",
        report.events_checked, report.counts_checked
    );
}
