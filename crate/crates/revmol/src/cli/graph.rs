//! Molecule graph export in DOT format.
//!
//! One digraph per analyzed energy, atoms as nodes and torus families as
//! edges oriented by increasing momentum. Output is byte-stable: node ids
//! and iteration order come straight from the stored molecule.

use std::fmt::Write as _;

use crate::cli::{EnergyRecord, EnergyResult};
use crate::labels::LabeledMolecule;

/// Renders one digraph per energy record, blank-line separated. Skipped
/// energies produce an empty graph holding only a comment.
pub fn render_graphs(records: &[EnergyRecord]) -> String {
    let mut out = String::new();
    for (i, record) in records.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match &record.result {
            EnergyResult::Analyzed(level) => {
                render_molecule_graph(&mut out, i, record.h, &level.labeled)
            }
            EnergyResult::Skipped { reason } => {
                writeln!(out, "digraph level{i} {{").unwrap();
                writeln!(out, "  // h = {}: skipped: {reason}", record.h).unwrap();
                writeln!(out, "}}").unwrap();
            }
            EnergyResult::CheckFailed { reason } => {
                writeln!(out, "digraph level{i} {{").unwrap();
                writeln!(out, "  // h = {}: check failed: {reason}", record.h).unwrap();
                writeln!(out, "}}").unwrap();
            }
        }
    }
    out
}

fn render_molecule_graph(out: &mut String, idx: usize, h: f64, labeled: &LabeledMolecule) {
    writeln!(out, "digraph level{idx} {{").unwrap();
    writeln!(
        out,
        "  // h = {h}, surface = {}",
        labeled.molecule.surface.name()
    )
    .unwrap();
    writeln!(out, "  rankdir = BT;").unwrap();
    for (ci, (comp, labels)) in labeled
        .molecule
        .components
        .iter()
        .zip(&labeled.components)
        .enumerate()
    {
        writeln!(
            out,
            "  // component {ci}: class = {}, topology = {}",
            comp.class.name(),
            labels.topology
        )
        .unwrap();
        for (ai, atom) in comp.atoms.iter().enumerate() {
            let mut label = atom.name();
            if atom.is_central {
                label.push_str(" central");
            }
            writeln!(out, "  c{ci}a{ai} [label=\"{label}\"];").unwrap();
        }
        for labeled_edge in &labels.edges {
            let edge = &comp.edges[labeled_edge.edge];
            writeln!(
                out,
                "  c{ci}a{} -> c{ci}a{} [label=\"r={}, eps={}\"];",
                edge.lower, edge.upper, labeled_edge.r, labeled_edge.eps
            )
            .unwrap();
        }
        for (fi, family) in labels.families.iter().enumerate() {
            let atoms: Vec<String> = family.atoms.iter().map(|a| format!("c{ci}a{a}")).collect();
            writeln!(
                out,
                "  // family {fi}: n = {}, atoms = [{}]",
                family.n,
                atoms.join(", ")
            )
            .unwrap();
        }
    }
    writeln!(out, "}}").unwrap();
}
