//! Liouville foliation analysis for geodesic flows with an invariant
//! potential on surfaces of revolution.
//!
//! Given a profile of the surface (sphere or projective plane) and an energy
//! value, the crate computes the effective potential on each meridian, finds
//! its critical structure, sweeps the angular momentum to build the loop
//! molecule of the isoenergy level, decorates every edge with gluing data and
//! numeric marks, and identifies the topology of the level. A separate
//! oracle module re-derives level counts and bifurcation values by direct
//! grid scans and checks molecules against them; it also integrates the flow
//! to confirm the conserved quantities.
//!
//! Start with the runnable examples:
//!
//! * `validate_profile`: profile invariants and the validation report.
//! * `effective_potential`: critical points and level intervals at fixed energy.
//! * `build_molecule`: the atom and edge structure of one isoenergy level.
//! * `labels_and_topology`: gluing matrices, marks, and the level topology.
//! * `bifurcation_scan`: oracle scan of bifurcation values against the sweep.
//! * `flow_conservation`: numeric integration of the flow and drift bounds.
//! * `energy_sweep`: molecules across a range of energies.
//! * `export_graph`: DOT output of a labeled molecule.

pub mod cli;
pub mod effective;
pub mod error;
pub mod labels;
pub mod molecule;
pub mod oracle;
pub mod profile;

pub use effective::{
    ComponentInterval, CriticalKind, CriticalPoint, EffectivePotential, EndKind, Tolerances,
};
pub use error::{Error, Result};
pub use labels::{
    Family, GluingMatrix, LabeledEdge, LabeledMolecule, RLabel, Topology, TopalovReport,
};
pub use molecule::{Atom, AtomKind, Edge, Molecule, TorusRole};
pub use oracle::{BifurcationScan, FlowReport};
pub use profile::{Harmonic, PhasePoint, Profile, Surface, ValidatedProfile, ValidationReport};
