//! Deterministic line-oriented run report and its JSON mirror.
//!
//! Identical configurations produce byte-identical output: every float is
//! printed with the shortest round-trip formatting and every list is walked
//! in stored order.

use std::fmt::Write as _;

use serde::Serialize;

use crate::cli::{AnalyzedLevel, EnergyRecord, EnergyResult, OracleOutcome, RunConfig};
use crate::effective::{EndKind, Tolerances};
use crate::labels::LabeledMolecule;
use crate::molecule::TorusRole;

fn role_name(role: TorusRole) -> &'static str {
    match role {
        TorusRole::Elliptic => "elliptic",
        TorusRole::Outer => "outer",
        TorusRole::Inner => "inner",
        TorusRole::InnerCentral => "inner-central",
    }
}

fn end_name(end: EndKind) -> &'static str {
    match end {
        EndKind::Pole => "pole",
        EndKind::RegularZero => "regular",
        EndKind::Center => "center",
    }
}

fn pairs_str(pairs: &[(i64, f64)]) -> String {
    let items: Vec<String> = pairs.iter().map(|(j, a)| format!("({j}, {a})")).collect();
    format!("[{}]", items.join(", "))
}

fn floats_str(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn indices_str(values: &[usize]) -> String {
    let items: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", items.join(", "))
}

/// Renders the full text report.
pub fn render_report(
    config: &RunConfig,
    records: &[EnergyRecord],
    transitions: &[(f64, f64)],
) -> String {
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "revmol report").unwrap();
    writeln!(w, "surface {}", config.profile.surface.name()).unwrap();
    writeln!(w, "length {}", config.profile.length).unwrap();
    writeln!(w, "radial {}", pairs_str(&config.profile.f_coeffs)).unwrap();
    writeln!(w, "potential {}", pairs_str(&config.profile.v_coeffs)).unwrap();
    let t = &config.tolerances;
    writeln!(
        w,
        "tolerances grad={:e} hess={:e} value={:e} grid={}",
        t.tol_grad, t.tol_hess, t.tol_value, t.grid_n
    )
    .unwrap();
    writeln!(
        w,
        "oracle {}",
        if config.outputs.oracle { "on" } else { "off" }
    )
    .unwrap();
    writeln!(w, "levels {}", records.len()).unwrap();

    let mut analyzed = 0usize;
    let mut skipped = 0usize;
    let mut failed = 0usize;
    for record in records {
        writeln!(w).unwrap();
        writeln!(w, "h {}", record.h).unwrap();
        match &record.result {
            EnergyResult::Skipped { reason } => {
                skipped += 1;
                writeln!(w, "status skipped ({reason})").unwrap();
            }
            EnergyResult::CheckFailed { reason } => {
                failed += 1;
                writeln!(w, "status check-failed ({reason})").unwrap();
            }
            EnergyResult::Analyzed(level) => {
                let oracle_failed =
                    matches!(level.oracle, Some(OracleOutcome::Failed(_)));
                if oracle_failed {
                    failed += 1;
                    writeln!(w, "status check-failed (oracle mismatch)").unwrap();
                } else {
                    analyzed += 1;
                    writeln!(w, "status ok").unwrap();
                }
                write_level(w, level);
            }
        }
    }

    if config.is_sweep() {
        writeln!(w).unwrap();
        writeln!(w, "transitions {}", transitions.len()).unwrap();
        for (a, b) in transitions {
            writeln!(w, "  ({a}, {b})").unwrap();
        }
    }
    writeln!(w).unwrap();
    writeln!(
        w,
        "summary analyzed={analyzed} skipped={skipped} failed={failed}"
    )
    .unwrap();
    out
}

fn write_level(w: &mut String, level: &AnalyzedLevel) {
    let molecule = &level.labeled.molecule;
    writeln!(w, "components {}", molecule.components.len()).unwrap();
    for (ci, (comp, labels)) in molecule
        .components
        .iter()
        .zip(&level.labeled.components)
        .enumerate()
    {
        writeln!(w, "component {ci} class {}", comp.class.name()).unwrap();
        writeln!(
            w,
            "  interval [{}, {}] ends {}:{}",
            comp.interval.lo,
            comp.interval.hi,
            end_name(comp.interval.left_end),
            end_name(comp.interval.right_end)
        )
        .unwrap();
        match comp.word() {
            Some(word) => writeln!(w, "  molecule {word}").unwrap(),
            None => writeln!(
                w,
                "  molecule branched ({} atoms, {} edges)",
                comp.atoms.len(),
                comp.edges.len()
            )
            .unwrap(),
        }
        for (ai, atom) in comp.atoms.iter().enumerate() {
            write!(
                w,
                "  atom {ai} {} k={} u={} circles={}",
                atom.name(),
                atom.level_k,
                atom.level_u,
                floats_str(&atom.circles)
            )
            .unwrap();
            if atom.is_central {
                write!(w, " central").unwrap();
            }
            if atom.has_star {
                write!(w, " star").unwrap();
            }
            writeln!(w).unwrap();
        }
        for labeled in &labels.edges {
            let edge = &comp.edges[labeled.edge];
            write!(
                w,
                "  edge {} {}->{} roles {}:{} k=[{}, {}] matrix {} r={} eps={} r-raw={}",
                labeled.edge,
                edge.lower,
                edge.upper,
                role_name(edge.lower_role),
                role_name(edge.upper_role),
                edge.k_lo,
                edge.k_hi,
                labeled.matrix,
                labeled.r,
                labeled.eps,
                labeled.r_raw
            )
            .unwrap();
            if edge.is_central_edge {
                write!(w, " central-edge").unwrap();
            }
            if edge.center_family {
                write!(w, " center-family").unwrap();
            }
            writeln!(w).unwrap();
        }
        for (fi, family) in labels.families.iter().enumerate() {
            writeln!(
                w,
                "  family {fi} n={} atoms={}",
                family.n,
                indices_str(&family.atoms)
            )
            .unwrap();
        }
        writeln!(w, "  topology {}", labels.topology).unwrap();
        match &labels.topalov {
            Some(report) => writeln!(
                w,
                "  topalov n-tilde={} N={} expected={} {}",
                report.n_tilde,
                report.big_n,
                report.expected,
                if report.consistent { "ok" } else { "mismatch" }
            )
            .unwrap(),
            None => writeln!(w, "  topalov none").unwrap(),
        }
    }
    match &level.oracle {
        Some(OracleOutcome::Passed(report)) => writeln!(
            w,
            "oracle events={} counts={} ok",
            report.events_checked, report.counts_checked
        )
        .unwrap(),
        Some(OracleOutcome::Failed(detail)) => {
            writeln!(w, "oracle failed: {detail}").unwrap()
        }
        None => writeln!(w, "oracle off").unwrap(),
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    surface: &'a str,
    length: f64,
    radial: &'a [(i64, f64)],
    potential: &'a [(i64, f64)],
    tolerances: &'a Tolerances,
    oracle: bool,
    levels: Vec<JsonLevel<'a>>,
    transitions: &'a [(f64, f64)],
}

#[derive(Serialize)]
struct JsonLevel<'a> {
    h: f64,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    analysis: Option<&'a LabeledMolecule>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<JsonOracle<'a>>,
}

#[derive(Serialize)]
struct JsonOracle<'a> {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    events_checked: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    counts_checked: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<&'a str>,
}

/// Renders the machine-readable mirror of the report.
pub fn render_json(
    config: &RunConfig,
    records: &[EnergyRecord],
    transitions: &[(f64, f64)],
) -> String {
    let levels: Vec<JsonLevel> = records
        .iter()
        .map(|record| match &record.result {
            EnergyResult::Skipped { reason } => JsonLevel {
                h: record.h,
                status: "skipped",
                reason: Some(reason),
                analysis: None,
                oracle: None,
            },
            EnergyResult::CheckFailed { reason } => JsonLevel {
                h: record.h,
                status: "check-failed",
                reason: Some(reason),
                analysis: None,
                oracle: None,
            },
            EnergyResult::Analyzed(level) => {
                let (status, oracle) = match &level.oracle {
                    Some(OracleOutcome::Passed(report)) => (
                        "ok",
                        Some(JsonOracle {
                            status: "ok",
                            events_checked: Some(report.events_checked),
                            counts_checked: Some(report.counts_checked),
                            detail: None,
                        }),
                    ),
                    Some(OracleOutcome::Failed(detail)) => (
                        "check-failed",
                        Some(JsonOracle {
                            status: "failed",
                            events_checked: None,
                            counts_checked: None,
                            detail: Some(detail.as_str()),
                        }),
                    ),
                    None => ("ok", None),
                };
                JsonLevel {
                    h: record.h,
                    status,
                    reason: None,
                    analysis: Some(&level.labeled),
                    oracle,
                }
            }
        })
        .collect();
    let report = JsonReport {
        surface: config.profile.surface.name(),
        length: config.profile.length,
        radial: &config.profile.f_coeffs,
        potential: &config.profile.v_coeffs,
        tolerances: &config.tolerances,
        oracle: config.outputs.oracle,
        levels,
        transitions,
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serialization");
    text.push('\n');
    text
}
