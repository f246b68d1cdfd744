//! Run pipeline behind the command-line binary: resolve the configured
//! energies, analyze each level, and render the report, graph, and JSON
//! artifacts with byte-stable formatting.

pub mod config;
pub mod graph;
pub mod report;

use rayon::prelude::*;

use crate::effective::Tolerances;
use crate::error::{Error, Result};
use crate::labels::{label_molecule, LabeledMolecule};
use crate::molecule::build_molecule;
use crate::oracle::{verify_molecule, OracleReport};
use crate::profile::ValidatedProfile;

pub use config::{parse_sweep, OutputsConfig, ProfileConfig, RunConfig, SweepConfig};

/// Analysis output for one energy value.
#[derive(Debug, Clone)]
pub struct AnalyzedLevel {
    pub labeled: LabeledMolecule,
    /// None when verification was turned off.
    pub oracle: Option<OracleOutcome>,
}

#[derive(Debug, Clone)]
pub enum OracleOutcome {
    Passed(OracleReport),
    Failed(String),
}

#[derive(Debug, Clone)]
pub enum EnergyResult {
    Analyzed(Box<AnalyzedLevel>),
    /// Critical or empty energy value; reported and skipped.
    Skipped { reason: String },
    /// Label consistency checks failed.
    CheckFailed { reason: String },
}

#[derive(Debug, Clone)]
pub struct EnergyRecord {
    pub h: f64,
    pub result: EnergyResult,
}

/// Everything one run produces; the caller decides where the bytes go.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub report: String,
    pub graph: String,
    pub json: String,
    pub exit_code: i32,
}

/// Runs the full pipeline for one energy value.
pub fn analyze_level(
    profile: &ValidatedProfile,
    h: f64,
    tol: &Tolerances,
    oracle_on: bool,
) -> Result<AnalyzedLevel> {
    let molecule = build_molecule(profile, h, tol)?;
    let labeled = label_molecule(molecule)?;
    let oracle = if oracle_on {
        match verify_molecule(profile, &labeled.molecule) {
            Ok(report) => Some(OracleOutcome::Passed(report)),
            Err(Error::OracleMismatch { detail }) => Some(OracleOutcome::Failed(detail)),
            Err(other) => return Err(other),
        }
    } else {
        None
    };
    Ok(AnalyzedLevel { labeled, oracle })
}

fn analyze_energy(
    profile: &ValidatedProfile,
    h: f64,
    tol: &Tolerances,
    oracle_on: bool,
) -> Result<EnergyResult> {
    match analyze_level(profile, h, tol, oracle_on) {
        Ok(level) => Ok(EnergyResult::Analyzed(Box::new(level))),
        Err(err) if err.is_singular_input() => Ok(EnergyResult::Skipped {
            reason: err.to_string(),
        }),
        Err(err) if err.is_check_failure() => Ok(EnergyResult::CheckFailed {
            reason: err.to_string(),
        }),
        Err(err) => Err(err),
    }
}

/// Analyzes every configured energy and renders all artifacts.
///
/// Exit code semantics: 0 when every analyzed level passes its checks, 2 when
/// any consistency or oracle check fails, 3 when every requested energy is
/// singular or empty. Hard failures (configuration, I/O, internal invariant
/// breaks) surface as errors instead.
pub fn run(config: &RunConfig) -> Result<RunArtifacts> {
    config.validate()?;
    let profile = config.build_profile()?;
    let energies = config.energy_values();
    let tol = &config.tolerances;
    let oracle_on = config.outputs.oracle;

    let records: Vec<EnergyRecord> = energies
        .par_iter()
        .map(|&h| {
            let result = analyze_energy(&profile, h, tol, oracle_on)?;
            Ok(EnergyRecord { h, result })
        })
        .collect::<Result<Vec<_>>>()?;

    let transitions = transition_spans(&records);
    let exit_code = exit_code(&records);
    let report = report::render_report(config, &records, &transitions);
    let graph = graph::render_graphs(&records);
    let json = report::render_json(config, &records, &transitions);
    Ok(RunArtifacts {
        report,
        graph,
        json,
        exit_code,
    })
}

fn exit_code(records: &[EnergyRecord]) -> i32 {
    let all_skipped = !records.is_empty()
        && records
            .iter()
            .all(|r| matches!(r.result, EnergyResult::Skipped { .. }));
    if all_skipped {
        return 3;
    }
    let failed = records.iter().any(|r| match &r.result {
        EnergyResult::CheckFailed { .. } => true,
        EnergyResult::Analyzed(level) => {
            matches!(level.oracle, Some(OracleOutcome::Failed(_)))
        }
        EnergyResult::Skipped { .. } => false,
    });
    if failed {
        2
    } else {
        0
    }
}

/// Adjacent energy pairs between which the foliation structure changes.
fn transition_spans(records: &[EnergyRecord]) -> Vec<(f64, f64)> {
    let mut spans = Vec::new();
    for pair in records.windows(2) {
        if record_key(&pair[0].result) != record_key(&pair[1].result) {
            spans.push((pair[0].h, pair[1].h));
        }
    }
    spans
}

fn record_key(result: &EnergyResult) -> String {
    match result {
        EnergyResult::Analyzed(level) => {
            let mut parts = Vec::new();
            for (comp, labels) in level
                .labeled
                .molecule
                .components
                .iter()
                .zip(&level.labeled.components)
            {
                let atoms: Vec<String> = comp.atoms.iter().map(|a| a.name()).collect();
                parts.push(format!(
                    "{}:{}:{}:{}",
                    comp.class.name(),
                    atoms.join(","),
                    comp.edges.len(),
                    labels.topology
                ));
            }
            format!("ok|{}", parts.join(";"))
        }
        EnergyResult::Skipped { .. } => "skipped".into(),
        EnergyResult::CheckFailed { .. } => "check-failed".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const STAR_CONFIG: &str = r#"
        [profile]
        L = 3.141592653589793
        surface = "projective-plane"
        f_coeffs = [[1, 0.4], [3, 0.2]]
        v_coeffs = [[0, 0.45], [1, -0.45]]

        [energy]
        h = 1.0
    "#;

    #[test]
    fn star_config_runs_clean() {
        let config = RunConfig::from_toml_str(STAR_CONFIG).unwrap();
        let artifacts = run(&config).unwrap();
        assert_eq!(artifacts.exit_code, 0);
        assert!(artifacts.report.contains("A-A*-A*-A"), "{}", artifacts.report);
        assert!(artifacts.report.contains("L(4,1)"));
        assert!(artifacts.graph.contains("digraph"));
        assert!(artifacts.json.contains("\"topology\""));
    }

    #[test]
    fn singular_single_energy_exits_3() {
        let text = STAR_CONFIG.replace("h = 1.0", "h = 0.9");
        let config = RunConfig::from_toml_str(&text).unwrap();
        let artifacts = run(&config).unwrap();
        assert_eq!(artifacts.exit_code, 3);
        assert!(artifacts.report.contains("skipped"));
    }

    #[test]
    fn sweep_skips_singular_values_and_lists_transitions() {
        let text = STAR_CONFIG.replace(
            "h = 1.0",
            "sweep = { h_min = 0.3, h_max = 1.2, samples = 7 }",
        );
        let config = RunConfig::from_toml_str(&text).unwrap();
        let artifacts = run(&config).unwrap();
        assert_eq!(artifacts.exit_code, 0, "{}", artifacts.report);
        assert!(artifacts.report.contains("transitions"));
    }

    #[test]
    fn runs_are_deterministic() {
        let text = STAR_CONFIG.replace(
            "h = 1.0",
            "sweep = { h_min = 0.5, h_max = 1.1, samples = 4 }",
        );
        let config = RunConfig::from_toml_str(&text).unwrap();
        let first = run(&config).unwrap();
        let second = run(&config).unwrap();
        assert_eq!(first.report, second.report);
        assert_eq!(first.graph, second.graph);
        assert_eq!(first.json, second.json);
    }
}
