//! Sweeps a band of energies through the full pipeline and prints how the
//! foliation changes: which molecules appear, where the transitions sit,
//! and which energies are singular and get skipped.

use revmol::cli::{self, RunConfig};

const CONFIG: &str = r#"
    [profile]
    L = 3.141592653589793
    surface = "projective-plane"
    f_coeffs = [[1, 0.4], [3, 0.2]]
    v_coeffs = [[0, 0.45], [1, -0.45]]

    [energy]
    sweep = { h_min = 0.15, h_max = 1.35, samples = 9 }
"#;

fn main() {
    let config = RunConfig::from_toml_str(CONFIG).unwrap();
    let profile = config.build_profile().unwrap();
    let oracle_on = config.outputs.oracle;

    for h in config.energy_values() {
        match cli::analyze_level(&profile, h, &config.tolerances, oracle_on) {
            Ok(level) => {
                let words: Vec<String> = level
                    .labeled
                    .molecule
                    .components
                    .iter()
                    .map(|c| {
                        c.word()
                            .unwrap_or_else(|| format!("branched({} atoms)", c.atoms.len()))
                    })
                    .collect();
                let topologies: Vec<String> = level
                    .labeled
                    .topologies()
                    .iter()
                    .map(|t| t.to_string())
                    .collect();
                println!(
                    "h = {h:.3}: {} [{}]",
                    words.join(" + "),
                    topologies.join(", ")
                );
            }
            Err(err) => println!("h = {h:.3}: skipped ({err})"),
        }
    }

    // The same sweep through the batch entry point, which also renders the
    // report with the transition energies.
    let artifacts = cli::run(&config).unwrap();
    let skipped = artifacts
        .report
        .lines()
        .filter(|l| l.starts_with("status skipped"))
        .count();
    println!("batch run: exit code {}, {skipped} skipped", artifacts.exit_code);
    let mut in_transitions = false;
    for line in artifacts.report.lines() {
        if line.starts_with("transitions") {
            in_transitions = true;
            println!("{line}");
        } else if in_transitions && line.starts_with("  ") {
            println!("{line}");
        } else {
            in_transitions = false;
        }
    }
}
