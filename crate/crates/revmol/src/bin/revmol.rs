//! Command-line front end: loads a TOML run configuration, applies flag
//! overrides, analyzes the configured energies, and writes the report,
//! graph, and JSON artifacts.
//!
//! Exit codes: 0 all checks passed, 1 configuration or I/O trouble, 2 a
//! consistency or oracle check failed, 3 singular or degenerate input.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use revmol::cli::{self, parse_sweep, RunConfig};
use revmol::profile::Surface;
use revmol::Error;

#[derive(Parser)]
#[command(
    name = "revmol",
    version,
    about = "Labeled molecules of geodesic flows on surfaces of revolution"
)]
struct Args {
    /// Path to the TOML run configuration.
    config: PathBuf,
    /// Override the configured surface.
    #[arg(long, value_enum)]
    surface: Option<SurfaceArg>,
    /// Analyze a single energy value instead of the configured plan.
    #[arg(long, conflicts_with = "sweep")]
    h: Option<f64>,
    /// Analyze an inclusive energy sweep, given as h_min:h_max:samples.
    #[arg(long, value_name = "A:B:N")]
    sweep: Option<String>,
    /// Skip the independent verification pass.
    #[arg(long)]
    no_oracle: bool,
    /// Write the text report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    report_out: Option<PathBuf>,
    /// Write the molecule graph in DOT format.
    #[arg(long, value_name = "PATH")]
    graph_out: Option<PathBuf>,
    /// Write the machine-readable report.
    #[arg(long, value_name = "PATH")]
    json_out: Option<PathBuf>,
    /// Override the critical-level detection tolerance.
    #[arg(long, value_name = "TOL")]
    tol_grad: Option<f64>,
    /// Override the degeneracy detection tolerance.
    #[arg(long, value_name = "TOL")]
    tol_hess: Option<f64>,
    /// Override the value clustering tolerance.
    #[arg(long, value_name = "TOL")]
    tol_value: Option<f64>,
    /// Override the bracketing grid size.
    #[arg(long, value_name = "N")]
    grid_n: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SurfaceArg {
    Sphere,
    ProjectivePlane,
}

impl From<SurfaceArg> for Surface {
    fn from(arg: SurfaceArg) -> Surface {
        match arg {
            SurfaceArg::Sphere => Surface::Sphere,
            SurfaceArg::ProjectivePlane => Surface::ProjectivePlane,
        }
    }
}

fn apply_overrides(config: &mut RunConfig, args: &Args) -> Result<(), Error> {
    if let Some(surface) = args.surface {
        config.profile.surface = surface.into();
    }
    if let Some(h) = args.h {
        config.energy.h = Some(h);
        config.energy.sweep = None;
    }
    if let Some(sweep) = &args.sweep {
        config.energy.sweep = Some(parse_sweep(sweep)?);
        config.energy.h = None;
    }
    if args.no_oracle {
        config.outputs.oracle = false;
    }
    if let Some(path) = &args.report_out {
        config.outputs.report = Some(path.clone());
    }
    if let Some(path) = &args.graph_out {
        config.outputs.graph = Some(path.clone());
    }
    if let Some(path) = &args.json_out {
        config.outputs.json = Some(path.clone());
    }
    if let Some(tol) = args.tol_grad {
        config.tolerances.tol_grad = tol;
    }
    if let Some(tol) = args.tol_hess {
        config.tolerances.tol_hess = tol;
    }
    if let Some(tol) = args.tol_value {
        config.tolerances.tol_value = tol;
    }
    if let Some(n) = args.grid_n {
        config.tolerances.grid_n = n;
    }
    config.validate()
}

fn error_exit_code(err: &Error) -> i32 {
    if err.is_singular_input() {
        3
    } else if err.is_check_failure() {
        2
    } else {
        1
    }
}

fn real_main() -> i32 {
    let args = Args::parse();
    let mut config = match RunConfig::load(&args.config) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("revmol: {err}");
            return 1;
        }
    };
    if let Err(err) = apply_overrides(&mut config, &args) {
        eprintln!("revmol: {err}");
        return 1;
    }
    let artifacts = match cli::run(&config) {
        Ok(artifacts) => artifacts,
        Err(err) => {
            eprintln!("revmol: {err}");
            return error_exit_code(&err);
        }
    };
    match &config.outputs.report {
        Some(path) => {
            if let Err(err) = std::fs::write(path, &artifacts.report) {
                eprintln!("revmol: writing {}: {err}", path.display());
                return 1;
            }
        }
        None => print!("{}", artifacts.report),
    }
    if let Some(path) = &config.outputs.graph {
        if let Err(err) = std::fs::write(path, &artifacts.graph) {
            eprintln!("revmol: writing {}: {err}", path.display());
            return 1;
        }
    }
    if let Some(path) = &config.outputs.json {
        if let Err(err) = std::fs::write(path, &artifacts.json) {
            eprintln!("revmol: writing {}: {err}", path.display());
            return 1;
        }
    }
    artifacts.exit_code
}

fn main() {
    std::process::exit(real_main());
}
