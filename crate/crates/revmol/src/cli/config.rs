//! Run configuration: TOML schema, validation, and energy plan resolution.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::effective::Tolerances;
use crate::error::{Error, Result};
use crate::profile::{Profile, Surface, ValidatedProfile};

/// Top-level configuration for one invocation.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub profile: ProfileConfig,
    pub energy: EnergyConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub outputs: OutputsConfig,
}

/// Surface profile block: half-meridian length, topology, and the harmonic
/// coefficients of the radius and potential functions as `[index, amplitude]`
/// pairs.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    #[serde(rename = "L")]
    pub length: f64,
    pub surface: Surface,
    #[serde(default)]
    pub f_coeffs: Vec<(i64, f64)>,
    #[serde(default)]
    pub v_coeffs: Vec<(i64, f64)>,
}

/// Either a single energy value or an inclusive sweep.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyConfig {
    pub h: Option<f64>,
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub h_min: f64,
    pub h_max: f64,
    pub samples: usize,
}

/// Where results go. Paths are resolved relative to the working directory;
/// a missing report path means standard output.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsConfig {
    pub report: Option<PathBuf>,
    pub graph: Option<PathBuf>,
    pub json: Option<PathBuf>,
    #[serde(default = "default_oracle")]
    pub oracle: bool,
}

impl Default for OutputsConfig {
    fn default() -> Self {
        OutputsConfig {
            report: None,
            graph: None,
            json: None,
            oracle: true,
        }
    }
}

fn default_oracle() -> bool {
    true
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<RunConfig> {
        let config: RunConfig =
            toml::from_str(text).map_err(|err| Error::Config(err.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        RunConfig::from_toml_str(&text).map_err(|err| match err {
            Error::Config(detail) => Error::Config(format!("{}: {detail}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.profile;
        if !(p.length.is_finite() && p.length > 0.0) {
            return Err(Error::Config(format!(
                "profile.L must be finite and positive, got {}",
                p.length
            )));
        }
        for &(j, a) in p.f_coeffs.iter().chain(&p.v_coeffs) {
            if !a.is_finite() {
                return Err(Error::Config(format!(
                    "coefficient for harmonic {j} is not finite"
                )));
            }
        }
        match (&self.energy.h, &self.energy.sweep) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "energy block sets both h and sweep; pick one".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Config(
                    "energy block needs either h or sweep".into(),
                ))
            }
            (Some(h), None) => {
                if !h.is_finite() {
                    return Err(Error::Config(format!("energy.h must be finite, got {h}")));
                }
            }
            (None, Some(sweep)) => {
                if !(sweep.h_min.is_finite() && sweep.h_max.is_finite()) {
                    return Err(Error::Config(format!(
                        "sweep bounds must be finite, got [{}, {}]",
                        sweep.h_min, sweep.h_max
                    )));
                }
                if sweep.h_max < sweep.h_min {
                    return Err(Error::Config(format!(
                        "sweep bounds out of order: h_min={} > h_max={}",
                        sweep.h_min, sweep.h_max
                    )));
                }
                if sweep.samples == 0 {
                    return Err(Error::Config("sweep.samples must be at least 1".into()));
                }
            }
        }
        let t = &self.tolerances;
        for (name, value) in [
            ("tol_grad", t.tol_grad),
            ("tol_hess", t.tol_hess),
            ("tol_value", t.tol_value),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Config(format!(
                    "tolerances.{name} must be finite and positive, got {value}"
                )));
            }
        }
        if t.grid_n == 0 {
            return Err(Error::Config("tolerances.grid_n must be at least 1".into()));
        }
        Ok(())
    }

    pub fn is_sweep(&self) -> bool {
        self.energy.sweep.is_some()
    }

    /// The energies to analyze, in report order.
    pub fn energy_values(&self) -> Vec<f64> {
        match (&self.energy.h, &self.energy.sweep) {
            (Some(h), _) => vec![*h],
            (None, Some(sweep)) => {
                if sweep.samples == 1 {
                    vec![sweep.h_min]
                } else {
                    let step = (sweep.h_max - sweep.h_min) / (sweep.samples - 1) as f64;
                    (0..sweep.samples)
                        .map(|i| sweep.h_min + step * i as f64)
                        .collect()
                }
            }
            (None, None) => Vec::new(),
        }
    }

    pub fn build_profile(&self) -> Result<ValidatedProfile> {
        let p = &self.profile;
        Profile::from_pairs(p.length, p.surface, &p.f_coeffs, &p.v_coeffs)
            .validated(self.tolerances.tol_value)
    }
}

/// Parses a sweep given as `h_min:h_max:samples`.
pub fn parse_sweep(text: &str) -> Result<SweepConfig> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!(
            "sweep must look like h_min:h_max:samples, got {text:?}"
        )));
    }
    let h_min: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad sweep lower bound {:?}", parts[0])))?;
    let h_max: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad sweep upper bound {:?}", parts[1])))?;
    let samples: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad sweep sample count {:?}", parts[2])))?;
    Ok(SweepConfig {
        h_min,
        h_max,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"
        [profile]
        L = 3.141592653589793
        surface = "projective-plane"
        f_coeffs = [[1, 0.4], [3, 0.2]]
        v_coeffs = [[0, 0.45], [1, -0.45]]

        [energy]
        h = 1.0
    "#;

    #[test]
    fn parses_minimal_config() {
        let config = RunConfig::from_toml_str(BASIC).unwrap();
        assert_eq!(config.profile.surface, Surface::ProjectivePlane);
        assert_eq!(config.profile.f_coeffs, vec![(1, 0.4), (3, 0.2)]);
        assert_eq!(config.energy_values(), vec![1.0]);
        assert!(config.outputs.oracle);
        assert!(!config.is_sweep());
        config.build_profile().unwrap();
    }

    #[test]
    fn sweep_values_are_inclusive() {
        let text = r#"
            [profile]
            L = 3.141592653589793
            surface = "sphere"
            f_coeffs = [[1, 1.0]]

            [energy]
            sweep = { h_min = 0.5, h_max = 1.5, samples = 5 }
        "#;
        let config = RunConfig::from_toml_str(text).unwrap();
        let values = config.energy_values();
        assert_eq!(values.len(), 5);
        assert_eq!(values[0], 0.5);
        assert_eq!(values[4], 1.5);
        assert_eq!(values[2], 1.0);
    }

    #[test]
    fn rejects_missing_energy() {
        let text = r#"
            [profile]
            L = 3.141592653589793
            surface = "sphere"
            f_coeffs = [[1, 1.0]]

            [energy]
        "#;
        let err = RunConfig::from_toml_str(text).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert!(err.to_string().contains("energy"));
    }

    #[test]
    fn rejects_unknown_keys_with_field_name() {
        let text = BASIC.replace("[energy]", "[energy]\n        hh = 2.0\n");
        let err = RunConfig::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("hh"), "{err}");
    }

    #[test]
    fn rejects_bad_tolerance() {
        let text = format!("{BASIC}\n[tolerances]\ntol_grad = -1e-10\n");
        let err = RunConfig::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("tol_grad"));
    }

    #[test]
    fn parses_sweep_flag() {
        let sweep = parse_sweep("0.4:1.2:9").unwrap();
        assert_eq!(sweep.h_min, 0.4);
        assert_eq!(sweep.h_max, 1.2);
        assert_eq!(sweep.samples, 9);
        assert!(parse_sweep("0.4:1.2").is_err());
        assert!(parse_sweep("a:1:2").is_err());
    }
}
