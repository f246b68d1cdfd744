use thiserror::Error;

/// Errors produced anywhere in the analysis pipeline.
///
/// Variants are split by origin: profile validation, level-set geometry,
/// molecule assembly, label algebra, and oracle cross-checks. The CLI maps
/// them onto exit codes (`singular`/`degenerate` inputs exit 3, failed
/// cross-checks exit 2).
#[derive(Debug, Error)]
pub enum Error {
    /// The radial profile does not close smoothly at the poles: the slope sum
    /// `sum_j a_j * j*pi/L` must equal 1.
    #[error("profile is not smooth at the poles: slope sum {slope_sum} differs from 1 by {defect:e}")]
    NonSmoothPole { slope_sum: f64, defect: f64 },

    /// The radial profile dips to zero or below strictly between the poles.
    #[error("profile radius is not positive on (0, L): f({r}) = {value:e}")]
    NonPositiveMetric { r: f64, value: f64 },

    /// A sine harmonic of the radial profile has an even (or non-positive)
    /// index; only odd harmonics keep the profile antisymmetric under
    /// pole reflection.
    #[error("radial profile harmonic {harmonic} is not an odd positive integer")]
    EvenHarmonic { harmonic: i64 },

    /// A potential harmonic index is negative.
    #[error("potential harmonic {harmonic} is negative")]
    NegativeHarmonic { harmonic: i64 },

    /// The energy value produces a singular level set: `V = h` has a
    /// tangential root, or the level passes exactly through a pole value.
    #[error("energy h = {h} is singular: {reason}")]
    SingularEnergy { h: f64, reason: String },

    /// No motion is possible at this energy: `V >= h` everywhere.
    #[error("empty isoenergy level: V >= h = {h} on the whole surface")]
    EmptyLevel { h: f64 },

    /// A critical point of the effective potential is degenerate (the second
    /// derivative vanishes within tolerance), so the flow is not Bott at this
    /// energy.
    #[error("degenerate critical point of the effective potential at r = {r} (U'' = {second:e})")]
    DegenerateCritical { r: f64, second: f64 },

    /// Sign-change bookkeeping and polished roots disagree; a root of U_h'
    /// may have been missed (even-multiplicity touch or clustered roots).
    #[error("suspected missed critical point near r = {r} (|U_h'| = {grad:e} without a bracketed sign change)")]
    MissedRootSuspicion { r: f64, grad: f64 },

    /// Internal sweep invariant broken while assembling a molecule.
    #[error("level sweep lost track of interval structure: {detail}")]
    InternalSweepMismatch { detail: String },

    /// A symmetric saddle configuration fell outside the catalogued quotient
    /// rules for central atoms.
    #[error("unsupported central atom configuration at level k = {level_k}: {detail}")]
    UnsupportedCentralAtom { level_k: f64, detail: String },

    /// A computed gluing matrix is not integral with determinant -1.
    #[error("gluing matrix {entries:?} is not unimodular with determinant -1")]
    NonUnimodular { entries: [[f64; 2]; 2] },

    /// Label arithmetic contradicts the classified topology (torsion
    /// mismatch, or an A-A label inconsistent with the projection type).
    #[error("labels inconsistent with topology: {detail}")]
    InconsistentLabels { detail: String },

    /// The independent level-count oracle disagrees with the molecule.
    #[error("oracle disagreement: {detail}")]
    OracleMismatch { detail: String },

    /// A trajectory left the guarded radial band around the poles.
    #[error("trajectory approached a pole: r = {r} outside [{guard}, L - {guard}] at t = {t}")]
    PoleApproach { r: f64, guard: f64, t: f64 },

    /// Run configuration could not be parsed or fails basic validation.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that mean "this energy/profile is outside the Bott
    /// regime", as opposed to an internal failure or failed cross-check.
    pub fn is_singular_input(&self) -> bool {
        matches!(
            self,
            Error::SingularEnergy { .. }
                | Error::EmptyLevel { .. }
                | Error::DegenerateCritical { .. }
                | Error::NonSmoothPole { .. }
                | Error::NonPositiveMetric { .. }
                | Error::EvenHarmonic { .. }
                | Error::NegativeHarmonic { .. }
        )
    }

    /// True for failed cross-checks between independent computations.
    pub fn is_check_failure(&self) -> bool {
        matches!(
            self,
            Error::OracleMismatch { .. } | Error::InconsistentLabels { .. }
        )
    }
}
