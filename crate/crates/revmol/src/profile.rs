//! Surface-of-revolution profiles: the radial function `f` and the invariant
//! potential `V`, both given as finite harmonic sums on `[0, L]`.
//!
//! The metric is `ds^2 = dr^2 + f(r)^2 dphi^2` with
//! `f(r) = sum_j a_j sin(j*pi*r/L)` over odd `j`, and the potential is
//! `V(r) = sum_j b_j cos(2*pi*j*r/L)`. Odd sine harmonics make `f` vanish at
//! both poles and close smoothly there once the slope normalization
//! `f'(0) = 1` holds; the cosine series keeps `V` symmetric under
//! `r -> L - r`, so the same data describes either the sphere or, after the
//! antipodal quotient, the projective plane.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which closed surface the profile describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Surface {
    Sphere,
    ProjectivePlane,
}

impl Surface {
    pub fn name(self) -> &'static str {
        match self {
            Surface::Sphere => "sphere",
            Surface::ProjectivePlane => "projective-plane",
        }
    }
}

/// One term of a harmonic sum: index and amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub harmonic: i64,
    pub amplitude: f64,
}

impl Harmonic {
    pub fn new(harmonic: i64, amplitude: f64) -> Self {
        Harmonic { harmonic, amplitude }
    }
}

/// A point of the phase space in coordinates `(p_r, p_phi, r, phi)`.
///
/// `phi` is stored reduced to `[0, 2*pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub p_r: f64,
    pub p_phi: f64,
    pub r: f64,
    pub phi: f64,
}

impl PhasePoint {
    pub fn new(p_r: f64, p_phi: f64, r: f64, phi: f64) -> Self {
        PhasePoint {
            p_r,
            p_phi,
            r,
            phi: reduce_angle(phi),
        }
    }
}

/// Reduce an angle to `[0, 2*pi)`.
pub fn reduce_angle(phi: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut a = phi % two_pi;
    if a < 0.0 {
        a += two_pi;
    }
    // The remainder of a slightly negative angle can round up to 2*pi itself.
    if a >= two_pi {
        a = 0.0;
    }
    a
}

/// Profile data for one surface of revolution with an invariant potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    /// Meridian length `L`: `r` ranges over `[0, L]` from pole to pole.
    pub length: f64,
    pub surface: Surface,
    /// Sine harmonics of the radial function `f` (odd indices only).
    pub radial: Vec<Harmonic>,
    /// Cosine harmonics of the potential `V` (non-negative indices).
    pub potential: Vec<Harmonic>,
}

/// Outcome of `Profile::validate`, one record per checked invariant.
///
/// `positivity` is `None` when the harmonic or slope checks already failed
/// (the positivity certificate relies on both).
#[derive(Debug, Clone)]
pub struct ValidationReport {
    /// Invalid radial harmonic index, if any (even, zero or negative).
    pub bad_radial_harmonic: Option<i64>,
    /// Negative potential harmonic index, if any.
    pub bad_potential_harmonic: Option<i64>,
    /// `sum_j a_j * j*pi/L`, which must equal 1 for a smooth pole.
    pub slope_sum: f64,
    pub slope_defect: f64,
    pub slope_ok: bool,
    pub positivity: Option<PositivityCheck>,
}

/// Result of the certified positivity scan of `f` on `(0, L)`.
#[derive(Debug, Clone)]
pub struct PositivityCheck {
    pub ok: bool,
    /// Smallest value of `f` seen by the scan and where it was seen.
    pub min_value: f64,
    pub min_at: f64,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.bad_radial_harmonic.is_none()
            && self.bad_potential_harmonic.is_none()
            && self.slope_ok
            && self.positivity.as_ref().is_some_and(|p| p.ok)
    }
}

/// A profile that has passed validation; downstream analysis only accepts
/// this wrapper, so a certificate is established exactly once.
#[derive(Debug, Clone)]
pub struct ValidatedProfile(Profile);

impl std::ops::Deref for ValidatedProfile {
    type Target = Profile;

    fn deref(&self) -> &Profile {
        &self.0
    }
}

impl ValidatedProfile {
    pub fn profile(&self) -> &Profile {
        &self.0
    }
}

/// Number of initial sample intervals in the positivity certificate.
const POSITIVITY_SAMPLES: usize = 4096;
/// Intervals narrower than this fraction of `L` are not split further; an
/// uncertified value that small is reported as a non-positive radius.
const POSITIVITY_MIN_WIDTH: f64 = 1e-12;

impl Profile {
    pub fn new(
        length: f64,
        surface: Surface,
        radial: Vec<Harmonic>,
        potential: Vec<Harmonic>,
    ) -> Self {
        Profile {
            length,
            surface,
            radial,
            potential,
        }
    }

    /// Convenience constructor from `(harmonic, amplitude)` pairs.
    pub fn from_pairs(
        length: f64,
        surface: Surface,
        radial: &[(i64, f64)],
        potential: &[(i64, f64)],
    ) -> Self {
        Profile::new(
            length,
            surface,
            radial.iter().map(|&(j, a)| Harmonic::new(j, a)).collect(),
            potential.iter().map(|&(j, a)| Harmonic::new(j, a)).collect(),
        )
    }

    /// Radial distance from the axis, `f(r)`.
    ///
    /// Arguments beyond the midpoint are evaluated through the reflection
    /// `f(r) = f(L - r)`, which is exact for odd sine harmonics. This makes
    /// the pole zeros and the mirror symmetry hold to the last bit, which the
    /// level sweeps downstream rely on.
    pub fn radius(&self, r: f64) -> f64 {
        let (s, _flip) = self.fold(r);
        let w = std::f64::consts::PI / self.length;
        self.radial
            .iter()
            .map(|t| t.amplitude * (t.harmonic as f64 * w * s).sin())
            .sum()
    }

    /// `f'(r)`.
    pub fn radius_deriv(&self, r: f64) -> f64 {
        let (s, flip) = self.fold(r);
        let w = std::f64::consts::PI / self.length;
        let d: f64 = self
            .radial
            .iter()
            .map(|t| {
                let jw = t.harmonic as f64 * w;
                t.amplitude * jw * (jw * s).cos()
            })
            .sum();
        if flip {
            -d
        } else {
            d
        }
    }

    /// `f''(r)`.
    pub fn radius_second(&self, r: f64) -> f64 {
        let (s, _flip) = self.fold(r);
        let w = std::f64::consts::PI / self.length;
        -self
            .radial
            .iter()
            .map(|t| {
                let jw = t.harmonic as f64 * w;
                t.amplitude * jw * jw * (jw * s).sin()
            })
            .sum::<f64>()
    }

    /// Potential `V(r)`.
    pub fn potential(&self, r: f64) -> f64 {
        let (s, _flip) = self.fold(r);
        let w = 2.0 * std::f64::consts::PI / self.length;
        self.potential
            .iter()
            .map(|t| t.amplitude * (t.harmonic as f64 * w * s).cos())
            .sum()
    }

    /// `V'(r)`.
    pub fn potential_deriv(&self, r: f64) -> f64 {
        let (s, flip) = self.fold(r);
        let w = 2.0 * std::f64::consts::PI / self.length;
        let d: f64 = -self
            .potential
            .iter()
            .map(|t| {
                let jw = t.harmonic as f64 * w;
                t.amplitude * jw * (jw * s).sin()
            })
            .sum::<f64>();
        if flip {
            -d
        } else {
            d
        }
    }

    /// `V''(r)`.
    pub fn potential_second(&self, r: f64) -> f64 {
        let (s, _flip) = self.fold(r);
        let w = 2.0 * std::f64::consts::PI / self.length;
        -self
            .potential
            .iter()
            .map(|t| {
                let jw = t.harmonic as f64 * w;
                t.amplitude * jw * jw * (jw * s).cos()
            })
            .sum::<f64>()
    }

    fn fold(&self, r: f64) -> (f64, bool) {
        if r > 0.5 * self.length && r <= self.length {
            (self.length - r, true)
        } else {
            (r, false)
        }
    }

    /// Uniform bound on `|f'|`.
    pub fn radius_deriv_bound(&self) -> f64 {
        let w = std::f64::consts::PI / self.length;
        self.radial
            .iter()
            .map(|t| t.amplitude.abs() * t.harmonic.unsigned_abs() as f64 * w)
            .sum()
    }

    /// Uniform bound on `|f''|`.
    pub fn radius_second_bound(&self) -> f64 {
        let w = std::f64::consts::PI / self.length;
        self.radial
            .iter()
            .map(|t| {
                let jw = t.harmonic.unsigned_abs() as f64 * w;
                t.amplitude.abs() * jw * jw
            })
            .sum()
    }

    /// Check every profile invariant; `tol` bounds the admissible defect of
    /// the pole slope sum.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let bad_radial_harmonic = self
            .radial
            .iter()
            .map(|t| t.harmonic)
            .find(|&j| j <= 0 || j % 2 == 0);
        let bad_potential_harmonic = self
            .potential
            .iter()
            .map(|t| t.harmonic)
            .find(|&j| j < 0);

        let w = std::f64::consts::PI / self.length;
        let slope_sum: f64 = self
            .radial
            .iter()
            .map(|t| t.amplitude * t.harmonic as f64 * w)
            .sum();
        let slope_defect = (slope_sum - 1.0).abs();
        let slope_ok = self.length.is_finite()
            && self.length > 0.0
            && slope_defect <= tol
            && slope_sum.is_finite();

        let positivity = if bad_radial_harmonic.is_none() && slope_ok {
            Some(self.check_positivity())
        } else {
            None
        };

        ValidationReport {
            bad_radial_harmonic,
            bad_potential_harmonic,
            slope_sum,
            slope_defect,
            slope_ok,
            positivity,
        }
    }

    /// Validate and wrap; the first failed invariant becomes the error.
    pub fn validated(self, tol: f64) -> Result<ValidatedProfile> {
        let report = self.validate(tol);
        if let Some(j) = report.bad_radial_harmonic {
            return Err(Error::EvenHarmonic { harmonic: j });
        }
        if let Some(j) = report.bad_potential_harmonic {
            return Err(Error::NegativeHarmonic { harmonic: j });
        }
        if !report.slope_ok {
            return Err(Error::NonSmoothPole {
                slope_sum: report.slope_sum,
                defect: report.slope_defect,
            });
        }
        match report.positivity {
            Some(p) if p.ok => Ok(ValidatedProfile(self)),
            Some(p) => Err(Error::NonPositiveMetric {
                r: p.min_at,
                value: p.min_value,
            }),
            None => unreachable!("positivity checked once harmonics and slope pass"),
        }
    }

    /// Certified positivity of `f` on `(0, L)`.
    ///
    /// Near the poles `f(r) = r + O(r^2)` with the quadratic term bounded by
    /// `B2 = sum |a_j| (j*pi/L)^2`, so `f > 0` on `(0, m]` for
    /// `m = min(1/B2, L/4)` analytically. The rest of the interval is sampled
    /// on a uniform grid; a sample certifies its surrounding interval when it
    /// exceeds `B1 * width / 2` with `B1` the global slope bound, and
    /// uncertified intervals are bisected until certified, proven negative,
    /// or narrower than the resolution floor.
    fn check_positivity(&self) -> PositivityCheck {
        let b1 = self.radius_deriv_bound();
        let b2 = self.radius_second_bound();
        let margin = if b2 > 0.0 {
            (1.0 / b2).min(0.25 * self.length)
        } else {
            0.25 * self.length
        };

        let lo = margin;
        let hi = self.length - margin;
        let mut min_value = self.radius(0.5 * self.length);
        let mut min_at = 0.5 * self.length;
        if hi <= lo {
            // Pole expansions alone cover the whole interval.
            return PositivityCheck {
                ok: min_value > 0.0,
                min_value,
                min_at,
            };
        }

        let step = (hi - lo) / POSITIVITY_SAMPLES as f64;
        let width_floor = POSITIVITY_MIN_WIDTH * self.length;
        let mut queue: Vec<(f64, f64)> = (0..POSITIVITY_SAMPLES)
            .map(|i| (lo + i as f64 * step, lo + (i + 1) as f64 * step))
            .collect();

        while let Some((a, b)) = queue.pop() {
            let x = 0.5 * (a + b);
            let v = self.radius(x);
            if v < min_value {
                min_value = v;
                min_at = x;
            }
            if v <= 0.0 {
                return PositivityCheck {
                    ok: false,
                    min_value: v,
                    min_at: x,
                };
            }
            if v > 0.5 * b1 * (b - a) {
                continue;
            }
            if b - a <= width_floor {
                // Positive but too close to zero to certify at the
                // resolution floor: reject as grazing zero.
                return PositivityCheck {
                    ok: false,
                    min_value: v,
                    min_at: x,
                };
            }
            queue.push((a, x));
            queue.push((x, b));
        }

        PositivityCheck {
            ok: true,
            min_value,
            min_at,
        }
    }
}
