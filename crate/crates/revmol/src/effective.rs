//! The effective potential of the reduced radial motion and its critical
//! structure at fixed energy.
//!
//! With the angular momentum `k` separated out, motion in `r` at energy `h`
//! is governed by `U_h(r) = 2 f(r)^2 (h - V(r))`: a torus of the foliation
//! sits over each component of `{U_h > k^2}`, and the foliation changes
//! exactly at critical values of `U_h`. This module finds the components of
//! `{U_h > 0}`, classifies every critical point of `U_h` as a nondegenerate
//! maximum or minimum, and rejects energies at which that description breaks
//! down (tangential zeros, degenerate critical points).
//!
//! On the projective plane the mirror symmetry `r -> L - r` is a deck
//! transformation: symmetric components are swept on the quotient interval
//! `(a, L/2]` with the midpoint marked as the central end, and mirror pairs
//! of asymmetric components are reported once.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{Surface, ValidatedProfile};

/// Numeric tolerances of the critical-structure analysis.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    /// Gradient threshold (scaled) below which a sweep value counts as
    /// sitting on a critical level.
    #[serde(default = "default_tol_grad")]
    pub tol_grad: f64,
    /// Second-derivative threshold (scaled) below which a critical point is
    /// rejected as degenerate.
    #[serde(default = "default_tol_hess")]
    pub tol_hess: f64,
    /// Value threshold (scaled) for clustering critical values and for
    /// detecting singular energies.
    #[serde(default = "default_tol_value")]
    pub tol_value: f64,
    /// Number of grid cells used by the bracketing scans.
    #[serde(default = "default_grid_n")]
    pub grid_n: usize,
}

fn default_tol_grad() -> f64 {
    1e-10
}

fn default_tol_hess() -> f64 {
    1e-8
}

fn default_tol_value() -> f64 {
    1e-9
}

fn default_grid_n() -> usize {
    4096
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_grad: default_tol_grad(),
            tol_hess: default_tol_hess(),
            tol_value: default_tol_value(),
            grid_n: default_grid_n(),
        }
    }
}

/// What bounds a component of `{U_h > 0}` on one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndKind {
    /// A pole of the surface (`r = 0` or `r = L`), where `f` vanishes.
    Pole,
    /// A transversal zero of `h - V` in the interior.
    RegularZero,
    /// The symmetry midpoint `L/2` acting as the right end of a quotient
    /// interval (projective plane, symmetric component only).
    Center,
}

/// Classification of a nondegenerate critical point of `U_h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriticalKind {
    LocalMax,
    LocalMin,
}

/// A critical point of the effective potential inside one component.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub r: f64,
    /// `U_h(r)`.
    pub value: f64,
    pub kind: CriticalKind,
    /// True for the midpoint critical point of a projective quotient
    /// interval; the circle over it is pointwise fixed-free under the deck
    /// symmetry, which changes how it glues.
    pub is_central: bool,
}

/// One component of `{U_h > 0}` as an `r`-interval.
///
/// In projective mode a symmetric component `(a, L - a)` is reported as its
/// quotient `(a, L/2]` with `right_end == Center`, and only one member of
/// each mirror pair of asymmetric components is listed.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ComponentInterval {
    pub lo: f64,
    pub hi: f64,
    pub left_end: EndKind,
    pub right_end: EndKind,
}

impl ComponentInterval {
    /// Whether this interval is the quotient of a symmetric component.
    pub fn is_quotient(&self) -> bool {
        self.right_end == EndKind::Center
    }

    /// Extent of the component upstairs on `[0, L]`.
    pub fn full_extent(&self, length: f64) -> (f64, f64) {
        if self.is_quotient() {
            (self.lo, length - self.lo)
        } else {
            (self.lo, self.hi)
        }
    }
}

/// A component together with its classified critical points, sorted by `r`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentAnalysis {
    pub interval: ComponentInterval,
    pub critical_points: Vec<CriticalPoint>,
}

/// The effective potential `U_h(r) = 2 f(r)^2 (h - V(r))` at fixed energy.
pub struct EffectivePotential<'a> {
    profile: &'a ValidatedProfile,
    h: f64,
}

/// Roots closer than this fraction of `L` are treated as one critical point.
const DEDUPE_RADIUS: f64 = 1e-9;
/// Bisection stops when the bracket is this fraction of `L` wide.
const BISECT_WIDTH: f64 = 1e-15;

impl<'a> EffectivePotential<'a> {
    pub fn new(profile: &'a ValidatedProfile, h: f64) -> Self {
        EffectivePotential { profile, h }
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn profile(&self) -> &'a ValidatedProfile {
        self.profile
    }

    /// `U_h(r)`.
    pub fn eval(&self, r: f64) -> f64 {
        let f = self.profile.radius(r);
        2.0 * f * f * (self.h - self.profile.potential(r))
    }

    /// `U_h'(r)`.
    pub fn deriv(&self, r: f64) -> f64 {
        let f = self.profile.radius(r);
        let fd = self.profile.radius_deriv(r);
        let g = self.h - self.profile.potential(r);
        4.0 * f * fd * g - 2.0 * f * f * self.profile.potential_deriv(r)
    }

    /// `U_h''(r)`.
    pub fn second(&self, r: f64) -> f64 {
        let f = self.profile.radius(r);
        let fd = self.profile.radius_deriv(r);
        let fdd = self.profile.radius_second(r);
        let g = self.h - self.profile.potential(r);
        let vd = self.profile.potential_deriv(r);
        let vdd = self.profile.potential_second(r);
        4.0 * (fd * fd + f * fdd) * g - 8.0 * f * fd * vd - 2.0 * f * f * vdd
    }

    /// Critical values of the potential `V` itself. The energy must stay
    /// clear of these: at `h = V(c)` with `V'(c) = 0` the zero set of
    /// `h - V` degenerates.
    fn potential_critical_values(&self, grid_n: usize) -> Vec<f64> {
        let l = self.profile.length;
        let vd = |r: f64| self.profile.potential_deriv(r);
        let mut values = vec![self.profile.potential(0.0), self.profile.potential(0.5 * l)];
        let m = grid_n.max(64);
        let step = l / m as f64;
        let mut prev_r = 0.5 * step;
        let mut prev = vd(prev_r);
        for i in 1..m {
            let r = (i as f64 + 0.5) * step;
            let cur = vd(r);
            if prev == 0.0 {
                values.push(self.profile.potential(prev_r));
            } else if prev * cur < 0.0 {
                let root = bisect(&vd, prev_r, r, l);
                values.push(self.profile.potential(root));
            }
            prev_r = r;
            prev = cur;
        }
        values
    }

    /// Components of `{U_h > 0}`, folded to quotient intervals in
    /// projective mode.
    pub fn components(&self, tol: &Tolerances) -> Result<Vec<ComponentInterval>> {
        let l = self.profile.length;
        let g = |r: f64| self.h - self.profile.potential(r);

        let mut scale = self.h.abs().max(1.0);
        for v in self.potential_critical_values(tol.grid_n) {
            scale = scale.max(v.abs());
        }
        for v in self.potential_critical_values(tol.grid_n) {
            if (self.h - v).abs() <= tol.tol_value * scale {
                return Err(Error::SingularEnergy {
                    h: self.h,
                    reason: format!("energy within tolerance of critical potential level {v}"),
                });
            }
        }

        // Zeros of h - V on the closed interval. A grid node can land on a
        // zero exactly (cancellation), so zero samples count as roots on
        // their own and reset the sign tracking.
        let n = tol.grid_n.max(64);
        let step = l / n as f64;
        let mut roots = Vec::new();
        let mut any_positive = false;
        let mut last_sign = 0i8;
        let mut last_r = 0.0;
        for i in 0..=n {
            let r = if i == n { l } else { i as f64 * step };
            let cur = g(r);
            if cur > 0.0 {
                any_positive = true;
            }
            let sign = if cur > 0.0 {
                1
            } else if cur < 0.0 {
                -1
            } else {
                0
            };
            if sign == 0 {
                if 0.0 < r && r < l {
                    roots.push(r);
                }
                last_sign = 0;
            } else {
                if last_sign != 0 && sign != last_sign {
                    roots.push(bisect(&g, last_r, r, l));
                }
                last_sign = sign;
                last_r = r;
            }
        }
        if !any_positive {
            return Err(Error::EmptyLevel { h: self.h });
        }

        // Assemble intervals of positivity; V(0) = V(L) makes the parity at
        // the two poles agree.
        let mut intervals = Vec::new();
        let mut start = if g(0.0) > 0.0 { Some((0.0, EndKind::Pole)) } else { None };
        for &root in &roots {
            match start.take() {
                Some((lo, left_end)) => intervals.push(ComponentInterval {
                    lo,
                    hi: root,
                    left_end,
                    right_end: EndKind::RegularZero,
                }),
                None => start = Some((root, EndKind::RegularZero)),
            }
        }
        if let Some((lo, left_end)) = start {
            intervals.push(ComponentInterval {
                lo,
                hi: l,
                left_end,
                right_end: EndKind::Pole,
            });
        }
        if intervals.is_empty() {
            return Err(Error::EmptyLevel { h: self.h });
        }

        match self.profile.surface {
            Surface::Sphere => Ok(intervals),
            Surface::ProjectivePlane => self.fold_components(intervals),
        }
    }

    /// Replace each symmetric component by its quotient interval and each
    /// mirror pair by its left member.
    fn fold_components(&self, intervals: Vec<ComponentInterval>) -> Result<Vec<ComponentInterval>> {
        let l = self.profile.length;
        let half = 0.5 * l;
        let slack = 1e-9 * l;
        let mut kept = Vec::new();
        let mut dropped: Vec<ComponentInterval> = Vec::new();
        for iv in intervals {
            if iv.lo < half && half < iv.hi {
                // Symmetric: must straddle the midpoint symmetrically.
                if ((l - iv.hi) - iv.lo).abs() > slack {
                    return Err(Error::InternalSweepMismatch {
                        detail: format!(
                            "component ({}, {}) straddles the midpoint asymmetrically",
                            iv.lo, iv.hi
                        ),
                    });
                }
                kept.push(ComponentInterval {
                    lo: iv.lo,
                    hi: half,
                    left_end: iv.left_end,
                    right_end: EndKind::Center,
                });
            } else if iv.hi <= half {
                kept.push(iv);
            } else {
                dropped.push(iv);
            }
        }
        // Every dropped right-side component must mirror a kept left one.
        for d in &dropped {
            let lo_m = l - d.hi;
            let hi_m = l - d.lo;
            let found = kept.iter().any(|k| {
                !k.is_quotient() && (k.lo - lo_m).abs() <= slack && (k.hi - hi_m).abs() <= slack
            });
            if !found {
                return Err(Error::InternalSweepMismatch {
                    detail: format!("unpaired mirror component ({}, {})", d.lo, d.hi),
                });
            }
        }
        Ok(kept)
    }

    /// Classified critical points of `U_h` inside one component, sorted by
    /// `r`. The midpoint is pinned as an exact candidate whenever it lies in
    /// the component, and the max/min alternation along the interval is
    /// verified, refining the scan until it holds.
    pub fn critical_points(
        &self,
        comp: &ComponentInterval,
        tol: &Tolerances,
    ) -> Result<Vec<CriticalPoint>> {
        let l = self.profile.length;
        let half = 0.5 * l;
        let (a, b) = (comp.lo, comp.hi);
        let central = comp.is_quotient();
        let pin_center = central || (a < half && half < b);

        for attempt in 0..3 {
            let m = tol.grid_n.max(64) << (2 * attempt);
            let step = (b - a) / m as f64;

            let mut scale = 1.0f64;
            let mut roots: Vec<f64> = Vec::new();
            let mut prev_r = a + 0.5 * step;
            let mut prev = self.deriv(prev_r);
            scale = scale.max(self.eval(prev_r).abs());
            for i in 1..m {
                let r = a + (i as f64 + 0.5) * step;
                let cur = self.deriv(r);
                scale = scale.max(self.eval(r).abs());
                if prev == 0.0 {
                    roots.push(prev_r);
                } else if prev * cur < 0.0 {
                    let mut root = bisect(&|x| self.deriv(x), prev_r, r, l);
                    root = self.newton_polish(root, prev_r, r);
                    roots.push(root);
                }
                prev_r = r;
                prev = cur;
            }
            if pin_center {
                roots.push(half);
            }
            roots.sort_by(|x, y| x.partial_cmp(y).unwrap());

            // Merge clustered roots; a cluster containing the pinned
            // midpoint collapses onto it exactly.
            let radius = DEDUPE_RADIUS * l;
            let mut merged: Vec<f64> = Vec::new();
            let mut cluster: Vec<f64> = Vec::new();
            for root in roots {
                if let Some(&last) = cluster.last() {
                    if root - last > radius {
                        merged.push(collapse_cluster(&cluster, half, pin_center, radius));
                        cluster.clear();
                    }
                }
                cluster.push(root);
            }
            if !cluster.is_empty() {
                merged.push(collapse_cluster(&cluster, half, pin_center, radius));
            }

            let mut points = Vec::new();
            let mut degenerate: Option<Error> = None;
            for r in merged {
                let second = self.second(r);
                if second.abs() <= tol.tol_hess * scale {
                    degenerate = Some(Error::DegenerateCritical { r, second });
                    break;
                }
                let kind = if second < 0.0 {
                    CriticalKind::LocalMax
                } else {
                    CriticalKind::LocalMin
                };
                points.push(CriticalPoint {
                    r,
                    value: self.eval(r),
                    kind,
                    is_central: central && r == half,
                });
            }
            if let Some(err) = degenerate {
                return Err(err);
            }

            if self.alternation_holds(&points, central) {
                return Ok(points);
            }
            if attempt == 2 {
                let (gap_mid, grad) = self.worst_gap(&points, a, b, central);
                return Err(Error::MissedRootSuspicion { r: gap_mid, grad });
            }
        }
        unreachable!("scan loop returns on success or final attempt")
    }

    /// Components with their classified critical points: the full certified
    /// input of the sweep.
    pub fn critical_structure(&self, tol: &Tolerances) -> Result<Vec<ComponentAnalysis>> {
        let comps = self.components(tol)?;
        comps
            .into_iter()
            .map(|interval| {
                let critical_points = self.critical_points(&interval, tol)?;
                Ok(ComponentAnalysis {
                    interval,
                    critical_points,
                })
            })
            .collect()
    }

    fn newton_polish(&self, root: f64, lo: f64, hi: f64) -> f64 {
        let mut r = root;
        let mut best = self.deriv(r).abs();
        for _ in 0..2 {
            let second = self.second(r);
            if second == 0.0 {
                break;
            }
            let next = r - self.deriv(r) / second;
            if next <= lo || next >= hi {
                break;
            }
            let quality = self.deriv(next).abs();
            if quality < best {
                r = next;
                best = quality;
            } else {
                break;
            }
        }
        r
    }

    /// The value of `U_h` vanishes at both component ends (except the
    /// central one), so maxima and minima must alternate starting and
    /// ending with a maximum against those zero ends.
    fn alternation_holds(&self, points: &[CriticalPoint], central: bool) -> bool {
        if points.is_empty() {
            return false;
        }
        let mut expect_max = true;
        for p in points {
            let is_max = p.kind == CriticalKind::LocalMax;
            if is_max != expect_max {
                return false;
            }
            expect_max = !expect_max;
        }
        if central {
            // Any parity may end at the center; the alternation alone decides.
            true
        } else {
            // The last critical point before the descending end is a max.
            points.last().is_some_and(|p| p.kind == CriticalKind::LocalMax)
        }
    }

    fn worst_gap(&self, points: &[CriticalPoint], a: f64, b: f64, central: bool) -> (f64, f64) {
        let mut knots = vec![a];
        knots.extend(points.iter().map(|p| p.r));
        if !central {
            knots.push(b);
        }
        let mut worst = (0.5 * (a + b), self.deriv(0.5 * (a + b)));
        let mut width = 0.0;
        for w in knots.windows(2) {
            if w[1] - w[0] > width {
                width = w[1] - w[0];
                let mid = 0.5 * (w[0] + w[1]);
                worst = (mid, self.deriv(mid));
            }
        }
        worst
    }
}

fn collapse_cluster(cluster: &[f64], half: f64, pin_center: bool, radius: f64) -> f64 {
    if pin_center && cluster.iter().any(|&r| (r - half).abs() <= radius) {
        half
    } else {
        cluster[cluster.len() / 2]
    }
}

/// Plain bisection of a sign change, refined to a width of
/// `BISECT_WIDTH * scale`.
fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, scale: f64) -> f64 {
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..100 {
        if hi - lo <= BISECT_WIDTH * scale {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid == 0.0 {
            return mid;
        }
        if flo * fmid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    0.5 * (lo + hi)
}
