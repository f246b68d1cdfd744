//! Independent cross-checks of the molecule pipeline.
//!
//! Nothing here reuses the critical-point machinery of the main path: torus
//! counts come from counting sign blocks of `U_h - k^2` on a dense grid,
//! bifurcation momenta from ternary-search refinement of grid extrema, and
//! the conserved quantities from direct integration of the flow. Agreement
//! between two genuinely different routes is the correctness argument.

use crate::effective::EffectivePotential;
use crate::error::{Error, Result};
use crate::molecule::Molecule;
use crate::profile::{PhasePoint, Surface, ValidatedProfile};

/// Grid cells used by the counting and scanning oracles.
const ORACLE_GRID: usize = 1 << 17;
/// Ternary search stops at this bracket width relative to `L`.
const TERNARY_WIDTH: f64 = 1e-13;
/// Two bifurcation momenta closer than this (scaled) are one event.
const EVENT_RADIUS: f64 = 1e-9;
/// Molecule events must match scanned events this closely (scaled).
const EVENT_MATCH: f64 = 1e-8;

/// Counts Liouville tori at given momentum by scanning a precomputed grid
/// of the effective potential.
pub struct LevelCounter {
    values: Vec<f64>,
    mid_value: f64,
    surface: Surface,
}

impl LevelCounter {
    pub fn new(profile: &ValidatedProfile, h: f64) -> Self {
        let eff = EffectivePotential::new(profile, h);
        let l = profile.length;
        let step = l / ORACLE_GRID as f64;
        let values = (0..ORACLE_GRID)
            .map(|i| eff.eval((i as f64 + 0.5) * step))
            .collect();
        LevelCounter {
            values,
            mid_value: eff.eval(0.5 * l),
            surface: profile.surface,
        }
    }

    /// Number of tori at momentum `k`: maximal grid runs with `U_h > k^2`,
    /// halved with the symmetric middle component counted once on the
    /// projective plane. Sample away from bifurcation momenta.
    pub fn count(&self, k: f64) -> usize {
        let u = k * k;
        let mut runs = 0usize;
        let mut inside = false;
        for &v in &self.values {
            let above = v > u;
            if above && !inside {
                runs += 1;
            }
            inside = above;
        }
        match self.surface {
            Surface::Sphere => runs,
            Surface::ProjectivePlane => {
                let symmetric = if self.mid_value > u { 1 } else { 0 };
                (runs + symmetric) / 2
            }
        }
    }
}

/// Bifurcation momenta of one energy level found by direct scanning.
#[derive(Debug, Clone)]
pub struct BifurcationScan {
    pub h: f64,
    /// Distinct momenta of the foliation changes, descending.
    pub events: Vec<f64>,
}

/// Locate every interior extremum of `U_h` on a dense grid and refine it by
/// ternary search; positive extremal values are bifurcation levels `k^2`.
pub fn bifurcation_scan(profile: &ValidatedProfile, h: f64) -> Result<BifurcationScan> {
    let eff = EffectivePotential::new(profile, h);
    let l = profile.length;
    let step = l / ORACLE_GRID as f64;
    let at = |i: usize| (i as f64 + 0.5) * step;

    let mut values: Vec<f64> = Vec::new();
    let grid: Vec<f64> = (0..ORACLE_GRID).map(|i| eff.eval(at(i))).collect();
    for i in 1..ORACLE_GRID - 1 {
        // Left-biased comparisons so the exact mirror pair straddling the
        // midpoint registers as a single extremum.
        let maximum = grid[i] > grid[i - 1] && grid[i] >= grid[i + 1];
        let minimum = grid[i] < grid[i - 1] && grid[i] <= grid[i + 1];
        if !(maximum || minimum) {
            continue;
        }
        let x = ternary_extremum(&|r| eff.eval(r), at(i - 1), at(i + 1), maximum, l);
        let v = eff.eval(x);
        if v > 0.0 {
            values.push(v);
        }
    }

    let mut events: Vec<f64> = values.into_iter().map(f64::sqrt).collect();
    events.sort_by(|a, b| b.partial_cmp(a).unwrap());
    events.dedup_by(|next, kept| (*kept - *next).abs() <= EVENT_RADIUS * kept.abs().max(1.0));
    Ok(BifurcationScan { h, events })
}

fn ternary_extremum(
    f: &dyn Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    maximum: bool,
    scale: f64,
) -> f64 {
    for _ in 0..200 {
        if hi - lo <= TERNARY_WIDTH * scale {
            break;
        }
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        let keep_right = if maximum {
            f(m1) < f(m2)
        } else {
            f(m1) > f(m2)
        };
        if keep_right {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    0.5 * (lo + hi)
}

/// Outcome of a successful molecule verification.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct OracleReport {
    pub events_checked: usize,
    pub counts_checked: usize,
}

/// Check a molecule against the scanning oracles: its critical momenta must
/// reproduce the scanned bifurcation events, and between any two events the
/// number of alive families must equal the grid torus count.
pub fn verify_molecule(profile: &ValidatedProfile, molecule: &Molecule) -> Result<OracleReport> {
    let scan = bifurcation_scan(profile, molecule.h)?;
    let molecule_events = molecule.event_levels(EVENT_RADIUS);

    if scan.events.len() != molecule_events.len() {
        return Err(Error::OracleMismatch {
            detail: format!(
                "molecule has {} bifurcation momenta, scan found {} ({:?} against {:?})",
                molecule_events.len(),
                scan.events.len(),
                molecule_events,
                scan.events
            ),
        });
    }
    for (m, s) in molecule_events.iter().zip(scan.events.iter()) {
        if (m - s).abs() > EVENT_MATCH * s.abs().max(1.0) {
            return Err(Error::OracleMismatch {
                detail: format!("molecule event at k = {m} against scanned event at k = {s}"),
            });
        }
    }

    let counter = LevelCounter::new(profile, molecule.h);
    let mut samples: Vec<f64> = Vec::new();
    if let Some(&top) = scan.events.first() {
        samples.push(top * 1.1 + 0.1);
    }
    for pair in scan.events.windows(2) {
        samples.push(0.5 * (pair[0] + pair[1]));
    }
    if let Some(&last) = scan.events.last() {
        samples.push(0.5 * last);
    }
    for &k in &samples {
        let expected = molecule.tori_at(k);
        let counted = counter.count(k);
        if expected != counted {
            return Err(Error::OracleMismatch {
                detail: format!(
                    "molecule carries {expected} tori at k = {k}, grid count gives {counted}"
                ),
            });
        }
    }
    Ok(OracleReport {
        events_checked: scan.events.len(),
        counts_checked: samples.len(),
    })
}

/// Energy of a phase point, `(p_r^2 + p_phi^2 / f^2) / 2 + V`.
pub fn energy(profile: &ValidatedProfile, pt: &PhasePoint) -> f64 {
    let f = profile.radius(pt.r);
    0.5 * (pt.p_r * pt.p_r + pt.p_phi * pt.p_phi / (f * f)) + profile.potential(pt.r)
}

/// A phase point on the torus of energy `h` and momentum `k` over radius
/// `r`, with `p_r >= 0`; `None` where the torus does not reach.
pub fn torus_point(profile: &ValidatedProfile, h: f64, k: f64, r: f64, phi: f64) -> Option<PhasePoint> {
    let eff = EffectivePotential::new(profile, h);
    let u = eff.eval(r);
    if u <= k * k {
        return None;
    }
    let f = profile.radius(r);
    let p_r = (u - k * k).sqrt() / f;
    Some(PhasePoint::new(p_r, k, r, phi))
}

/// Summary of one numeric trajectory.
#[derive(Debug, Clone, Copy)]
pub struct FlowReport {
    pub steps: usize,
    pub dt: f64,
    pub initial: PhasePoint,
    pub final_point: PhasePoint,
    /// Largest deviation of the energy from its initial value.
    pub h_drift_max: f64,
    /// Largest deviation of the momentum from its initial value.
    pub k_drift_max: f64,
    pub r_min: f64,
    pub r_max: f64,
}

/// Integrate the flow with fixed-step fourth-order Runge-Kutta, reporting
/// each state to `observer` and failing if the radius enters the pole guard
/// bands where the angular terms blow up.
pub fn integrate_flow_observed<F>(
    profile: &ValidatedProfile,
    start: PhasePoint,
    dt: f64,
    steps: usize,
    pole_guard: f64,
    mut observer: F,
) -> Result<FlowReport>
where
    F: FnMut(f64, &PhasePoint),
{
    let l = profile.length;
    let check = |y: &[f64; 4], t: f64| -> Result<()> {
        if y[2] < pole_guard || y[2] > l - pole_guard {
            return Err(Error::PoleApproach {
                r: y[2],
                guard: pole_guard,
                t,
            });
        }
        Ok(())
    };
    let deriv = |y: &[f64; 4]| -> [f64; 4] {
        let f = profile.radius(y[2]);
        let fd = profile.radius_deriv(y[2]);
        let vd = profile.potential_deriv(y[2]);
        [
            y[1] * y[1] * fd / (f * f * f) - vd,
            0.0,
            y[0],
            y[1] / (f * f),
        ]
    };

    let mut y = [start.p_r, start.p_phi, start.r, start.phi];
    check(&y, 0.0)?;
    let h0 = energy(profile, &start);
    let mut report = FlowReport {
        steps,
        dt,
        initial: start,
        final_point: start,
        h_drift_max: 0.0,
        k_drift_max: 0.0,
        r_min: start.r,
        r_max: start.r,
    };
    observer(0.0, &start);

    for i in 0..steps {
        let k1 = deriv(&y);
        let y2 = advance(&y, &k1, 0.5 * dt);
        let k2 = deriv(&y2);
        let y3 = advance(&y, &k2, 0.5 * dt);
        let k3 = deriv(&y3);
        let y4 = advance(&y, &k3, dt);
        let k4 = deriv(&y4);
        for j in 0..4 {
            y[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let t = (i + 1) as f64 * dt;
        check(&y, t)?;

        let pt = PhasePoint::new(y[0], y[1], y[2], y[3]);
        observer(t, &pt);
        report.h_drift_max = report.h_drift_max.max((energy(profile, &pt) - h0).abs());
        report.k_drift_max = report.k_drift_max.max((y[1] - start.p_phi).abs());
        report.r_min = report.r_min.min(y[2]);
        report.r_max = report.r_max.max(y[2]);
        report.final_point = pt;
    }
    Ok(report)
}

fn advance(y: &[f64; 4], k: &[f64; 4], dt: f64) -> [f64; 4] {
    [
        y[0] + dt * k[0],
        y[1] + dt * k[1],
        y[2] + dt * k[2],
        y[3] + dt * k[3],
    ]
}

/// Integrate without observing intermediate states.
pub fn integrate_flow(
    profile: &ValidatedProfile,
    start: PhasePoint,
    dt: f64,
    steps: usize,
    pole_guard: f64,
) -> Result<FlowReport> {
    integrate_flow_observed(profile, start, dt, steps, pole_guard, |_, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective::Tolerances;
    use crate::molecule::build_molecule;
    use crate::profile::{Profile, Surface};

    const PI: f64 = std::f64::consts::PI;

    fn validated(
        surface: Surface,
        radial: &[(i64, f64)],
        potential: &[(i64, f64)],
    ) -> ValidatedProfile {
        Profile::from_pairs(PI, surface, radial, potential)
            .validated(1e-9)
            .expect("test profile must validate")
    }

    #[test]
    fn star_profile_scan_matches_closed_forms() {
        let p = validated(Surface::ProjectivePlane, &[(1, 0.4), (3, 0.2)], &[]);
        let scan = bifurcation_scan(&p, 1.0).unwrap();
        assert_eq!(scan.events.len(), 2);
        assert!((scan.events[0] - (10.0f64 / 27.0).sqrt()).abs() < 1e-10);
        assert!((scan.events[1] - 0.08f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn quotient_counting_halves_mirror_pairs() {
        let p = validated(Surface::ProjectivePlane, &[(1, 0.4), (3, 0.2)], &[]);
        let counter = LevelCounter::new(&p, 1.0);
        // Between the two events: one quotient torus (a mirror pair).
        assert_eq!(counter.count(0.45), 1);
        // Below both events: the symmetric component counts once.
        assert_eq!(counter.count(0.1), 1);
        let sphere = validated(Surface::Sphere, &[(1, 0.4), (3, 0.2)], &[]);
        let counter = LevelCounter::new(&sphere, 1.0);
        assert_eq!(counter.count(0.45), 2);
        assert_eq!(counter.count(0.1), 1);
    }

    #[test]
    fn verify_accepts_built_molecules() {
        let cases = [
            (Surface::ProjectivePlane, vec![(1, 0.4), (3, 0.2)], vec![], 1.0),
            (Surface::Sphere, vec![(1, 0.4), (3, 0.2)], vec![], 1.0),
            (
                Surface::ProjectivePlane,
                vec![(1i64, 1.0)],
                vec![(0, 0.45), (2, -0.45)],
                0.5,
            ),
        ];
        for (surface, radial, potential, h) in cases {
            let p = validated(surface, &radial, &potential);
            let m = build_molecule(&p, h, &Tolerances::default()).unwrap();
            let report = verify_molecule(&p, &m).unwrap();
            assert!(report.events_checked >= 1);
            assert!(report.counts_checked >= 2);
        }
    }

    #[test]
    fn verify_rejects_tampered_molecule() {
        let p = validated(Surface::ProjectivePlane, &[(1, 0.4), (3, 0.2)], &[]);
        let mut m = build_molecule(&p, 1.0, &Tolerances::default()).unwrap();
        for atom in &mut m.components[0].atoms {
            atom.level_k *= 1.001;
        }
        match verify_molecule(&p, &m) {
            Err(Error::OracleMismatch { .. }) => {}
            other => panic!("expected OracleMismatch, got {other:?}"),
        }
    }

    #[test]
    fn flow_preserves_both_integrals() {
        let p = validated(Surface::Sphere, &[(1, 0.4), (3, 0.2)], &[(1, 0.1)]);
        let start = torus_point(&p, 1.0, 0.35, 0.9, 0.0).expect("inside the torus");
        let report = integrate_flow(&p, start, 1e-3, 20_000, 1e-6).unwrap();
        assert_eq!(report.k_drift_max, 0.0);
        assert!(report.h_drift_max < 1e-9, "drift {}", report.h_drift_max);
        assert!(report.r_min > 0.1 && report.r_max < PI - 0.1);
    }

    #[test]
    fn torus_point_sits_on_the_level() {
        let p = validated(Surface::Sphere, &[(1, 1.0)], &[(1, 0.2)]);
        let pt = torus_point(&p, 0.9, 0.3, 1.2, 0.5).unwrap();
        assert!((energy(&p, &pt) - 0.9).abs() < 1e-12);
        assert!(torus_point(&p, 0.9, 10.0, 1.2, 0.5).is_none());
    }

    #[test]
    fn pole_guard_interrupts_meridian_orbits() {
        let p = validated(Surface::Sphere, &[(1, 1.0)], &[]);
        // Zero momentum: a great circle through the poles.
        let start = PhasePoint::new((2.0f64).sqrt(), 0.0, 1.5, 0.0);
        match integrate_flow(&p, start, 1e-3, 20_000, 1e-3) {
            Err(Error::PoleApproach { .. }) => {}
            other => panic!("expected PoleApproach, got {other:?}"),
        }
    }
}
