//! The loop molecule of an isoenergy level: critical circles of the angular
//! momentum grouped into atoms, connected by one-parameter families of tori.
//!
//! For `k^2` below the top of the effective potential, each interval of
//! `{U_h > k^2}` carries one torus. Sweeping `u = k^2` downward, an interval
//! is born at every local maximum of `U_h` (an elliptic atom) and adjacent
//! intervals merge at every local minimum (a saddle atom); simultaneous
//! minima whose flanking intervals touch merge in a single atom. The sweep
//! runs on the positive-`k` half, which is then mirrored to `k < 0` and the
//! surviving family of each side is joined into the central edge through
//! `k = 0`.
//!
//! On the projective plane the sweep happens on the quotient interval of a
//! symmetric component: a critical point at the midpoint yields a central
//! atom (an elliptic one, or a saddle carrying a star vertex), and families
//! whose interval reaches the midpoint are quotients of single symmetric
//! tori upstairs, which matters for the admissible bases later.

use serde::{Deserialize, Serialize};

use crate::effective::{
    ComponentAnalysis, ComponentInterval, CriticalKind, EffectivePotential, EndKind, Tolerances,
};
use crate::error::{Error, Result};
use crate::profile::{Surface, ValidatedProfile};

/// Topological type of one component of `{U_h > 0}`, which fixes how the
/// level closes up at `k = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentClass {
    /// Projective plane, component covering the whole meridian.
    FullProjective,
    /// Projective plane, mirror pair of pole caps.
    Disk,
    /// Projective plane, symmetric band around the midpoint.
    Mobius,
    /// Projective plane, mirror pair of interior bands.
    Annulus,
    /// Sphere, component covering the whole meridian.
    FullSphere,
    /// Sphere, single pole cap.
    Cap,
    /// Sphere, interior band.
    Band,
}

impl ComponentClass {
    pub fn classify(surface: Surface, iv: &ComponentInterval) -> Result<Self> {
        use EndKind::*;
        let class = match (surface, iv.left_end, iv.right_end) {
            (Surface::ProjectivePlane, Pole, Center) => ComponentClass::FullProjective,
            (Surface::ProjectivePlane, Pole, RegularZero) => ComponentClass::Disk,
            (Surface::ProjectivePlane, RegularZero, Center) => ComponentClass::Mobius,
            (Surface::ProjectivePlane, RegularZero, RegularZero) => ComponentClass::Annulus,
            (Surface::Sphere, Pole, Pole) => ComponentClass::FullSphere,
            (Surface::Sphere, Pole, RegularZero) | (Surface::Sphere, RegularZero, Pole) => {
                ComponentClass::Cap
            }
            (Surface::Sphere, RegularZero, RegularZero) => ComponentClass::Band,
            (s, l, r) => {
                return Err(Error::InternalSweepMismatch {
                    detail: format!("component ends ({l:?}, {r:?}) invalid on {}", s.name()),
                })
            }
        };
        Ok(class)
    }

    /// How many poles the family crossing `k = 0` passes, which drives the
    /// basis monodromy across the central edge.
    pub fn pole_crossings(self) -> i64 {
        match self {
            ComponentClass::FullProjective | ComponentClass::FullSphere => 2,
            ComponentClass::Disk | ComponentClass::Cap => 1,
            ComponentClass::Mobius | ComponentClass::Annulus | ComponentClass::Band => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ComponentClass::FullProjective => "full-projective",
            ComponentClass::Disk => "disk",
            ComponentClass::Mobius => "mobius",
            ComponentClass::Annulus => "annulus",
            ComponentClass::FullSphere => "full-sphere",
            ComponentClass::Cap => "cap",
            ComponentClass::Band => "band",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AtomKind {
    Elliptic,
    Saddle,
}

/// One atom of the molecule: a connected critical fiber of the momentum.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Atom {
    /// Momentum value of the critical level; negative on the mirrored half.
    pub level_k: f64,
    /// Critical value of the effective potential, `level_k^2`.
    pub level_u: f64,
    pub kind: AtomKind,
    /// Radial positions of the ordinary critical circles.
    pub circles: Vec<f64>,
    /// Whether the atom contains the midpoint circle of a quotient interval.
    pub is_central: bool,
    /// Central saddles carry a star vertex: the midpoint circle is halved by
    /// the deck symmetry and becomes an exceptional fiber.
    pub has_star: bool,
    /// Saddles only: number of families on the split side.
    pub split_edges: usize,
}

impl Atom {
    pub fn name(&self) -> String {
        match self.kind {
            AtomKind::Elliptic => "A".to_string(),
            AtomKind::Saddle => {
                if self.has_star && self.circles.is_empty() {
                    "A*".to_string()
                } else if self.has_star {
                    format!("V{}*", self.split_edges)
                } else {
                    format!("V{}", self.split_edges)
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        match self.kind {
            AtomKind::Elliptic => 1,
            AtomKind::Saddle => self.split_edges + 1,
        }
    }
}

/// How a family of tori sits against one of its bounding atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TorusRole {
    /// The single family at an elliptic atom.
    Elliptic,
    /// The merged-side family of a saddle.
    Outer,
    /// A split-side family of a saddle.
    Inner,
    /// A split-side family whose tori are quotients of single symmetric
    /// tori upstairs (the interval reaches the midpoint).
    InnerCentral,
}

/// A family of tori connecting two atoms, oriented from lower to higher
/// momentum.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Edge {
    pub lower: usize,
    pub upper: usize,
    pub lower_role: TorusRole,
    pub upper_role: TorusRole,
    pub k_lo: f64,
    pub k_hi: f64,
    /// The tori of this family are quotients of symmetric tori upstairs.
    pub center_family: bool,
    /// The family crossing `k = 0` that joins the two halves.
    pub is_central_edge: bool,
}

/// The molecule of one connected component of the isoenergy level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentMolecule {
    pub class: ComponentClass,
    pub interval: ComponentInterval,
    /// Positive-half atoms first (in sweep order), then their mirrors.
    pub atoms: Vec<Atom>,
    pub edges: Vec<Edge>,
    /// Index into `edges` of the central edge.
    pub central_edge: usize,
}

impl ComponentMolecule {
    /// Edges incident to an atom, with a flag for sitting at the upper end.
    pub fn incident_edges(&self, atom: usize) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.lower == atom {
                out.push((i, false));
            }
            if e.upper == atom {
                out.push((i, true));
            }
        }
        out
    }

    pub fn star_count(&self) -> usize {
        self.atoms.iter().filter(|a| a.has_star).count()
    }

    /// The molecule as a linear word like `A-A*-A*-A`, when it is a path.
    pub fn word(&self) -> Option<String> {
        let n = self.atoms.len();
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            adjacency[e.lower].push(i);
            adjacency[e.upper].push(i);
        }
        if adjacency.iter().any(|a| a.len() > 2) {
            return None;
        }
        let mut ends: Vec<usize> = (0..n).filter(|&i| adjacency[i].len() == 1).collect();
        if ends.len() != 2 {
            return None;
        }
        ends.sort_by(|&a, &b| {
            self.atoms[b]
                .level_k
                .partial_cmp(&self.atoms[a].level_k)
                .unwrap()
                .then(a.cmp(&b))
        });
        let mut word = Vec::new();
        let mut at = ends[0];
        let mut via = usize::MAX;
        loop {
            word.push(self.atoms[at].name());
            let next = adjacency[at].iter().copied().find(|&e| e != via);
            match next {
                Some(e) => {
                    via = e;
                    at = if self.edges[e].lower == at {
                        self.edges[e].upper
                    } else {
                        self.edges[e].lower
                    };
                }
                None => break,
            }
            if word.len() > n {
                return None;
            }
        }
        (word.len() == n).then(|| word.join("-"))
    }
}

/// The full molecule of an isoenergy level, one piece per component.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Molecule {
    pub h: f64,
    pub surface: Surface,
    pub components: Vec<ComponentMolecule>,
}

impl Molecule {
    /// Number of torus families alive at momentum `k`.
    pub fn tori_at(&self, k: f64) -> usize {
        self.components
            .iter()
            .flat_map(|c| c.edges.iter())
            .filter(|e| e.k_lo < k && k < e.k_hi)
            .count()
    }

    /// Distinct positive critical momenta over all components, descending;
    /// values closer than `radius` are merged.
    pub fn event_levels(&self, radius: f64) -> Vec<f64> {
        let mut ks: Vec<f64> = self
            .components
            .iter()
            .flat_map(|c| c.atoms.iter())
            .map(|a| a.level_k.abs())
            .collect();
        ks.sort_by(|a, b| b.partial_cmp(a).unwrap());
        ks.dedup_by(|next, kept| (*kept - *next).abs() <= radius);
        ks
    }
}

/// Build the molecule of the level `{H = h}`.
pub fn build_molecule(
    profile: &ValidatedProfile,
    h: f64,
    tol: &Tolerances,
) -> Result<Molecule> {
    let eff = EffectivePotential::new(profile, h);
    let analyses = eff.critical_structure(tol)?;
    let components = analyses
        .iter()
        .map(|analysis| sweep_component(profile.surface, analysis, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(Molecule {
        h,
        surface: profile.surface,
        components,
    })
}

/// One torus family alive during the sweep.
struct ActiveInterval {
    span_lo: f64,
    span_hi: f64,
    upper_atom: usize,
    upper_role: TorusRole,
    center_touch: bool,
}

struct HalfEdge {
    upper_atom: usize,
    upper_role: TorusRole,
    lower_atom: usize,
    lower_role: TorusRole,
    center_family: bool,
}

fn sweep_component(
    surface: Surface,
    analysis: &ComponentAnalysis,
    tol: &Tolerances,
) -> Result<ComponentMolecule> {
    let class = ComponentClass::classify(surface, &analysis.interval)?;
    let crits = &analysis.critical_points;
    let mismatch = |detail: String| Error::InternalSweepMismatch { detail };

    let scale = crits
        .iter()
        .map(|c| c.value.abs())
        .fold(1.0f64, f64::max);
    let eps = tol.tol_value * scale;

    let mut order: Vec<usize> = (0..crits.len()).collect();
    order.sort_by(|&i, &j| crits[j].value.partial_cmp(&crits[i].value).unwrap());
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for idx in order {
        match clusters.last_mut() {
            Some(cluster)
                if crits[cluster[cluster.len() - 1]].value - crits[idx].value <= eps =>
            {
                cluster.push(idx)
            }
            _ => clusters.push(vec![idx]),
        }
    }

    let mut atoms: Vec<Atom> = Vec::new();
    let mut half_edges: Vec<HalfEdge> = Vec::new();
    let mut active: Vec<ActiveInterval> = Vec::new();

    for cluster in clusters {
        let mut births: Vec<usize> = cluster
            .iter()
            .copied()
            .filter(|&i| crits[i].kind == CriticalKind::LocalMax)
            .collect();
        births.sort_by(|&i, &j| crits[i].r.partial_cmp(&crits[j].r).unwrap());
        let mut merges: Vec<usize> = cluster
            .iter()
            .copied()
            .filter(|&i| crits[i].kind == CriticalKind::LocalMin)
            .collect();
        merges.sort_by(|&i, &j| crits[i].r.partial_cmp(&crits[j].r).unwrap());

        for b in births {
            let c = &crits[b];
            if c.value <= 0.0 {
                return Err(mismatch(format!("nonpositive critical level {}", c.value)));
            }
            let atom_idx = atoms.len();
            atoms.push(Atom {
                level_k: c.value.sqrt(),
                level_u: c.value,
                kind: AtomKind::Elliptic,
                circles: vec![c.r],
                is_central: c.is_central,
                has_star: false,
                split_edges: 0,
            });
            active.push(ActiveInterval {
                span_lo: c.r,
                span_hi: c.r,
                upper_atom: atom_idx,
                upper_role: TorusRole::Elliptic,
                center_touch: c.is_central,
            });
        }

        // Group simultaneous minima into runs: consecutive minima belong to
        // one atom exactly when a single family separates them.
        let mut runs: Vec<Vec<usize>> = Vec::new();
        for m in merges {
            let adjacent = runs.last().is_some_and(|run: &Vec<usize>| {
                let prev = *run.last().unwrap();
                let between = active
                    .iter()
                    .filter(|iv| iv.span_lo > crits[prev].r && iv.span_hi < crits[m].r)
                    .count();
                between == 1
            });
            if adjacent {
                runs.last_mut().unwrap().push(m);
            } else {
                runs.push(vec![m]);
            }
        }

        for run in runs {
            merge_run(crits, &run, &mut atoms, &mut half_edges, &mut active, analysis)
                .map_err(&mismatch)?;
        }
    }

    if active.len() != 1 {
        return Err(mismatch(format!(
            "{} families alive at the end of the sweep",
            active.len()
        )));
    }
    let last = active.pop().unwrap();

    // Mirror the half to negative momentum and join through the central edge.
    let n = atoms.len();
    let mut all_atoms = atoms.clone();
    for a in &atoms {
        let mut m = a.clone();
        m.level_k = -m.level_k;
        all_atoms.push(m);
    }
    let mut edges: Vec<Edge> = Vec::new();
    for he in &half_edges {
        let k_hi = atoms[he.upper_atom].level_k;
        let k_lo = atoms[he.lower_atom].level_k;
        edges.push(Edge {
            lower: he.lower_atom,
            upper: he.upper_atom,
            lower_role: he.lower_role,
            upper_role: he.upper_role,
            k_lo,
            k_hi,
            center_family: he.center_family,
            is_central_edge: false,
        });
        edges.push(Edge {
            lower: n + he.upper_atom,
            upper: n + he.lower_atom,
            lower_role: he.upper_role,
            upper_role: he.lower_role,
            k_lo: -k_hi,
            k_hi: -k_lo,
            center_family: he.center_family,
            is_central_edge: false,
        });
    }
    let k_last = atoms[last.upper_atom].level_k;
    edges.push(Edge {
        lower: n + last.upper_atom,
        upper: last.upper_atom,
        lower_role: last.upper_role,
        upper_role: last.upper_role,
        k_lo: -k_last,
        k_hi: k_last,
        center_family: last.center_touch,
        is_central_edge: true,
    });
    let central_edge = edges.len() - 1;

    let molecule = ComponentMolecule {
        class,
        interval: analysis.interval,
        atoms: all_atoms,
        edges,
        central_edge,
    };
    for (i, a) in molecule.atoms.iter().enumerate() {
        let actual = molecule.incident_edges(i).len();
        if actual != a.degree() {
            return Err(mismatch(format!(
                "atom {i} ({}) has {actual} incident families, expected {}",
                a.name(),
                a.degree()
            )));
        }
    }
    Ok(molecule)
}

fn merge_run(
    crits: &[crate::effective::CriticalPoint],
    run: &[usize],
    atoms: &mut Vec<Atom>,
    half_edges: &mut Vec<HalfEdge>,
    active: &mut Vec<ActiveInterval>,
    analysis: &ComponentAnalysis,
) -> std::result::Result<(), String> {
    let includes_center = run.iter().any(|&i| crits[i].is_central);
    if includes_center && !crits[*run.last().unwrap()].is_central {
        return Err("central minimum is not rightmost in its run".to_string());
    }
    let first_r = crits[run[0]].r;
    let last_r = crits[*run.last().unwrap()].r;
    let value = crits[run[0]].value;
    if value <= 0.0 {
        return Err(format!("nonpositive critical level {value}"));
    }

    let mut parts: Vec<usize> = Vec::new();
    let left = active
        .iter()
        .enumerate()
        .filter(|(_, iv)| iv.span_hi < first_r)
        .max_by(|(_, a), (_, b)| a.span_hi.partial_cmp(&b.span_hi).unwrap())
        .map(|(i, _)| i)
        .ok_or_else(|| format!("no family left of minimum at r = {first_r}"))?;
    parts.push(left);
    for pair in run.windows(2) {
        let (lo, hi) = (crits[pair[0]].r, crits[pair[1]].r);
        let between: Vec<usize> = active
            .iter()
            .enumerate()
            .filter(|(_, iv)| iv.span_lo > lo && iv.span_hi < hi)
            .map(|(i, _)| i)
            .collect();
        if between.len() != 1 {
            return Err(format!(
                "{} families between minima at r = {lo} and r = {hi}",
                between.len()
            ));
        }
        parts.push(between[0]);
    }
    if !includes_center {
        let right = active
            .iter()
            .enumerate()
            .filter(|(_, iv)| iv.span_lo > last_r)
            .min_by(|(_, a), (_, b)| a.span_lo.partial_cmp(&b.span_lo).unwrap())
            .map(|(i, _)| i)
            .ok_or_else(|| format!("no family right of minimum at r = {last_r}"))?;
        parts.push(right);
    }

    let ordinary: Vec<f64> = run
        .iter()
        .filter(|&&i| !crits[i].is_central)
        .map(|&i| crits[i].r)
        .collect();
    let atom_idx = atoms.len();
    atoms.push(Atom {
        level_k: value.sqrt(),
        level_u: value,
        kind: AtomKind::Saddle,
        circles: ordinary,
        is_central: includes_center,
        has_star: includes_center,
        split_edges: parts.len(),
    });

    for &p in &parts {
        let iv = &active[p];
        half_edges.push(HalfEdge {
            upper_atom: iv.upper_atom,
            upper_role: iv.upper_role,
            lower_atom: atom_idx,
            lower_role: if iv.center_touch {
                TorusRole::InnerCentral
            } else {
                TorusRole::Inner
            },
            center_family: iv.center_touch,
        });
    }

    let span_lo = parts
        .iter()
        .map(|&p| active[p].span_lo)
        .fold(f64::INFINITY, f64::min);
    let span_hi = if includes_center {
        analysis.interval.hi
    } else {
        parts
            .iter()
            .map(|&p| active[p].span_hi)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let center_touch = includes_center || parts.iter().any(|&p| active[p].center_touch);

    let mut doomed = parts.clone();
    doomed.sort_unstable();
    for p in doomed.into_iter().rev() {
        active.remove(p);
    }
    active.push(ActiveInterval {
        span_lo,
        span_hi,
        upper_atom: atom_idx,
        upper_role: TorusRole::Outer,
        center_touch,
    });
    Ok(())
}
