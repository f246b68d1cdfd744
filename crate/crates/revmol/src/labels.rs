//! Numeric decorations of the molecule: gluing matrices between admissible
//! bases, the rational and sign marks on every edge, the integer mark of
//! each saddle family, and the resulting topology of the level.
//!
//! Every torus family carries the frame `(alpha_r, alpha_phi)` of the radial
//! and angular cycles; admissible bases are fixed rational combinations of
//! the frame, depending on the atom type, on which side of the atom the
//! family sits, and on whether its tori are quotients of symmetric tori
//! (those acquire half-integer combinations). Crossing `k = 0` the radial
//! cycle picks up `-delta * alpha_phi` with `delta` the number of pole
//! passages, which is where the topology of the component enters. Each edge
//! matrix is the change between the bases at its two ends, always with
//! determinant -1; the marks are read off the matrix entries and checked
//! against the first homology of the identified level via the torsion
//! formula.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::molecule::{
    Atom, AtomKind, ComponentClass, ComponentMolecule, Edge, Molecule, TorusRole,
};

type Q = Ratio<i64>;

fn q(n: i64) -> Q {
    Ratio::from_integer(n)
}

fn qr(n: i64, d: i64) -> Q {
    Ratio::new(n, d)
}

/// Integer change-of-basis matrix `(a b; c d)` of an edge, mapping the
/// admissible basis at the lower-momentum end to the one at the upper end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingMatrix(pub [[i64; 2]; 2]);

impl GluingMatrix {
    pub fn det(&self) -> i64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }
}

impl std::fmt::Display for GluingMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[[{},{}],[{},{}]]",
            self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1]
        )
    }
}

/// The rational mark of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RLabel {
    Finite(Ratio<i64>),
    Infinite,
}

impl std::fmt::Display for RLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RLabel::Finite(x) if x.is_integer() => write!(f, "{}", x.to_integer()),
            RLabel::Finite(x) => write!(f, "{}/{}", x.numer(), x.denom()),
            RLabel::Infinite => write!(f, "inf"),
        }
    }
}

/// Marks of one edge: the gluing matrix, the rational mark in both the
/// oriented convention and the raw entry ratio, and the sign mark.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LabeledEdge {
    /// Index of the edge in the component molecule.
    pub edge: usize,
    pub matrix: GluingMatrix,
    pub r: RLabel,
    /// `(a/b) mod 1` without the orientation flip, kept for transparency.
    pub r_raw: RLabel,
    pub eps: i64,
}

/// A maximal connected group of saddle atoms joined by infinite edges; the
/// unit that carries the integer mark.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Family {
    pub atoms: Vec<usize>,
    pub interior_edges: Vec<usize>,
    /// Exterior edges oriented into the family.
    pub incoming: Vec<usize>,
    pub outgoing: Vec<usize>,
    pub n: i64,
}

/// Topology of one connected component of the isoenergy level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Topology {
    S3,
    RP3,
    S1xS2,
    Lens { q: i64, p: i64 },
}

impl Topology {
    /// Order of the first homology; zero stands for the infinite one.
    pub fn h1_order(self) -> i64 {
        match self {
            Topology::S3 => 1,
            Topology::RP3 => 2,
            Topology::S1xS2 => 0,
            Topology::Lens { q, .. } => q,
        }
    }
}

impl std::fmt::Display for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Topology::S3 => write!(f, "S^3"),
            Topology::RP3 => write!(f, "RP^3"),
            Topology::S1xS2 => write!(f, "S^1xS^2"),
            Topology::Lens { q, p } => write!(f, "L({q},{p})"),
        }
    }
}

/// Result of the torsion cross-check of the marks against the topology.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TopalovReport {
    /// `n + sum of outer r + stars/2`, which must be an integer.
    pub n_tilde: i64,
    /// `2^stars * product of outer denominators * n_tilde`.
    pub big_n: i64,
    /// `|H1|` of the identified topology, zero for the infinite case.
    pub expected: i64,
    pub consistent: bool,
}

/// Labels of one component: per-edge marks, families with integer marks,
/// the topology, and the torsion report (absent without saddles).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentLabels {
    pub class: ComponentClass,
    pub edges: Vec<LabeledEdge>,
    pub families: Vec<Family>,
    pub topology: Topology,
    pub topalov: Option<TopalovReport>,
}

/// A molecule with all its decorations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabeledMolecule {
    pub molecule: Molecule,
    pub components: Vec<ComponentLabels>,
}

impl LabeledMolecule {
    pub fn topologies(&self) -> Vec<Topology> {
        self.components.iter().map(|c| c.topology).collect()
    }
}

/// Compute every label of the molecule, failing on any internal
/// inconsistency between the marks and the identified topology.
pub fn label_molecule(molecule: Molecule) -> Result<LabeledMolecule> {
    let components = molecule
        .components
        .iter()
        .enumerate()
        .map(|(ci, comp)| label_component(ci, comp))
        .collect::<Result<Vec<_>>>()?;
    Ok(LabeledMolecule {
        molecule,
        components,
    })
}

fn label_component(ci: usize, comp: &ComponentMolecule) -> Result<ComponentLabels> {
    let edges = comp
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let matrix = edge_matrix(comp, e)?;
            let (r, r_raw, eps) = marks(&matrix);
            Ok(LabeledEdge {
                edge: i,
                matrix,
                r,
                r_raw,
                eps,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let families = find_families(ci, comp, &edges)?;
    let topology = classify_topology(ci, comp, &edges)?;
    let topalov = torsion_check(ci, comp, &edges, &families, topology)?;
    Ok(ComponentLabels {
        class: comp.class,
        edges,
        families,
        topology,
        topalov,
    })
}

/// Admissible basis `(lambda, mu)` of a family at one of its atoms, as
/// rational rows over `(alpha_r, alpha_phi)` in the local frame.
fn basis(atom: &Atom, role: TorusRole, center_family: bool) -> ([Q; 2], [Q; 2]) {
    let s = if atom.level_k > 0.0 { 1 } else { -1 };
    match atom.kind {
        AtomKind::Elliptic => {
            let lambda = [q(1), q(0)];
            let mu = if atom.is_central {
                [qr(1, 2), qr(s, 2)]
            } else {
                [q(0), q(s)]
            };
            (lambda, mu)
        }
        AtomKind::Saddle => {
            let lambda = [q(0), q(s)];
            let mu = match role {
                TorusRole::Outer if center_family => [qr(-1, 2), qr(s, 2)],
                TorusRole::Outer => [q(-1), q(0)],
                TorusRole::Inner => [q(1), q(0)],
                TorusRole::InnerCentral => [qr(1, 2), qr(-s, 2)],
                TorusRole::Elliptic => unreachable!("elliptic role at a saddle"),
            };
            (lambda, mu)
        }
    }
}

#[derive(Clone, Copy)]
struct Mat2([[Q; 2]; 2]);

impl Mat2 {
    fn from_rows(r0: [Q; 2], r1: [Q; 2]) -> Self {
        Mat2([r0, r1])
    }

    fn mul(&self, o: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &o.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    fn det(&self) -> Q {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    fn inv(&self) -> Option<Mat2> {
        let d = self.det();
        if d.is_zero() {
            return None;
        }
        Some(Mat2([
            [self.0[1][1] / d, -self.0[0][1] / d],
            [-self.0[1][0] / d, self.0[0][0] / d],
        ]))
    }

    fn entries_f64(&self) -> [[f64; 2]; 2] {
        let c = |x: Q| x.to_f64().unwrap_or(f64::NAN);
        [
            [c(self.0[0][0]), c(self.0[0][1])],
            [c(self.0[1][0]), c(self.0[1][1])],
        ]
    }
}

/// Coordinate change from the upper-side frame to the lower-side frame
/// across the central edge: `alpha_r` gains `-delta * alpha_phi`.
fn frame_shift(delta: i64) -> Mat2 {
    Mat2([[q(1), q(-delta)], [q(0), q(1)]])
}

fn edge_matrix(comp: &ComponentMolecule, e: &Edge) -> Result<GluingMatrix> {
    let lower = &comp.atoms[e.lower];
    let upper = &comp.atoms[e.upper];
    let (l_lo, mut m_lo) = basis(lower, e.lower_role, e.center_family);
    let (l_hi, m_hi) = basis(upper, e.upper_role, e.center_family);
    if e.is_central_edge
        && comp.class == ComponentClass::FullProjective
        && lower.kind == AtomKind::Elliptic
    {
        // Presentation gauge of the doubly covered elliptic pair: shifting
        // mu by -lambda below leaves every mark unchanged and matches the
        // standard form of this matrix.
        m_lo = [m_lo[0] - l_lo[0], m_lo[1] - l_lo[1]];
    }
    let delta = if e.is_central_edge {
        comp.class.pole_crossings()
    } else {
        0
    };
    let m_minus = Mat2::from_rows(l_lo, m_lo);
    let m_plus = Mat2::from_rows(l_hi, m_hi).mul(&frame_shift(delta));
    let inv = m_minus.inv().ok_or(Error::NonUnimodular {
        entries: m_minus.entries_f64(),
    })?;
    let c = m_plus.mul(&inv);

    let mut out = [[0i64; 2]; 2];
    for (row, c_row) in out.iter_mut().zip(&c.0) {
        for (entry, value) in row.iter_mut().zip(c_row) {
            if !value.is_integer() {
                return Err(Error::NonUnimodular {
                    entries: c.entries_f64(),
                });
            }
            *entry = value.to_integer();
        }
    }
    let m = GluingMatrix(out);
    if m.det() != -1 {
        return Err(Error::NonUnimodular {
            entries: c.entries_f64(),
        });
    }
    Ok(m)
}

fn mod1(x: Q) -> Q {
    x - x.floor()
}

fn marks(m: &GluingMatrix) -> (RLabel, RLabel, i64) {
    let [[a, b], [_, _]] = m.0;
    if b != 0 {
        (
            RLabel::Finite(mod1(qr(-a, b))),
            RLabel::Finite(mod1(qr(a, b))),
            b.signum(),
        )
    } else {
        (RLabel::Infinite, RLabel::Infinite, a.signum())
    }
}

fn find_families(
    ci: usize,
    comp: &ComponentMolecule,
    edges: &[LabeledEdge],
) -> Result<Vec<Family>> {
    let is_saddle = |i: usize| comp.atoms[i].kind == AtomKind::Saddle;
    let n_atoms = comp.atoms.len();
    let mut group = vec![usize::MAX; n_atoms];
    let mut families: Vec<Vec<usize>> = Vec::new();
    for start in 0..n_atoms {
        if !is_saddle(start) || group[start] != usize::MAX {
            continue;
        }
        let id = families.len();
        let mut stack = vec![start];
        let mut members = Vec::new();
        group[start] = id;
        while let Some(at) = stack.pop() {
            members.push(at);
            for e in &comp.edges {
                let other = if e.lower == at {
                    e.upper
                } else if e.upper == at {
                    e.lower
                } else {
                    continue;
                };
                if is_saddle(other) && group[other] == usize::MAX {
                    group[other] = id;
                    stack.push(other);
                }
            }
        }
        members.sort_unstable();
        families.push(members);
    }

    let mut out = Vec::new();
    for (id, atoms) in families.into_iter().enumerate() {
        let mut interior = Vec::new();
        let mut incoming = Vec::new();
        let mut outgoing = Vec::new();
        for (i, e) in comp.edges.iter().enumerate() {
            let lo_in = is_saddle(e.lower) && group[e.lower] == id;
            let hi_in = is_saddle(e.upper) && group[e.upper] == id;
            match (lo_in, hi_in) {
                (true, true) => interior.push(i),
                (false, true) => incoming.push(i),
                (true, false) => outgoing.push(i),
                (false, false) => {}
            }
        }
        // The integer mark: with the exterior bases normalized so that their
        // floor terms vanish, only interior edges contribute.
        let mut n = 0i64;
        for &i in &interior {
            let [[a, _b], [c, _d]] = edges[i].matrix.0;
            if a == 0 {
                return Err(Error::InconsistentLabels {
                    detail: format!(
                        "component {ci}: interior edge {i} has a vanishing corner entry"
                    ),
                });
            }
            n += qr(-c, a).floor().to_integer();
        }
        out.push(Family {
            atoms,
            interior_edges: interior,
            incoming,
            outgoing,
            n,
        });
    }
    Ok(out)
}

fn class_topology(class: ComponentClass) -> Topology {
    match class {
        ComponentClass::FullProjective => Topology::Lens { q: 4, p: 1 },
        ComponentClass::Disk | ComponentClass::Cap => Topology::S3,
        ComponentClass::Mobius | ComponentClass::Annulus | ComponentClass::Band => Topology::S1xS2,
        ComponentClass::FullSphere => Topology::RP3,
    }
}

fn topology_from_r(r: RLabel) -> Topology {
    match r {
        RLabel::Infinite => Topology::S1xS2,
        RLabel::Finite(x) if x.is_zero() => Topology::S3,
        RLabel::Finite(x) => {
            let (p, q) = (*x.numer(), *x.denom());
            if q == 2 {
                Topology::RP3
            } else {
                Topology::Lens {
                    q,
                    p: p.min(q - p),
                }
            }
        }
    }
}

fn classify_topology(
    ci: usize,
    comp: &ComponentMolecule,
    edges: &[LabeledEdge],
) -> Result<Topology> {
    let expected = class_topology(comp.class);
    let elliptic_only = comp
        .atoms
        .iter()
        .all(|a| a.kind == AtomKind::Elliptic);
    if elliptic_only {
        // A pure elliptic pair: the component is a union of two solid tori
        // and its type can be read off the rational mark independently.
        let from_r = topology_from_r(edges[comp.central_edge].r);
        if from_r != expected {
            return Err(Error::InconsistentLabels {
                detail: format!(
                    "component {ci}: mark gives {from_r}, component type gives {expected}"
                ),
            });
        }
    }
    Ok(expected)
}

fn torsion_check(
    ci: usize,
    comp: &ComponentMolecule,
    edges: &[LabeledEdge],
    families: &[Family],
    topology: Topology,
) -> Result<Option<TopalovReport>> {
    if families.is_empty() {
        return Ok(None);
    }
    if families.len() != 1 {
        return Err(Error::InconsistentLabels {
            detail: format!(
                "component {ci}: {} saddle families, expected one",
                families.len()
            ),
        });
    }
    let fam = &families[0];
    let stars: u32 = fam
        .atoms
        .iter()
        .filter(|&&a| comp.atoms[a].has_star)
        .count() as u32;

    let mut sum_r = q(0);
    let mut beta_product = 1i64;
    for &i in fam.incoming.iter().chain(fam.outgoing.iter()) {
        match edges[i].r {
            RLabel::Finite(x) => {
                sum_r += x;
                beta_product *= *x.denom();
            }
            RLabel::Infinite => {
                return Err(Error::InconsistentLabels {
                    detail: format!("component {ci}: exterior edge {i} carries an infinite mark"),
                })
            }
        }
    }

    let n_tilde = q(fam.n) + sum_r + qr(stars as i64, 2);
    if !n_tilde.is_integer() {
        return Err(Error::InconsistentLabels {
            detail: format!("component {ci}: torsion sum {n_tilde} is not an integer"),
        });
    }
    let n_tilde = n_tilde.to_integer();
    let big_n = 2i64.pow(stars) * beta_product * n_tilde;
    let expected = topology.h1_order();
    let consistent = if expected == 0 {
        big_n == 0
    } else {
        big_n.abs() == expected
    };
    if !consistent {
        return Err(Error::InconsistentLabels {
            detail: format!(
                "component {ci}: torsion value {big_n} against first homology order {expected} of {topology}"
            ),
        });
    }
    Ok(Some(TopalovReport {
        n_tilde,
        big_n,
        expected,
        consistent,
    }))
}
