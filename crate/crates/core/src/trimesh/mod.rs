//! Tetrahedral face-pairing complexes.
//!
//! Face `f` of a tetrahedron is the face opposite vertex `f`. A gluing of
//! face `f` of `tet` to face `g` of `to_tet` lists in `vmap` the images of
//! the vertices of face `f` taken in increasing order.

mod cover;
mod pi1;
mod surgery;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::index2::{Index2Error, Sign};

pub use cover::{CoverData, Orientability};
pub use pi1::Pi1;
pub use surgery::BoundaryComponent;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub tet: usize,
    pub face: usize,
    pub to_tet: usize,
    pub to_face: usize,
    pub vmap: [usize; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    #[serde(rename = "tets")]
    pub n_tets: usize,
    #[serde(default)]
    pub gluings: Vec<Gluing>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum Violation {
    #[error("triangulation has no tetrahedra")]
    NoTetrahedra,
    #[error("gluing {0} refers to a tetrahedron or face out of range")]
    OutOfRange(usize),
    #[error("gluing {0} has a vertex map that is not a bijection onto the target face")]
    BadVertexMap(usize),
    #[error("gluing {0} glues a face to itself")]
    SelfGlued(usize),
    #[error("gluing {0} disagrees with the reverse listing of the same pairing")]
    NotInvolutive(usize),
    #[error("face {face} of tetrahedron {tet} is paired more than once")]
    FacePairedTwice { tet: usize, face: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriError {
    #[error("invalid triangulation: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("triangulation is disconnected")]
    Disconnected,
    #[error("face {face} of tetrahedron {tet} is not on the boundary")]
    FaceNotOnBoundary { tet: usize, face: usize },
    #[error("walking around an edge did not close up: {0}")]
    EdgeWalk(String),
    #[error("edge loop reverses orientation, so the complex is not a manifold: {0}")]
    Character(#[from] Index2Error),
}

pub type Perm = [usize; 4];

pub fn face_vertices(f: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut k = 0;
    for v in 0..4 {
        if v != f {
            out[k] = v;
            k += 1;
        }
    }
    out
}

pub fn is_odd(p: &Perm) -> bool {
    let mut inversions = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

pub fn invert_perm(p: &Perm) -> Perm {
    let mut q = [0; 4];
    for (i, &pi) in p.iter().enumerate() {
        q[pi] = i;
    }
    q
}

/// One identification of two faces; `perm` sends vertices of `a.0` to
/// vertices of `b.0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pairing {
    pub a: (usize, usize),
    pub b: (usize, usize),
    pub perm: Perm,
}

impl Pairing {
    /// `+1` when the gluing is compatible with the standard vertex-order
    /// orientations of both tetrahedra, which happens for odd permutations.
    pub fn sign(&self) -> Sign {
        if is_odd(&self.perm) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// What lies across a face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Across {
    pub pairing: usize,
    /// True when this face is side `a` of the pairing.
    pub from_a: bool,
    pub tet: usize,
    pub face: usize,
    pub perm: Perm,
}

/// A validated triangulation with its pairings deduplicated.
#[derive(Debug, Clone)]
pub struct Complex {
    n: usize,
    pairings: Vec<Pairing>,
    slots: Vec<[Option<Across>; 4]>,
}

impl Complex {
    pub fn n_tets(&self) -> usize {
        self.n
    }

    pub fn pairings(&self) -> &[Pairing] {
        &self.pairings
    }

    pub fn across(&self, tet: usize, face: usize) -> Option<Across> {
        self.slots[tet][face]
    }

    pub fn boundary_faces(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|t| (0..4).map(move |f| (t, f)))
            .filter(|&(t, f)| self.slots[t][f].is_none())
            .collect()
    }

    /// Tetrahedra grouped by connectivity of the dual graph.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![];
            let mut queue = VecDeque::from([start]);
            while let Some(t) = queue.pop_front() {
                comp.push(t);
                for x in self.slots[t].iter().flatten() {
                    if !seen[x.tet] {
                        seen[x.tet] = true;
                        queue.push_back(x.tet);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Breadth-first spanning tree of the dual graph from tetrahedron 0:
    /// the orientation sign of each tetrahedron relative to the root and
    /// the set of pairings used as tree arcs.
    fn spanning_tree(&self) -> Result<(Vec<Sign>, Vec<bool>), TriError> {
        let mut orient: Vec<Option<Sign>> = vec![None; self.n];
        let mut tree = vec![false; self.pairings.len()];
        orient[0] = Some(Sign::Plus);
        let mut queue = VecDeque::from([0]);
        while let Some(t) = queue.pop_front() {
            let o = orient[t].expect("queued tetrahedra are oriented");
            for x in self.slots[t].iter().flatten() {
                if orient[x.tet].is_none() {
                    orient[x.tet] = Some(o * self.pairings[x.pairing].sign());
                    tree[x.pairing] = true;
                    queue.push_back(x.tet);
                }
            }
        }
        let orient = orient
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or(TriError::Disconnected)?;
        Ok((orient, tree))
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    fn classes(&mut self) -> usize {
        (0..self.0.len()).filter(|&x| self.find(x) == x).count()
    }
}

fn edge_index(p: usize, q: usize) -> usize {
    let (p, q) = (p.min(q), p.max(q));
    match (p, q) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        _ => 5,
    }
}

impl Triangulation {
    pub fn new(n_tets: usize) -> Self {
        Triangulation {
            n_tets,
            gluings: Vec::new(),
        }
    }

    /// Adds a gluing given by the full vertex permutation of `tet`.
    pub fn glue(&mut self, tet: usize, face: usize, to_tet: usize, perm: Perm) {
        let fv = face_vertices(face);
        self.gluings.push(Gluing {
            tet,
            face,
            to_tet,
            to_face: perm[face],
            vmap: [perm[fv[0]], perm[fv[1]], perm[fv[2]]],
        });
    }

    pub fn from_pairings(n_tets: usize, pairings: &[Pairing]) -> Self {
        let mut t = Triangulation::new(n_tets);
        for p in pairings {
            t.glue(p.a.0, p.a.1, p.b.0, p.perm);
        }
        t
    }

    pub fn complex(&self) -> Result<Complex, TriError> {
        let mut violations = Vec::new();
        let n = self.n_tets;
        if n == 0 {
            violations.push(Violation::NoTetrahedra);
        }
        let mut slots: Vec<[Option<Across>; 4]> = vec![[None; 4]; n];
        let mut pairings: Vec<Pairing> = Vec::new();
        for (i, g) in self.gluings.iter().enumerate() {
            if g.tet >= n || g.to_tet >= n || g.face > 3 || g.to_face > 3 {
                violations.push(Violation::OutOfRange(i));
                continue;
            }
            let mut target = g.vmap;
            target.sort_unstable();
            if target != face_vertices(g.to_face) {
                violations.push(Violation::BadVertexMap(i));
                continue;
            }
            if (g.tet, g.face) == (g.to_tet, g.to_face) {
                violations.push(Violation::SelfGlued(i));
                continue;
            }
            let mut perm = [0; 4];
            for (k, &v) in face_vertices(g.face).iter().enumerate() {
                perm[v] = g.vmap[k];
            }
            perm[g.face] = g.to_face;
            let inv = invert_perm(&perm);
            let here = slots[g.tet][g.face];
            let there = slots[g.to_tet][g.to_face];
            let wanted_here = |x: &Across| (x.tet, x.face) == (g.to_tet, g.to_face);
            match (here, there) {
                (None, None) => {
                    let k = pairings.len();
                    pairings.push(Pairing {
                        a: (g.tet, g.face),
                        b: (g.to_tet, g.to_face),
                        perm,
                    });
                    slots[g.tet][g.face] = Some(Across {
                        pairing: k,
                        from_a: true,
                        tet: g.to_tet,
                        face: g.to_face,
                        perm,
                    });
                    slots[g.to_tet][g.to_face] = Some(Across {
                        pairing: k,
                        from_a: false,
                        tet: g.tet,
                        face: g.face,
                        perm: inv,
                    });
                }
                (Some(x), Some(_)) if wanted_here(&x) => {
                    if x.perm != perm {
                        violations.push(Violation::NotInvolutive(i));
                    }
                }
                (Some(_), _) => violations.push(Violation::FacePairedTwice {
                    tet: g.tet,
                    face: g.face,
                }),
                (None, Some(_)) => violations.push(Violation::FacePairedTwice {
                    tet: g.to_tet,
                    face: g.to_face,
                }),
            }
        }
        if violations.is_empty() {
            Ok(Complex { n, pairings, slots })
        } else {
            Err(TriError::Invalid(violations))
        }
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        match self.complex() {
            Ok(_) => Ok(()),
            Err(TriError::Invalid(v)) => Err(v),
            Err(_) => unreachable!("construction only reports violations"),
        }
    }

    /// `V − E + F − T` after identifying cells through the gluings.
    pub fn euler_characteristic(&self) -> Result<i64, TriError> {
        let c = self.complex()?;
        let n = c.n;
        let mut verts = UnionFind::new(4 * n);
        let mut edges = UnionFind::new(6 * n);
        for p in &c.pairings {
            let (ta, fa) = p.a;
            let tb = p.b.0;
            let fv = face_vertices(fa);
            for &v in &fv {
                verts.union(4 * ta + v, 4 * tb + p.perm[v]);
            }
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let (x, y) = (fv[i], fv[j]);
                edges.union(
                    6 * ta + edge_index(x, y),
                    6 * tb + edge_index(p.perm[x], p.perm[y]),
                );
            }
        }
        let v = verts.classes() as i64;
        let e = edges.classes() as i64;
        let f = (4 * n - c.pairings.len()) as i64;
        Ok(v - e + f - n as i64)
    }

    /// The sub-triangulation on each dual-graph component, renumbered.
    pub fn split_components(&self) -> Result<Vec<Triangulation>, TriError> {
        let c = self.complex()?;
        let comps = c.components();
        let mut index = vec![(0, 0); c.n];
        for (ci, comp) in comps.iter().enumerate() {
            for (k, &t) in comp.iter().enumerate() {
                index[t] = (ci, k);
            }
        }
        let mut out: Vec<Triangulation> =
            comps.iter().map(|c| Triangulation::new(c.len())).collect();
        for p in &c.pairings {
            let (ci, ka) = index[p.a.0];
            let (_, kb) = index[p.b.0];
            out[ci].glue(ka, p.a.1, kb, p.perm);
        }
        Ok(out)
    }

    /// Disjoint union, with `other`'s tetrahedra numbered after ours.
    pub fn disjoint_union(&self, other: &Triangulation) -> Triangulation {
        let off = self.n_tets;
        let mut out = self.clone();
        out.n_tets += other.n_tets;
        out.gluings.extend(other.gluings.iter().map(|g| Gluing {
            tet: g.tet + off,
            to_tet: g.to_tet + off,
            ..g.clone()
        }));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn two_tets_one_face(perm: Perm) -> Triangulation {
        let mut t = Triangulation::new(2);
        t.glue(0, 3, 1, perm);
        t
    }

    #[test]
    fn single_tet_is_valid_ball() {
        let t = Triangulation::new(1);
        let c = t.complex().unwrap();
        assert_eq!(c.boundary_faces().len(), 4);
        assert_eq!(t.euler_characteristic().unwrap(), 1);
    }

    #[test]
    fn violations_are_reported() {
        let mut t = Triangulation::new(2);
        t.glue(0, 3, 1, [0, 1, 2, 3]);
        t.glue(1, 3, 0, [1, 0, 2, 3]);
        assert_eq!(t.validate(), Err(vec![Violation::NotInvolutive(1)]));

        let mut t = Triangulation::new(3);
        t.glue(0, 3, 1, [0, 1, 2, 3]);
        t.glue(0, 3, 2, [0, 1, 2, 3]);
        assert_eq!(
            t.validate(),
            Err(vec![Violation::FacePairedTwice { tet: 0, face: 3 }])
        );

        let mut t = Triangulation::new(1);
        t.glue(0, 2, 0, [1, 0, 2, 3]);
        assert_eq!(t.validate(), Err(vec![Violation::SelfGlued(0)]));

        let t = Triangulation {
            n_tets: 1,
            gluings: vec![Gluing {
                tet: 0,
                face: 0,
                to_tet: 0,
                to_face: 1,
                vmap: [0, 0, 2],
            }],
        };
        assert_eq!(t.validate(), Err(vec![Violation::BadVertexMap(0)]));
        assert_eq!(
            Triangulation::new(0).validate(),
            Err(vec![Violation::NoTetrahedra])
        );
    }

    #[test]
    fn reverse_listing_is_accepted() {
        let mut t = two_tets_one_face([0, 1, 2, 3]);
        t.glue(1, 3, 0, [0, 1, 2, 3]);
        let c = t.complex().unwrap();
        assert_eq!(c.pairings().len(), 1);
    }

    #[test]
    fn euler_of_disjoint_union_adds() {
        let ball = two_tets_one_face([1, 0, 2, 3]);
        let one = Triangulation::new(1);
        let both = ball.disjoint_union(&one);
        assert_eq!(
            both.euler_characteristic().unwrap(),
            ball.euler_characteristic().unwrap() + one.euler_characteristic().unwrap()
        );
        assert_eq!(both.split_components().unwrap().len(), 2);
    }

    #[test]
    fn json_roundtrip() {
        let t = two_tets_one_face([1, 0, 2, 3]);
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.starts_with("{\"tets\":2,"));
        let back: Triangulation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn perm_parity() {
        assert!(!is_odd(&[0, 1, 2, 3]));
        assert!(is_odd(&[1, 0, 2, 3]));
        assert!(!is_odd(&[1, 2, 0, 3]));
        assert_eq!(invert_perm(&[1, 2, 0, 3]), [2, 0, 1, 3]);
    }
}
