use std::collections::VecDeque;

use super::{Complex, Pairing, TriError, Triangulation};
use crate::index2::Sign;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Orientability {
    /// A sign per tetrahedron, consistent across every gluing.
    Orientable(Vec<Sign>),
    /// Pairing indices forming a closed dual loop whose signs multiply to −1.
    NonOrientable(Vec<usize>),
}

impl Orientability {
    pub fn is_orientable(&self) -> bool {
        matches!(self, Orientability::Orientable(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverData {
    pub cover: Triangulation,
    /// Base tetrahedron under each cover tetrahedron.
    pub projection: Vec<usize>,
    /// The sheet-swapping involution.
    pub deck: Vec<usize>,
}

/// Propagates orientations outward from `root`. Returns per-tetrahedron
/// signs for the component, the tree pairing used to reach each
/// tetrahedron, and the first pairing found inconsistent.
fn propagate(c: &Complex, root: usize) -> (Vec<Option<Sign>>, Vec<Option<usize>>, Option<usize>) {
    let n = c.n_tets();
    let mut orient: Vec<Option<Sign>> = vec![None; n];
    let mut via: Vec<Option<usize>> = vec![None; n];
    orient[root] = Some(Sign::Plus);
    let mut queue = VecDeque::from([root]);
    while let Some(t) = queue.pop_front() {
        let o = orient[t].expect("queued");
        for f in 0..4 {
            let Some(x) = c.across(t, f) else { continue };
            let want = o * c.pairings()[x.pairing].sign();
            match orient[x.tet] {
                None => {
                    orient[x.tet] = Some(want);
                    via[x.tet] = Some(x.pairing);
                    queue.push_back(x.tet);
                }
                Some(have) if have != want => return (orient, via, Some(x.pairing)),
                Some(_) => {}
            }
        }
    }
    (orient, via, None)
}

fn other_end(p: &Pairing, t: usize) -> usize {
    if p.a.0 == t {
        p.b.0
    } else {
        p.a.0
    }
}

fn path_to_root(c: &Complex, via: &[Option<usize>], mut t: usize) -> Vec<usize> {
    let mut path = Vec::new();
    while let Some(k) = via[t] {
        path.push(k);
        t = other_end(&c.pairings()[k], t);
    }
    path
}

impl Triangulation {
    pub fn orientability(&self) -> Result<Orientability, TriError> {
        let c = self.complex()?;
        if !c.is_connected() {
            return Err(TriError::Disconnected);
        }
        let (orient, via, bad) = propagate(&c, 0);
        Ok(match bad {
            None => Orientability::Orientable(
                orient.into_iter().map(|o| o.expect("connected")).collect(),
            ),
            Some(k) => {
                let p = c.pairings()[k];
                // root → a, across k, b → root
                let mut cycle: Vec<usize> = path_to_root(&c, &via, p.a.0);
                cycle.reverse();
                cycle.push(k);
                cycle.extend(path_to_root(&c, &via, p.b.0));
                Orientability::NonOrientable(cycle)
            }
        })
    }

    /// True when every component is orientable.
    pub fn is_orientable(&self) -> Result<bool, TriError> {
        let c = self.complex()?;
        Ok(c.components()
            .iter()
            .all(|comp| propagate(&c, comp[0]).2.is_none()))
    }

    /// Two sheets of tetrahedra: `i` and `i + n` over base tetrahedron `i`.
    /// Orientation-compatible gluings stay within a sheet; the others swap.
    pub fn orientation_double_cover(&self) -> Result<CoverData, TriError> {
        let c = self.complex()?;
        let n = c.n_tets();
        let mut cover = Triangulation::new(2 * n);
        for p in c.pairings() {
            let (a, fa) = p.a;
            let b = p.b.0;
            let cross = if p.sign() == Sign::Plus { 0 } else { n };
            cover.glue(a, fa, b + cross, p.perm);
            cover.glue(a + n, fa, (b + cross + n) % (2 * n), p.perm);
        }
        Ok(CoverData {
            cover,
            projection: (0..2 * n).map(|k| k % n).collect(),
            deck: (0..2 * n).map(|k| (k + n) % (2 * n)).collect(),
        })
    }
}
