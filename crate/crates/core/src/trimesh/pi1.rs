use std::collections::BTreeSet;

use super::{TriError, Triangulation};
use crate::index2::{OrientationCharacter, Sign};
use crate::word::{Alphabet, Letter, Presentation, Word};

/// Fundamental group read off the dual graph.
#[derive(Debug, Clone)]
pub struct Pi1 {
    pub presentation: Presentation,
    pub character: OrientationCharacter,
    /// Pairing index behind each generator.
    pub generator_pairings: Vec<usize>,
}

impl Triangulation {
    /// Generators are the pairings off a breadth-first spanning tree of the
    /// dual graph, named `g<k>` after pairing `k` and oriented from side `a`
    /// to side `b`. Each interior edge contributes the word read while
    /// circling it.
    pub fn pi1_presentation(&self) -> Result<Pi1, TriError> {
        let c = self.complex()?;
        let (orient, tree) = c.spanning_tree()?;
        let mut gen_of = vec![None; c.pairings().len()];
        let mut names = Vec::new();
        let mut generator_pairings = Vec::new();
        for (k, &in_tree) in tree.iter().enumerate() {
            if !in_tree {
                gen_of[k] = Some(names.len());
                names.push(format!("g{k}"));
                generator_pairings.push(k);
            }
        }
        let mut relators = Vec::new();
        let mut done: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
        for t0 in 0..c.n_tets() {
            for (p0, q0) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
                if done.contains(&(t0, p0, q0)) {
                    continue;
                }
                let exit0 = (0..4).find(|&v| v != p0 && v != q0).expect("four vertices");
                let (mut t, mut p, mut q, mut exit) = (t0, p0, q0, exit0);
                let mut letters = Vec::new();
                let mut visited = Vec::new();
                let mut interior = true;
                loop {
                    visited.push((t, p.min(q), p.max(q)));
                    let Some(x) = c.across(t, exit) else {
                        interior = false;
                        break;
                    };
                    if let Some(g) = gen_of[x.pairing] {
                        letters.push(if x.from_a {
                            Letter::pos(g)
                        } else {
                            Letter::neg(g)
                        });
                    }
                    let entered = x.perm[exit];
                    t = x.tet;
                    p = x.perm[p];
                    q = x.perm[q];
                    exit = (0..4)
                        .find(|&v| v != entered && v != p && v != q)
                        .expect("four vertices");
                    if (t, p.min(q), p.max(q), exit) == (t0, p0, q0, exit0) {
                        break;
                    }
                    if visited.len() > 6 * c.n_tets() {
                        return Err(TriError::EdgeWalk(format!(
                            "edge {{{p0}, {q0}}} of tetrahedron {t0} does not close up"
                        )));
                    }
                }
                if !interior {
                    // mark the whole boundary edge by walking the other way too
                    let (mut t, mut p, mut q) = (t0, p0, q0);
                    let mut exit = (0..4)
                        .find(|&v| v != p0 && v != q0 && v != exit0)
                        .expect("four vertices");
                    while let Some(x) = c.across(t, exit) {
                        let entered = x.perm[exit];
                        t = x.tet;
                        p = x.perm[p];
                        q = x.perm[q];
                        exit = (0..4)
                            .find(|&v| v != entered && v != p && v != q)
                            .expect("four vertices");
                        visited.push((t, p.min(q), p.max(q)));
                    }
                }
                done.extend(visited);
                if interior {
                    let w = Word::from_letters(letters).free_reduce();
                    if !w.is_empty() {
                        relators.push(w);
                    }
                }
            }
        }
        let signs = generator_pairings
            .iter()
            .map(|&k| {
                let pk = &c.pairings()[k];
                orient[pk.a.0] * pk.sign() * orient[pk.b.0]
            })
            .collect::<Vec<Sign>>();
        let alphabet = Alphabet::new(&names).expect("generated names are valid");
        let presentation = Presentation::new(alphabet, relators);
        let character = OrientationCharacter::new(&presentation, signs)?;
        Ok(Pi1 {
            presentation,
            character,
            generator_pairings,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{kb_complete, GroupBackend, RewritingBackend};

    #[test]
    fn ball_has_trivial_group() {
        let g = Triangulation::new(1).pi1_presentation().unwrap();
        assert_eq!(g.presentation.rank(), 0);
        assert!(g.presentation.relators.is_empty());
    }

    #[test]
    fn one_tet_self_gluings() {
        // faces 0 and 1 glued: a solid torus or solid Klein bottle, π₁ = Z
        for (perm, sign) in [([1, 0, 2, 3], Sign::Plus), ([1, 2, 0, 3], Sign::Minus)] {
            let mut t = Triangulation::new(1);
            t.glue(0, 0, 0, perm);
            let g = t.pi1_presentation().unwrap();
            assert_eq!(g.presentation.rank(), 1);
            assert_eq!(g.character.signs(), &[sign]);
        }
    }

    #[test]
    fn double_of_a_ball_is_simply_connected() {
        let t = Triangulation::new(1).double_along_whole_boundary().unwrap();
        let g = t.pi1_presentation().unwrap();
        assert_eq!(g.presentation.rank(), 3);
        let sys = kb_complete(&g.presentation, 200).unwrap();
        for i in 0..3 {
            assert!(sys.reduce(&Word::gen(i)).is_empty());
        }
        let rb = RewritingBackend::new(&g.presentation, 200, 10).unwrap();
        assert!(rb.is_identity(&Word::gen(0)).unwrap());
    }

    #[test]
    fn disconnected_is_an_error() {
        assert!(matches!(
            Triangulation::new(2).pi1_presentation(),
            Err(TriError::Disconnected)
        ));
    }
}
