//! Stallings folding for finitely generated subgroups of free groups.

use std::collections::BTreeMap;

use super::{BackendError, SubgroupMembership};
use crate::word::{Letter, Word};

/// The folded core graph of `⟨gens⟩`, rooted at vertex 0.
///
/// Edges are stored in both directions: an `x`-edge `p → q` appears as
/// `(x, forward)` at `p` and `(x, backward)` at `q`. After folding, every
/// vertex has at most one outgoing edge per key.
#[derive(Debug, Clone)]
pub struct FoldedSubgroup {
    parent: Vec<usize>,
    out: Vec<BTreeMap<Letter, usize>>,
}

impl FoldedSubgroup {
    pub fn new(gens: &[Word]) -> Self {
        let mut g = FoldedSubgroup {
            parent: vec![0],
            out: vec![BTreeMap::new()],
        };
        let mut pending = Vec::new();
        for w in gens {
            let w = w.free_reduce();
            if w.is_empty() {
                continue;
            }
            let letters = w.letters();
            let mut at = 0;
            for (i, &l) in letters.iter().enumerate() {
                let next = if i + 1 == letters.len() {
                    0
                } else {
                    g.new_vertex()
                };
                pending.push((at, l, next));
                at = next;
            }
        }
        g.fold(pending);
        g
    }

    fn new_vertex(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.out.push(BTreeMap::new());
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Identifies two vertices; returns the edges of the absorbed one for
    /// re-insertion at the survivor.
    fn merge(&mut self, a: usize, b: usize) -> Vec<(usize, Letter, usize)> {
        let (keep, gone) = if a < b { (a, b) } else { (b, a) };
        self.parent[gone] = keep;
        let edges = std::mem::take(&mut self.out[gone]);
        edges.into_iter().map(|(l, t)| (keep, l, t)).collect()
    }

    fn fold(&mut self, mut pending: Vec<(usize, Letter, usize)>) {
        while let Some((p, l, q)) = pending.pop() {
            let p = self.find(p);
            let q = self.find(q);
            if let Some(t) = self.out[p].get(&l).copied() {
                let t = self.find(t);
                if t != q {
                    pending.extend(self.merge(t, q));
                    pending.push((p, l, q));
                    continue;
                }
            }
            if let Some(s) = self.out[q].get(&l.inv()).copied() {
                let s = self.find(s);
                if s != p {
                    pending.extend(self.merge(s, p));
                    pending.push((p, l, q));
                    continue;
                }
            }
            self.out[p].insert(l, q);
            self.out[q].insert(l.inv(), p);
        }
    }

    /// Number of vertices in the folded graph.
    pub fn vertex_count(&mut self) -> usize {
        (0..self.parent.len())
            .filter(|&v| self.find(v) == v)
            .count()
    }

    pub fn contains_word(&self, g: &Word) -> bool {
        let mut at = 0;
        let root = |parent: &[usize], mut x: usize| {
            while parent[x] != x {
                x = parent[x];
            }
            x
        };
        for &l in g.free_reduce().letters() {
            match self.out[at].get(&l) {
                Some(&t) => at = root(&self.parent, t),
                None => return false,
            }
        }
        at == 0
    }
}

impl SubgroupMembership for FoldedSubgroup {
    fn contains(&self, g: &Word) -> Result<bool, BackendError> {
        Ok(self.contains_word(g))
    }
}

/// `g ∈ ⟨generators⟩` in the free group, by folding.
pub fn free_subgroup_membership(generators: &[Word], g: &Word) -> bool {
    FoldedSubgroup::new(generators).contains_word(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{Alphabet, ShortlexWords};
    use std::collections::HashSet;

    fn w(s: &str) -> Word {
        Alphabet::new(&["x", "y"]).unwrap().parse(s).unwrap()
    }

    #[test]
    fn membership_examples() {
        let gens = [w("x^2"), w("y")];
        assert!(free_subgroup_membership(&gens, &w("x^2")));
        assert!(!free_subgroup_membership(&gens, &w("x")));
        assert!(free_subgroup_membership(&gens, &Word::empty()));
        assert!(free_subgroup_membership(&[], &Word::empty()));
        assert!(!free_subgroup_membership(&[], &w("x")));
    }

    #[test]
    fn folding_collapses_to_core() {
        // ⟨x, x y x^-1, x^2⟩ folds down to the rose on x and y
        let mut g = FoldedSubgroup::new(&[w("x"), w("x y x^-1"), w("x^2")]);
        assert_eq!(g.vertex_count(), 1);
        assert!(g.contains_word(&w("y")));
    }

    /// Freely reduced products of at most `depth` generator letters.
    fn brute_force_elements(gens: &[Word], depth: usize) -> HashSet<Word> {
        let mut letters: Vec<Word> = gens.to_vec();
        letters.extend(gens.iter().map(|g| g.inverse()));
        let mut frontier = vec![Word::empty()];
        let mut all: HashSet<Word> = frontier.iter().cloned().collect();
        for _ in 0..depth {
            let mut next = Vec::new();
            for f in &frontier {
                for l in &letters {
                    let p = f.concat(l).free_reduce();
                    if all.insert(p.clone()) {
                        next.push(p);
                    }
                }
            }
            frontier = next;
        }
        all
    }

    #[test]
    fn folding_matches_enumeration_up_to_length_eight() {
        let subgroups = [
            vec![w("x^2"), w("y")],
            vec![w("x y x^-1"), w("y^2")],
            vec![w("x y"), w("y x")],
            vec![w("x^3"), w("x y x^-1 y^-1")],
        ];
        for gens in &subgroups {
            let folded = FoldedSubgroup::new(gens);
            let products = brute_force_elements(gens, 8);
            for g in ShortlexWords::new(2).take_while(|g| g.len() <= 6) {
                let by_enum = products.contains(&g);
                assert_eq!(folded.contains_word(&g), by_enum, "{gens:?} {g:?}");
            }
            for g in products.iter().filter(|g| g.len() <= 8) {
                assert!(folded.contains_word(g));
            }
        }
    }
}
