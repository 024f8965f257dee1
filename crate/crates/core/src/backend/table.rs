use std::collections::VecDeque;

use thiserror::Error;

use super::{BackendError, ConjugacyVerdict, GroupBackend};
use crate::word::{Alphabet, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("multiplication table is empty or not square")]
    NotSquare,
    #[error("table entry {0} out of range")]
    EntryOutOfRange(usize),
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("expected {expected} generator images, got {got}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("generators do not generate element {0}")]
    NotGenerated(usize),
}

/// A finite group given by its multiplication table.
///
/// Element `i·j` is `table[i][j]`; each generator is sent to an element.
/// Every element carries a shortest representative word, used for witnesses.
#[derive(Debug, Clone)]
pub struct FiniteTable {
    alphabet: Alphabet,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    gen_images: Vec<usize>,
    words: Vec<Word>,
    /// Conjugators allowed in conjugacy searches; `None` means all elements.
    conjugators: Option<Vec<usize>>,
}

impl FiniteTable {
    pub fn new(
        alphabet: Alphabet,
        table: Vec<Vec<usize>>,
        gen_images: Vec<usize>,
    ) -> Result<Self, TableError> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n) {
            return Err(TableError::NotSquare);
        }
        if let Some(&bad) = table.iter().flatten().find(|&&e| e >= n) {
            return Err(TableError::EntryOutOfRange(bad));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(TableError::NoIdentity)?;
        let mut inverses = Vec::with_capacity(n);
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| table[x][y] == identity)
                .ok_or(TableError::NoInverse(x))?;
            inverses.push(inv);
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(TableError::NotAssociative(x, y, z));
                    }
                }
            }
        }
        if gen_images.len() != alphabet.rank() {
            return Err(TableError::GeneratorCount {
                expected: alphabet.rank(),
                got: gen_images.len(),
            });
        }
        if let Some(&bad) = gen_images.iter().find(|&&g| g >= n) {
            return Err(TableError::EntryOutOfRange(bad));
        }
        // breadth-first search on the Cayley graph for shortlex-shortest words
        let mut words: Vec<Option<Word>> = vec![None; n];
        words[identity] = Some(Word::empty());
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            let wx = words[x].clone().expect("queued elements have words");
            for r in 0..2 * alphabet.rank() {
                let l = Letter::from_rank(r);
                let g = gen_images[l.gen];
                let step = if l.inverse { inverses[g] } else { g };
                let y = table[x][step];
                if words[y].is_none() {
                    let mut wy = wx.clone().into_letters();
                    wy.push(l);
                    words[y] = Some(Word::from_letters(wy));
                    queue.push_back(y);
                }
            }
        }
        let words = words
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or(TableError::NotGenerated(i)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteTable {
            alphabet,
            table,
            identity,
            inverses,
            gen_images,
            words,
            conjugators: None,
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn multiply(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn inverse_of(&self, x: usize) -> usize {
        self.inverses[x]
    }

    pub fn word_of(&self, x: usize) -> &Word {
        &self.words[x]
    }

    pub fn evaluate(&self, w: &Word) -> Result<usize, BackendError> {
        self.check_word(w)?;
        Ok(w.letters().iter().fold(self.identity, |acc, l| {
            let g = self.gen_images[l.gen];
            let step = if l.inverse { self.inverses[g] } else { g };
            self.table[acc][step]
        }))
    }

    /// The same group, with conjugacy searched only over elements whose
    /// representative word satisfies `keep`. Used to model conjugacy inside
    /// a subgroup; `keep` must cut out a subgroup.
    pub fn restrict_conjugators(&self, keep: impl Fn(&Word) -> bool) -> FiniteTable {
        let allowed = (0..self.order())
            .filter(|&x| keep(&self.words[x]))
            .collect();
        FiniteTable {
            conjugators: Some(allowed),
            ..self.clone()
        }
    }

    pub fn conjugate_elements(&self, x: usize, y: usize) -> Option<usize> {
        let candidates: Box<dyn Iterator<Item = usize>> = match &self.conjugators {
            Some(list) => Box::new(list.iter().copied()),
            None => Box::new(0..self.order()),
        };
        candidates
            .into_iter()
            .find(|&g| self.table[self.table[g][x]][self.inverses[g]] == y)
    }
}

impl GroupBackend for FiniteTable {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn is_identity(&self, w: &Word) -> Result<bool, BackendError> {
        Ok(self.evaluate(w)? == self.identity)
    }

    fn conjugate(&self, u: &Word, v: &Word) -> Result<ConjugacyVerdict, BackendError> {
        let x = self.evaluate(u)?;
        let y = self.evaluate(v)?;
        Ok(match self.conjugate_elements(x, y) {
            Some(g) => ConjugacyVerdict::Conjugate(self.words[g].clone()),
            None => ConjugacyVerdict::NotConjugate,
        })
    }

    fn subgroup_membership(&self, gens: &[Word], g: &Word) -> Result<bool, BackendError> {
        let target = self.evaluate(g)?;
        let gens = gens
            .iter()
            .map(|w| self.evaluate(w))
            .collect::<Result<Vec<_>, _>>()?;
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &s in &gens {
                for step in [s, self.inverses[s]] {
                    let y = self.table[x][step];
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        Ok(seen[target])
    }
}

/// Dihedral group of order `2n` on generators `r` (rotation) and `s`
/// (reflection); element `k` is `r^k`, element `n + k` is `r^k s`.
pub fn dihedral(n: usize) -> FiniteTable {
    let order = 2 * n;
    let mut table = vec![vec![0; order]; order];
    for x in 0..order {
        for y in 0..order {
            let (a, fa) = (x % n, x >= n);
            let (b, fb) = (y % n, y >= n);
            // r^a s^fa · r^b s^fb = r^(a ± b) s^(fa xor fb)
            let rot = if fa { (a + n - b) % n } else { (a + b) % n };
            table[x][y] = rot + if fa ^ fb { n } else { 0 };
        }
    }
    let alphabet = Alphabet::new(&["r", "s"]).expect("valid names");
    FiniteTable::new(alphabet, table, vec![1 % n, n]).expect("dihedral table is a group")
}
