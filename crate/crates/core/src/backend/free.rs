use super::{BackendError, CentralizerClass, ConjugacyVerdict, FoldedSubgroup, GroupBackend};
use crate::word::{Alphabet, Word};

/// The free group on an alphabet.
#[derive(Debug, Clone)]
pub struct FreeGroup {
    alphabet: Alphabet,
}

impl FreeGroup {
    pub fn new(alphabet: Alphabet) -> Self {
        FreeGroup { alphabet }
    }

    pub fn of_rank(rank: usize) -> Self {
        FreeGroup::new(Alphabet::numbered("x", rank))
    }
}

/// Shortest period of a cyclically reduced word: `w = root^k` with `root` primitive.
pub(crate) fn primitive_root(w: &Word) -> Word {
    let letters = w.letters();
    let n = letters.len();
    for p in 1..=n {
        if n % p == 0 && (p..n).all(|i| letters[i] == letters[i - p]) {
            return w.prefix(p);
        }
    }
    w.clone()
}

impl GroupBackend for FreeGroup {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn is_identity(&self, w: &Word) -> Result<bool, BackendError> {
        self.check_word(w)?;
        Ok(w.free_reduce().is_empty())
    }

    fn conjugate(&self, u: &Word, v: &Word) -> Result<ConjugacyVerdict, BackendError> {
        self.check_word(u)?;
        self.check_word(v)?;
        let cu = u.cyclic_reduce();
        let cv = v.cyclic_reduce();
        let n = cu.core.len();
        if n != cv.core.len() {
            return Ok(ConjugacyVerdict::NotConjugate);
        }
        // rotate(k) = P⁻¹·U·P = S·U·S⁻¹ with P = U[..k], S = U[k..]
        let rotation = (0..n.max(1)).find(|&k| n == 0 || cu.core.rotate(k) == cv.core);
        let Some(k) = rotation else {
            return Ok(ConjugacyVerdict::NotConjugate);
        };
        let inner = if n == 0 {
            Word::empty()
        } else if n - k <= k {
            cu.core.suffix(k)
        } else {
            cu.core.prefix(k).inverse()
        };
        let h = cv
            .conjugator
            .concat(&inner)
            .concat(&cu.conjugator.inverse())
            .free_reduce();
        Ok(ConjugacyVerdict::Conjugate(h))
    }

    fn centralizer(&self, v: &Word) -> Result<CentralizerClass, BackendError> {
        self.check_word(v)?;
        let c = v.cyclic_reduce();
        if c.core.is_empty() {
            return Err(BackendError::PreconditionViolated(
                "centralizer of the identity".into(),
            ));
        }
        let root = primitive_root(&c.core);
        Ok(CentralizerClass::Cyclic(c.conjugator.conjugate(&root)))
    }

    fn subgroup_membership(&self, gens: &[Word], g: &Word) -> Result<bool, BackendError> {
        self.check_word(g)?;
        for w in gens {
            self.check_word(w)?;
        }
        Ok(FoldedSubgroup::new(gens).contains_word(g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FreeGroup {
        FreeGroup::new(Alphabet::new(&["x", "y"]).unwrap())
    }

    fn w(s: &str) -> Word {
        f2().alphabet().parse(s).unwrap()
    }

    #[test]
    fn word_problem() {
        let g = f2();
        assert!(g.is_identity(&w("x x^-1")).unwrap());
        assert!(!g.is_identity(&w("x y x^-1 y^-1")).unwrap());
        assert!(g.is_identity(&Word::empty()).unwrap());
        assert!(matches!(
            g.is_identity(&Word::gen(2)),
            Err(BackendError::UnsupportedWord { gen: 2, rank: 2 })
        ));
    }

    #[test]
    fn conjugacy_examples() {
        let g = f2();
        // x·(yx)·x⁻¹ = xy
        let verdict = g.conjugate(&w("y x"), &w("x y")).unwrap();
        assert_eq!(verdict, ConjugacyVerdict::Conjugate(w("x")));
        assert_eq!(
            g.conjugate(&w("x"), &w("y")).unwrap(),
            ConjugacyVerdict::NotConjugate
        );
        let u = w("x y^2 x^-1 y");
        assert_eq!(
            g.conjugate(&u, &u).unwrap(),
            ConjugacyVerdict::Conjugate(Word::empty())
        );
        assert_eq!(
            g.conjugate(&Word::empty(), &Word::empty()).unwrap(),
            ConjugacyVerdict::Conjugate(Word::empty())
        );
    }

    #[test]
    fn conjugacy_witness_through_peeled_conjugators() {
        let g = f2();
        let u = w("y x^2 y x^-1 y^-1");
        let v = w("x^-1 y x^2");
        let h = g.conjugate(&u, &v).unwrap().witness().cloned().unwrap();
        assert!(g.verify_witness(&u, &v, &h).unwrap());
    }

    #[test]
    fn centralizer_roots() {
        let g = f2();
        assert_eq!(
            g.centralizer(&w("x y")).unwrap(),
            CentralizerClass::Cyclic(w("x y"))
        );
        assert_eq!(
            g.centralizer(&w("y x y x y x")).unwrap(),
            CentralizerClass::Cyclic(w("y x"))
        );
        assert_eq!(
            g.centralizer(&w("y x^2 y^-1")).unwrap(),
            CentralizerClass::Cyclic(w("y x y^-1"))
        );
        assert!(g.centralizer(&w("x x^-1")).is_err());
    }
}
