use super::{BackendError, CentralizerClass, ConjugacyVerdict, GroupBackend};
use crate::word::{Alphabet, Word};

/// Free abelian group on an alphabet.
#[derive(Debug, Clone)]
pub struct FreeAbelian {
    alphabet: Alphabet,
}

impl FreeAbelian {
    pub fn new(alphabet: Alphabet) -> Self {
        FreeAbelian { alphabet }
    }
}

impl GroupBackend for FreeAbelian {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn is_identity(&self, w: &Word) -> Result<bool, BackendError> {
        self.check_word(w)?;
        Ok(w.exponent_sums(self.rank()).iter().all(|&e| e == 0))
    }

    fn conjugate(&self, u: &Word, v: &Word) -> Result<ConjugacyVerdict, BackendError> {
        self.check_word(u)?;
        self.check_word(v)?;
        Ok(if self.equal(u, v)? {
            ConjugacyVerdict::Conjugate(Word::empty())
        } else {
            ConjugacyVerdict::NotConjugate
        })
    }

    fn centralizer(&self, v: &Word) -> Result<CentralizerClass, BackendError> {
        self.check_word(v)?;
        if self.is_identity(v)? {
            return Err(BackendError::PreconditionViolated(
                "centralizer of the identity".into(),
            ));
        }
        Ok(match self.rank() {
            1 => CentralizerClass::Cyclic(Word::gen(0)),
            2 => CentralizerClass::RankTwoAbelian(Word::gen(0), Word::gen(1)),
            n => CentralizerClass::Delegated(format!("free abelian of rank {n}")),
        })
    }
}

/// An abelian subgroup of some ambient group, addressed by ambient words.
///
/// Conjugacy inside an abelian group is equality. When `basis` is set the
/// subgroup is `Z⊕Z` on that basis and every centralizer is the whole
/// subgroup.
pub struct AbelianSubgroup<B> {
    ambient: B,
    basis: Option<(Word, Word)>,
}

impl<B: GroupBackend> AbelianSubgroup<B> {
    pub fn new(ambient: B) -> Self {
        AbelianSubgroup {
            ambient,
            basis: None,
        }
    }

    pub fn with_basis(ambient: B, p: Word, q: Word) -> Self {
        AbelianSubgroup {
            ambient,
            basis: Some((p, q)),
        }
    }
}

impl<B: GroupBackend> GroupBackend for AbelianSubgroup<B> {
    fn alphabet(&self) -> &Alphabet {
        self.ambient.alphabet()
    }

    fn is_identity(&self, w: &Word) -> Result<bool, BackendError> {
        self.ambient.is_identity(w)
    }

    fn conjugate(&self, u: &Word, v: &Word) -> Result<ConjugacyVerdict, BackendError> {
        Ok(if self.ambient.equal(u, v)? {
            ConjugacyVerdict::Conjugate(Word::empty())
        } else {
            ConjugacyVerdict::NotConjugate
        })
    }

    fn centralizer(&self, v: &Word) -> Result<CentralizerClass, BackendError> {
        if self.ambient.is_identity(v)? {
            return Err(BackendError::PreconditionViolated(
                "centralizer of the identity".into(),
            ));
        }
        match &self.basis {
            Some((p, q)) => Ok(CentralizerClass::RankTwoAbelian(p.clone(), q.clone())),
            None => Err(BackendError::Unsupported("centralizer classification")),
        }
    }
}

/// Wraps a backend so that every centralizer is reported as
/// [`CentralizerClass::Delegated`] with a fixed tag.
pub struct DelegatingBackend<B> {
    inner: B,
    tag: String,
}

impl<B: GroupBackend> DelegatingBackend<B> {
    pub fn new(inner: B, tag: impl Into<String>) -> Self {
        DelegatingBackend {
            inner,
            tag: tag.into(),
        }
    }
}

impl<B: GroupBackend> GroupBackend for DelegatingBackend<B> {
    fn alphabet(&self) -> &Alphabet {
        self.inner.alphabet()
    }

    fn is_identity(&self, w: &Word) -> Result<bool, BackendError> {
        self.inner.is_identity(w)
    }

    fn conjugate(&self, u: &Word, v: &Word) -> Result<ConjugacyVerdict, BackendError> {
        self.inner.conjugate(u, v)
    }

    fn centralizer(&self, v: &Word) -> Result<CentralizerClass, BackendError> {
        self.check_word(v)?;
        Ok(CentralizerClass::Delegated(self.tag.clone()))
    }

    fn subgroup_membership(&self, gens: &[Word], g: &Word) -> Result<bool, BackendError> {
        self.inner.subgroup_membership(gens, g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::FreeGroup;

    fn xy() -> Alphabet {
        Alphabet::new(&["x", "y"]).unwrap()
    }

    #[test]
    fn free_abelian_word_problem_commutes() {
        let g = FreeAbelian::new(xy());
        let w = xy().parse("x y x^-1 y^-1").unwrap();
        assert!(g.is_identity(&w).unwrap());
        assert!(!g.is_identity(&xy().parse("x y").unwrap()).unwrap());
    }

    #[test]
    fn free_abelian_centralizer_rank_two() {
        let g = FreeAbelian::new(xy());
        assert_eq!(
            g.centralizer(&Word::gen(0)).unwrap(),
            CentralizerClass::RankTwoAbelian(Word::gen(0), Word::gen(1))
        );
        let z = FreeAbelian::new(Alphabet::new(&["z"]).unwrap());
        assert_eq!(
            z.centralizer(&Word::gen(0)).unwrap(),
            CentralizerClass::Cyclic(Word::gen(0))
        );
    }

    #[test]
    fn free_abelian_conjugacy_is_equality() {
        let g = FreeAbelian::new(xy());
        let u = xy().parse("x y").unwrap();
        let v = xy().parse("y x").unwrap();
        assert_eq!(
            g.conjugate(&u, &v).unwrap(),
            ConjugacyVerdict::Conjugate(Word::empty())
        );
        assert_eq!(
            g.conjugate(&u, &Word::gen(0)).unwrap(),
            ConjugacyVerdict::NotConjugate
        );
    }

    #[test]
    fn delegating_stub_tags_everything() {
        let g = DelegatingBackend::new(FreeGroup::new(xy()), "seifert");
        for s in ["x", "x y", "y^3 x^-1"] {
            let v = xy().parse(s).unwrap();
            assert_eq!(
                g.centralizer(&v).unwrap(),
                CentralizerClass::Delegated("seifert".into())
            );
        }
    }
}
