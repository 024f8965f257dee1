//! Solver interfaces for the word, conjugacy, centralizer and membership
//! problems, plus concrete backends small enough to run at a desk.
//!
//! Every backend works on [`Word`]s over its own [`Alphabet`]. Backends that
//! model a subgroup `H ≤ G` (see [`AbelianSubgroup`] and
//! [`crate::index2::KernelBackend`]) accept words over the alphabet of `G`
//! and answer questions about the elements those words represent in `H`.
//!
//! Conjugacy witnesses follow one convention throughout the crate:
//! `Conjugate(h)` for the pair `(u, v)` means `h·u·h⁻¹ = v`.

mod abelian;
mod fold;
mod free;
mod rewriting;
mod table;

use std::sync::Arc;

use thiserror::Error;

use crate::word::{Alphabet, Word};

pub use abelian::{AbelianSubgroup, DelegatingBackend, FreeAbelian};
pub use fold::{free_subgroup_membership, FoldedSubgroup};
pub use free::FreeGroup;
pub use rewriting::{kb_complete, KbExhausted, RewritingBackend, RewritingSystem, Rule};
pub use table::{dihedral, FiniteTable, TableError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackendError {
    #[error("generator index {gen} outside alphabet of rank {rank}")]
    UnsupportedWord { gen: usize, rank: usize },
    #[error("backend does not support {0}")]
    Unsupported(&'static str),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConjugacyVerdict {
    NotConjugate,
    /// `h` with `h·u·h⁻¹ = v`.
    Conjugate(Word),
    /// A budget-limited search ran out before deciding.
    Exhausted(usize),
}

impl ConjugacyVerdict {
    pub fn is_conjugate(&self) -> bool {
        matches!(self, ConjugacyVerdict::Conjugate(_))
    }

    pub fn witness(&self) -> Option<&Word> {
        match self {
            ConjugacyVerdict::Conjugate(h) => Some(h),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CentralizerClass {
    /// `Z(v) = ⟨root⟩`, infinite cyclic.
    Cyclic(Word),
    /// `Z(v) ≅ Z⊕Z` with the given basis.
    RankTwoAbelian(Word, Word),
    /// Centralizer lies in a subgroup handled by some other solver.
    Delegated(String),
}

pub trait GroupBackend: Send + Sync {
    fn alphabet(&self) -> &Alphabet;

    fn is_identity(&self, w: &Word) -> Result<bool, BackendError>;

    fn conjugate(&self, u: &Word, v: &Word) -> Result<ConjugacyVerdict, BackendError>;

    fn centralizer(&self, _v: &Word) -> Result<CentralizerClass, BackendError> {
        Err(BackendError::Unsupported("centralizer classification"))
    }

    fn subgroup_membership(&self, _gens: &[Word], _g: &Word) -> Result<bool, BackendError> {
        Err(BackendError::Unsupported("subgroup membership"))
    }

    fn rank(&self) -> usize {
        self.alphabet().rank()
    }

    fn check_word(&self, w: &Word) -> Result<(), BackendError> {
        let rank = self.rank();
        match w.max_gen() {
            Some(gen) if gen >= rank => Err(BackendError::UnsupportedWord { gen, rank }),
            _ => Ok(()),
        }
    }

    fn equal(&self, u: &Word, v: &Word) -> Result<bool, BackendError> {
        self.is_identity(&u.concat(&v.inverse()))
    }

    fn commute(&self, u: &Word, v: &Word) -> Result<bool, BackendError> {
        self.equal(&u.concat(v), &v.concat(u))
    }

    /// Checks `h·u·h⁻¹ = v`.
    fn verify_witness(&self, u: &Word, v: &Word, h: &Word) -> Result<bool, BackendError> {
        self.equal(&h.concat(u).concat(&h.inverse()), v)
    }
}

impl<B: GroupBackend + ?Sized> GroupBackend for Arc<B> {
    fn alphabet(&self) -> &Alphabet {
        (**self).alphabet()
    }
    fn is_identity(&self, w: &Word) -> Result<bool, BackendError> {
        (**self).is_identity(w)
    }
    fn conjugate(&self, u: &Word, v: &Word) -> Result<ConjugacyVerdict, BackendError> {
        (**self).conjugate(u, v)
    }
    fn centralizer(&self, v: &Word) -> Result<CentralizerClass, BackendError> {
        (**self).centralizer(v)
    }
    fn subgroup_membership(&self, gens: &[Word], g: &Word) -> Result<bool, BackendError> {
        (**self).subgroup_membership(gens, g)
    }
}

impl<B: GroupBackend + ?Sized> GroupBackend for Box<B> {
    fn alphabet(&self) -> &Alphabet {
        (**self).alphabet()
    }
    fn is_identity(&self, w: &Word) -> Result<bool, BackendError> {
        (**self).is_identity(w)
    }
    fn conjugate(&self, u: &Word, v: &Word) -> Result<ConjugacyVerdict, BackendError> {
        (**self).conjugate(u, v)
    }
    fn centralizer(&self, v: &Word) -> Result<CentralizerClass, BackendError> {
        (**self).centralizer(v)
    }
    fn subgroup_membership(&self, gens: &[Word], g: &Word) -> Result<bool, BackendError> {
        (**self).subgroup_membership(gens, g)
    }
}

/// Decides whether `g` lies in a fixed subgroup.
pub trait SubgroupMembership: Send + Sync {
    fn contains(&self, g: &Word) -> Result<bool, BackendError>;
}

/// Membership in `⟨gens⟩` answered by a backend's membership capability.
pub struct BackendMembership<B> {
    pub backend: B,
    pub gens: Vec<Word>,
}

impl<B: GroupBackend> SubgroupMembership for BackendMembership<B> {
    fn contains(&self, g: &Word) -> Result<bool, BackendError> {
        self.backend.subgroup_membership(&self.gens, g)
    }
}
