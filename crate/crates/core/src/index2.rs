//! Decision procedures in a group `G` relative to the index-2 subgroup
//! `H = ker χ` of an orientation character `χ: G → Z₂`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use thiserror::Error;

use crate::backend::{BackendError, CentralizerClass, ConjugacyVerdict, GroupBackend};
use crate::word::{Alphabet, Presentation, ShortlexWords, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Index2Error {
    #[error("generator index {0} has no sign")]
    UnknownGenerator(usize),
    #[error("character lists {got} signs for {expected} generators")]
    SignCount { expected: usize, got: usize },
    #[error("no sign given for generator `{0}`")]
    MissingSign(String),
    #[error("sign for unknown generator `{0}`")]
    UnknownName(String),
    #[error("sign value {0} is not 1 or -1")]
    BadSign(i64),
    #[error("relator {0} has an odd number of reversing letters")]
    OddRelator(usize),
    #[error("coset representative has the wrong sign")]
    BadRepresentative,
    #[error("character is trivial, so it has no reversing coset")]
    TrivialCharacter,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Backend(#[from] BackendError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_int(s: i64) -> Result<Sign, Index2Error> {
        match s {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Index2Error::BadSign(other)),
        }
    }

    pub fn as_int(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// A homomorphism `G → {±1}` given by generator signs, checked against the
/// relators of a presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientationCharacter {
    signs: Vec<Sign>,
}

impl OrientationCharacter {
    pub fn new(p: &Presentation, signs: Vec<Sign>) -> Result<Self, Index2Error> {
        if signs.len() != p.rank() {
            return Err(Index2Error::SignCount {
                expected: p.rank(),
                got: signs.len(),
            });
        }
        let chi = OrientationCharacter { signs };
        for (i, r) in p.relators.iter().enumerate() {
            if chi.sign_of(r)? == Sign::Minus {
                return Err(Index2Error::OddRelator(i));
            }
        }
        Ok(chi)
    }

    /// Builds from a `name → ±1` map that must cover every generator.
    pub fn from_map(p: &Presentation, map: &BTreeMap<String, i64>) -> Result<Self, Index2Error> {
        if let Some(bad) = map.keys().find(|k| p.alphabet.index_of(k).is_none()) {
            return Err(Index2Error::UnknownName(bad.clone()));
        }
        let signs = p
            .alphabet
            .names()
            .map(|name| {
                let s = map
                    .get(name)
                    .ok_or_else(|| Index2Error::MissingSign(name.to_string()))?;
                Sign::from_int(*s)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(p, signs)
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn sign_of(&self, w: &Word) -> Result<Sign, Index2Error> {
        w.letters().iter().try_fold(Sign::Plus, |acc, l| {
            self.signs
                .get(l.gen)
                .map(|&s| acc * s)
                .ok_or(Index2Error::UnknownGenerator(l.gen))
        })
    }

    pub fn member_h(&self, w: &Word) -> Result<bool, Index2Error> {
        Ok(self.sign_of(w)? == Sign::Plus)
    }

    pub fn is_trivial(&self) -> bool {
        self.signs.iter().all(|&s| s == Sign::Plus)
    }

    pub fn first_reversing(&self) -> Option<usize> {
        self.signs.iter().position(|&s| s == Sign::Minus)
    }

    pub fn display(&self, alphabet: &Alphabet) -> BTreeMap<String, i64> {
        alphabet
            .names()
            .zip(&self.signs)
            .map(|(n, s)| (n.to_string(), s.as_int()))
            .collect()
    }
}

/// Coset representatives `a₀ = 1`, `a₁` for `H` in `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetReps {
    a1: Word,
}

impl CosetReps {
    pub fn new(chi: &OrientationCharacter, a1: Word) -> Result<Self, Index2Error> {
        if chi.sign_of(&a1)? != Sign::Minus {
            return Err(Index2Error::BadRepresentative);
        }
        Ok(CosetReps { a1 })
    }

    /// Uses the first reversing generator as `a₁`.
    pub fn from_character(chi: &OrientationCharacter) -> Result<Self, Index2Error> {
        let g = chi.first_reversing().ok_or(Index2Error::TrivialCharacter)?;
        Ok(CosetReps { a1: Word::gen(g) })
    }

    pub(crate) fn unchecked(a1: Word) -> Self {
        CosetReps { a1 }
    }

    pub fn a0(&self) -> Word {
        Word::empty()
    }

    pub fn a1(&self) -> &Word {
        &self.a1
    }

    pub fn reps(&self) -> [Word; 2] {
        [Word::empty(), self.a1.clone()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosetSearch {
    /// `g ∈ a_i·H` for the reported `i`.
    Coset(usize),
    Exhausted(usize),
}

/// Finds the coset of `g` by enumerating `h ∈ H = ⟨h_gens⟩` in shortlex
/// order over `h_gens` and testing `g = a_i·h` for `i = 0, 1`.
/// At most `budget` elements of `H` are tried.
pub fn gwp_enumerative(
    gb: &dyn GroupBackend,
    h_gens: &[Word],
    reps: &CosetReps,
    g: &Word,
    budget: usize,
) -> Result<CosetSearch, BackendError> {
    let candidates = reps.reps().map(|a| a.inverse().concat(g));
    for h in ShortlexWords::new(h_gens.len()).take(budget) {
        let h = h.substitute(h_gens);
        for (i, c) in candidates.iter().enumerate() {
            if gb.equal(c, &h)? {
                return Ok(CosetSearch::Coset(i));
            }
        }
    }
    Ok(CosetSearch::Exhausted(budget))
}

/// Conjugacy in `G` for `u, v ∈ H` from a conjugacy solver for `H`:
/// `u ∼_G v` iff `u ∼_H a_i·v·a_i⁻¹` for some `i`.
pub fn conj_in_g_given_cp_h(
    hb: &dyn GroupBackend,
    chi: &OrientationCharacter,
    reps: &CosetReps,
    u: &Word,
    v: &Word,
) -> Result<ConjugacyVerdict, Index2Error> {
    if !chi.member_h(u)? || !chi.member_h(v)? {
        return Err(Index2Error::PreconditionViolated(
            "both words must lie in H".into(),
        ));
    }
    let mut exhausted = None;
    for a in reps.reps() {
        let target = a.inverse().concat(v).concat(&a).free_reduce();
        match hb.conjugate(u, &target)? {
            // z·u·z⁻¹ = a⁻¹·v·a, so (a·z)·u·(a·z)⁻¹ = v
            ConjugacyVerdict::Conjugate(z) => {
                return Ok(ConjugacyVerdict::Conjugate(a.concat(&z).free_reduce()))
            }
            ConjugacyVerdict::Exhausted(b) => exhausted = Some(b),
            ConjugacyVerdict::NotConjugate => {}
        }
    }
    Ok(match exhausted {
        Some(b) => ConjugacyVerdict::Exhausted(b),
        None => ConjugacyVerdict::NotConjugate,
    })
}

/// Given `k·u²·k⁻¹ = v²` and `Z_G(v) = Z_G(v²)`, every conjugator from `u`
/// to `v` differs from `k` by an element of `Z_G(v)`, so `u ∼ v` iff
/// `k·u·k⁻¹ = v`.
pub fn decide_via_squares(
    gwp: &dyn GroupBackend,
    k: &Word,
    u: &Word,
    v: &Word,
) -> Result<ConjugacyVerdict, Index2Error> {
    let u2 = u.pow(2);
    let v2 = v.pow(2);
    if !gwp.verify_witness(&u2, &v2, k)? {
        return Err(Index2Error::PreconditionViolated(
            "k does not conjugate u² to v²".into(),
        ));
    }
    Ok(if gwp.verify_witness(u, v, k)? {
        ConjugacyVerdict::Conjugate(k.clone())
    } else {
        ConjugacyVerdict::NotConjugate
    })
}

/// Isomorphism type of `⟨v, t | v·t·v⁻¹ = t^ε, v² = t^p⟩` when `⟨t⟩` is
/// infinite cyclic of index 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtensionClass {
    /// `Z × Z₂`, with `v·t^{-p/2}` of order 2.
    ZxZ2,
    /// `Z₂ * Z₂`, generated by the involutions `v` and `v·t`.
    Z2freeZ2,
    /// `Z`, generated by `v·t^{-(p-1)/2}`.
    InfiniteCyclic,
    /// The relations force `t^{2p} = 1`, so `⟨t⟩` cannot be infinite.
    Inconsistent,
}

impl ExtensionClass {
    pub fn label(self) -> &'static str {
        match self {
            ExtensionClass::ZxZ2 => "ZxZ2",
            ExtensionClass::Z2freeZ2 => "Z2freeZ2",
            ExtensionClass::InfiniteCyclic => "InfiniteCyclic",
            ExtensionClass::Inconsistent => "Inconsistent",
        }
    }
}

pub fn classify_extension(eps: Sign, p: i64) -> ExtensionClass {
    match (eps, p) {
        (Sign::Plus, p) if p % 2 == 0 => ExtensionClass::ZxZ2,
        (Sign::Plus, _) => ExtensionClass::InfiniteCyclic,
        (Sign::Minus, 0) => ExtensionClass::Z2freeZ2,
        // v commutes with v² = t^p, so t^p = v·t^p·v⁻¹ = t^{-p}
        (Sign::Minus, _) => ExtensionClass::Inconsistent,
    }
}

/// Conjugacy and centralizers inside `H = ker χ`, for words over the
/// alphabet of `G`, computed from a solver for `G`.
///
/// A conjugator `h₀ ∈ G` from `u` to `v` is corrected into `H` by a
/// reversing element of `Z_G(u)` when the centralizer is classified, and
/// by a bounded search over `H` otherwise.
pub struct KernelBackend<B> {
    ambient: B,
    chi: OrientationCharacter,
    search_budget: usize,
}

impl<B: GroupBackend> KernelBackend<B> {
    pub fn new(ambient: B, chi: OrientationCharacter, search_budget: usize) -> Self {
        KernelBackend {
            ambient,
            chi,
            search_budget,
        }
    }

    pub fn ambient(&self) -> &B {
        &self.ambient
    }

    pub fn character(&self) -> &OrientationCharacter {
        &self.chi
    }

    fn sign(&self, w: &Word) -> Result<Sign, BackendError> {
        self.chi
            .sign_of(w)
            .map_err(|e| BackendError::PreconditionViolated(e.to_string()))
    }

    fn require_h(&self, w: &Word) -> Result<(), BackendError> {
        if self.sign(w)? == Sign::Minus {
            return Err(BackendError::PreconditionViolated(
                "word is not in the kernel of the character".into(),
            ));
        }
        Ok(())
    }
}

impl<B: GroupBackend> GroupBackend for KernelBackend<B> {
    fn alphabet(&self) -> &Alphabet {
        self.ambient.alphabet()
    }

    fn is_identity(&self, w: &Word) -> Result<bool, BackendError> {
        self.ambient.is_identity(w)
    }

    fn conjugate(&self, u: &Word, v: &Word) -> Result<ConjugacyVerdict, BackendError> {
        self.require_h(u)?;
        self.require_h(v)?;
        let h0 = match self.ambient.conjugate(u, v)? {
            ConjugacyVerdict::Conjugate(h0) => h0,
            other => return Ok(other),
        };
        if self.sign(&h0)? == Sign::Plus {
            return Ok(ConjugacyVerdict::Conjugate(h0));
        }
        if self.ambient.is_identity(u)? {
            return Ok(ConjugacyVerdict::Conjugate(Word::empty()));
        }
        let fix = |c: &Word| ConjugacyVerdict::Conjugate(h0.concat(c).free_reduce());
        match self.ambient.centralizer(u) {
            Ok(CentralizerClass::Cyclic(r)) => {
                return Ok(if self.sign(&r)? == Sign::Minus {
                    fix(&r)
                } else {
                    ConjugacyVerdict::NotConjugate
                });
            }
            Ok(CentralizerClass::RankTwoAbelian(p, q)) => {
                for c in [p, q] {
                    if self.sign(&c)? == Sign::Minus {
                        return Ok(fix(&c));
                    }
                }
                return Ok(ConjugacyVerdict::NotConjugate);
            }
            Ok(CentralizerClass::Delegated(_))
            | Err(BackendError::Unsupported(_))
            | Err(BackendError::PreconditionViolated(_)) => {}
            Err(e) => return Err(e),
        }
        for g in ShortlexWords::new(self.rank()).take(self.search_budget) {
            if self.sign(&g)? == Sign::Plus && self.ambient.verify_witness(u, v, &g)? {
                return Ok(ConjugacyVerdict::Conjugate(g));
            }
        }
        Ok(ConjugacyVerdict::Exhausted(self.search_budget))
    }

    fn centralizer(&self, v: &Word) -> Result<CentralizerClass, BackendError> {
        self.require_h(v)?;
        Ok(match self.ambient.centralizer(v)? {
            CentralizerClass::Cyclic(r) => match self.sign(&r)? {
                Sign::Plus => CentralizerClass::Cyclic(r),
                Sign::Minus => CentralizerClass::Cyclic(r.pow(2)),
            },
            CentralizerClass::RankTwoAbelian(p, q) => match (self.sign(&p)?, self.sign(&q)?) {
                (Sign::Plus, Sign::Plus) => CentralizerClass::RankTwoAbelian(p, q),
                (Sign::Minus, Sign::Plus) => CentralizerClass::RankTwoAbelian(p.pow(2), q),
                (Sign::Plus, Sign::Minus) => CentralizerClass::RankTwoAbelian(p, q.pow(2)),
                (Sign::Minus, Sign::Minus) => {
                    CentralizerClass::RankTwoAbelian(p.concat(&q), p.pow(2))
                }
            },
            delegated => delegated,
        })
    }

    fn subgroup_membership(&self, gens: &[Word], g: &Word) -> Result<bool, BackendError> {
        self.ambient.subgroup_membership(gens, g)
    }
}
