//! Free products of groups with their own solvers: syllable normal forms,
//! cyclic reduction, conjugacy, locating square roots in factors, and the
//! conjugacy routine for elements of order two.

use thiserror::Error;

use crate::backend::{BackendError, ConjugacyVerdict, GroupBackend};
use crate::word::{Alphabet, Letter, ShortlexWords, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeProductError {
    #[error("free product needs at least one factor")]
    NoFactors,
    #[error("generator `{0}` appears in more than one factor")]
    SharedGenerator(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A nontrivial element of one factor, as a word in that factor's alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syllable {
    pub factor: usize,
    pub element: Word,
}

/// Reduced alternating syllable sequence.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FpWord {
    pub syllables: Vec<Syllable>,
}

impl FpWord {
    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpCyclicReduction {
    pub core: FpWord,
    /// `w = conjugator · core · conjugator⁻¹`.
    pub conjugator: FpWord,
}

/// Where the square root of an element lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootLocation {
    Trivial,
    Factor(usize),
    NotInFactor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderClass {
    Trivial,
    OrderTwo,
    Other,
}

/// `A₀ * A₁ * ...` over the union of the factor alphabets, generators
/// numbered factor by factor.
pub struct FreeProduct {
    alphabet: Alphabet,
    factors: Vec<Box<dyn GroupBackend>>,
    /// Global generator index → (factor, local generator index).
    owner: Vec<(usize, usize)>,
    offsets: Vec<usize>,
}

impl FreeProduct {
    pub fn new(factors: Vec<Box<dyn GroupBackend>>) -> Result<Self, FreeProductError> {
        if factors.is_empty() {
            return Err(FreeProductError::NoFactors);
        }
        let mut names: Vec<String> = Vec::new();
        let mut owner = Vec::new();
        let mut offsets = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            offsets.push(names.len());
            for (j, name) in f.alphabet().names().enumerate() {
                if names.iter().any(|n| n == name) {
                    return Err(FreeProductError::SharedGenerator(name.to_string()));
                }
                names.push(name.to_string());
                owner.push((i, j));
            }
        }
        Ok(FreeProduct {
            alphabet: Alphabet::new(&names)?,
            factors,
            owner,
            offsets,
        })
    }

    pub fn factors(&self) -> &[Box<dyn GroupBackend>] {
        &self.factors
    }

    fn local(&self, l: Letter) -> (usize, Letter) {
        let (f, g) = self.owner[l.gen];
        (
            f,
            Letter {
                gen: g,
                inverse: l.inverse,
            },
        )
    }

    fn globalize(&self, s: &Syllable) -> Word {
        let off = self.offsets[s.factor];
        s.element
            .letters()
            .iter()
            .map(|l| Letter {
                gen: l.gen + off,
                inverse: l.inverse,
            })
            .collect()
    }

    pub fn to_word(&self, w: &FpWord) -> Word {
        w.syllables
            .iter()
            .flat_map(|s| self.globalize(s).into_letters())
            .collect()
    }

    /// Appends a syllable, merging with the last one when they share a
    /// factor and dropping the result if it is trivial.
    fn push(&self, out: &mut Vec<Syllable>, s: Syllable) -> Result<(), BackendError> {
        match out.last_mut() {
            Some(top) if top.factor == s.factor => {
                let merged = top.element.concat(&s.element).free_reduce();
                if self.factors[s.factor].is_identity(&merged)? {
                    out.pop();
                } else {
                    top.element = merged;
                }
            }
            _ => {
                if !self.factors[s.factor].is_identity(&s.element)? {
                    out.push(s);
                }
            }
        }
        Ok(())
    }

    pub fn normal_form(&self, w: &Word) -> Result<FpWord, BackendError> {
        self.check_word(w)?;
        let mut out = Vec::new();
        for &l in w.letters() {
            let (factor, local) = self.local(l);
            self.push(
                &mut out,
                Syllable {
                    factor,
                    element: Word::from_letters(vec![local]),
                },
            )?;
        }
        Ok(FpWord { syllables: out })
    }

    pub fn multiply(&self, a: &FpWord, b: &FpWord) -> Result<FpWord, BackendError> {
        let mut out = a.syllables.clone();
        for s in &b.syllables {
            self.push(&mut out, s.clone())?;
        }
        Ok(FpWord { syllables: out })
    }

    pub fn invert(&self, a: &FpWord) -> FpWord {
        FpWord {
            syllables: a
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    factor: s.factor,
                    element: s.element.inverse(),
                })
                .collect(),
        }
    }

    /// Repeatedly conjugates the first syllable to the back while the two
    /// ends share a factor.
    pub fn cyclic_reduce(&self, w: &FpWord) -> Result<FpCyclicReduction, BackendError> {
        let mut core = w.syllables.clone();
        let mut conjugator = Vec::new();
        while core.len() >= 2 && core[0].factor == core[core.len() - 1].factor {
            let first = core.remove(0);
            self.push(&mut core, first.clone())?;
            conjugator.push(first);
        }
        Ok(FpCyclicReduction {
            core: FpWord { syllables: core },
            conjugator: FpWord {
                syllables: conjugator,
            },
        })
    }

    fn syllables_equal(&self, a: &Syllable, b: &Syllable) -> Result<bool, BackendError> {
        Ok(a.factor == b.factor && self.factors[a.factor].equal(&a.element, &b.element)?)
    }

    pub fn locate_root(&self, w: &Word) -> Result<RootLocation, BackendError> {
        let square = self.normal_form(&w.pow(2))?;
        let nf = self.normal_form(w)?;
        Ok(match (square.len(), nf.len()) {
            (_, 0) => RootLocation::Trivial,
            (0 | 1, 1) => RootLocation::Factor(nf.syllables[0].factor),
            _ => RootLocation::NotInFactor,
        })
    }
}

impl GroupBackend for FreeProduct {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn is_identity(&self, w: &Word) -> Result<bool, BackendError> {
        Ok(self.normal_form(w)?.is_empty())
    }

    /// Cyclically reduced elements of syllable length at least 2 are
    /// conjugate iff they are cyclic permutations of each other; shorter
    /// ones are conjugate iff they lie in one factor and are conjugate there.
    fn conjugate(&self, u: &Word, v: &Word) -> Result<ConjugacyVerdict, BackendError> {
        let cu = self.cyclic_reduce(&self.normal_form(u)?)?;
        let cv = self.cyclic_reduce(&self.normal_form(v)?)?;
        let n = cu.core.len();
        if n != cv.core.len() {
            return Ok(ConjugacyVerdict::NotConjugate);
        }
        let (a, b) = (&cu.core.syllables, &cv.core.syllables);
        // z with z·core_u·z⁻¹ = core_v
        let z = match n {
            0 => FpWord::default(),
            1 => {
                if a[0].factor != b[0].factor {
                    return Ok(ConjugacyVerdict::NotConjugate);
                }
                let f = a[0].factor;
                match self.factors[f].conjugate(&a[0].element, &b[0].element)? {
                    ConjugacyVerdict::Conjugate(h) => FpWord {
                        syllables: vec![Syllable {
                            factor: f,
                            element: h,
                        }],
                    },
                    other => return Ok(other),
                }
            }
            _ => {
                let mut found = None;
                'rot: for k in 0..n {
                    for i in 0..n {
                        if !self.syllables_equal(&a[(i + k) % n], &b[i])? {
                            continue 'rot;
                        }
                    }
                    found = Some(k);
                    break;
                }
                let Some(k) = found else {
                    return Ok(ConjugacyVerdict::NotConjugate);
                };
                // rotation by k is P⁻¹·core·P with P the first k syllables
                self.invert(&FpWord {
                    syllables: a[..k].to_vec(),
                })
            }
        };
        let h = self.multiply(
            &self.multiply(&cv.conjugator, &z)?,
            &self.invert(&cu.conjugator),
        )?;
        Ok(ConjugacyVerdict::Conjugate(self.to_word(&h)))
    }
}

pub fn infinite_order_guard(gb: &dyn GroupBackend, w: &Word) -> Result<OrderClass, BackendError> {
    Ok(if gb.is_identity(w)? {
        OrderClass::Trivial
    } else if gb.is_identity(&w.pow(2))? {
        OrderClass::OrderTwo
    } else {
        OrderClass::Other
    })
}

/// Representatives of the conjugacy classes of involutions, one per class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Order2Reps {
    reps: Vec<Word>,
}

impl Order2Reps {
    /// Checks that each representative is an involution.
    pub fn new(gb: &dyn GroupBackend, reps: Vec<Word>) -> Result<Self, BackendError> {
        for r in &reps {
            if infinite_order_guard(gb, r)? != OrderClass::OrderTwo {
                return Err(BackendError::PreconditionViolated(format!(
                    "representative {} is not of order 2",
                    gb.alphabet().format(r)
                )));
            }
        }
        Ok(Order2Reps { reps })
    }

    pub fn reps(&self) -> &[Word] {
        &self.reps
    }
}

/// Conjugacy of involutions: find `g_u, g_v` and representatives with
/// `g_u·h_i·g_u⁻¹ = u`, `g_v·h_j·g_v⁻¹ = v`, searching at most `budget`
/// conjugators in shortlex order.
pub fn order2_conjugacy(
    gb: &dyn GroupBackend,
    reps: &Order2Reps,
    u: &Word,
    v: &Word,
    budget: usize,
) -> Result<ConjugacyVerdict, BackendError> {
    for w in [u, v] {
        if infinite_order_guard(gb, w)? != OrderClass::OrderTwo {
            return Err(BackendError::PreconditionViolated(format!(
                "{} is not of order 2",
                gb.alphabet().format(w)
            )));
        }
    }
    let mut hit_u: Option<(usize, Word)> = None;
    let mut hit_v: Option<(usize, Word)> = None;
    for g in ShortlexWords::new(gb.rank()).take(budget) {
        for (i, h) in reps.reps().iter().enumerate() {
            if hit_u.is_none() && gb.verify_witness(h, u, &g)? {
                hit_u = Some((i, g.clone()));
            }
            if hit_v.is_none() && gb.verify_witness(h, v, &g)? {
                hit_v = Some((i, g.clone()));
            }
        }
        if let (Some((i, gu)), Some((j, gv))) = (&hit_u, &hit_v) {
            return Ok(if i == j {
                ConjugacyVerdict::Conjugate(gv.concat(&gu.inverse()).free_reduce())
            } else {
                ConjugacyVerdict::NotConjugate
            });
        }
    }
    Ok(ConjugacyVerdict::Exhausted(budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{FiniteTable, FreeGroup};

    fn z2(name: &str) -> Box<dyn GroupBackend> {
        let table = vec![vec![0, 1], vec![1, 0]];
        Box::new(FiniteTable::new(Alphabet::new(&[name]).unwrap(), table, vec![1]).unwrap())
    }

    fn dinf() -> FreeProduct {
        FreeProduct::new(vec![z2("s"), z2("t")]).unwrap()
    }

    fn zz() -> FreeProduct {
        let f = |n: &str| -> Box<dyn GroupBackend> {
            Box::new(FreeGroup::new(Alphabet::new(&[n]).unwrap()))
        };
        FreeProduct::new(vec![f("x"), f("y")]).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let g = dinf();
        let w = |s: &str| g.alphabet().parse(s).unwrap();
        let nf = g.normal_form(&w("s s t")).unwrap();
        assert_eq!(nf.len(), 1);
        assert_eq!(nf.syllables[0].factor, 1);
        assert_eq!(g.normal_form(&w("s t s t")).unwrap().len(), 4);
        assert!(g.normal_form(&Word::empty()).unwrap().is_empty());
        assert!(g.is_identity(&w("s t t s")).unwrap());
    }

    #[test]
    fn shared_generators_rejected() {
        assert_eq!(
            FreeProduct::new(vec![z2("s"), z2("s")]).err(),
            Some(FreeProductError::SharedGenerator("s".into()))
        );
    }

    #[test]
    fn cyclic_reduce_examples() {
        let g = zz();
        let w = |s: &str| g.alphabet().parse(s).unwrap();
        let c = g
            .cyclic_reduce(&g.normal_form(&w("x y x^-1")).unwrap())
            .unwrap();
        assert_eq!(g.to_word(&c.core), w("y"));
        assert_eq!(g.to_word(&c.conjugator), w("x"));

        let d = dinf();
        let w = |s: &str| d.alphabet().parse(s).unwrap();
        let c = d.cyclic_reduce(&d.normal_form(&w("s t")).unwrap()).unwrap();
        assert_eq!((c.core.len(), c.conjugator.len()), (2, 0));
        let c = d
            .cyclic_reduce(&d.normal_form(&w("s t s")).unwrap())
            .unwrap();
        assert_eq!(d.to_word(&c.core), w("t"));
        assert_eq!(d.to_word(&c.conjugator), w("s"));
    }

    #[test]
    fn conjugacy_examples() {
        let g = dinf();
        let w = |s: &str| g.alphabet().parse(s).unwrap();
        let (u, v) = (w("s t"), w("t s"));
        let h = g.conjugate(&u, &v).unwrap().witness().cloned().unwrap();
        assert!(g.verify_witness(&u, &v, &h).unwrap());
        assert!(g.equal(&h, &w("s")).unwrap());
        assert_eq!(
            g.conjugate(&w("s"), &w("t")).unwrap(),
            ConjugacyVerdict::NotConjugate
        );
        assert_eq!(
            g.conjugate(&u, &u).unwrap(),
            ConjugacyVerdict::Conjugate(Word::empty())
        );
    }

    #[test]
    fn root_location_examples() {
        let g = dinf();
        let w = |s: &str| g.alphabet().parse(s).unwrap();
        assert_eq!(g.locate_root(&w("s")).unwrap(), RootLocation::Factor(0));
        assert_eq!(g.locate_root(&w("s t")).unwrap(), RootLocation::NotInFactor);
        assert_eq!(
            g.locate_root(&Word::empty()).unwrap(),
            RootLocation::Trivial
        );
        let z = zz();
        let w = |s: &str| z.alphabet().parse(s).unwrap();
        assert_eq!(z.normal_form(&w("x y x^-1").pow(2)).unwrap().len(), 3);
        assert_eq!(
            z.locate_root(&w("x y x^-1")).unwrap(),
            RootLocation::NotInFactor
        );
        assert_eq!(z.locate_root(&w("y^3")).unwrap(), RootLocation::Factor(1));
    }

    #[test]
    fn order_guard_examples() {
        let g = dinf();
        let w = |s: &str| g.alphabet().parse(s).unwrap();
        assert_eq!(
            infinite_order_guard(&g, &w("s")).unwrap(),
            OrderClass::OrderTwo
        );
        assert_eq!(
            infinite_order_guard(&g, &w("s t")).unwrap(),
            OrderClass::Other
        );
        assert_eq!(
            infinite_order_guard(&g, &Word::empty()).unwrap(),
            OrderClass::Trivial
        );
    }

    #[test]
    fn order_two_routine() {
        let g = dinf();
        let w = |s: &str| g.alphabet().parse(s).unwrap();
        let reps = Order2Reps::new(&g, vec![w("s"), w("t")]).unwrap();
        let (u, v) = (w("s t s"), w("t"));
        let verdict = order2_conjugacy(&g, &reps, &u, &v, 1000).unwrap();
        let h = verdict.witness().cloned().unwrap();
        assert!(g.verify_witness(&u, &v, &h).unwrap());
        assert_eq!(
            order2_conjugacy(&g, &reps, &w("s"), &w("t"), 1000).unwrap(),
            ConjugacyVerdict::NotConjugate
        );
        assert_eq!(
            order2_conjugacy(&g, &reps, &w("s"), &w("s"), 1000).unwrap(),
            ConjugacyVerdict::Conjugate(Word::empty())
        );
        assert_eq!(
            order2_conjugacy(&g, &reps, &w("s t s"), &w("t"), 1).unwrap(),
            ConjugacyVerdict::Exhausted(1)
        );
        assert!(order2_conjugacy(&g, &reps, &w("s t"), &w("t"), 10).is_err());
        assert!(Order2Reps::new(&g, vec![w("s t")]).is_err());
    }
}
