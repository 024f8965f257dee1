//! Knuth–Bendix completion for group presentations under shortlex order.
//!
//! A group presentation on `x0, x1, ...` becomes a monoid presentation on
//! the letters `x0 < x0⁻¹ < x1 < x1⁻¹ < ...` (see [`Letter::rank`]) with the
//! inverse rules `x x⁻¹ → ε`, `x⁻¹ x → ε` and one equation `r = ε` per
//! relator.

use std::cmp::Ordering;
use std::collections::VecDeque;

use super::{BackendError, ConjugacyVerdict, GroupBackend};
use crate::word::{Alphabet, Letter, Presentation, Word};

type Str = Vec<u16>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Word,
}

/// A length-reducing-or-lex-reducing string rewriting system.
#[derive(Debug, Clone)]
pub struct RewritingSystem {
    rules: Vec<(Str, Str)>,
    confluent: bool,
}

fn to_str(w: &Word) -> Str {
    w.letters().iter().map(|l| l.rank() as u16).collect()
}

fn to_word(s: &[u16]) -> Word {
    s.iter().map(|&r| Letter::from_rank(r as usize)).collect()
}

fn shortlex(a: &[u16], b: &[u16]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn contains(hay: &[u16], needle: &[u16]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

fn reduce_with(rules: &[(Str, Str)], input: &[u16]) -> Str {
    let mut out: Str = Vec::with_capacity(input.len());
    let mut todo: Vec<u16> = input.iter().rev().copied().collect();
    while let Some(c) = todo.pop() {
        out.push(c);
        if let Some((lhs, rhs)) = rules.iter().find(|(lhs, _)| out.ends_with(lhs)) {
            out.truncate(out.len() - lhs.len());
            todo.extend(rhs.iter().rev());
        }
    }
    out
}

impl RewritingSystem {
    pub fn is_confluent(&self) -> bool {
        self.confluent
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> Vec<Rule> {
        self.rules
            .iter()
            .map(|(l, r)| Rule {
                lhs: to_word(l),
                rhs: to_word(r),
            })
            .collect()
    }

    /// Irreducible descendant of `w`; the unique normal form when the system
    /// is confluent.
    pub fn reduce(&self, w: &Word) -> Word {
        to_word(&reduce_with(&self.rules, &to_str(w)))
    }

    fn is_irreducible_suffix(&self, s: &[u16]) -> bool {
        !self.rules.iter().any(|(lhs, _)| s.ends_with(lhs))
    }

    fn critical_pairs(&self) -> Vec<(Str, Str)> {
        let mut pairs = Vec::new();
        for (l1, r1) in &self.rules {
            for (l2, r2) in &self.rules {
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] != l2[..k] {
                        continue;
                    }
                    let mut left = r1.clone();
                    left.extend_from_slice(&l2[k..]);
                    let mut right = l1[..l1.len() - k].to_vec();
                    right.extend_from_slice(r2);
                    let left = reduce_with(&self.rules, &left);
                    let right = reduce_with(&self.rules, &right);
                    if left != right {
                        pairs.push((left, right));
                    }
                }
            }
        }
        pairs
    }
}

/// Completion ran out of budget; `partial` holds the rules found so far,
/// each of which is a valid equation in the group.
#[derive(Debug, Clone)]
pub struct KbExhausted {
    pub budget: usize,
    pub partial: RewritingSystem,
}

/// Knuth–Bendix completion with at most `budget` rules ever created.
pub fn kb_complete(p: &Presentation, budget: usize) -> Result<RewritingSystem, KbExhausted> {
    let mut pending: VecDeque<(Str, Str)> = VecDeque::new();
    for g in 0..p.rank() {
        let x = Letter::pos(g).rank() as u16;
        let xi = Letter::neg(g).rank() as u16;
        pending.push_back((vec![x, xi], vec![]));
        pending.push_back((vec![xi, x], vec![]));
    }
    for r in &p.relators {
        pending.push_back((to_str(&r.free_reduce()), vec![]));
    }

    let mut rules: Vec<(Str, Str)> = Vec::new();
    let mut created = 0usize;
    loop {
        while let Some((a, b)) = pending.pop_front() {
            let a = reduce_with(&rules, &a);
            let b = reduce_with(&rules, &b);
            if a == b {
                continue;
            }
            let (lhs, rhs) = if shortlex(&a, &b) == Ordering::Greater {
                (a, b)
            } else {
                (b, a)
            };
            if created >= budget {
                return Err(KbExhausted {
                    budget,
                    partial: RewritingSystem {
                        rules,
                        confluent: false,
                    },
                });
            }
            created += 1;
            let mut kept = Vec::with_capacity(rules.len() + 1);
            for (l, r) in rules.drain(..) {
                if contains(&l, &lhs) {
                    pending.push_back((l, r));
                } else {
                    kept.push((l, r));
                }
            }
            kept.push((lhs, rhs));
            rules = kept;
            for i in 0..rules.len() {
                let reduced = reduce_with(&rules, &rules[i].1);
                rules[i].1 = reduced;
            }
        }
        let system = RewritingSystem {
            rules,
            confluent: false,
        };
        let pairs = system.critical_pairs();
        rules = system.rules;
        if pairs.is_empty() {
            return Ok(RewritingSystem {
                rules,
                confluent: true,
            });
        }
        pending.extend(pairs);
    }
}

/// Word problem by confluent rewriting; conjugacy by shortlex search over
/// normal forms, decisive when the group turns out to be finite.
#[derive(Debug, Clone)]
pub struct RewritingBackend {
    alphabet: Alphabet,
    system: RewritingSystem,
    search_budget: usize,
}

impl RewritingBackend {
    pub fn new(
        p: &Presentation,
        kb_budget: usize,
        search_budget: usize,
    ) -> Result<Self, KbExhausted> {
        let system = kb_complete(p, kb_budget)?;
        Ok(RewritingBackend {
            alphabet: p.alphabet.clone(),
            system,
            search_budget,
        })
    }

    pub fn system(&self) -> &RewritingSystem {
        &self.system
    }

    pub fn normal_form(&self, w: &Word) -> Word {
        self.system.reduce(w)
    }

    /// Calls `f` on every normal form in shortlex order until it returns
    /// `Some`, the budget runs out, or the elements are exhausted.
    fn search<T>(&self, mut f: impl FnMut(&Word) -> Option<T>) -> Search<T> {
        let mut level: Vec<Str> = vec![vec![]];
        let mut visited = 0;
        while !level.is_empty() {
            for s in &level {
                if visited == self.search_budget {
                    return Search::Exhausted;
                }
                visited += 1;
                if let Some(t) = f(&to_word(s)) {
                    return Search::Found(t);
                }
            }
            let mut next = Vec::new();
            for s in &level {
                for r in 0..2 * self.alphabet.rank() {
                    let mut e = s.clone();
                    e.push(r as u16);
                    if self.system.is_irreducible_suffix(&e) {
                        next.push(e);
                    }
                }
            }
            level = next;
        }
        Search::Complete
    }
}

enum Search<T> {
    Found(T),
    Exhausted,
    Complete,
}

impl GroupBackend for RewritingBackend {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn is_identity(&self, w: &Word) -> Result<bool, BackendError> {
        self.check_word(w)?;
        Ok(self.normal_form(w).is_empty())
    }

    fn conjugate(&self, u: &Word, v: &Word) -> Result<ConjugacyVerdict, BackendError> {
        self.check_word(u)?;
        self.check_word(v)?;
        let target = self.normal_form(v);
        let u = self.normal_form(u);
        let found = self.search(|g| {
            let c = self.normal_form(&g.concat(&u).concat(&g.inverse()));
            (c == target).then(|| g.clone())
        });
        Ok(match found {
            Search::Found(h) => ConjugacyVerdict::Conjugate(h),
            Search::Exhausted => ConjugacyVerdict::Exhausted(self.search_budget),
            Search::Complete => ConjugacyVerdict::NotConjugate,
        })
    }
}
