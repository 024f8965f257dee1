//! The full conjugacy decision for a group `G` with an orientation character,
//! assembled from a solver for the orientation subgroup `H` and oracles for
//! the centralizers of squares; plus membership and conjugacy into a
//! boundary subgroup.

use serde::Serialize;
use thiserror::Error;

use crate::backend::{
    kb_complete, BackendError, CentralizerClass, ConjugacyVerdict, GroupBackend, RewritingSystem,
    SubgroupMembership,
};
use crate::freeprod::{infinite_order_guard, order2_conjugacy, Order2Reps, OrderClass};
use crate::index2::{
    classify_extension, conj_in_g_given_cp_h, decide_via_squares, CosetReps, ExtensionClass,
    Index2Error, OrientationCharacter, Sign,
};
use crate::klein::{coset_v_b2_test, involution_eigenbasis, knf_conjugator, KleinElem, KleinError};
use crate::word::{Alphabet, Presentation, ShortlexWords, Word};
use crate::Matrix2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("context lacks {0}")]
    MissingCapability(&'static str),
    #[error("the involution's eigenvectors span an index-2 sublattice of the centralizer")]
    LatticeIndexTwo,
    #[error("oracle answers are inconsistent: {0}")]
    Oracle(String),
    #[error("witness {0} failed verification")]
    WitnessRejected(String),
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error(transparent)]
    Index2(#[from] Index2Error),
    #[error(transparent)]
    Klein(#[from] KleinError),
}

/// Limits for every enumerative step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Conjugators tried by shortlex searches.
    pub enumeration: usize,
    /// Largest `|p|` tried when solving `v² = r^p`.
    pub power_search: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            enumeration: 10_000,
            power_search: 10_000,
        }
    }
}

/// Integer coordinates on a designated `Z⊕Z` subgroup of `H`.
pub trait ZzCoordinates: Send + Sync {
    /// Coordinates of `w` in this map's basis, or `None` outside the subgroup.
    fn coordinates(&self, w: &Word) -> Result<Option<(i64, i64)>, BackendError>;
}

/// Produces `e` with `e·w·e⁻¹` inside the vertex subgroup served by the
/// delegate solver.
pub trait VertexLocator: Send + Sync {
    fn conjugate_into_vertex(&self, w: &Word) -> Result<Option<Word>, BackendError>;
}

/// Coordinates on `⟨a, b⟩` in the Klein bottle group on generators `a, b, t`.
pub struct KleinCoordinates;

impl ZzCoordinates for KleinCoordinates {
    fn coordinates(&self, w: &Word) -> Result<Option<(i64, i64)>, BackendError> {
        let x: KleinElem<i64> = KleinElem::from_word(w);
        Ok((!x.twisted).then_some((x.m, x.n)))
    }
}

/// Vertex subgroup equal to the whole group.
pub struct IdentityLocator;

impl VertexLocator for IdentityLocator {
    fn conjugate_into_vertex(&self, _w: &Word) -> Result<Option<Word>, BackendError> {
        Ok(Some(Word::empty()))
    }
}

pub struct PipelineContext {
    presentation: Presentation,
    chi: OrientationCharacter,
    reps: CosetReps,
    h_backend: Box<dyn GroupBackend>,
    g_wordproblem: Box<dyn GroupBackend>,
    order2_reps: Option<Order2Reps>,
    h_centralizer: Option<Box<dyn GroupBackend>>,
    seifert_delegate: Option<Box<dyn GroupBackend>>,
    vertex_locator: Option<Box<dyn VertexLocator>>,
    zz_coordinates: Option<Box<dyn ZzCoordinates>>,
    budgets: Budgets,
    abelian: bool,
}

pub struct PipelineBuilder {
    ctx: PipelineContext,
    a1: Option<Word>,
}

impl PipelineBuilder {
    pub fn order2_reps(mut self, reps: Order2Reps) -> Self {
        self.ctx.order2_reps = Some(reps);
        self
    }

    /// Classifier for `Z_H(·)`; defaults to `h_backend`'s own.
    pub fn h_centralizer(mut self, b: Box<dyn GroupBackend>) -> Self {
        self.ctx.h_centralizer = Some(b);
        self
    }

    pub fn seifert_delegate(
        mut self,
        b: Box<dyn GroupBackend>,
        locator: Box<dyn VertexLocator>,
    ) -> Self {
        self.ctx.seifert_delegate = Some(b);
        self.ctx.vertex_locator = Some(locator);
        self
    }

    pub fn zz_coordinates(mut self, z: Box<dyn ZzCoordinates>) -> Self {
        self.ctx.zz_coordinates = Some(z);
        self
    }

    pub fn budgets(mut self, b: Budgets) -> Self {
        self.ctx.budgets = b;
        self
    }

    /// Representative of the reversing coset; defaults to the first
    /// reversing generator.
    pub fn coset_rep(mut self, a1: Word) -> Self {
        self.a1 = Some(a1);
        self
    }

    pub fn build(mut self) -> Result<PipelineContext, PipelineError> {
        self.ctx.reps = match self.a1 {
            Some(a1) => CosetReps::new(&self.ctx.chi, a1)?,
            None => CosetReps::from_character(&self.ctx.chi)?,
        };
        self.ctx.abelian = is_abelian(&self.ctx)?;
        Ok(self.ctx)
    }
}

impl PipelineContext {
    pub fn builder(
        presentation: Presentation,
        chi: OrientationCharacter,
        h_backend: Box<dyn GroupBackend>,
        g_wordproblem: Box<dyn GroupBackend>,
    ) -> PipelineBuilder {
        PipelineBuilder {
            ctx: PipelineContext {
                presentation,
                chi,
                reps: CosetReps::unchecked(Word::empty()),
                h_backend,
                g_wordproblem,
                order2_reps: None,
                h_centralizer: None,
                seifert_delegate: None,
                vertex_locator: None,
                zz_coordinates: None,
                budgets: Budgets::default(),
                abelian: false,
            },
            a1: None,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.presentation.alphabet
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn character(&self) -> &OrientationCharacter {
        &self.chi
    }

    pub fn budgets(&self) -> Budgets {
        self.budgets
    }

    pub fn g_wordproblem(&self) -> &dyn GroupBackend {
        self.g_wordproblem.as_ref()
    }

    fn classify_h_centralizer(&self, w: &Word) -> Result<CentralizerClass, PipelineError> {
        let classifier = self.h_centralizer.as_ref().unwrap_or(&self.h_backend);
        match classifier.centralizer(w) {
            Err(BackendError::Unsupported(_)) => {
                Err(PipelineError::MissingCapability("h_centralizer"))
            }
            other => Ok(other?),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    Abelian,
    CosetCheck,
    BothInH,
    OrderTwo,
    SquareConjugacy,
    CyclicCentralizer,
    ZzCentralizer,
    SeifertDelegate,
}

impl Case {
    pub fn label(self) -> &'static str {
        match self {
            Case::Abelian => "abelian",
            Case::CosetCheck => "coset-check",
            Case::BothInH => "both-in-H",
            Case::OrderTwo => "order-2",
            Case::SquareConjugacy => "square-conjugacy",
            Case::CyclicCentralizer => "cyclic-centralizer",
            Case::ZzCentralizer => "ZZ-centralizer",
            Case::SeifertDelegate => "seifert-delegate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub case: Case,
    pub witness: Option<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub case: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecisionTrace {
    pub steps: Vec<TraceStep>,
}

impl DecisionTrace {
    fn push(&mut self, case: Case, witness: Option<Word>) {
        self.steps.push(TraceStep { case, witness });
    }

    pub fn last_case(&self) -> Option<Case> {
        self.steps.last().map(|s| s.case)
    }

    pub fn cases(&self) -> Vec<Case> {
        self.steps.iter().map(|s| s.case).collect()
    }

    pub fn render(&self, alphabet: &Alphabet) -> Vec<TraceEntry> {
        self.steps
            .iter()
            .map(|s| TraceEntry {
                case: s.case.label().to_string(),
                witness: s.witness.as_ref().map(|w| alphabet.format(w)),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub verdict: ConjugacyVerdict,
    pub trace: DecisionTrace,
}

/// True iff all generators pairwise commute.
pub fn is_abelian(ctx: &PipelineContext) -> Result<bool, PipelineError> {
    let n = ctx.presentation.rank();
    for i in 0..n {
        for j in i + 1..n {
            if !ctx.g_wordproblem.commute(&Word::gen(i), &Word::gen(j))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Some `h` with `h·u²·h⁻¹ = v²`, decided through conjugacy in `H` with a
/// bounded shortlex search as fallback when that solver runs out of budget.
pub fn find_square_witness(
    ctx: &PipelineContext,
    u: &Word,
    v: &Word,
) -> Result<ConjugacyVerdict, PipelineError> {
    let u2 = u.pow(2).free_reduce();
    let v2 = v.pow(2).free_reduce();
    match conj_in_g_given_cp_h(ctx.h_backend.as_ref(), &ctx.chi, &ctx.reps, &u2, &v2)? {
        ConjugacyVerdict::Exhausted(_) => {}
        decided => return Ok(decided),
    }
    let budget = ctx.budgets.enumeration;
    for g in ShortlexWords::new(ctx.presentation.rank()).take(budget) {
        if ctx.g_wordproblem.verify_witness(&u2, &v2, &g)? {
            return Ok(ConjugacyVerdict::Conjugate(g));
        }
    }
    Ok(ConjugacyVerdict::Exhausted(budget))
}

pub fn decide_conjugacy(
    ctx: &PipelineContext,
    u: &Word,
    v: &Word,
) -> Result<Decision, PipelineError> {
    ctx.g_wordproblem.check_word(u)?;
    ctx.g_wordproblem.check_word(v)?;
    let mut trace = DecisionTrace::default();
    let verdict = run_cases(ctx, u, v, &mut trace)?;
    if let ConjugacyVerdict::Conjugate(h) = &verdict {
        if !ctx.g_wordproblem.verify_witness(u, v, h)? {
            return Err(PipelineError::WitnessRejected(ctx.alphabet().format(h)));
        }
    }
    Ok(Decision { verdict, trace })
}

fn run_cases(
    ctx: &PipelineContext,
    u: &Word,
    v: &Word,
    trace: &mut DecisionTrace,
) -> Result<ConjugacyVerdict, PipelineError> {
    let g = ctx.g_wordproblem.as_ref();
    if ctx.abelian {
        let same = g.equal(u, v)?;
        trace.push(Case::Abelian, same.then(Word::empty));
        return Ok(if same {
            ConjugacyVerdict::Conjugate(Word::empty())
        } else {
            ConjugacyVerdict::NotConjugate
        });
    }

    let su = ctx.chi.sign_of(u)?;
    let sv = ctx.chi.sign_of(v)?;
    trace.push(Case::CosetCheck, None);
    if su != sv {
        return Ok(ConjugacyVerdict::NotConjugate);
    }

    if su == Sign::Plus {
        let verdict = conj_in_g_given_cp_h(ctx.h_backend.as_ref(), &ctx.chi, &ctx.reps, u, v)?;
        trace.push(Case::BothInH, verdict.witness().cloned());
        return Ok(verdict);
    }

    let ou = infinite_order_guard(g, u)?;
    let ov = infinite_order_guard(g, v)?;
    match (ou == OrderClass::OrderTwo, ov == OrderClass::OrderTwo) {
        (true, true) => {
            let reps = ctx
                .order2_reps
                .as_ref()
                .ok_or(PipelineError::MissingCapability("order2_reps"))?;
            let verdict = order2_conjugacy(g, reps, u, v, ctx.budgets.enumeration)?;
            trace.push(Case::OrderTwo, verdict.witness().cloned());
            return Ok(verdict);
        }
        (true, false) | (false, true) => {
            trace.push(Case::OrderTwo, None);
            return Ok(ConjugacyVerdict::NotConjugate);
        }
        (false, false) => {}
    }

    let h = match find_square_witness(ctx, u, v)? {
        ConjugacyVerdict::Conjugate(h) => h,
        other => {
            trace.push(Case::SquareConjugacy, None);
            return Ok(other);
        }
    };
    trace.push(Case::SquareConjugacy, Some(h.clone()));

    let v2 = v.pow(2).free_reduce();
    match ctx.classify_h_centralizer(&v2)? {
        CentralizerClass::Cyclic(r) => {
            check_extension(ctx, v, &v2, &r)?;
            let verdict = decide_via_squares(g, &h, u, v)?;
            trace.push(Case::CyclicCentralizer, verdict.witness().cloned());
            Ok(verdict)
        }
        CentralizerClass::RankTwoAbelian(p, q) => {
            let verdict = klein_case(ctx, u, v, &h, &p, &q)?;
            trace.push(Case::ZzCentralizer, verdict.witness().cloned());
            Ok(verdict)
        }
        CentralizerClass::Delegated(_) => {
            let delegate = ctx
                .seifert_delegate
                .as_ref()
                .ok_or(PipelineError::MissingCapability("seifert_delegate"))?;
            let locator = ctx
                .vertex_locator
                .as_ref()
                .ok_or(PipelineError::MissingCapability("vertex_locator"))?;
            let e = locator.conjugate_into_vertex(&v2)?.ok_or_else(|| {
                PipelineError::Oracle("v² is not conjugate into the vertex group".into())
            })?;
            let u1 = h.conjugate(u);
            let u2 = e.conjugate(&u1);
            let v2e = e.conjugate(v);
            let verdict = match delegate.conjugate(&u2, &v2e)? {
                ConjugacyVerdict::Conjugate(z) => ConjugacyVerdict::Conjugate(
                    e.inverse().concat(&z).concat(&e).concat(&h).free_reduce(),
                ),
                other => other,
            };
            trace.push(Case::SeifertDelegate, verdict.witness().cloned());
            Ok(verdict)
        }
    }
}

/// `Z_G(v²) = ⟨v, r⟩` with `v·r·v⁻¹ = r^ε` and `v² = r^p`; it must be
/// abelian for `Z_G(v) = Z_G(v²)` to hold.
fn check_extension(
    ctx: &PipelineContext,
    v: &Word,
    v2: &Word,
    r: &Word,
) -> Result<ExtensionClass, PipelineError> {
    let g = ctx.g_wordproblem.as_ref();
    let vr = v.conjugate(r);
    let eps = if g.equal(&vr, r)? {
        Sign::Plus
    } else if g.equal(&vr, &r.inverse())? {
        Sign::Minus
    } else {
        return Err(PipelineError::Oracle(
            "v does not normalize the cyclic centralizer of v²".into(),
        ));
    };
    let mut p = None;
    for k in 0..=ctx.budgets.power_search as i64 {
        if g.equal(v2, &r.pow(k))? {
            p = Some(k);
        } else if g.equal(v2, &r.pow(-k))? {
            p = Some(-k);
        }
        if p.is_some() {
            break;
        }
    }
    let p = p.ok_or_else(|| {
        PipelineError::Oracle("v² is not a bounded power of the centralizer root".into())
    })?;
    match classify_extension(eps, p) {
        class @ (ExtensionClass::ZxZ2 | ExtensionClass::InfiniteCyclic) => Ok(class),
        class => Err(PipelineError::Oracle(format!(
            "extension class {} is impossible for an element of infinite order",
            class.label()
        ))),
    }
}

fn klein_case(
    ctx: &PipelineContext,
    u: &Word,
    v: &Word,
    h: &Word,
    p: &Word,
    q: &Word,
) -> Result<ConjugacyVerdict, PipelineError> {
    let zz = ctx
        .zz_coordinates
        .as_ref()
        .ok_or(PipelineError::MissingCapability("zz_coordinates"))?;
    let raw = |w: &Word| -> Result<(i64, i64), PipelineError> {
        zz.coordinates(w)?.ok_or_else(|| {
            PipelineError::Oracle(format!(
                "{} is outside the coordinate subgroup",
                ctx.alphabet().format(w)
            ))
        })
    };
    // coordinates relative to the centralizer basis (p, q)
    let to_pq = Matrix2::from_columns(raw(p)?, raw(q)?)
        .unimodular_inverse()
        .ok_or_else(|| {
            PipelineError::Oracle("centralizer basis is not a coordinate basis".into())
        })?;
    let pq = |w: &Word| -> Result<(i64, i64), PipelineError> { Ok(to_pq.apply(raw(w)?)) };

    let action = Matrix2::from_columns(pq(&v.conjugate(p))?, pq(&v.conjugate(q))?);
    let eig = involution_eigenbasis(&action)?;
    if eig.lattice_index != 1 {
        return Err(PipelineError::LatticeIndexTwo);
    }
    let word_of = |c: (i64, i64)| p.pow(c.0).concat(&q.pow(c.1));
    let a = word_of(eig.a_vec);
    let b = word_of(eig.b_vec);
    let to_ab = Matrix2::from_columns(eig.a_vec, eig.b_vec)
        .unimodular_inverse()
        .expect("index-1 eigenbasis is unimodular");
    let ab = |w: &Word| -> Result<(i64, i64), PipelineError> { Ok(to_ab.apply(pq(w)?)) };

    let (k, rest) = ab(&v.pow(2))?;
    if rest != 0 || k % 2 == 0 {
        return Err(PipelineError::Oracle(
            "v² is not an odd power of the fixed eigenvector".into(),
        ));
    }
    // t = a^n·v satisfies t² = a, t·b·t⁻¹ = b⁻¹
    let n = (1 - k) / 2;
    let t = a.pow(n).concat(v);
    let v_nf = KleinElem::new(-n, 0, true);
    let u1 = h.conjugate(u);
    let (alpha, beta) = ab(&u1.concat(&v.inverse()))?;
    let u_nf = KleinElem::new(alpha - n, beta, true);

    if !coset_v_b2_test(&u_nf, &v_nf) {
        return Ok(ConjugacyVerdict::NotConjugate);
    }
    let z = knf_conjugator(&u_nf, &v_nf)
        .ok_or_else(|| PipelineError::Oracle("coset test and Klein conjugacy disagree".into()))?;
    let mut w = a.pow(z.m).concat(&b.pow(z.n));
    if z.twisted {
        w = w.concat(&t);
    }
    Ok(ConjugacyVerdict::Conjugate(w.concat(h).free_reduce()))
}

/// Membership in a boundary subgroup, answered by its oracle.
pub fn boundary_membership_t2(
    oracle: &dyn SubgroupMembership,
    g: &Word,
) -> Result<bool, BackendError> {
    oracle.contains(g)
}

/// Looks for `c` with `c·g·c⁻¹ ∈ ⟨h_gens⟩`, trying at most `budget`
/// conjugators in shortlex order.
pub fn boundary_conjugacy_t2(
    gb: &dyn GroupBackend,
    h_gens: &[Word],
    g: &Word,
    budget: usize,
) -> Result<ConjugacyVerdict, BackendError> {
    for c in ShortlexWords::new(gb.rank()).take(budget) {
        if gb.subgroup_membership(h_gens, &c.conjugate(g))? {
            return Ok(ConjugacyVerdict::Conjugate(c));
        }
    }
    Ok(ConjugacyVerdict::Exhausted(budget))
}

/// `G *_H G`: two copies of the presentation, the second on primed
/// generators, with each generator of `H` identified with its copy, and
/// rewriting rules for it found by a bounded Knuth–Bendix run.
#[derive(Debug, Clone)]
pub struct AmalgamatedDouble {
    pub presentation: Presentation,
    rank: usize,
    system: RewritingSystem,
}

impl AmalgamatedDouble {
    pub fn new(p: &Presentation, h_gens: &[Word], kb_budget: usize) -> Self {
        let rank = p.rank();
        let mut names: Vec<String> = p.alphabet.names().map(str::to_string).collect();
        for i in 0..rank {
            let mut name = format!("{}'", p.alphabet.name(i));
            while names.contains(&name) {
                name.push('\'');
            }
            names.push(name);
        }
        let alphabet = Alphabet::new(&names).expect("primed names are valid");
        let shift: Vec<Word> = (0..rank).map(|i| Word::gen(rank + i)).collect();
        let mut relators = p.relators.clone();
        relators.extend(p.relators.iter().map(|r| r.substitute(&shift)));
        relators.extend(
            h_gens
                .iter()
                .map(|h| h.concat(&h.substitute(&shift).inverse()).free_reduce()),
        );
        let presentation = Presentation::new(alphabet, relators);
        let system = match kb_complete(&presentation, kb_budget) {
            Ok(s) => s,
            Err(e) => e.partial,
        };
        AmalgamatedDouble {
            presentation,
            rank,
            system,
        }
    }

    /// The copy of `w` on the primed generators.
    pub fn mirror(&self, w: &Word) -> Word {
        let shift: Vec<Word> = (0..self.rank).map(|i| Word::gen(self.rank + i)).collect();
        w.substitute(&shift)
    }

    /// Whether completion finished within its budget.
    pub fn is_confluent(&self) -> bool {
        self.system.is_confluent()
    }

    /// Whether `g·ḡ⁻¹` rewrites to the empty word. A `true` answer is a
    /// proof; `false` is conclusive only when the rules are confluent.
    pub fn mirror_identity_holds(&self, g: &Word) -> bool {
        self.system
            .reduce(&g.concat(&self.mirror(g).inverse()))
            .is_empty()
    }
}
