//! The candidate pullback of `p: Q → X` along `f: Y → X`.
//!
//! The pullback is presented as a quotient of the free product `Y*Q` by
//! nine families of relations identifying `p*(x)` with `f*(x)` inside
//! words. The comparison map `h` sends a word to the product in `Y` of its
//! letters, each Q-letter `a` read as `f*(p_!(a))`. This module enumerates
//! the relation instances up to a flank budget and checks that `h`
//! identifies both sides of each one, plus the unit, counit,
//! Beck–Chevalley and Frobenius identities that make `h` the comparison
//! map of a pullback.

use std::ops::ControlFlow;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{FreeProduct, FreeProductError, GradedElement, Tag, Word};
use crate::openness::{check_semiopen, frobenius_report, OpennessError, SemiopenError};
use crate::quantale::{CheckConfig, FiniteInvQuantale, FiniteMap};

type Letter = (Tag, usize);

/// Shape of a relation; `τ`, `τ'` are alternating flanks (possibly empty).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `p*(x) ~ f*(x)`
    Bare,
    /// `p*(x)a ⊗ τ ~ f*(x) ⊗ a ⊗ τ`
    LeadingQ,
    /// `p*(x) ⊗ y ⊗ τ ~ f*(x)y ⊗ τ`
    LeadingY,
    /// `τ ⊗ ap*(x) ~ τ ⊗ a ⊗ f*(x)`
    TrailingQ,
    /// `τ ⊗ y ⊗ p*(x) ~ τ ⊗ yf*(x)`
    TrailingY,
    /// `τ ⊗ ap*(x)a' ⊗ τ' ~ τ ⊗ a ⊗ f*(x) ⊗ a' ⊗ τ'`
    InnerQQ,
    /// `τ ⊗ y ⊗ p*(x)a ⊗ τ' ~ τ ⊗ yf*(x) ⊗ a ⊗ τ'`
    InnerYQ,
    /// `τ ⊗ ap*(x) ⊗ y ⊗ τ' ~ τ ⊗ a ⊗ f*(x)y ⊗ τ'`
    InnerQY,
    /// `τ ⊗ y ⊗ p*(x) ⊗ y' ⊗ τ' ~ τ ⊗ yf*(x)y' ⊗ τ'`
    InnerYY,
}

/// Hypothesis on `p` under which `h` respects a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    Surjectivity,
    Fr1,
    Fr2,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Bare,
        Family::LeadingQ,
        Family::LeadingY,
        Family::TrailingQ,
        Family::TrailingY,
        Family::InnerQQ,
        Family::InnerYQ,
        Family::InnerQY,
        Family::InnerYY,
    ];

    pub fn hypothesis(self) -> Hypothesis {
        match self {
            Family::Bare | Family::LeadingY | Family::TrailingY | Family::InnerYY => {
                Hypothesis::Surjectivity
            }
            Family::InnerQQ => Hypothesis::Fr2,
            _ => Hypothesis::Fr1,
        }
    }

    pub fn pattern(self) -> &'static str {
        match self {
            Family::Bare => "p*(x) ~ f*(x)",
            Family::LeadingQ => "p*(x)a ⊗ τ ~ f*(x) ⊗ a ⊗ τ",
            Family::LeadingY => "p*(x) ⊗ y ⊗ τ ~ f*(x)y ⊗ τ",
            Family::TrailingQ => "τ ⊗ ap*(x) ~ τ ⊗ a ⊗ f*(x)",
            Family::TrailingY => "τ ⊗ y ⊗ p*(x) ~ τ ⊗ yf*(x)",
            Family::InnerQQ => "τ ⊗ ap*(x)a' ⊗ τ' ~ τ ⊗ a ⊗ f*(x) ⊗ a' ⊗ τ'",
            Family::InnerYQ => "τ ⊗ y ⊗ p*(x)a ⊗ τ' ~ τ ⊗ yf*(x) ⊗ a ⊗ τ'",
            Family::InnerQY => "τ ⊗ ap*(x) ⊗ y ⊗ τ' ~ τ ⊗ a ⊗ f*(x)y ⊗ τ'",
            Family::InnerYY => "τ ⊗ y ⊗ p*(x) ⊗ y' ⊗ τ' ~ τ ⊗ yf*(x)y' ⊗ τ'",
        }
    }

    /// Last tag of the left flank and first tag of the right flank, when
    /// the family has that flank.
    fn flanks(self) -> (Option<Tag>, Option<Tag>) {
        use Family::*;
        match self {
            Bare => (None, None),
            LeadingQ => (None, Some(Tag::Y)),
            LeadingY => (None, Some(Tag::Q)),
            TrailingQ => (Some(Tag::Y), None),
            TrailingY => (Some(Tag::Q), None),
            InnerQQ => (Some(Tag::Y), Some(Tag::Y)),
            InnerYQ => (Some(Tag::Q), Some(Tag::Y)),
            InnerQY => (Some(Tag::Y), Some(Tag::Q)),
            InnerYY => (Some(Tag::Q), Some(Tag::Q)),
        }
    }

    /// Tags of the free letters besides `x`, in the order `a, a'` / `y, y'`
    /// appear in the pattern.
    fn params(self) -> &'static [Tag] {
        use Family::*;
        match self {
            Bare => &[],
            LeadingQ | TrailingQ => &[Tag::Q],
            LeadingY | TrailingY => &[Tag::Y],
            InnerQQ => &[Tag::Q, Tag::Q],
            InnerYQ => &[Tag::Y, Tag::Q],
            InnerQY => &[Tag::Q, Tag::Y],
            InnerYY => &[Tag::Y, Tag::Y],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    pub fr1: bool,
    pub fr2: bool,
    pub surjective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("p and f have different codomains")]
    TargetMismatch,
    #[error("p*(x) has no left adjoint: fails at a = {a}, x = {x}")]
    NoLeftAdjoint { a: usize, x: usize },
    #[error("hypotheses fail: {0:?}")]
    Hypotheses(Hypotheses),
    #[error(transparent)]
    Openness(#[from] OpennessError),
}

/// `p: Q → X` with its direct image, `f: Y → X`, and the truncated free
/// product `Y*Q`.
#[derive(Debug)]
pub struct PullbackContext {
    fp: FreeProduct,
    x: Arc<FiniteInvQuantale>,
    p_inv: Vec<usize>,
    p_dir: Vec<usize>,
    f_inv: Vec<usize>,
    hypotheses: Option<Hypotheses>,
}

impl PullbackContext {
    /// Requires `p` to be a semiopen surjection satisfying FR1 and FR2.
    pub fn new(p: &FiniteMap, f: &FiniteMap, truncation: usize, cfg: &CheckConfig) -> Result<Self, ContextError> {
        if p.target() != f.target() {
            return Err(ContextError::TargetMismatch);
        }
        let report = frobenius_report(p, cfg)?;
        if let Err(w) = report.semiopen {
            return Err(ContextError::NoLeftAdjoint { a: w.a, x: w.x });
        }
        let hyp = Hypotheses {
            fr1: report.fr1.as_ref().is_some_and(|c| c.passed()),
            fr2: report.fr2.as_ref().is_some_and(|c| c.passed()),
            surjective: report.surjective.is_surjective() == Some(true),
        };
        if !(hyp.fr1 && hyp.fr2 && hyp.surjective) {
            return Err(ContextError::Hypotheses(hyp));
        }
        let mut ctx = Self::unchecked(p, f, truncation)?;
        ctx.hypotheses = Some(hyp);
        Ok(ctx)
    }

    /// No hypotheses are checked beyond the existence of `p_!`; used for
    /// negative controls.
    pub fn unchecked(p: &FiniteMap, f: &FiniteMap, truncation: usize) -> Result<Self, ContextError> {
        if p.target() != f.target() {
            return Err(ContextError::TargetMismatch);
        }
        let (p, _) = check_semiopen(p, &CheckConfig::default()).map_err(|e| match e {
            SemiopenError::NoLeftAdjoint(w) => ContextError::NoLeftAdjoint { a: w.a, x: w.x },
            SemiopenError::InvolutionNotPreserved(_) | SemiopenError::MissingDirectImage => {
                unreachable!("finite homomorphisms have involutive left adjoints when they have any")
            }
        })?;
        Ok(PullbackContext {
            fp: FreeProduct::new(f.source().clone(), p.source().clone(), truncation),
            x: p.target().clone(),
            p_inv: p.inverse_table(),
            p_dir: p.direct_table().expect("installed above"),
            f_inv: f.inverse_table(),
            hypotheses: None,
        })
    }

    pub fn free_product(&self) -> &FreeProduct {
        &self.fp
    }

    pub fn y(&self) -> &Arc<FiniteInvQuantale> {
        self.fp.y()
    }

    pub fn q(&self) -> &Arc<FiniteInvQuantale> {
        self.fp.q()
    }

    pub fn x(&self) -> &Arc<FiniteInvQuantale> {
        &self.x
    }

    /// `Some` when built with [`PullbackContext::new`].
    pub fn hypotheses(&self) -> Option<Hypotheses> {
        self.hypotheses
    }

    pub fn p_star(&self, x: usize) -> usize {
        self.p_inv[x]
    }

    pub fn p_shriek(&self, a: usize) -> usize {
        self.p_dir[a]
    }

    pub fn f_star(&self, x: usize) -> usize {
        self.f_inv[x]
    }

    fn h_letter(&self, (tag, v): Letter) -> usize {
        match tag {
            Tag::Y => v,
            Tag::Q => self.f_inv[self.p_dir[v]],
        }
    }

    fn h_letters<'a>(&self, letters: impl Iterator<Item = &'a Letter>) -> usize {
        let y = self.y();
        letters
            .map(|&l| self.h_letter(l))
            .reduce(|acc, v| y.mul(acc, v))
            .expect("words are nonempty")
    }

    /// `h` on a word: the product in `Y` of `y` for Y-letters and
    /// `f*(p_!(a))` for Q-letters.
    pub fn h_word(&self, w: &Word) -> usize {
        self.h_letters(w.letters().iter())
    }

    /// `h` on a graded element: the join over its generating words.
    pub fn h(&self, g: &GradedElement) -> usize {
        let y = self.y().lattice();
        y.join(self.fp.generators(g).iter().map(|w| self.h_word(w)))
    }

    fn core(&self, family: Family, x: usize, params: &[usize]) -> (Vec<Letter>, Vec<Letter>) {
        let (y, q) = (self.y(), self.q());
        let (px, fx) = (self.p_inv[x], self.f_inv[x]);
        use Family::*;
        use Tag::{Q, Y};
        match family {
            Bare => (vec![(Q, px)], vec![(Y, fx)]),
            LeadingQ => {
                let a = params[0];
                (vec![(Q, q.mul(px, a))], vec![(Y, fx), (Q, a)])
            }
            LeadingY => {
                let v = params[0];
                (vec![(Q, px), (Y, v)], vec![(Y, y.mul(fx, v))])
            }
            TrailingQ => {
                let a = params[0];
                (vec![(Q, q.mul(a, px))], vec![(Q, a), (Y, fx)])
            }
            TrailingY => {
                let v = params[0];
                (vec![(Y, v), (Q, px)], vec![(Y, y.mul(v, fx))])
            }
            InnerQQ => {
                let (a, b) = (params[0], params[1]);
                (
                    vec![(Q, q.mul(q.mul(a, px), b))],
                    vec![(Q, a), (Y, fx), (Q, b)],
                )
            }
            InnerYQ => {
                let (v, a) = (params[0], params[1]);
                (vec![(Y, v), (Q, q.mul(px, a))], vec![(Y, y.mul(v, fx)), (Q, a)])
            }
            InnerQY => {
                let (a, v) = (params[0], params[1]);
                (vec![(Q, q.mul(a, px)), (Y, v)], vec![(Q, a), (Y, y.mul(fx, v))])
            }
            InnerYY => {
                let (v, w) = (params[0], params[1]);
                (
                    vec![(Y, v), (Q, px), (Y, w)],
                    vec![(Y, y.mul(y.mul(v, fx), w))],
                )
            }
        }
    }

    fn size_of(&self, tag: Tag) -> usize {
        match tag {
            Tag::Y => self.y().size(),
            Tag::Q => self.q().size(),
        }
    }

    /// All alternating letter sequences of length `len` starting with
    /// `start`.
    fn flank_words(&self, len: usize, start: Tag) -> Vec<Vec<Letter>> {
        let mut out = vec![Vec::new()];
        let mut tag = start;
        for _ in 0..len {
            let n = self.size_of(tag);
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..n).map(move |v| {
                        let mut w = w.clone();
                        w.push((tag, v));
                        w
                    })
                })
                .collect();
            tag = tag.other();
        }
        out
    }

    /// Calls `visit` on every instance whose flanks have at most `maxlen`
    /// letters in total. Order: family, flank lengths (by total, then left),
    /// `x`, the free letters, left flank, right flank.
    pub fn visit_relation_instances(
        &self,
        maxlen: usize,
        mut visit: impl FnMut(&Candidate<'_>) -> ControlFlow<()>,
    ) {
        for family in Family::ALL {
            if self.visit_family(family, maxlen, &mut visit).is_break() {
                return;
            }
        }
    }

    fn visit_family(
        &self,
        family: Family,
        maxlen: usize,
        visit: &mut impl FnMut(&Candidate<'_>) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let (left_end, right_start) = family.flanks();
        let mut shapes: Vec<(usize, usize)> = Vec::new();
        for l1 in 0..=if left_end.is_some() { maxlen } else { 0 } {
            for l2 in 0..=if right_start.is_some() { maxlen - l1 } else { 0 } {
                shapes.push((l1, l2));
            }
        }
        shapes.sort_by_key(|&(l1, l2)| (l1 + l2, l1));
        let params = family.params();
        let ranges: Vec<usize> = params.iter().map(|&t| self.size_of(t)).collect();
        let combos: usize = ranges.iter().product();
        for (l1, l2) in shapes {
            let lefts = match left_end {
                Some(end) => {
                    let start = if l1 % 2 == 1 { end } else { end.other() };
                    self.flank_words(l1, start)
                }
                None => vec![Vec::new()],
            };
            let rights = match right_start {
                Some(start) => self.flank_words(l2, start),
                None => vec![Vec::new()],
            };
            for x in 0..self.x.size() {
                for combo in 0..combos {
                    let mut rest = combo;
                    let mut vals = [0usize; 2];
                    for i in (0..ranges.len()).rev() {
                        vals[i] = rest % ranges[i];
                        rest /= ranges[i];
                    }
                    let (left_core, right_core) = self.core(family, x, &vals[..params.len()]);
                    for tau in &lefts {
                        for tau2 in &rights {
                            let c = Candidate {
                                family,
                                x,
                                params: &vals[..params.len()],
                                tau,
                                tau2,
                                left_core: &left_core,
                                right_core: &right_core,
                            };
                            visit(&c)?;
                        }
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }

    /// Materializes every instance; intended for small budgets.
    pub fn pullback_relation_instances(&self, maxlen: usize) -> Vec<RelationInstance> {
        let mut out = Vec::new();
        self.visit_relation_instances(maxlen, |c| {
            out.push(c.to_instance());
            ControlFlow::Continue(())
        });
        out
    }

    /// Checks `h(left) = h(right)` on every instance within the budget.
    pub fn verify_h_respects(&self, maxlen: usize) -> HRespectReport {
        let mut families: Vec<FamilyStats> = Family::ALL
            .iter()
            .map(|&family| FamilyStats {
                family,
                hypothesis: family.hypothesis(),
                instances: 0,
                failures: 0,
            })
            .collect();
        let mut first_failure = None;
        self.visit_relation_instances(maxlen, |c| {
            let stats = &mut families[c.family as usize];
            stats.instances += 1;
            let l = self.h_letters(c.tau.iter().chain(c.left_core).chain(c.tau2));
            let r = self.h_letters(c.tau.iter().chain(c.right_core).chain(c.tau2));
            if l != r {
                stats.failures += 1;
                if first_failure.is_none() {
                    first_failure = Some(HRespectFailure {
                        instance: c.to_instance(),
                        left_h: l,
                        right_h: r,
                    });
                }
            }
            ControlFlow::Continue(())
        });
        HRespectReport {
            maxlen,
            hypotheses: self.hypotheses,
            families,
            first_failure,
        }
    }

    /// Rewrites `w` to a single Y-letter: first every Q-letter `a` is raised
    /// to `p*(p_!(a))` (which lies above `a`), then the leftmost raised letter
    /// is absorbed into its Y-neighbours by a Bare, LeadingY, TrailingY or
    /// InnerYY instance, until one letter remains.
    pub fn unit_chain(&self, w: &Word) -> Result<UnitChain, ChainFailure> {
        let q = self.q();
        let mut xs: Vec<Option<usize>> = Vec::new();
        let mut current: Vec<Letter> = Vec::new();
        for &(tag, v) in w.letters() {
            match tag {
                Tag::Y => {
                    xs.push(None);
                    current.push((tag, v));
                }
                Tag::Q => {
                    let x = self.p_dir[v];
                    let raised = self.p_inv[x];
                    if !q.lattice().leq(v, raised) {
                        return Err(ChainFailure::NotBelowRaised { word: w.clone() });
                    }
                    xs.push(Some(x));
                    current.push((tag, raised));
                }
            }
        }
        let raised = Word::new(current.clone()).expect("same shape as w");
        let mut steps = Vec::new();
        while let Some(i) = xs.iter().position(Option::is_some) {
            let x = xs[i].expect("found");
            let n = current.len();
            let (family, tau, params, tau2) = if n == 1 {
                (Family::Bare, &current[..0], vec![], &current[..0])
            } else if i == 0 {
                (Family::LeadingY, &current[..0], vec![current[1].1], &current[2..])
            } else if i == n - 1 {
                (Family::TrailingY, &current[..i - 1], vec![current[i - 1].1], &current[n..])
            } else {
                (
                    Family::InnerYY,
                    &current[..i - 1],
                    vec![current[i - 1].1, current[i + 1].1],
                    &current[i + 2..],
                )
            };
            let (left_core, right_core) = self.core(family, x, &params);
            let c = Candidate {
                family,
                x,
                params: &params,
                tau,
                tau2,
                left_core: &left_core,
                right_core: &right_core,
            };
            let inst = c.to_instance();
            if inst.left.letters() != current.as_slice() {
                return Err(ChainFailure::StepMismatch {
                    word: w.clone(),
                    step: steps.len(),
                });
            }
            if self.h_word(&inst.left) != self.h_word(&inst.right) {
                return Err(ChainFailure::StepChangesH {
                    word: w.clone(),
                    instance: Box::new(inst),
                });
            }
            // the consumed letters collapse into one Y-letter
            let (lo, hi) = match family {
                Family::Bare => (0, 1),
                Family::LeadingY => (0, 2),
                Family::TrailingY => (i - 1, i + 1),
                _ => (i - 1, i + 2),
            };
            xs.splice(lo..hi, [None]);
            current = inst.right.letters().to_vec();
            steps.push(ChainStep {
                family,
                before: inst.left,
                after: inst.right,
            });
        }
        let expected = self.h_word(w);
        let result = match current.as_slice() {
            [(Tag::Y, v)] => *v,
            _ => unreachable!("only Y-letters remain and adjacent letters alternate"),
        };
        if result != expected {
            return Err(ChainFailure::WrongResult {
                word: w.clone(),
                expected,
                got: result,
            });
        }
        Ok(UnitChain {
            word: w.clone(),
            raised,
            steps,
            result,
        })
    }

    /// All nonempty alternating words of length at most `maxlen`, shortest
    /// first, Y-starting before Q-starting.
    pub fn words_up_to(&self, maxlen: usize) -> Vec<Word> {
        let mut out = Vec::new();
        for len in 1..=maxlen {
            for start in [Tag::Y, Tag::Q] {
                for letters in self.flank_words(len, start) {
                    out.push(Word::new(letters).expect("alternating"));
                }
            }
        }
        out
    }

    /// Counit `h(π₁*(y)) = y` for every `y`, and a unit chain for every word
    /// of length at most `maxlen`. Up to `trace_limit` chains are kept.
    pub fn verify_adjunction_on_words(&self, maxlen: usize, trace_limit: usize) -> AdjunctionReport {
        let counit_failures: Vec<usize> = (0..self.y().size())
            .filter(|&v| self.h(&self.fp.pi1_star(v)) != v)
            .collect();
        let mut report = AdjunctionReport {
            maxlen,
            counit_checked: self.y().size(),
            counit_failures,
            words_checked: 0,
            steps: 0,
            traces: Vec::new(),
            failures: Vec::new(),
        };
        for w in self.words_up_to(maxlen) {
            report.words_checked += 1;
            match self.unit_chain(&w) {
                Ok(chain) => {
                    report.steps += chain.steps.len();
                    if report.traces.len() < trace_limit && !chain.steps.is_empty() {
                        report.traces.push(chain);
                    }
                }
                Err(e) => {
                    if report.failures.len() < trace_limit {
                        report.failures.push(e);
                    }
                }
            }
        }
        report
    }

    /// `h(π₂*(a)) = f*(p_!(a))` for every `a`.
    pub fn verify_beck_chevalley(&self) -> BeckChevalleyReport {
        let mut failure = None;
        for a in 0..self.q().size() {
            let expected = self.f_inv[self.p_dir[a]];
            let got = self.h_word(&Word::q(a));
            if got != expected && failure.is_none() {
                failure = Some(BeckChevalleyFailure { a, expected, got });
            }
        }
        BeckChevalleyReport {
            checked: self.q().size(),
            failure,
        }
    }

    /// FR1 and FR2 for `h` against `π₁*`:
    /// `h(w·π₁*(y)) = h(w)y` and `h(π₁*(y)·w) = yh(w)` for words of length
    /// at most `maxlen`; and `h(u·π₁*(y)·v) = h(u) y h(v)` for the sixteen
    /// shapes `u = [τ ⊗] z`, `v = z' [⊗ τ']` with `z, z'` of either tag,
    /// flanks present or absent and at most `maxlen - 2` flank letters.
    pub fn verify_pullback_frobenius(&self, maxlen: usize) -> FrobeniusCasesReport {
        let y = self.y();
        let words = self.words_up_to(maxlen);
        let mut one_sided = OneSidedStats::default();
        for w in &words {
            let hw = self.h_word(w);
            for v in 0..y.size() {
                let right = self.fp.word_multiply(w, &Word::y(v));
                let left = self.fp.word_multiply(&Word::y(v), w);
                one_sided.checked += 2;
                if self.h_word(&right) != y.mul(hw, v) {
                    one_sided.failures += 1;
                    one_sided.first_failure.get_or_insert((w.clone(), v, Side::Right));
                }
                if self.h_word(&left) != y.mul(v, hw) {
                    one_sided.failures += 1;
                    one_sided.first_failure.get_or_insert((w.clone(), v, Side::Left));
                }
            }
        }

        let budget = maxlen.saturating_sub(2);
        let mut shapes = Vec::new();
        for left_flank in [false, true] {
            for z in [Tag::Y, Tag::Q] {
                for z2 in [Tag::Y, Tag::Q] {
                    for right_flank in [false, true] {
                        let shape = FrobeniusShape {
                            left_flank,
                            z,
                            z2,
                            right_flank,
                        };
                        shapes.push(self.check_shape(shape, budget));
                    }
                }
            }
        }
        FrobeniusCasesReport {
            maxlen,
            one_sided,
            shapes,
        }
    }

    fn check_shape(&self, shape: FrobeniusShape, budget: usize) -> ShapeStats {
        let y = self.y();
        let mut stats = ShapeStats {
            shape,
            instances: 0,
            failures: 0,
            first_failure: None,
        };
        let lefts: Vec<Vec<Letter>> = if shape.left_flank {
            (1..=budget)
                .flat_map(|l| {
                    let end = shape.z.other();
                    self.flank_words(l, if l % 2 == 1 { end } else { end.other() })
                })
                .collect()
        } else {
            vec![Vec::new()]
        };
        let rights: Vec<Vec<Letter>> = if shape.right_flank {
            (1..=budget)
                .flat_map(|l| self.flank_words(l, shape.z2.other()))
                .collect()
        } else {
            vec![Vec::new()]
        };
        for tau in &lefts {
            for tau2 in &rights {
                if tau.len() + tau2.len() > budget {
                    continue;
                }
                for zv in 0..self.size_of(shape.z) {
                    let mut u = tau.clone();
                    u.push((shape.z, zv));
                    let u = Word::new(u).expect("flank ends opposite z");
                    let hu = self.h_word(&u);
                    for zv2 in 0..self.size_of(shape.z2) {
                        let mut v = vec![(shape.z2, zv2)];
                        v.extend_from_slice(tau2);
                        let v = Word::new(v).expect("flank starts opposite z'");
                        let hv = self.h_word(&v);
                        for yv in 0..y.size() {
                            stats.instances += 1;
                            let w = self.fp.word_multiply(&self.fp.word_multiply(&u, &Word::y(yv)), &v);
                            let lhs = self.h_word(&w);
                            let rhs = y.mul(y.mul(hu, yv), hv);
                            if lhs != rhs {
                                stats.failures += 1;
                                stats.first_failure.get_or_insert((u.clone(), yv, v.clone()));
                            }
                        }
                    }
                }
            }
        }
        stats
    }
}

/// A relation instance during enumeration; letters are borrowed.
#[derive(Debug)]
pub struct Candidate<'a> {
    pub family: Family,
    pub x: usize,
    pub params: &'a [usize],
    tau: &'a [Letter],
    tau2: &'a [Letter],
    left_core: &'a [Letter],
    right_core: &'a [Letter],
}

impl Candidate<'_> {
    pub fn to_instance(&self) -> RelationInstance {
        let side = |core: &[Letter]| {
            Word::new(self.tau.iter().chain(core).chain(self.tau2).copied().collect())
                .expect("flanks are chosen to alternate with the core")
        };
        let flank = |f: &[Letter]| (!f.is_empty()).then(|| Word::new(f.to_vec()).expect("alternating"));
        RelationInstance {
            family: self.family,
            hypothesis: self.family.hypothesis(),
            x: self.x,
            params: self.params.to_vec(),
            left_flank: flank(self.tau),
            right_flank: flank(self.tau2),
            left: side(self.left_core),
            right: side(self.right_core),
        }
    }
}

/// One generating relation `left ~ right` of the pullback.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationInstance {
    pub family: Family,
    pub hypothesis: Hypothesis,
    pub x: usize,
    /// The free letters `a, a'` / `y, y'` in pattern order.
    pub params: Vec<usize>,
    pub left_flank: Option<Word>,
    pub right_flank: Option<Word>,
    pub left: Word,
    pub right: Word,
}

impl RelationInstance {
    /// Both sides as graded elements; fails when a side leaves the
    /// truncation.
    pub fn graded(&self, ctx: &PullbackContext) -> Result<(GradedElement, GradedElement), FreeProductError> {
        let fp = ctx.free_product();
        Ok((fp.embed(&self.left)?, fp.embed(&self.right)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyStats {
    pub family: Family,
    pub hypothesis: Hypothesis,
    pub instances: u64,
    pub failures: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HRespectFailure {
    pub instance: RelationInstance,
    pub left_h: usize,
    pub right_h: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HRespectReport {
    pub maxlen: usize,
    pub hypotheses: Option<Hypotheses>,
    pub families: Vec<FamilyStats>,
    pub first_failure: Option<HRespectFailure>,
}

impl HRespectReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }

    pub fn instances(&self) -> u64 {
        self.families.iter().map(|f| f.instances).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub family: Family,
    pub before: Word,
    pub after: Word,
}

/// `word ≤ raised`, then `raised` rewritten step by step to `(result)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitChain {
    pub word: Word,
    pub raised: Word,
    pub steps: Vec<ChainStep>,
    pub result: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Error)]
pub enum ChainFailure {
    #[error("a Q-letter of {word:?} is not below p*(p_!(a))")]
    NotBelowRaised { word: Word },
    #[error("step {step} for {word:?} does not match a relation instance")]
    StepMismatch { word: Word, step: usize },
    #[error("a rewrite step for {word:?} changes h")]
    StepChangesH {
        word: Word,
        instance: Box<RelationInstance>,
    },
    #[error("chain for {word:?} ends at {got}, h gives {expected}")]
    WrongResult {
        word: Word,
        expected: usize,
        got: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionReport {
    pub maxlen: usize,
    pub counit_checked: usize,
    pub counit_failures: Vec<usize>,
    pub words_checked: usize,
    pub steps: usize,
    pub traces: Vec<UnitChain>,
    pub failures: Vec<ChainFailure>,
}

impl AdjunctionReport {
    pub fn passed(&self) -> bool {
        self.counit_failures.is_empty() && self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BeckChevalleyFailure {
    pub a: usize,
    pub expected: usize,
    pub got: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BeckChevalleyReport {
    pub checked: usize,
    pub failure: Option<BeckChevalleyFailure>,
}

impl BeckChevalleyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OneSidedStats {
    pub checked: u64,
    pub failures: u64,
    /// Word, `y`, and the side `π₁*(y)` is multiplied on.
    pub first_failure: Option<(Word, usize, Side)>,
}

/// `[τ ⊗] z · π₁*(y) · z' [⊗ τ']`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusShape {
    pub left_flank: bool,
    pub z: Tag,
    pub z2: Tag,
    pub right_flank: bool,
}

impl std::fmt::Display for FrobeniusShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let letter = |t: Tag, primed: bool| match (t, primed) {
            (Tag::Y, false) => "y₀",
            (Tag::Y, true) => "y₁",
            (Tag::Q, false) => "a",
            (Tag::Q, true) => "a'",
        };
        if self.left_flank {
            write!(f, "τ ⊗ ")?;
        }
        write!(f, "{} · π₁*(y) · {}", letter(self.z, false), letter(self.z2, true))?;
        if self.right_flank {
            write!(f, " ⊗ τ'")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeStats {
    pub shape: FrobeniusShape,
    pub instances: u64,
    pub failures: u64,
    pub first_failure: Option<(Word, usize, Word)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusCasesReport {
    pub maxlen: usize,
    pub one_sided: OneSidedStats,
    pub shapes: Vec<ShapeStats>,
}

impl FrobeniusCasesReport {
    /// Every check passed and every shape was exercised.
    pub fn passed(&self) -> bool {
        self.one_sided.failures == 0
            && self.shapes.iter().all(|s| s.failures == 0 && s.instances > 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{group_powerset_quantale, omega_support_map, rel_quantale, FiniteGroupoid};

    /// p: P(Z/2) → Ω the support map, f: Rel(2) → Ω with f*(1) = Δ.
    fn diagonal_context() -> PullbackContext {
        let q = Arc::new(group_powerset_quantale(&FiniteGroupoid::cyclic(2)).unwrap());
        let p = omega_support_map(q).unwrap();
        let y = Arc::new(rel_quantale(2).unwrap());
        let f = FiniteMap::from_table(y, p.target().clone(), vec![0, 0b1001]).unwrap();
        PullbackContext::new(&p, &f, 8, &CheckConfig::default()).unwrap()
    }

    #[test]
    fn h_respects_every_family() {
        let ctx = diagonal_context();
        let report = ctx.verify_h_respects(2);
        assert!(report.passed(), "{:?}", report.first_failure);
        assert!(report.families.iter().all(|f| f.instances > 0));
    }

    #[test]
    fn instance_shapes() {
        let ctx = diagonal_context();
        let all = ctx.pullback_relation_instances(1);
        let bare: Vec<_> = all.iter().filter(|i| i.family == Family::Bare).collect();
        assert_eq!(bare.len(), 2);
        assert_eq!(bare[1].left, Word::q(3));
        assert_eq!(bare[1].right, Word::y(0b1001));
        // LeadingQ with empty τ: p*(1){g} ~ Δ ⊗ {g}
        let i = all
            .iter()
            .find(|i| i.family == Family::LeadingQ && i.x == 1 && i.params == [2] && i.right_flank.is_none())
            .unwrap();
        assert_eq!(i.left, Word::q(3));
        assert_eq!(i.right, Word::alternating(Tag::Y, [0b1001, 2]).unwrap());
        for i in &all {
            let (l, r) = i.graded(&ctx).unwrap();
            assert_eq!(ctx.h(&l), ctx.h(&r));
        }
    }

    #[test]
    fn unit_chain_example() {
        let ctx = diagonal_context();
        let w = Word::alternating(Tag::Q, [2, 0b0110]).unwrap();
        let chain = ctx.unit_chain(&w).unwrap();
        assert_eq!(chain.raised, Word::alternating(Tag::Q, [3, 0b0110]).unwrap());
        assert_eq!(chain.steps.len(), 1);
        assert_eq!(chain.steps[0].family, Family::LeadingY);
        // Δ ∘ swap = swap
        assert_eq!(chain.result, 0b0110);
    }

    #[test]
    fn adjunction_beck_chevalley_frobenius() {
        let ctx = diagonal_context();
        let adj = ctx.verify_adjunction_on_words(3, 8);
        assert!(adj.passed(), "{:?}", adj.failures);
        assert!(!adj.traces.is_empty());
        assert!(ctx.verify_beck_chevalley().passed());
        let fr = ctx.verify_pullback_frobenius(4);
        assert!(fr.passed(), "{fr:?}");
        assert_eq!(fr.shapes.len(), 16);
    }

    #[test]
    fn hypotheses_are_enforced() {
        let omega = Arc::new(FiniteInvQuantale::omega());
        let three = Arc::new(FiniteInvQuantale::from_frame(Arc::new(
            crate::suplattice::FiniteSupLattice::chain(3),
        )));
        // the frame surjection 0 ↦ 0, 1 ↦ 1 from Ω into the 3-chain
        let p = FiniteMap::from_table(three.clone(), omega.clone(), vec![0, 2]).unwrap();
        let f = FiniteMap::identity(omega.clone());
        assert!(PullbackContext::new(&p, &f, 8, &CheckConfig::default()).is_ok());

        // closed point of the Sierpinski space: semiopen but neither FR1
        // nor surjective
        let p = crate::catalog::locale::sierpinski_closed_point();
        let f = FiniteMap::identity(p.target().clone());
        assert_eq!(
            PullbackContext::new(&p, &f, 8, &CheckConfig::default()).unwrap_err(),
            ContextError::Hypotheses(Hypotheses {
                fr1: false,
                fr2: false,
                surjective: false
            })
        );
        assert!(PullbackContext::unchecked(&p, &f, 8).is_ok());
        let g = FiniteMap::identity(omega);
        assert_eq!(
            PullbackContext::unchecked(&p, &g, 8).unwrap_err(),
            ContextError::TargetMismatch
        );
    }
}
