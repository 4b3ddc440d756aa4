//! Involutive quantales and their maps.
//!
//! Two carrier kinds share one interface, [`EffectiveQuantale`]:
//! [`FiniteInvQuantale`] holds full tables and is checked exhaustively, while
//! oracle carriers (subspace lattices of finite-dimensional algebras, see
//! [`crate::catalog`]) are infinite and are checked on seeded samples.
//!
//! A map `p: Q -> X` is stored as its inverse image `p*: X -> Q`, optionally
//! together with a direct image `p_!: Q -> X`.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::suplattice::FiniteSupLattice;

pub type SampleRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The oracle interface every carrier provides.
pub trait EffectiveQuantale: Send + Sync {
    /// Canonical handle: equal elements compare equal.
    type Elem: Clone + Eq + Hash + fmt::Debug + Send + Sync + Serialize;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn join(&self, elems: &[Self::Elem]) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn star(&self, a: &Self::Elem) -> Self::Elem;
    fn bottom(&self) -> Self::Elem;
    fn unit(&self) -> Option<Self::Elem>;
    fn sample(&self, rng: &mut SampleRng) -> Self::Elem;

    /// Small structured elements every sampled check includes.
    fn probes(&self) -> Vec<Self::Elem> {
        Vec::new()
    }

    /// All elements, for finite carriers.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    fn as_finite(&self) -> Option<&FiniteInvQuantale> {
        None
    }

    fn join2(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.join(&[a.clone(), b.clone()])
    }
}

/// Budget for the law and Frobenius checkers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CheckConfig {
    pub seed: u64,
    /// Random tuples drawn per sampled check.
    pub samples: usize,
    /// Exhaustive checks above this many evaluations fall back to sampling.
    pub exhaustive_cap: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 0,
            samples: 200,
            exhaustive_cap: 1_000_000,
        }
    }
}

impl CheckConfig {
    pub fn with_seed(seed: u64) -> Self {
        CheckConfig {
            seed,
            ..Self::default()
        }
    }
}

/// How much of the domain a check covered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Coverage {
    Exhaustive { evaluations: u64 },
    Sampled {
        seed: u64,
        samples: usize,
        probes: usize,
        evaluations: u64,
    },
}

impl Coverage {
    pub fn is_exhaustive(&self) -> bool {
        matches!(self, Coverage::Exhaustive { .. })
    }
}

/// Elements of a carrier to range over in a check: every element when the
/// carrier is finite and small enough, probes plus seeded samples otherwise.
pub(crate) struct Domain<E> {
    pub(crate) elems: Vec<E>,
    pub(crate) exhaustive: bool,
    pub(crate) probes: usize,
}

pub(crate) fn domain<Q: EffectiveQuantale>(
    q: &Q,
    limit: usize,
    rng: &mut SampleRng,
    samples: usize,
) -> Domain<Q::Elem> {
    if let Some(all) = q.elements() {
        if all.len() <= limit {
            return Domain {
                elems: all,
                exhaustive: true,
                probes: 0,
            };
        }
    }
    let mut elems = q.probes();
    let probes = elems.len();
    elems.extend((0..samples).map(|_| q.sample(rng)));
    Domain {
        elems,
        exhaustive: false,
        probes,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    BottomAbsorbing,
    Involution,
    InvolutionMonotone,
    InvolutionJoin,
    LeftDistributive,
    RightDistributive,
    InvolutionAntiMultiplicative,
    Associative,
    Unit,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::BottomAbsorbing => "a·0 = 0·a = 0",
            Axiom::Involution => "a** = a",
            Axiom::InvolutionMonotone => "a <= b implies a* <= b*",
            Axiom::InvolutionJoin => "(a ∨ b)* = a* ∨ b*",
            Axiom::LeftDistributive => "a(b ∨ c) = ab ∨ ac",
            Axiom::RightDistributive => "(b ∨ c)a = ba ∨ ca",
            Axiom::InvolutionAntiMultiplicative => "(ab)* = b*a*",
            Axiom::Associative => "(ab)c = a(bc)",
            Axiom::Unit => "ea = ae = a",
        };
        f.write_str(s)
    }
}

/// A failed quantale law with the elements that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Error)]
#[error("{axiom} fails at {witness:?}")]
pub struct LawViolation<E: fmt::Debug> {
    pub axiom: Axiom,
    pub witness: Vec<E>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum QuantaleError {
    #[error("table has {got} entries, expected {expected}")]
    TableShape { expected: usize, got: usize },
    #[error("table entry {0} is not an element")]
    OutOfRange(usize),
    #[error("unit {0} is not an element")]
    BadUnit(usize),
    #[error(transparent)]
    Law(#[from] LawViolation<usize>),
}

/// An involutive quantale given by full tables over a finite lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteInvQuantale {
    lattice: Arc<FiniteSupLattice>,
    mult: Vec<usize>,
    inv: Vec<usize>,
    unit: Option<usize>,
}

impl FiniteInvQuantale {
    /// Checks table shapes only; call [`validate`](Self::validate) for the
    /// laws.
    pub fn new(
        lattice: Arc<FiniteSupLattice>,
        mult: Vec<usize>,
        inv: Vec<usize>,
        unit: Option<usize>,
    ) -> Result<Self, QuantaleError> {
        let n = lattice.size();
        if mult.len() != n * n {
            return Err(QuantaleError::TableShape {
                expected: n * n,
                got: mult.len(),
            });
        }
        if inv.len() != n {
            return Err(QuantaleError::TableShape {
                expected: n,
                got: inv.len(),
            });
        }
        if let Some(&bad) = mult.iter().chain(&inv).find(|&&v| v >= n) {
            return Err(QuantaleError::OutOfRange(bad));
        }
        if let Some(u) = unit {
            if u >= n {
                return Err(QuantaleError::BadUnit(u));
            }
        }
        Ok(FiniteInvQuantale {
            lattice,
            mult,
            inv,
            unit,
        })
    }

    /// [`new`](Self::new) followed by [`validate`](Self::validate).
    pub fn validated(
        lattice: Arc<FiniteSupLattice>,
        mult: Vec<usize>,
        inv: Vec<usize>,
        unit: Option<usize>,
    ) -> Result<Self, QuantaleError> {
        let q = Self::new(lattice, mult, inv, unit)?;
        q.validate()?;
        Ok(q)
    }

    /// Tabulates `mul` and `inv` over the lattice without validating.
    pub fn from_fn(
        lattice: Arc<FiniteSupLattice>,
        mul: impl Fn(usize, usize) -> usize,
        inv: impl Fn(usize) -> usize,
        unit: Option<usize>,
    ) -> Self {
        let n = lattice.size();
        let mut mult = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                mult.push(mul(a, b));
            }
        }
        let inv = (0..n).map(inv).collect();
        FiniteInvQuantale {
            lattice,
            mult,
            inv,
            unit,
        }
    }

    /// The two-element frame `{0 < 1}` with multiplication = meet.
    pub fn omega() -> Self {
        let l = Arc::new(FiniteSupLattice::omega());
        Self::from_fn(l, |a, b| a & b, |a| a, Some(1))
    }

    /// The one-element quantale.
    pub fn trivial() -> Self {
        let l = Arc::new(FiniteSupLattice::chain(1));
        Self::from_fn(l, |_, _| 0, |_| 0, Some(0))
    }

    /// A frame viewed as a quantale: multiplication is meet, involution is
    /// the identity, the unit is top.
    pub fn from_frame(lattice: Arc<FiniteSupLattice>) -> Self {
        let l = lattice.clone();
        let top = lattice.top();
        Self::from_fn(lattice, move |a, b| l.meet2(a, b), |a| a, Some(top))
    }

    /// Componentwise product; `(a, b)` has index `a * right.size() + b`.
    pub fn product(left: &Self, right: &Self) -> Self {
        let m = right.size();
        let lattice = Arc::new(FiniteSupLattice::product(&left.lattice, &right.lattice));
        let unit = match (left.unit, right.unit) {
            (Some(u), Some(v)) => Some(u * m + v),
            _ => None,
        };
        Self::from_fn(
            lattice,
            |a, b| left.mul(a / m, b / m) * m + right.mul(a % m, b % m),
            |a| left.star(a / m) * m + right.star(a % m),
            unit,
        )
    }

    pub fn lattice(&self) -> &Arc<FiniteSupLattice> {
        &self.lattice
    }

    pub fn size(&self) -> usize {
        self.lattice.size()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.size() + b]
    }

    #[inline]
    pub fn star(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn mult_table(&self) -> &[usize] {
        &self.mult
    }

    pub fn inv_table(&self) -> &[usize] {
        &self.inv
    }

    /// Searches the carrier for a two-sided unit.
    pub fn find_unit(&self) -> Option<usize> {
        let n = self.size();
        (0..n).find(|&e| (0..n).all(|a| self.mul(e, a) == a && self.mul(a, e) == a))
    }

    /// Fills in the unit by search when none was declared.
    pub fn with_discovered_unit(mut self) -> Self {
        if self.unit.is_none() {
            self.unit = self.find_unit();
        }
        self
    }

    /// A copy with one multiplication entry replaced; used by mutation tests.
    pub fn with_mult_entry(&self, a: usize, b: usize, value: usize) -> Self {
        let mut q = self.clone();
        let n = q.size();
        q.mult[a * n + b] = value;
        q
    }

    /// Multiplication is meet and the involution is the identity.
    pub fn is_locale(&self) -> bool {
        let l = &self.lattice;
        l.elements().all(|a| self.inv[a] == a)
            && l.elements()
                .all(|a| l.elements().all(|b| self.mul(a, b) == l.meet2(a, b)))
    }

    /// Exhaustive check of every quantale law; the first failing axiom in
    /// a fixed order is reported with its lexicographically least witness.
    pub fn validate(&self) -> Result<(), LawViolation<usize>> {
        let l = &*self.lattice;
        let n = self.size();
        let bot = l.bottom();
        let fail = |axiom, witness: Vec<usize>| Err(LawViolation { axiom, witness });

        for a in 0..n {
            if self.mul(a, bot) != bot || self.mul(bot, a) != bot {
                return fail(Axiom::BottomAbsorbing, vec![a]);
            }
        }
        for a in 0..n {
            if self.star(self.star(a)) != a {
                return fail(Axiom::Involution, vec![a]);
            }
        }
        for a in 0..n {
            for b in 0..n {
                if l.leq(a, b) && !l.leq(self.star(a), self.star(b)) {
                    return fail(Axiom::InvolutionMonotone, vec![a, b]);
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.star(l.join2(a, b)) != l.join2(self.star(a), self.star(b)) {
                    return fail(Axiom::InvolutionJoin, vec![a, b]);
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let bc = l.join2(b, c);
                    if self.mul(a, bc) != l.join2(self.mul(a, b), self.mul(a, c)) {
                        return fail(Axiom::LeftDistributive, vec![a, b, c]);
                    }
                    if self.mul(bc, a) != l.join2(self.mul(b, a), self.mul(c, a)) {
                        return fail(Axiom::RightDistributive, vec![a, b, c]);
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.star(self.mul(a, b)) != self.mul(self.star(b), self.star(a)) {
                    return fail(Axiom::InvolutionAntiMultiplicative, vec![a, b]);
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return fail(Axiom::Associative, vec![a, b, c]);
                    }
                }
            }
        }
        if let Some(e) = self.unit {
            for a in 0..n {
                if self.mul(e, a) != a || self.mul(a, e) != a {
                    return fail(Axiom::Unit, vec![e, a]);
                }
            }
        }
        Ok(())
    }

    /// Re-evaluates one axiom at a reported witness; `true` when it fails
    /// there. Malformed witnesses count as not failing.
    pub fn fails_at(&self, axiom: Axiom, witness: &[usize]) -> bool {
        let l = &*self.lattice;
        let n = self.size();
        if witness.iter().any(|&w| w >= n) {
            return false;
        }
        match (axiom, witness) {
            (Axiom::BottomAbsorbing, &[a]) => {
                self.mul(a, l.bottom()) != l.bottom() || self.mul(l.bottom(), a) != l.bottom()
            }
            (Axiom::Involution, &[a]) => self.star(self.star(a)) != a,
            (Axiom::InvolutionMonotone, &[a, b]) => {
                l.leq(a, b) && !l.leq(self.star(a), self.star(b))
            }
            (Axiom::InvolutionJoin, &[a, b]) => {
                self.star(l.join2(a, b)) != l.join2(self.star(a), self.star(b))
            }
            (Axiom::LeftDistributive, &[a, b, c]) => {
                self.mul(a, l.join2(b, c)) != l.join2(self.mul(a, b), self.mul(a, c))
            }
            (Axiom::RightDistributive, &[a, b, c]) => {
                self.mul(l.join2(b, c), a) != l.join2(self.mul(b, a), self.mul(c, a))
            }
            (Axiom::InvolutionAntiMultiplicative, &[a, b]) => {
                self.star(self.mul(a, b)) != self.mul(self.star(b), self.star(a))
            }
            (Axiom::Associative, &[a, b, c]) => {
                self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
            }
            (Axiom::Unit, &[e, a]) => {
                self.unit == Some(e) && (self.mul(e, a) != a || self.mul(a, e) != a)
            }
            _ => false,
        }
    }
}

impl EffectiveQuantale for FiniteInvQuantale {
    type Elem = usize;

    fn leq(&self, a: &usize, b: &usize) -> bool {
        self.lattice.leq(*a, *b)
    }

    fn join(&self, elems: &[usize]) -> usize {
        self.lattice.join(elems.iter().copied())
    }

    fn join2(&self, a: &usize, b: &usize) -> usize {
        self.lattice.join2(*a, *b)
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        FiniteInvQuantale::mul(self, *a, *b)
    }

    fn star(&self, a: &usize) -> usize {
        self.inv[*a]
    }

    fn bottom(&self) -> usize {
        self.lattice.bottom()
    }

    fn unit(&self) -> Option<usize> {
        self.unit
    }

    fn sample(&self, rng: &mut SampleRng) -> usize {
        rng.gen_range(0..self.size())
    }

    fn elements(&self) -> Option<Vec<usize>> {
        Some(self.lattice.elements().collect())
    }

    fn as_finite(&self) -> Option<&FiniteInvQuantale> {
        Some(self)
    }
}

/// Law check over seeded random triples (plus probes) for any carrier.
pub fn check_laws_sampled<Q: EffectiveQuantale>(
    q: &Q,
    cfg: &CheckConfig,
) -> Result<Coverage, LawViolation<Q::Elem>> {
    let mut rng = seeded_rng(cfg.seed);
    let probes = q.probes();
    let mut triples: Vec<[Q::Elem; 3]> = Vec::new();
    for a in &probes {
        for b in &probes {
            triples.push([a.clone(), b.clone(), q.bottom()]);
        }
    }
    for _ in 0..cfg.samples {
        triples.push([q.sample(&mut rng), q.sample(&mut rng), q.sample(&mut rng)]);
    }
    let fail = |axiom, witness: &[Q::Elem]| {
        Err(LawViolation {
            axiom,
            witness: witness.to_vec(),
        })
    };
    let bot = q.bottom();
    for [a, b, c] in &triples {
        if q.mul(a, &bot) != bot || q.mul(&bot, a) != bot {
            return fail(Axiom::BottomAbsorbing, &[a.clone()]);
        }
        if q.star(&q.star(a)) != *a {
            return fail(Axiom::Involution, &[a.clone()]);
        }
        if q.leq(a, b) && !q.leq(&q.star(a), &q.star(b)) {
            return fail(Axiom::InvolutionMonotone, &[a.clone(), b.clone()]);
        }
        if q.star(&q.join2(a, b)) != q.join2(&q.star(a), &q.star(b)) {
            return fail(Axiom::InvolutionJoin, &[a.clone(), b.clone()]);
        }
        let bc = q.join2(b, c);
        if q.mul(a, &bc) != q.join2(&q.mul(a, b), &q.mul(a, c)) {
            return fail(Axiom::LeftDistributive, &[a.clone(), b.clone(), c.clone()]);
        }
        if q.mul(&bc, a) != q.join2(&q.mul(b, a), &q.mul(c, a)) {
            return fail(Axiom::RightDistributive, &[a.clone(), b.clone(), c.clone()]);
        }
        if q.star(&q.mul(a, b)) != q.mul(&q.star(b), &q.star(a)) {
            return fail(Axiom::InvolutionAntiMultiplicative, &[a.clone(), b.clone()]);
        }
        if q.mul(&q.mul(a, b), c) != q.mul(a, &q.mul(b, c)) {
            return fail(Axiom::Associative, &[a.clone(), b.clone(), c.clone()]);
        }
        if let Some(e) = q.unit() {
            if q.mul(&e, a) != *a || q.mul(a, &e) != *a {
                return fail(Axiom::Unit, &[e, a.clone()]);
            }
        }
    }
    Ok(Coverage::Sampled {
        seed: cfg.seed,
        samples: cfg.samples,
        probes: probes.len(),
        evaluations: triples.len() as u64,
    })
}

pub type InverseImage<Q, X> = Arc<
    dyn Fn(&<X as EffectiveQuantale>::Elem) -> <Q as EffectiveQuantale>::Elem + Send + Sync,
>;
pub type DirectImage<Q, X> = Arc<
    dyn Fn(&<Q as EffectiveQuantale>::Elem) -> <X as EffectiveQuantale>::Elem + Send + Sync,
>;

/// A map `p: Q -> X` of involutive quantales, i.e. a homomorphism
/// `p*: X -> Q`, optionally with its direct image `p_!: Q -> X`.
pub struct QuantaleMap<Q: EffectiveQuantale, X: EffectiveQuantale> {
    source: Arc<Q>,
    target: Arc<X>,
    inverse: InverseImage<Q, X>,
    direct: Option<DirectImage<Q, X>>,
}

impl<Q: EffectiveQuantale, X: EffectiveQuantale> Clone for QuantaleMap<Q, X> {
    fn clone(&self) -> Self {
        QuantaleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            inverse: self.inverse.clone(),
            direct: self.direct.clone(),
        }
    }
}

impl<Q: EffectiveQuantale, X: EffectiveQuantale> fmt::Debug for QuantaleMap<Q, X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuantaleMap")
            .field("has_direct_image", &self.direct.is_some())
            .finish_non_exhaustive()
    }
}

/// Both carriers finite.
pub type FiniteMap = QuantaleMap<FiniteInvQuantale, FiniteInvQuantale>;

impl<Q: EffectiveQuantale, X: EffectiveQuantale> QuantaleMap<Q, X> {
    pub fn new(
        source: Arc<Q>,
        target: Arc<X>,
        inverse: impl Fn(&X::Elem) -> Q::Elem + Send + Sync + 'static,
    ) -> Self {
        QuantaleMap {
            source,
            target,
            inverse: Arc::new(inverse),
            direct: None,
        }
    }

    pub fn with_direct_image(
        mut self,
        direct: impl Fn(&Q::Elem) -> X::Elem + Send + Sync + 'static,
    ) -> Self {
        self.direct = Some(Arc::new(direct));
        self
    }

    pub fn source(&self) -> &Arc<Q> {
        &self.source
    }

    pub fn target(&self) -> &Arc<X> {
        &self.target
    }

    pub fn inverse_image(&self, x: &X::Elem) -> Q::Elem {
        (self.inverse)(x)
    }

    pub fn direct_image(&self, a: &Q::Elem) -> Option<X::Elem> {
        self.direct.as_ref().map(|d| d(a))
    }

    pub fn has_direct_image(&self) -> bool {
        self.direct.is_some()
    }

    pub fn inverse_fn(&self) -> &InverseImage<Q, X> {
        &self.inverse
    }

    pub fn direct_fn(&self) -> Option<&DirectImage<Q, X>> {
        self.direct.as_ref()
    }
}

impl<Q: EffectiveQuantale + 'static> QuantaleMap<Q, Q> {
    pub fn identity(q: Arc<Q>) -> Self {
        QuantaleMap::new(q.clone(), q, |x: &Q::Elem| x.clone())
            .with_direct_image(|a: &Q::Elem| a.clone())
    }
}

impl FiniteMap {
    /// `table[x]` is `p*(x)` for every element `x` of the target.
    pub fn from_table(
        source: Arc<FiniteInvQuantale>,
        target: Arc<FiniteInvQuantale>,
        table: Vec<usize>,
    ) -> Result<Self, QuantaleError> {
        if table.len() != target.size() {
            return Err(QuantaleError::TableShape {
                expected: target.size(),
                got: table.len(),
            });
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= source.size()) {
            return Err(QuantaleError::OutOfRange(bad));
        }
        Ok(QuantaleMap::new(source, target, move |x: &usize| table[*x]))
    }

    pub fn with_direct_table(self, table: Vec<usize>) -> Self {
        self.with_direct_image(move |a: &usize| table[*a])
    }

    pub fn inverse_table(&self) -> Vec<usize> {
        (0..self.target.size()).map(|x| (self.inverse)(&x)).collect()
    }

    pub fn direct_table(&self) -> Option<Vec<usize>> {
        let d = self.direct.as_ref()?;
        Some((0..self.source.size()).map(|a| d(&a)).collect())
    }
}

/// `p` after `f`: inverse images compose in reverse order, direct images in
/// the same order when both exist.
pub fn compose_maps<R, Q, X>(p: &QuantaleMap<Q, X>, f: &QuantaleMap<R, Q>) -> QuantaleMap<R, X>
where
    R: EffectiveQuantale + 'static,
    Q: EffectiveQuantale + 'static,
    X: EffectiveQuantale + 'static,
{
    let p_inv = p.inverse.clone();
    let f_inv = f.inverse.clone();
    let mut out = QuantaleMap::new(f.source.clone(), p.target.clone(), move |x: &X::Elem| {
        f_inv(&p_inv(x))
    });
    if let (Some(pd), Some(fd)) = (p.direct.clone(), f.direct.clone()) {
        out = out.with_direct_image(move |a: &R::Elem| pd(&fd(a)));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HomLaw {
    Bottom,
    Join,
    Multiplication,
    Involution,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Error)]
#[error("inverse image does not preserve {law:?} at {witness:?}")]
pub struct HomViolation<E: fmt::Debug> {
    pub law: HomLaw,
    pub witness: Vec<E>,
}

/// Re-evaluates one homomorphism law at a reported witness.
pub fn hom_fails_at<Q: EffectiveQuantale, X: EffectiveQuantale>(
    map: &QuantaleMap<Q, X>,
    law: HomLaw,
    witness: &[X::Elem],
) -> bool {
    let (q, x) = (&*map.source, &*map.target);
    let p = |e: &X::Elem| map.inverse_image(e);
    match (law, witness) {
        (HomLaw::Bottom, [b]) => *b == x.bottom() && p(b) != q.bottom(),
        (HomLaw::Join, [a, b]) => p(&x.join2(a, b)) != q.join2(&p(a), &p(b)),
        (HomLaw::Multiplication, [a, b]) => p(&x.mul(a, b)) != q.mul(&p(a), &p(b)),
        (HomLaw::Involution, [a]) => p(&x.star(a)) != q.star(&p(a)),
        _ => false,
    }
}

/// Checks that `p*` preserves bottom, binary joins, multiplication and
/// involution: exhaustively over a finite target, on seeded samples
/// otherwise.
pub fn validate_hom<Q: EffectiveQuantale, X: EffectiveQuantale>(
    map: &QuantaleMap<Q, X>,
    cfg: &CheckConfig,
) -> Result<Coverage, HomViolation<X::Elem>> {
    let (q, x) = (&*map.source, &*map.target);
    let mut rng = seeded_rng(cfg.seed);
    let limit = (cfg.exhaustive_cap as f64).sqrt() as usize;
    let dom = domain(x, limit, &mut rng, cfg.samples);
    let image: Vec<Q::Elem> = dom.elems.iter().map(|e| map.inverse_image(e)).collect();
    let fail = |law, witness: Vec<X::Elem>| Err(HomViolation { law, witness });

    if map.inverse_image(&x.bottom()) != q.bottom() {
        return fail(HomLaw::Bottom, vec![x.bottom()]);
    }
    let n = dom.elems.len();
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (&dom.elems[i], &dom.elems[j]);
            if map.inverse_image(&x.join2(a, b)) != q.join2(&image[i], &image[j]) {
                return fail(HomLaw::Join, vec![a.clone(), b.clone()]);
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (&dom.elems[i], &dom.elems[j]);
            if map.inverse_image(&x.mul(a, b)) != q.mul(&image[i], &image[j]) {
                return fail(HomLaw::Multiplication, vec![a.clone(), b.clone()]);
            }
        }
    }
    for (i, a) in dom.elems.iter().enumerate() {
        if map.inverse_image(&x.star(a)) != q.star(&image[i]) {
            return fail(HomLaw::Involution, vec![a.clone()]);
        }
    }
    let evaluations = (2 * n * n + n + 1) as u64;
    Ok(if dom.exhaustive {
        Coverage::Exhaustive { evaluations }
    } else {
        Coverage::Sampled {
            seed: cfg.seed,
            samples: cfg.samples,
            probes: dom.probes,
            evaluations,
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SurjectivityRoute {
    /// `p_!(p*(x)) = x` for every `x`.
    DirectImage,
    /// `p*` injective.
    Injectivity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Surjectivity<E> {
    Surjective { route: SurjectivityRoute },
    NotSurjective {
        route: SurjectivityRoute,
        witness: Vec<E>,
    },
    /// Target not enumerable; only sampled evidence.
    Undecided { seed: u64, samples: usize },
}

impl<E> Surjectivity<E> {
    pub fn is_surjective(&self) -> Option<bool> {
        match self {
            Surjectivity::Surjective { .. } => Some(true),
            Surjectivity::NotSurjective { .. } => Some(false),
            Surjectivity::Undecided { .. } => None,
        }
    }
}

/// Decides surjectivity of `p` in the dual category.
///
/// With a direct image this tests `p_! ∘ p* = id`; without one it tests
/// injectivity of `p*`. The two agree whenever the left adjoint exists.
pub fn is_surjective<Q: EffectiveQuantale, X: EffectiveQuantale>(
    map: &QuantaleMap<Q, X>,
    cfg: &CheckConfig,
) -> Surjectivity<X::Elem> {
    let x = &*map.target;
    match (x.elements(), &map.direct) {
        (Some(all), Some(direct)) => {
            for e in all {
                if direct(&map.inverse_image(&e)) != e {
                    return Surjectivity::NotSurjective {
                        route: SurjectivityRoute::DirectImage,
                        witness: vec![e],
                    };
                }
            }
            Surjectivity::Surjective {
                route: SurjectivityRoute::DirectImage,
            }
        }
        (Some(all), None) => {
            let mut seen: HashMap<Q::Elem, X::Elem> = HashMap::new();
            for e in all {
                if let Some(prev) = seen.insert(map.inverse_image(&e), e.clone()) {
                    return Surjectivity::NotSurjective {
                        route: SurjectivityRoute::Injectivity,
                        witness: vec![prev, e],
                    };
                }
            }
            Surjectivity::Surjective {
                route: SurjectivityRoute::Injectivity,
            }
        }
        (None, direct) => {
            let mut rng = seeded_rng(cfg.seed);
            if let Some(direct) = direct {
                for _ in 0..cfg.samples {
                    let e = x.sample(&mut rng);
                    if direct(&map.inverse_image(&e)) != e {
                        return Surjectivity::NotSurjective {
                            route: SurjectivityRoute::DirectImage,
                            witness: vec![e],
                        };
                    }
                }
            }
            Surjectivity::Undecided {
                seed: cfg.seed,
                samples: cfg.samples,
            }
        }
    }
}
