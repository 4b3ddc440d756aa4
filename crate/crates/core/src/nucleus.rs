//! Involutive quantic nuclei presented by relations, and the quotients they
//! define.
//!
//! A relation `R` on a finite involutive quantale `Q` is saturated by
//! closing it under the involution and under left and right multiplication.
//! The saturated elements `α` are those with `r <= α ⟺ s <= α` for every
//! saturated pair; they form a meet-closed family whose closure operator is
//! the least involutive quantic nucleus `j_R` identifying the pairs of `R`.
//! The closed elements, with multiplication `(a, b) ↦ j(ab)`, form the
//! quotient quantale.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::quantale::{FiniteInvQuantale, FiniteMap};
use crate::suplattice::{ClosureError, ClosureOperator, FiniteSupLattice, SupMap, SupMapError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NucleusError {
    #[error("element {0} is not in the quantale")]
    OutOfRange(usize),
    #[error("value table has {got} entries for {expected} elements")]
    Length { expected: usize, got: usize },
    #[error("not a closure operator: {0}")]
    Closure(#[from] ClosureError),
    #[error("j({a})·j({b}) is not below j({a}·{b})")]
    NotSubmultiplicative { a: usize, b: usize },
    #[error("j({0}*) != j({0})*")]
    NotInvolutive(usize),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

/// A relation on the carrier of a finite quantale.
#[derive(Clone, Debug)]
pub struct RelationPresentation {
    quantale: Arc<FiniteInvQuantale>,
    pairs: Vec<(usize, usize)>,
}

impl RelationPresentation {
    pub fn new(
        quantale: Arc<FiniteInvQuantale>,
        pairs: Vec<(usize, usize)>,
    ) -> Result<Self, NucleusError> {
        let n = quantale.size();
        if let Some(&(r, s)) = pairs.iter().find(|&&(r, s)| r >= n || s >= n) {
            return Err(NucleusError::OutOfRange(r.max(s)));
        }
        Ok(RelationPresentation { quantale, pairs })
    }

    pub fn quantale(&self) -> &Arc<FiniteInvQuantale> {
        &self.quantale
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Least relation containing the pairs and closed under the involution
    /// and under multiplication by any element on either side.
    pub fn saturate(&self) -> BTreeSet<(usize, usize)> {
        saturate(&self.quantale, &self.pairs, true)
    }

    /// Closure under the involution and left multiplication only.
    pub fn saturate_left(&self) -> BTreeSet<(usize, usize)> {
        saturate(&self.quantale, &self.pairs, false)
    }

    pub fn nucleus(&self) -> Result<Nucleus, NucleusError> {
        nucleus_from_relation(self)
    }
}

fn saturate(q: &FiniteInvQuantale, pairs: &[(usize, usize)], right: bool) -> BTreeSet<(usize, usize)> {
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut work: Vec<(usize, usize)> = pairs.to_vec();
    while let Some((r, s)) = work.pop() {
        if !seen.insert((r, s)) {
            continue;
        }
        work.push((q.star(r), q.star(s)));
        for a in 0..q.size() {
            work.push((q.mul(a, r), q.mul(a, s)));
            if right {
                work.push((q.mul(r, a), q.mul(s, a)));
            }
        }
    }
    seen
}

/// Two-sided saturation of `pairs`.
pub fn saturate_relation(rel: &RelationPresentation) -> BTreeSet<(usize, usize)> {
    rel.saturate()
}

/// Elements `α` with `r <= α ⟺ s <= α` for every pair, in index order.
pub fn saturated_elements(
    q: &FiniteInvQuantale,
    saturated: &BTreeSet<(usize, usize)>,
) -> Vec<usize> {
    let l = q.lattice();
    l.elements()
        .filter(|&alpha| {
            saturated
                .iter()
                .all(|&(r, s)| l.leq(r, alpha) == l.leq(s, alpha))
        })
        .collect()
}

/// A closure operator `j` on `Q` with `j(a)j(b) <= j(ab)` and
/// `j(a*) = j(a)*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nucleus {
    quantale: Arc<FiniteInvQuantale>,
    values: Vec<usize>,
}

impl Nucleus {
    pub fn new(quantale: Arc<FiniteInvQuantale>, values: Vec<usize>) -> Result<Self, NucleusError> {
        let n = quantale.size();
        if values.len() != n {
            return Err(NucleusError::Length {
                expected: n,
                got: values.len(),
            });
        }
        ClosureOperator::new(quantale.lattice().clone(), values.clone())?;
        let l = quantale.lattice();
        for a in 0..n {
            for b in 0..n {
                if !l.leq(quantale.mul(values[a], values[b]), values[quantale.mul(a, b)]) {
                    return Err(NucleusError::NotSubmultiplicative { a, b });
                }
            }
        }
        for a in 0..n {
            if values[quantale.star(a)] != quantale.star(values[a]) {
                return Err(NucleusError::NotInvolutive(a));
            }
        }
        Ok(Nucleus { quantale, values })
    }

    pub fn identity(quantale: Arc<FiniteInvQuantale>) -> Self {
        let values = (0..quantale.size()).collect();
        Nucleus { quantale, values }
    }

    pub fn quantale(&self) -> &Arc<FiniteInvQuantale> {
        &self.quantale
    }

    pub fn apply(&self, a: usize) -> usize {
        self.values[a]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Fixed points in index order.
    pub fn closed_elements(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&a| self.values[a] == a)
            .collect()
    }
}

/// The least involutive quantic nucleus identifying the pairs of `rel`.
pub fn nucleus_from_relation(rel: &RelationPresentation) -> Result<Nucleus, NucleusError> {
    let q = &rel.quantale;
    let closed = saturated_elements(q, &rel.saturate());
    let closure = ClosureOperator::from_closed_family(q.lattice().clone(), &closed)
        .map_err(|e| NucleusError::InternalInvariantViolation(e.to_string()))?;
    let j = Nucleus::new(q.clone(), closure.values().to_vec())
        .map_err(|e| NucleusError::InternalInvariantViolation(e.to_string()))?;
    if let Some(&(r, s)) = rel.pairs.iter().find(|&&(r, s)| j.apply(r) != j.apply(s)) {
        return Err(NucleusError::InternalInvariantViolation(format!(
            "pair ({r}, {s}) not identified"
        )));
    }
    Ok(j)
}

/// The quantale of closed elements of a nucleus, relabelled densely.
#[derive(Clone, Debug)]
pub struct QuotientQuantale {
    nucleus: Nucleus,
    quantale: Arc<FiniteInvQuantale>,
    /// `closed[i]` is the element of `Q` behind quotient element `i`.
    closed: Vec<usize>,
    /// `index[a]` is the quotient element of `j(a)`.
    index: Vec<usize>,
}

impl QuotientQuantale {
    pub fn quantale(&self) -> &Arc<FiniteInvQuantale> {
        &self.quantale
    }

    pub fn nucleus(&self) -> &Nucleus {
        &self.nucleus
    }

    /// Element of `Q` represented by quotient element `i`.
    pub fn back_map(&self, i: usize) -> usize {
        self.closed[i]
    }

    pub fn closed(&self) -> &[usize] {
        &self.closed
    }

    /// The surjective homomorphism `Q -> Q_j`, `a ↦ j(a)`.
    pub fn project(&self, a: usize) -> usize {
        self.index[a]
    }

    /// The quotient as a map `Q_j -> Q` in the dual category: its inverse
    /// image is the projection, and `j = m_* ∘ m*` for its right adjoint
    /// `m_*`.
    pub fn inclusion_map(&self) -> FiniteMap {
        FiniteMap::from_table(
            self.quantale.clone(),
            self.nucleus.quantale.clone(),
            self.index.clone(),
        )
        .expect("projection table has the right shape")
    }

    /// The projection as a sup-lattice map `Q -> Q_j`.
    pub fn projection(&self) -> SupMap {
        SupMap::new(
            self.nucleus.quantale.lattice().clone(),
            self.quantale.lattice().clone(),
            self.index.clone(),
        )
        .expect("the projection preserves joins")
    }
}

/// Builds `Q_j`: closed elements ordered as in `Q`, joins `j(⋁)`,
/// multiplication `j(ab)`, the involution of `Q`, unit `j(e)`.
pub fn quotient(j: &Nucleus) -> QuotientQuantale {
    let q = &j.quantale;
    let l = q.lattice();
    let closed = j.closed_elements();
    let mut index = vec![usize::MAX; q.size()];
    for (i, &c) in closed.iter().enumerate() {
        index[c] = i;
    }
    for a in 0..q.size() {
        index[a] = index[j.apply(a)];
    }
    let k = closed.len();
    let mut leq = Vec::new();
    for i in 0..k {
        for t in 0..k {
            if l.leq(closed[i], closed[t]) {
                leq.push((i, t));
            }
        }
    }
    let names = l
        .names()
        .map(|names| closed.iter().map(|&c| names[c].clone()).collect());
    let lattice = FiniteSupLattice::validate(k, leq, names)
        .expect("closed elements of a closure operator form a lattice");
    let unit = q.unit().map(|e| index[e]);
    let quantale = FiniteInvQuantale::from_fn(
        Arc::new(lattice),
        |a, b| index[q.mul(closed[a], closed[b])],
        |a| index[q.star(closed[a])],
        unit,
    );
    QuotientQuantale {
        nucleus: j.clone(),
        quantale: Arc::new(quantale),
        closed,
        index,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("h({r}) != h({s}) for the saturated pair ({r}, {s})")]
    NoFactorization { r: usize, s: usize },
    #[error("map does not go out of the presented quantale")]
    DomainMismatch,
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

/// Factors a sup-lattice map `h: Q -> L` through the quotient by `rel`:
/// returns `h̄: Q_j -> L` with `h̄ ∘ j = h`, which exists exactly when `h`
/// identifies every saturated pair.
pub fn factor_sup_map(
    rel: &RelationPresentation,
    quotient: &QuotientQuantale,
    h: &SupMap,
) -> Result<SupMap, FactorError> {
    if !Arc::ptr_eq(h.dom(), rel.quantale.lattice()) && **h.dom() != **rel.quantale.lattice() {
        return Err(FactorError::DomainMismatch);
    }
    if let Some(&(r, s)) = rel.saturate().iter().find(|&&(r, s)| h.apply(r) != h.apply(s)) {
        return Err(FactorError::NoFactorization { r, s });
    }
    let values: Vec<usize> = quotient.closed.iter().map(|&c| h.apply(c)).collect();
    let bar = SupMap::new(quotient.quantale.lattice().clone(), h.cod().clone(), values)
        .map_err(|e: SupMapError| FactorError::InternalInvariantViolation(e.to_string()))?;
    for a in 0..quotient.index.len() {
        if bar.apply(quotient.project(a)) != h.apply(a) {
            return Err(FactorError::InternalInvariantViolation(format!(
                "factored map disagrees at {a}"
            )));
        }
    }
    Ok(bar)
}

/// The equalizer of two maps `f, g: Q -> X`: the quotient of `Q` by
/// `{(f*(x), g*(x))}`.
#[derive(Clone, Debug)]
pub struct Equalizer {
    pub relation: RelationPresentation,
    pub quotient: QuotientQuantale,
}

impl Equalizer {
    /// The regular monomorphism `Q_j -> Q`.
    pub fn mono(&self) -> FiniteMap {
        self.quotient.inclusion_map()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EqualizerError {
    #[error("the two maps have different sources or targets")]
    Mismatch,
    #[error(transparent)]
    Nucleus(#[from] NucleusError),
}

pub fn equalizer(f: &FiniteMap, g: &FiniteMap) -> Result<Equalizer, EqualizerError> {
    let same = |a: &Arc<FiniteInvQuantale>, b: &Arc<FiniteInvQuantale>| {
        Arc::ptr_eq(a, b)
            || (a.lattice() == b.lattice()
                && a.mult_table() == b.mult_table()
                && a.inv_table() == b.inv_table())
    };
    if !same(f.source(), g.source()) || !same(f.target(), g.target()) {
        return Err(EqualizerError::Mismatch);
    }
    let pairs = (0..f.target().size())
        .map(|x| (f.inverse_image(&x), g.inverse_image(&x)))
        .collect();
    let relation = RelationPresentation::new(f.source().clone(), pairs)?;
    let j = relation.nucleus()?;
    let quotient = quotient(&j);
    Ok(Equalizer { relation, quotient })
}
