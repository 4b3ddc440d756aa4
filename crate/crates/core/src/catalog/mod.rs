//! Concrete quantales and maps: relations, powersets of groups and
//! groupoids, subspace quantales of matrix and group algebras over the
//! rationals, frames of finite spaces, and support maps onto `Ω`.

pub mod algebra;
pub mod groupoid;
pub mod locale;
pub mod subspace;

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

pub use algebra::{
    group_algebra_support_map, matrix_support_map, support_map, MaxGroupoidAlgebra, SupportMap,
};
pub use groupoid::{FiniteGroupoid, GroupoidError};
pub use locale::{finite_locale_map, FiniteTopology, LocaleError};
pub use subspace::RationalSubspace;

use crate::openness::{check_fr1, check_fr2, check_semiopen};
use crate::quantale::{
    check_laws_sampled, is_surjective, CheckConfig, EffectiveQuantale, FiniteInvQuantale,
    FiniteMap, LawViolation,
};
use crate::suplattice::FiniteSupLattice;

/// Largest arrow count whose powerset is tabulated.
pub const MAX_POWERSET_BITS: usize = 9;

/// Powersets up to this size are validated exhaustively; larger ones on
/// samples (their multiplication comes from a validated groupoid).
const EXHAUSTIVE_VALIDATION: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("{0} arrows: powerset too large to tabulate")]
    TooLarge(usize),
    #[error("invalid group table: {0}")]
    InvalidGroupTable(#[from] GroupoidError),
    #[error("the groupoid has more than one object")]
    NotAGroup,
    #[error("hypothesis fails: {a}·{b} = ⊥ with both factors nonzero (or ⊤⊤ != ⊤ when a = b = ⊤)")]
    HypothesisFailure { a: usize, b: usize },
    #[error("generated sub-quantale exceeds {0} elements")]
    SubquantaleTooLarge(usize),
    #[error("constructed quantale violates {0:?}")]
    Law(LawViolation<usize>),
}

fn set_name(g: &FiniteGroupoid, mask: usize) -> String {
    let names: Vec<&str> = (0..g.size())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| g.names()[i].as_str())
        .collect();
    format!("{{{}}}", names.join(","))
}

/// The powerset of a groupoid: `UV = {gh}`, `U* = {g⁻¹}`, unit = the set of
/// identity arrows. Element `m` is the subset with bitmask `m`.
///
/// Panics when the groupoid has more than [`MAX_POWERSET_BITS`] arrows.
pub fn groupoid_quantale(g: &FiniteGroupoid) -> FiniteInvQuantale {
    let bits = g.size();
    assert!(bits <= MAX_POWERSET_BITS, "{bits} arrows");
    let n = 1usize << bits;
    // mult[U][V] = mult[U minus lowest][V] | single[lowest(U)][V]
    let mut single = vec![0usize; bits * n];
    for a in 0..bits {
        for v in 1..n {
            let h = v.trailing_zeros() as usize;
            let rest = single[a * n + (v & (v - 1))];
            single[a * n + v] = rest | g.mul(a, h).map_or(0, |ah| 1 << ah);
        }
    }
    let mut mult = vec![0usize; n * n];
    for u in 1..n {
        let a = u.trailing_zeros() as usize;
        let rest = u & (u - 1);
        for v in 0..n {
            mult[u * n + v] = mult[rest * n + v] | single[a * n + v];
        }
    }
    let inv: Vec<usize> = (0..n)
        .map(|u| {
            (0..bits)
                .filter(|i| u >> i & 1 == 1)
                .fold(0, |acc, i| acc | 1 << g.inverse(i))
        })
        .collect();
    let unit = g.identities().iter().fold(0, |acc, &u| acc | 1 << u);
    let names = (0..n).map(|m| set_name(g, m)).collect();
    let lattice = FiniteSupLattice::powerset(bits as u32)
        .with_names(names)
        .expect("one name per subset");
    FiniteInvQuantale::new(Arc::new(lattice), mult, inv, Some(unit)).expect("tables have the right shape")
}

fn checked(q: FiniteInvQuantale) -> Result<FiniteInvQuantale, CatalogError> {
    if q.size() <= EXHAUSTIVE_VALIDATION {
        q.validate().map_err(CatalogError::Law)?;
    } else {
        check_laws_sampled(&q, &CheckConfig::default()).map_err(CatalogError::Law)?;
    }
    Ok(q)
}

/// Binary relations on `{1..n}` under composition, converse and the
/// diagonal. Relation `m` contains `(i, j)` iff bit `(i-1) * n + (j-1)` of
/// `m` is set.
pub fn rel_quantale(n: usize) -> Result<FiniteInvQuantale, CatalogError> {
    if n == 0 || n * n > MAX_POWERSET_BITS {
        return Err(CatalogError::TooLarge(n * n));
    }
    checked(groupoid_quantale(&FiniteGroupoid::pair(n)))
}

/// Subsets of a group under setwise product and inverses, unit `{e}`.
pub fn group_powerset_quantale(g: &FiniteGroupoid) -> Result<FiniteInvQuantale, CatalogError> {
    if !g.is_group() {
        return Err(CatalogError::NotAGroup);
    }
    if g.size() > MAX_POWERSET_BITS {
        return Err(CatalogError::TooLarge(g.size()));
    }
    checked(groupoid_quantale(g))
}

/// The finite sub-quantale of `q` generated by `generators` (closed under
/// binary joins, multiplication and involution, with bottom and, if `q` has
/// one, the unit). Returns the tabulated quantale and its elements in `q`;
/// element `i` of the result is `elements[i]`.
pub fn finite_subquantale<Q: EffectiveQuantale>(
    q: &Q,
    generators: &[Q::Elem],
    limit: usize,
) -> Result<(FiniteInvQuantale, Vec<Q::Elem>), CatalogError> {
    let mut elems: Vec<Q::Elem> = vec![q.bottom()];
    let mut index: HashMap<Q::Elem, usize> = HashMap::from([(q.bottom(), 0)]);
    let mut add = |e: Q::Elem, elems: &mut Vec<Q::Elem>| -> Result<(), CatalogError> {
        if !index.contains_key(&e) {
            if elems.len() >= limit {
                return Err(CatalogError::SubquantaleTooLarge(limit));
            }
            index.insert(e.clone(), elems.len());
            elems.push(e);
        }
        Ok(())
    };
    for g in generators.iter().cloned().chain(q.unit()) {
        add(g, &mut elems)?;
    }
    let mut done = 0;
    while done < elems.len() {
        let n = elems.len();
        for i in 0..n {
            // pairs with at least one member not yet processed
            for j in 0..n {
                if i < done && j < done {
                    continue;
                }
                let (a, b) = (elems[i].clone(), elems[j].clone());
                add(q.join2(&a, &b), &mut elems)?;
                add(q.mul(&a, &b), &mut elems)?;
            }
            if i >= done {
                let s = q.star(&elems[i]);
                add(s, &mut elems)?;
            }
        }
        done = n;
    }
    let n = elems.len();
    let lookup: HashMap<&Q::Elem, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut leq = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if q.leq(&elems[i], &elems[j]) {
                leq.push((i, j));
            }
        }
    }
    let lattice = FiniteSupLattice::validate(n, leq, None)
        .expect("a join-closed family with bottom is a lattice");
    let mult_of = |a: usize, b: usize| lookup[&q.mul(&elems[a], &elems[b])];
    let star_of = |a: usize| lookup[&q.star(&elems[a])];
    let unit = q.unit().map(|u| lookup[&u]);
    let sub = FiniteInvQuantale::from_fn(Arc::new(lattice), mult_of, star_of, unit);
    Ok((sub, elems))
}

/// The map `Q -> Ω` with `p*(1) = ⊤` and `p_!(a) = [a != ⊥]`: a semiopen
/// surjection satisfying both Frobenius conditions whenever nonzero
/// elements have nonzero products and `⊤⊤ = ⊤`. Those conditions and the
/// resulting properties are verified before the map is returned.
pub fn omega_support_map(q: Arc<FiniteInvQuantale>) -> Result<FiniteMap, CatalogError> {
    let l = q.lattice().clone();
    let (bot, top) = (l.bottom(), l.top());
    for a in l.elements().filter(|&a| a != bot) {
        for b in l.elements().filter(|&b| b != bot) {
            if q.mul(a, b) == bot {
                return Err(CatalogError::HypothesisFailure { a, b });
            }
        }
    }
    if q.mul(top, top) != top {
        return Err(CatalogError::HypothesisFailure { a: top, b: top });
    }
    let omega = Arc::new(FiniteInvQuantale::omega());
    let direct: Vec<usize> = l.elements().map(|a| usize::from(a != bot)).collect();
    let p = FiniteMap::from_table(q, omega, vec![bot, top])
        .expect("two-entry table")
        .with_direct_table(direct);
    let cfg = CheckConfig::default();
    let verified = check_semiopen(&p, &cfg).is_ok()
        && check_fr1(&p, &cfg).is_ok_and(|c| c.passed())
        && check_fr2(&p, &cfg).is_ok_and(|c| c.passed())
        && is_surjective(&p, &cfg).is_surjective() == Some(true);
    assert!(verified, "support map onto Ω failed its own verification");
    Ok(p)
}

/// Finite shadow of the group-algebra support map for `Z/2`: the
/// sub-quantale `Q'` of `Max Q[Z/2]` generated by `span{e+g}`,
/// `span{e-g}` and `span{g}` (six elements, named by their subspaces) with
/// `p*(U) = span U` and `p_!(V) = supp V`, into `P(Z/2)`. It inherits FR1
/// and the FR2 failure `(span{e+g}, {e}, span{e-g})` from the infinite map.
pub fn finite_group_algebra_support() -> Result<FiniteMap, CatalogError> {
    let group = FiniteGroupoid::cyclic(2);
    let alg = MaxGroupoidAlgebra::new(group.clone());
    let gens = [alg.line(&[1, 1]), alg.line(&[1, -1]), alg.line(&[0, 1])];
    let (sub, elems) = finite_subquantale(&alg, &gens, 64)?;
    let names = elems.iter().map(|e| e.to_string()).collect();
    let lattice = Arc::new(
        (**sub.lattice())
            .clone()
            .with_names(names)
            .expect("one name per element"),
    );
    let sub = Arc::new(
        FiniteInvQuantale::new(
            lattice,
            sub.mult_table().to_vec(),
            sub.inv_table().to_vec(),
            sub.unit(),
        )
        .expect("same tables"),
    );
    let target = Arc::new(group_powerset_quantale(&group)?);
    let index = |v: &RationalSubspace| elems.iter().position(|e| e == v).expect("span of a subset lies in Q'");
    let inverse: Vec<usize> = (0..target.size())
        .map(|u| index(&RationalSubspace::coordinate(2, u as u64)))
        .collect();
    let direct: Vec<usize> = elems.iter().map(|v| v.support() as usize).collect();
    Ok(FiniteMap::from_table(sub, target, inverse)
        .expect("table covers the target")
        .with_direct_table(direct))
}

/// `f: Rel(2) -> P(Z/2)` with `f*({e}) = Δ` and `f*({g})` the swap
/// relation: the regular representation of `Z/2` by permutations.
pub fn regular_representation_z2() -> FiniteMap {
    let rel = Arc::new(rel_quantale(2).expect("4 arrows"));
    let z2 = Arc::new(group_powerset_quantale(&FiniteGroupoid::cyclic(2)).expect("group"));
    FiniteMap::from_table(rel, z2, vec![0, 0b1001, 0b0110, 0b1111]).expect("4 entries")
}
