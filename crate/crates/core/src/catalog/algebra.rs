//! Subspace quantales of groupoid algebras over the rationals.
//!
//! The algebra of `n x n` matrices is the groupoid algebra of the pair
//! groupoid on `n` points and a group algebra is the one-object case, so a
//! single carrier serves both. Basis elements multiply to a basis element or
//! to zero, and the involution sends the basis element `g` to `g⁻¹`
//! (transpose for matrix units).

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::index::sample as sample_indices;
use rand::Rng;

use super::groupoid::FiniteGroupoid;
use super::subspace::{rational, unit_vector, RationalSubspace};
use crate::quantale::{EffectiveQuantale, FiniteInvQuantale, QuantaleMap, SampleRng};

/// Every linear subspace of the groupoid algebra `Q[G]`, with
/// `V·W = span{vw}`, `V* = {v* : v in V}` and unit `span{1}`.
#[derive(Clone, Debug)]
pub struct MaxGroupoidAlgebra {
    groupoid: FiniteGroupoid,
    unit: RationalSubspace,
}

impl MaxGroupoidAlgebra {
    pub fn new(groupoid: FiniteGroupoid) -> Self {
        let d = groupoid.size();
        let mut one = vec![BigRational::zero(); d];
        for &u in groupoid.identities() {
            one[u] = rational(1);
        }
        let unit = RationalSubspace::span(d, [one]);
        MaxGroupoidAlgebra { groupoid, unit }
    }

    /// Subspaces of `M_n(Q)`; coordinate `(i-1) * n + (j-1)` is entry `(i, j)`.
    pub fn matrices(n: usize) -> Self {
        Self::new(FiniteGroupoid::pair(n))
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn dim(&self) -> usize {
        self.groupoid.size()
    }

    pub fn vector_product(&self, v: &[BigRational], w: &[BigRational]) -> Vec<BigRational> {
        let d = self.dim();
        let mut out = vec![BigRational::zero(); d];
        for (g, vg) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (h, wh) in w.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                if let Some(gh) = self.groupoid.mul(g, h) {
                    out[gh] += vg * wh;
                }
            }
        }
        out
    }

    pub fn vector_star(&self, v: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.dim()];
        for (g, x) in v.iter().enumerate() {
            out[self.groupoid.inverse(g)] = x.clone();
        }
        out
    }

    /// `span{e_g}`.
    pub fn basis_line(&self, g: usize) -> RationalSubspace {
        RationalSubspace::span(self.dim(), [unit_vector(self.dim(), g)])
    }

    /// Span of one integer vector.
    pub fn line(&self, v: &[i64]) -> RationalSubspace {
        RationalSubspace::span_ints(self.dim(), &[v])
    }

    fn random_vector(&self, rng: &mut SampleRng) -> Vec<BigRational> {
        let d = self.dim();
        let mut v = vec![BigRational::zero(); d];
        let k = rng.gen_range(1..=d.min(3));
        for i in sample_indices(rng, d, k) {
            let x = [-2, -1, 1, 2][rng.gen_range(0..4)];
            v[i] = rational(x);
        }
        v
    }
}

impl EffectiveQuantale for MaxGroupoidAlgebra {
    type Elem = RationalSubspace;

    fn leq(&self, a: &RationalSubspace, b: &RationalSubspace) -> bool {
        a.leq(b)
    }

    fn join(&self, elems: &[RationalSubspace]) -> RationalSubspace {
        RationalSubspace::span(
            self.dim(),
            elems.iter().flat_map(|e| e.basis().iter().cloned()),
        )
    }

    fn mul(&self, a: &RationalSubspace, b: &RationalSubspace) -> RationalSubspace {
        let products = a
            .basis()
            .iter()
            .flat_map(|v| b.basis().iter().map(move |w| (v, w)))
            .map(|(v, w)| self.vector_product(v, w));
        RationalSubspace::span(self.dim(), products)
    }

    fn star(&self, a: &RationalSubspace) -> RationalSubspace {
        a.map(|v| self.vector_star(v))
    }

    fn bottom(&self) -> RationalSubspace {
        RationalSubspace::zero(self.dim())
    }

    fn unit(&self) -> Option<RationalSubspace> {
        Some(self.unit.clone())
    }

    fn sample(&self, rng: &mut SampleRng) -> RationalSubspace {
        let k = [0, 1, 1, 1, 2, 2, 2, 3][rng.gen_range(0..8)];
        let vectors: Vec<_> = (0..k).map(|_| self.random_vector(rng)).collect();
        RationalSubspace::span(self.dim(), vectors)
    }

    /// Zero, the whole algebra, every basis line and every line spanned by
    /// `e_g + e_h` or `e_g - e_h`.
    fn probes(&self) -> Vec<RationalSubspace> {
        let d = self.dim();
        let mut out = vec![self.bottom()];
        out.extend((0..d).map(|g| self.basis_line(g)));
        for g in 0..d {
            for h in g + 1..d {
                for sign in [1, -1] {
                    let mut v = vec![0i64; d];
                    v[g] = 1;
                    v[h] = sign;
                    out.push(self.line(&v));
                }
            }
        }
        out.push(RationalSubspace::full(d));
        out
    }
}

pub type SupportMap = QuantaleMap<MaxGroupoidAlgebra, FiniteInvQuantale>;

/// The map `Max Q[G] -> P(G)` with `p*(U) = span U` and
/// `p_!(V) = support of V`.
pub fn support_map(algebra: MaxGroupoidAlgebra) -> SupportMap {
    let target = Arc::new(super::groupoid_quantale(algebra.groupoid()));
    let d = algebra.dim();
    QuantaleMap::new(Arc::new(algebra), target, move |u: &usize| {
        RationalSubspace::coordinate(d, *u as u64)
    })
    .with_direct_image(|v: &RationalSubspace| v.support() as usize)
}

/// Support map of the matrix algebra onto the relations on `{1..n}`.
pub fn matrix_support_map(n: usize) -> SupportMap {
    support_map(MaxGroupoidAlgebra::matrices(n))
}

/// Support map of a group algebra onto the powerset of the group.
pub fn group_algebra_support_map(
    group: FiniteGroupoid,
) -> Result<SupportMap, super::CatalogError> {
    if !group.is_group() {
        return Err(super::CatalogError::NotAGroup);
    }
    Ok(support_map(MaxGroupoidAlgebra::new(group)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::{check_laws_sampled, validate_hom, CheckConfig};

    #[test]
    fn matrix_unit_products() {
        let m = MaxGroupoidAlgebra::matrices(2);
        // e11 e12 = e12, e12 e11 = 0
        assert_eq!(m.mul(&m.basis_line(0), &m.basis_line(1)), m.basis_line(1));
        assert!(m.mul(&m.basis_line(1), &m.basis_line(0)).is_zero());
        assert_eq!(m.star(&m.basis_line(1)), m.basis_line(2));
        assert_eq!(m.unit().unwrap(), m.line(&[1, 0, 0, 1]));
    }

    #[test]
    fn group_algebra_zero_divisor() {
        let a = MaxGroupoidAlgebra::new(FiniteGroupoid::cyclic(2));
        let plus = a.line(&[1, 1]);
        let minus = a.line(&[1, -1]);
        assert!(a.mul(&plus, &minus).is_zero());
        assert_eq!(a.mul(&plus, &plus), plus);
        // support of a product can be strictly smaller than the product of
        // supports
        assert_eq!(a.mul(&plus, &minus).support(), 0);
        assert_eq!(plus.support(), 0b11);
    }

    #[test]
    fn carriers_satisfy_the_laws_on_samples() {
        let cfg = CheckConfig::default();
        check_laws_sampled(&MaxGroupoidAlgebra::matrices(2), &cfg).unwrap();
        check_laws_sampled(&MaxGroupoidAlgebra::new(FiniteGroupoid::cyclic(3)), &cfg).unwrap();
        check_laws_sampled(&MaxGroupoidAlgebra::new(FiniteGroupoid::symmetric3()), &cfg).unwrap();
    }

    #[test]
    fn support_maps_are_homomorphisms() {
        let cfg = CheckConfig::default();
        let p = matrix_support_map(2);
        assert!(validate_hom(&p, &cfg).unwrap().is_exhaustive());
        assert!(p.inverse_image(&0).is_zero());
        let g = group_algebra_support_map(FiniteGroupoid::symmetric3()).unwrap();
        validate_hom(&g, &cfg).unwrap();
        assert!(matches!(
            group_algebra_support_map(FiniteGroupoid::pair(2)),
            Err(super::super::CatalogError::NotAGroup)
        ));
    }

    #[test]
    fn sampling_is_reproducible() {
        let m = MaxGroupoidAlgebra::matrices(2);
        let draw = |seed| {
            let mut rng = crate::quantale::seeded_rng(seed);
            (0..20).map(|_| m.sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(7), draw(7));
        assert_ne!(draw(7), draw(8));
    }
}
