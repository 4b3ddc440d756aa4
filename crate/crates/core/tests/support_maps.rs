mod common;

use num_rational::BigRational;
use proptest::prelude::*;
use quantic::catalog::algebra::MaxGroupoidAlgebra;
use quantic::catalog::{group_algebra_support_map, matrix_support_map, FiniteGroupoid, RationalSubspace};
use quantic::openness::{fr1_holds, fr2_holds, fr2_witnesses};
use quantic::quantale::{CheckConfig, EffectiveQuantale};

fn vectors(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, n), 1..=3)
}

fn span(n: usize, vs: &[Vec<i64>]) -> RationalSubspace {
    RationalSubspace::span(n, vs.iter().map(|v| common::int_vector(v)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Canonical forms do not depend on the basis.
    #[test]
    fn representation_independence(vs in vectors(4), mix in prop::collection::vec(-2i64..=2, 9)) {
        let a = span(4, &vs);
        // adding multiples of earlier vectors is an invertible row operation
        let tri: Vec<Vec<BigRational>> = (0..vs.len())
            .map(|i| {
                let mut out = common::int_vector(&vs[i]);
                for (j, w) in vs.iter().enumerate().take(i) {
                    let c = BigRational::from_integer(mix[i * 3 + j].into());
                    for (o, x) in out.iter_mut().zip(common::int_vector(w)) {
                        *o += &c * x;
                    }
                }
                out
            })
            .collect();
        prop_assert_eq!(RationalSubspace::span(4, tri), a);
    }

    /// `V ⊆ p*(U) ⟺ supp(V) ⊆ U`, for every relation `U` on two points.
    #[test]
    fn support_adjunction(vs in vectors(4)) {
        let p = matrix_support_map(2);
        let v = span(4, &vs);
        let supp = p.direct_image(&v).unwrap();
        prop_assert_eq!(supp as u64, vs.iter().fold(0, |s, w| s | common::support_of(&common::int_vector(w))));
        for u in 0..16usize {
            prop_assert_eq!(v.leq(&p.inverse_image(&u)), supp & !u == 0);
        }
    }

    /// FR1 for the group algebra of S₃ on random subspaces, checked against
    /// convolution from the group table.
    #[test]
    fn group_algebra_fr1(vs in vectors(6), x in 0usize..64) {
        let g = FiniteGroupoid::symmetric3();
        let p = group_algebra_support_map(g.clone()).unwrap();
        let a = span(6, &vs);
        prop_assert!(fr1_holds(&p, &a, &x).unwrap());
        let mut lhs = 0;
        for v in &vs {
            for k in (0..6).filter(|k| x >> k & 1 == 1) {
                lhs |= common::support_of(&common::convolve(&g, &common::int_vector(v), &common::unit_vector(6, k)));
            }
        }
        prop_assert_eq!(lhs, common::subset_product(&g, a.support(), x as u64));
    }
}

#[test]
fn support_of_products_can_shrink() {
    let g = FiniteGroupoid::cyclic(2);
    let alg = MaxGroupoidAlgebra::new(g.clone());
    let (plus, minus) = (alg.line(&[1, 1]), alg.line(&[1, -1]));
    // (1+g)² = 2 + 2g: support stays {e, g}
    assert_eq!(alg.mul(&plus, &plus).support(), 0b11);
    // (1+g)(1−g) = 0 while supp ∘ supp = {e, g}
    assert_eq!(alg.mul(&plus, &minus).support(), 0);
    assert_eq!(common::subset_product(&g, plus.support(), minus.support()), 0b11);
}

#[test]
fn group_algebra_witness_list_contains_the_zero_divisor_triple() {
    let g = FiniteGroupoid::cyclic(2);
    let p = group_algebra_support_map(g.clone()).unwrap();
    let alg = MaxGroupoidAlgebra::new(g);
    let ws = fr2_witnesses(&p, &CheckConfig::default(), usize::MAX).unwrap();
    assert!(ws
        .iter()
        .any(|w| w.a == alg.line(&[1, 1]) && w.x == 0b01 && w.b == alg.line(&[1, -1])));
}

#[test]
fn matrix_fr2_for_n3_on_random_triples() {
    use rand::{Rng, SeedableRng};
    let p = matrix_support_map(3);
    let g = FiniteGroupoid::pair(3);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let a = vec![common::random_vector(&mut rng, 9)];
        let b = vec![common::random_vector(&mut rng, 9)];
        let x: u64 = rng.gen_range(0..512);
        let (sa, sb) = (RationalSubspace::span(9, a.clone()), RationalSubspace::span(9, b.clone()));
        assert!(fr2_holds(&p, &sa, &(x as usize), &sb).unwrap());
        let rhs = common::subset_product(&g, common::subset_product(&g, sa.support(), x), sb.support());
        assert_eq!(common::sandwich_support(&g, &a, x, &b), rhs);
    }
}
