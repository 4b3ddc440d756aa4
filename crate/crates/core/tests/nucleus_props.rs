mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use quantic::catalog::{group_powerset_quantale, rel_quantale, FiniteGroupoid};
use quantic::nucleus::{
    equalizer, nucleus_from_relation, quotient, saturated_elements, Nucleus, RelationPresentation,
};
use quantic::quantale::{validate_hom, CheckConfig, FiniteInvQuantale, FiniteMap};

fn rel2() -> Arc<FiniteInvQuantale> {
    Arc::new(rel_quantale(2).unwrap())
}

fn z3() -> Arc<FiniteInvQuantale> {
    Arc::new(group_powerset_quantale(&FiniteGroupoid::cyclic(3)).unwrap())
}

/// Nucleus whose closed elements are the saturated elements of a larger
/// relation, when that closure is a nucleus.
fn nucleus_of_superset(q: &Arc<FiniteInvQuantale>, pairs: &[(usize, usize)]) -> Nucleus {
    RelationPresentation::new(q.clone(), pairs.to_vec())
        .unwrap()
        .nucleus()
        .unwrap()
}

fn pairs_strategy(n: usize) -> impl Strategy<Value = Vec<(usize, usize)>> {
    prop::collection::vec((0..n, 0..n), 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn least_among_identifying_nuclei(pairs in pairs_strategy(16), extra in pairs_strategy(16)) {
        let q = rel2();
        let j = nucleus_from_relation(&RelationPresentation::new(q.clone(), pairs.clone()).unwrap()).unwrap();
        for &(r, s) in &pairs {
            prop_assert_eq!(j.apply(r), j.apply(s));
        }
        let bigger: Vec<_> = pairs.iter().chain(&extra).copied().collect();
        let k = nucleus_of_superset(&q, &bigger);
        for a in 0..q.size() {
            prop_assert!(q.lattice().leq(j.apply(a), k.apply(a)));
        }
    }

    #[test]
    fn quotient_is_a_surjective_homomorphism(pairs in pairs_strategy(8)) {
        let q = z3();
        let rel = RelationPresentation::new(q.clone(), pairs).unwrap();
        let j = rel.nucleus().unwrap();
        let quo = quotient(&j);
        quo.quantale().validate().unwrap();
        let m = quo.inclusion_map();
        prop_assert!(validate_hom(&m, &CheckConfig::default()).is_ok());
        // j = m_* ∘ m*
        let proj = quo.projection();
        let back = proj.right_adjoint().compose_after(&proj);
        prop_assert_eq!(back.values(), j.values());
        // the closed elements are exactly the saturated ones
        let sat = saturated_elements(&q, &rel.saturate());
        prop_assert_eq!(sat, j.closed_elements());
    }

    #[test]
    fn saturation_is_closed(pairs in pairs_strategy(16)) {
        let q = rel2();
        let rel = RelationPresentation::new(q.clone(), pairs.clone()).unwrap();
        let sat = rel.saturate();
        for &p in &pairs {
            prop_assert!(sat.contains(&p));
        }
        for &(r, s) in &sat {
            prop_assert!(sat.contains(&(q.star(r), q.star(s))));
            for a in 0..q.size() {
                prop_assert!(sat.contains(&(q.mul(a, r), q.mul(a, s))));
                prop_assert!(sat.contains(&(q.mul(r, a), q.mul(s, a))));
            }
        }
        // right pairs follow from the left pairs and the involution
        let left: BTreeSet<_> = rel.saturate_left();
        let left_sat = saturated_elements(&q, &left);
        prop_assert_eq!(left_sat, saturated_elements(&q, &sat));
    }
}

#[test]
fn equalizer_examples() {
    let q = common::z2();
    let omega = Arc::new(FiniteInvQuantale::omega());
    let f = FiniteMap::from_table(q.clone(), omega.clone(), vec![0, 1]).unwrap();
    let g = FiniteMap::from_table(q.clone(), omega.clone(), vec![0, 3]).unwrap();
    let eq = equalizer(&f, &g).unwrap();
    assert_eq!(eq.quotient.closed(), &[0, 3]);
    let same = equalizer(&f, &f).unwrap();
    assert_eq!(same.quotient.closed(), &[0, 1, 2, 3]);
    // f and g agree after composing with the mono
    let m = eq.mono();
    for x in 0..2 {
        assert_eq!(m.inverse_image(&f.inverse_image(&x)), m.inverse_image(&g.inverse_image(&x)));
    }
}
