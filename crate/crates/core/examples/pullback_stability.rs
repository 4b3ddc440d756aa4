//! Pullback of the Ω-support map of P(Z/2) along the diagonal map
//! Rel(2) -> Ω: the nine relation families, the unit chains, Beck-Chevalley
//! and the Frobenius cases; then the same checks with the FR2-violating
//! group-algebra shadow.

use std::sync::Arc;

use quantic::catalog::{
    finite_group_algebra_support, group_powerset_quantale, omega_support_map, rel_quantale,
    regular_representation_z2, FiniteGroupoid,
};
use quantic::freeprod::PullbackContext;
use quantic::quantale::{CheckConfig, FiniteMap};

fn main() {
    let q = Arc::new(group_powerset_quantale(&FiniteGroupoid::cyclic(2)).unwrap());
    let p = omega_support_map(q).unwrap();
    let f = FiniteMap::from_table(Arc::new(rel_quantale(2).unwrap()), p.target().clone(), vec![0, 0b1001]).unwrap();
    let ctx = PullbackContext::new(&p, &f, 8, &CheckConfig::default()).unwrap();
    let h = ctx.verify_h_respects(4);
    for fam in &h.families {
        println!("{:?}: {} instances, {} failures", fam.family, fam.instances, fam.failures);
    }
    let adj = ctx.verify_adjunction_on_words(4, 3);
    println!("adjunction: passed {}, {} words", adj.passed(), adj.words_checked);
    for t in &adj.traces {
        println!("  {} ≤ {} -> ({:#06b}) in {} steps", t.word, t.raised, t.result, t.steps.len());
    }
    println!("Beck-Chevalley: {}", ctx.verify_beck_chevalley().passed());
    let fr = ctx.verify_pullback_frobenius(4);
    for s in &fr.shapes {
        println!("  {}: {} instances", s.shape, s.instances);
    }

    let p = finite_group_algebra_support().unwrap();
    let ctx = PullbackContext::unchecked(&p, &regular_representation_z2(), 8).unwrap();
    if let Some(fail) = ctx.verify_h_respects(4).first_failure {
        let names = p.source().lattice();
        let i = &fail.instance;
        println!(
            "negative control: {:?} fails at a = {}, x = {:#b}, a' = {}: h = {:#06b} vs {:#06b}",
            i.family,
            names.name(i.params[0]),
            i.x,
            names.name(i.params[1]),
            fail.left_h,
            fail.right_h
        );
    }
}
