//! Quotient of P(Z/2) by the relation {e} ~ {g}: the least nucleus
//! identifying the pair collapses the quantale onto Ω.

use std::sync::Arc;

use quantic::catalog::{group_powerset_quantale, FiniteGroupoid};
use quantic::nucleus::{quotient, RelationPresentation};

fn main() {
    let q = Arc::new(group_powerset_quantale(&FiniteGroupoid::cyclic(2)).unwrap());
    let rel = RelationPresentation::new(q.clone(), vec![(1, 2)]).unwrap();
    println!("saturated relation: {:?}", rel.saturate());
    let j = rel.nucleus().unwrap();
    println!("nucleus: {:?}", j.values());
    let quo = quotient(&j);
    let qq = quo.quantale();
    println!("quotient: {} elements, closed {:?}", qq.size(), quo.closed());
    println!("mult table {:?}, unit {:?}", qq.mult_table(), qq.unit());
}
