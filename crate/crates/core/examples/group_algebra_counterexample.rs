//! The support map Max Q[G] -> P(G) satisfies FR1 but not FR2: zero
//! divisors such as (1+g)(1-g) = 0 in Q[Z/2] shrink supports.

use quantic::catalog::{group_algebra_support_map, FiniteGroupoid};
use quantic::openness::{check_fr1, check_fr2};
use quantic::quantale::CheckConfig;

fn main() {
    let cfg = CheckConfig::default();
    for (name, g) in [("Z/2", FiniteGroupoid::cyclic(2)), ("S3", FiniteGroupoid::symmetric3())] {
        let p = group_algebra_support_map(g).unwrap();
        println!("{name}: FR1 passed = {}", check_fr1(&p, &cfg).unwrap().passed());
        match check_fr2(&p, &cfg).unwrap().witness {
            Some(w) => println!("{name}: FR2 fails at a = {}, x = {:#b}, b = {}", w.a, w.x, w.b),
            None => println!("{name}: no FR2 witness found"),
        }
    }
}
