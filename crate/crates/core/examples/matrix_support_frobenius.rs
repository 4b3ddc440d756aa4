//! The support map Max M_n(Q) -> Rel(n): a semiopen surjection satisfying
//! both Frobenius conditions.

use quantic::catalog::matrix_support_map;
use quantic::openness::{check_fr1, check_fr2};
use quantic::quantale::{is_surjective, CheckConfig};

fn main() {
    let cfg = CheckConfig::with_seed(0);
    let p = matrix_support_map(2);
    println!("surjective: {:?}", is_surjective(&p, &cfg).is_surjective());
    let fr1 = check_fr1(&p, &cfg).unwrap();
    println!("FR1 passed: {} ({:?})", fr1.passed(), fr1.coverage);
    let fr2 = check_fr2(&p, &cfg).unwrap();
    println!("FR2 passed: {} ({:?})", fr2.passed(), fr2.coverage);
}
