//! Galois connections between finite lattices: a join-preserving map has a
//! right adjoint, and has a left adjoint exactly when it preserves meets.

use std::sync::Arc;

use quantic::suplattice::{FiniteSupLattice, SupMap};

fn main() {
    let p2 = Arc::new(FiniteSupLattice::powerset(2));
    let two = Arc::new(FiniteSupLattice::chain(2));
    // "is nonempty" and "contains the first point", as maps P(2) -> 2
    let nonempty = SupMap::new(p2.clone(), two.clone(), vec![0, 1, 1, 1]).expect("joins preserved");
    let first = SupMap::new(p2.clone(), two.clone(), vec![0, 1, 0, 1]).expect("joins preserved");
    for (name, f) in [("nonempty", &nonempty), ("first", &first)] {
        println!("{name}: {:?}, right adjoint {:?}", f.values(), f.right_adjoint().values());
        match f.left_adjoint() {
            Ok(l) => println!("  left adjoint {:?}", l.values()),
            Err(e) => println!("  no left adjoint: {e:?}"),
        }
    }
    for l in [FiniteSupLattice::diamond(), FiniteSupLattice::pentagon()] {
        println!("{} elements, strict order {:?}", l.size(), l.strict_pairs());
    }
}
