//! Tensor products of finite sup-lattices as lattices of bi-ideals, the
//! unit law and the map induced by a bimorphism.

use std::sync::Arc;

use quantic::suplattice::FiniteSupLattice;
use quantic::tensor::{induced_from_bimorphism, is_order_iso, unit_iso, TensorLattice};

fn main() {
    let omega = Arc::new(FiniteSupLattice::omega());
    let n5 = Arc::new(FiniteSupLattice::pentagon());
    let c3 = Arc::new(FiniteSupLattice::chain(3));
    let t = TensorLattice::new(vec![omega.clone(), n5.clone()]).unwrap();
    let iso = unit_iso(&t).unwrap();
    println!("Ω⊗N5 has {} elements; unit map is an iso: {}", t.elements().unwrap().len(), is_order_iso(&n5, &t.lattice().unwrap(), &iso));
    for (name, l, m) in [("C3⊗C3", c3.clone(), c3.clone()), ("M3⊗M3", Arc::new(FiniteSupLattice::diamond()), Arc::new(FiniteSupLattice::diamond()))] {
        let t = TensorLattice::new(vec![l, m]).unwrap();
        println!("{name}: {} elements", t.elements().unwrap().len());
    }
    let t = TensorLattice::new(vec![c3.clone(), c3.clone()]).unwrap();
    let min = induced_from_bimorphism(&t, c3.clone(), |xy| xy[0].min(xy[1])).unwrap();
    println!("min induces {:?}", min.sup_map().unwrap().values());
}
