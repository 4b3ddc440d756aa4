//! Builds relation and group quantales, validates them, and shows how a
//! single corrupted table entry is caught with a witness.

use quantic::catalog::{group_powerset_quantale, rel_quantale, FiniteGroupoid};
use quantic::format::quantale_to_doc;

fn main() {
    let rel = rel_quantale(2).expect("Rel(2)");
    println!("Rel(2): {} elements, unit {:?}", rel.size(), rel.unit());
    rel.validate().expect("relation composition is a quantale");
    let s3 = group_powerset_quantale(&FiniteGroupoid::symmetric3()).expect("P(S3)");
    println!("P(S3): {} elements", s3.size());

    let broken = rel.with_mult_entry(0b0010, 0b0010, 0b0010);
    match broken.validate() {
        Ok(()) => println!("mutation went unnoticed"),
        Err(v) => println!("mutated Rel(2): {v}"),
    }
    let doc = quantale_to_doc(&group_powerset_quantale(&FiniteGroupoid::cyclic(2)).unwrap());
    println!("{}", serde_json::to_string(&doc).unwrap());
}
