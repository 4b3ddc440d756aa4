//! Words of the free product Y*Q: grades, multiplication with letter
//! merging, the involution, and the graded truncation.

use std::sync::Arc;

use quantic::catalog::rel_quantale;
use quantic::freeprod::{FreeProduct, Tag, Word};
use quantic::quantale::FiniteInvQuantale;

fn main() {
    let concat = |_: Tag, a: &String, b: &String| format!("{a}{b}");
    let w5 = Word::alternating(Tag::Y, ["y", "a", "y'"].map(String::from)).unwrap();
    let w6 = Word::alternating(Tag::Q, ["b", "z", "b'"].map(String::from)).unwrap();
    let z5 = Word::alternating(Tag::Y, ["z", "b", "z'"].map(String::from)).unwrap();
    let p = w5.multiply(&w6, concat);
    println!("{w5} · {w6} = {p} in T{}", p.grade().0);
    let p = w5.multiply(&z5, concat);
    println!("{w5} · {z5} = {p} in T{}", p.grade().0);

    let fp = FreeProduct::new(Arc::new(rel_quantale(2).unwrap()), Arc::new(FiniteInvQuantale::omega()), 8);
    let u = Word::alternating(Tag::Y, [0b0010, 1]).unwrap();
    let v = Word::alternating(Tag::Y, [0b0100, 1, 0b1001]).unwrap();
    let uv = fp.word_multiply(&u, &v);
    println!("{u} · {v} = {uv}, involution {}", fp.word_involution(&uv));
    let y = Word::alternating(Tag::Y, [0b0110]).unwrap();
    let g = fp.multiply(&fp.embed(&u).unwrap(), &fp.embed(&y).unwrap()).unwrap();
    println!("graded product lives in grades {:?}", g.grades().collect::<Vec<_>>());
    println!("{u} · {v} with truncation 8: {:?}", fp.multiply(&fp.embed(&u).unwrap(), &fp.embed(&v).unwrap()).err());
}
