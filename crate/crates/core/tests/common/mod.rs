//! Corpus and brute-force oracles shared by the integration tests. The
//! oracles recompute everything from raw tables and vectors, without going
//! through the checkers under test.
#![allow(dead_code)]

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use quantic::catalog::{
    self, finite_locale_map, group_powerset_quantale, omega_support_map, rel_quantale,
    FiniteGroupoid, FiniteTopology,
};
use quantic::freeprod::{Tag, Word};
use quantic::nucleus::{quotient, RelationPresentation};
use quantic::quantale::{FiniteInvQuantale, FiniteMap};
use quantic::suplattice::FiniteSupLattice;
use rand::Rng;

pub fn z2() -> Arc<FiniteInvQuantale> {
    Arc::new(group_powerset_quantale(&FiniteGroupoid::cyclic(2)).unwrap())
}

/// Non-unital quantale on the 3-chain: `a·b = ⊤` iff `a = b = ⊤`.
pub fn chain3_top_only() -> FiniteInvQuantale {
    let l = Arc::new(FiniteSupLattice::chain(3));
    FiniteInvQuantale::from_fn(l, |a, b| if a == 2 && b == 2 { 2 } else { 0 }, |a| a, None)
}

/// Łukasiewicz quantale on the 4-chain: `a·b = max(0, a + b - 3)`.
pub fn lukasiewicz4() -> FiniteInvQuantale {
    let l = Arc::new(FiniteSupLattice::chain(4));
    FiniteInvQuantale::from_fn(l, |a, b| (a + b).saturating_sub(3), |a| a, Some(3))
}

/// Finite quantales of the corpus, smallest first.
pub fn corpus_quantales() -> Vec<(String, FiniteInvQuantale)> {
    let frame = |l: FiniteSupLattice| FiniteInvQuantale::from_frame(Arc::new(l));
    let omega = FiniteInvQuantale::omega();
    let mut out = vec![
        ("trivial".to_string(), FiniteInvQuantale::trivial()),
        ("omega".into(), omega.clone()),
        ("chain3 frame".into(), frame(FiniteSupLattice::chain(3))),
        ("chain3 top-only".into(), chain3_top_only()),
        ("sierpinski frame".into(), FiniteTopology::sierpinski().frame()),
        ("chain4 frame".into(), frame(FiniteSupLattice::chain(4))),
        ("lukasiewicz4".into(), lukasiewicz4()),
        ("P(2) frame".into(), frame(FiniteSupLattice::powerset(2))),
        ("P(Z/2)".into(), (*z2()).clone()),
        ("omega x omega".into(), FiniteInvQuantale::product(&omega, &omega)),
        ("chain5 frame".into(), frame(FiniteSupLattice::chain(5))),
        ("Rel(1)".into(), rel_quantale(1).unwrap()),
        (
            "group algebra shadow".into(),
            (**catalog::finite_group_algebra_support().unwrap().source()).clone(),
        ),
        (
            "P(Z/3)".into(),
            group_powerset_quantale(&FiniteGroupoid::cyclic(3)).unwrap(),
        ),
        ("P(3) frame".into(), frame(FiniteSupLattice::powerset(3))),
        ("Rel(2)".into(), rel_quantale(2).unwrap()),
    ];
    out.sort_by_key(|(_, q)| q.size());
    out
}

pub fn corpus_lattices() -> Vec<(String, FiniteSupLattice)> {
    let mut out: Vec<(String, FiniteSupLattice)> = (1..=5)
        .map(|n| (format!("chain{n}"), FiniteSupLattice::chain(n)))
        .collect();
    out.push(("P(2)".into(), FiniteSupLattice::powerset(2)));
    out.push(("M3".into(), FiniteSupLattice::diamond()));
    out.push(("N5".into(), FiniteSupLattice::pentagon()));
    out.push(("omega x chain3".into(), FiniteSupLattice::product(&FiniteSupLattice::omega(), &FiniteSupLattice::chain(3))));
    out.push(("P(3)".into(), FiniteSupLattice::powerset(3)));
    out
}

/// `p: Ω → Ω×Ω` with `p*` the first projection: weakly open, not onto.
pub fn omega_to_square() -> FiniteMap {
    let omega = Arc::new(FiniteInvQuantale::omega());
    let square = Arc::new(FiniteInvQuantale::product(&omega, &omega));
    FiniteMap::from_table(omega, square, vec![0, 0, 1, 1]).unwrap()
}

/// Every finite map of the corpus.
pub fn corpus_maps() -> Vec<(String, FiniteMap)> {
    let mut maps = Vec::new();
    for (name, q) in corpus_quantales() {
        if q.size() <= 16 {
            maps.push((format!("id {name}"), FiniteMap::identity(Arc::new(q))));
        }
    }
    for (name, g) in [
        ("Z/2", FiniteGroupoid::cyclic(2)),
        ("Z/3", FiniteGroupoid::cyclic(3)),
        ("S3", FiniteGroupoid::symmetric3()),
    ] {
        let q = Arc::new(group_powerset_quantale(&g).unwrap());
        maps.push((format!("omega-support {name}"), omega_support_map(q).unwrap()));
    }
    maps.push(("discrete-to-point".into(), catalog::locale::discrete_two_to_point()));
    maps.push(("sierpinski-closed-point".into(), catalog::locale::sierpinski_closed_point()));
    maps.push(("open-inclusion".into(), catalog::locale::open_inclusion()));
    maps.push((
        "sierpinski-open-point".into(),
        finite_locale_map(&FiniteTopology::point(), &FiniteTopology::sierpinski(), &[0], false).unwrap(),
    ));
    maps.push((
        "discrete-swap".into(),
        finite_locale_map(&FiniteTopology::discrete(2), &FiniteTopology::discrete(2), &[1, 0], true).unwrap(),
    ));
    maps.push(("group-algebra-finite".into(), catalog::finite_group_algebra_support().unwrap()));
    maps.push(("regular-z2".into(), catalog::regular_representation_z2()));
    maps.push(("omega-to-square".into(), omega_to_square()));
    let rel = Arc::new(rel_quantale(2).unwrap());
    let omega = Arc::new(FiniteInvQuantale::omega());
    maps.push((
        "rel-diagonal".into(),
        FiniteMap::from_table(rel.clone(), omega.clone(), vec![0, 0b1001]).unwrap(),
    ));
    maps.push((
        "rel-full".into(),
        FiniteMap::from_table(rel.clone(), omega, vec![0, 0b1111]).unwrap(),
    ));
    let e_vs_g = RelationPresentation::new(z2(), vec![(1, 2)]).unwrap();
    maps.push((
        "quotient P(Z/2)/(e~g)".into(),
        quotient(&e_vs_g.nucleus().unwrap()).inclusion_map(),
    ));
    let diag_vs_full = RelationPresentation::new(rel, vec![(0b1001, 0b1111)]).unwrap();
    maps.push((
        "quotient Rel(2)/(Δ~⊤)".into(),
        quotient(&diag_vs_full.nucleus().unwrap()).inclusion_map(),
    ));
    maps
}

/// Raw tables of a finite map.
pub struct RawMap {
    pub q: Arc<FiniteInvQuantale>,
    pub x: Arc<FiniteInvQuantale>,
    pub inv: Vec<usize>,
}

impl RawMap {
    pub fn of(p: &FiniteMap) -> Self {
        RawMap {
            q: p.source().clone(),
            x: p.target().clone(),
            inv: p.inverse_table(),
        }
    }

    /// `p_!(a)`: the `x` with `x ≤ x' ⟺ a ≤ p*(x')` for all `x'`.
    pub fn direct(&self) -> Option<Vec<usize>> {
        let (ql, xl) = (self.q.lattice(), self.x.lattice());
        (0..self.q.size())
            .map(|a| {
                (0..self.x.size()).find(|&x| {
                    (0..self.x.size()).all(|x2| xl.leq(x, x2) == ql.leq(a, self.inv[x2]))
                })
            })
            .collect()
    }

    pub fn fr1(&self, d: &[usize]) -> bool {
        let (q, x) = (&self.q, &self.x);
        (0..q.size()).all(|a| (0..x.size()).all(|t| d[q.mul(a, self.inv[t])] == x.mul(d[a], t)))
    }

    pub fn fr1_right(&self, d: &[usize]) -> bool {
        let (q, x) = (&self.q, &self.x);
        (0..q.size()).all(|a| (0..x.size()).all(|t| d[q.mul(self.inv[t], a)] == x.mul(t, d[a])))
    }

    pub fn fr2(&self, d: &[usize]) -> bool {
        let (q, x) = (&self.q, &self.x);
        (0..q.size()).all(|a| {
            (0..q.size()).all(|b| {
                (0..x.size()).all(|t| d[q.mul(q.mul(a, self.inv[t]), b)] == x.mul(x.mul(d[a], t), d[b]))
            })
        })
    }

    /// `p*` injective.
    pub fn surjective(&self) -> bool {
        let mut seen = vec![false; self.q.size()];
        self.inv.iter().all(|&a| !std::mem::replace(&mut seen[a], true))
    }
}

/// Product in the groupoid algebra, from the groupoid table.
pub fn convolve(g: &FiniteGroupoid, v: &[BigRational], w: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); g.size()];
    for (i, vi) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (j, wj) in w.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if let Some(k) = g.mul(i, j) {
                out[k] += vi * wj;
            }
        }
    }
    out
}

pub fn support_of(v: &[BigRational]) -> u64 {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

/// Product of subsets in `P(G)`.
pub fn subset_product(g: &FiniteGroupoid, u: u64, v: u64) -> u64 {
    let mut out = 0;
    for i in (0..g.size()).filter(|i| u >> i & 1 == 1) {
        for j in (0..g.size()).filter(|j| v >> j & 1 == 1) {
            if let Some(k) = g.mul(i, j) {
                out |= 1 << k;
            }
        }
    }
    out
}

pub fn unit_vector(n: usize, i: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    v[i] = BigRational::from_integer(1.into());
    v
}

pub fn int_vector(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&c| BigRational::from_integer(c.into())).collect()
}

/// Support of `span(a)·span{e_g : g ∈ x}·span(b)` from spanning vectors:
/// a coordinate is nonzero somewhere in a span iff it is nonzero in some
/// spanning vector.
pub fn sandwich_support(g: &FiniteGroupoid, a: &[Vec<BigRational>], x: u64, b: &[Vec<BigRational>]) -> u64 {
    let n = g.size();
    let mut out = 0;
    for u in a {
        for k in (0..n).filter(|k| x >> k & 1 == 1) {
            let left = convolve(g, u, &unit_vector(n, k));
            for w in b {
                out |= support_of(&convolve(g, &left, w));
            }
        }
    }
    out
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> Vec<BigRational> {
    (0..n)
        .map(|_| {
            if rng.gen_bool(0.4) {
                BigRational::zero()
            } else {
                BigRational::from_integer(rng.gen_range(-3i64..=3).into())
            }
        })
        .collect()
}

/// Product of alternating words by concatenation and merging of equal
/// neighbours, computed letter by letter.
pub fn word_product_oracle(y: &FiniteInvQuantale, q: &FiniteInvQuantale, u: &Word, v: &Word) -> Word {
    let mut letters: Vec<(Tag, usize)> = Vec::new();
    for &(t, a) in u.letters().iter().chain(v.letters()) {
        match letters.last_mut() {
            Some((last, b)) if *last == t => {
                *b = match t {
                    Tag::Y => y.mul(*b, a),
                    Tag::Q => q.mul(*b, a),
                }
            }
            _ => letters.push((t, a)),
        }
    }
    Word::new(letters).unwrap()
}

pub fn word_involution_oracle(y: &FiniteInvQuantale, q: &FiniteInvQuantale, w: &Word) -> Word {
    let letters = w
        .letters()
        .iter()
        .rev()
        .map(|&(t, a)| match t {
            Tag::Y => (t, y.star(a)),
            Tag::Q => (t, q.star(a)),
        })
        .collect();
    Word::new(letters).unwrap()
}

pub fn random_word(rng: &mut impl Rng, y: usize, q: usize, maxlen: usize) -> Word {
    let len = rng.gen_range(1..=maxlen);
    let start = if rng.gen_bool(0.5) { Tag::Y } else { Tag::Q };
    let mut tag = start;
    let mut letters = Vec::with_capacity(len);
    for _ in 0..len {
        let size = if tag == Tag::Y { y } else { q };
        letters.push((tag, rng.gen_range(0..size)));
        tag = if tag == Tag::Y { Tag::Q } else { Tag::Y };
    }
    Word::new(letters).unwrap()
}

/// A random bimorphism `L × M → K` of the form
/// `(l, m) ↦ ⋁{k_r : l ≰ c_r, m ≰ d_r}`. Each term preserves joins in each
/// variable because `l ∨ l' ≰ c` iff `l ≰ c` or `l' ≰ c`.
pub struct RandomBimorphism {
    pub terms: Vec<(usize, usize, usize)>,
}

impl RandomBimorphism {
    pub fn draw(rng: &mut impl Rng, l: &FiniteSupLattice, m: &FiniteSupLattice, k: &FiniteSupLattice) -> Self {
        let n = rng.gen_range(0..=3);
        RandomBimorphism {
            terms: (0..n)
                .map(|_| (rng.gen_range(0..l.size()), rng.gen_range(0..m.size()), rng.gen_range(0..k.size())))
                .collect(),
        }
    }

    pub fn eval(&self, l: &FiniteSupLattice, m: &FiniteSupLattice, k: &FiniteSupLattice, a: usize, b: usize) -> usize {
        k.join(
            self.terms
                .iter()
                .filter(|&&(c, d, _)| !l.leq(a, c) && !m.leq(b, d))
                .map(|&(_, _, v)| v),
        )
    }
}

/// Number of bi-ideals of `L × M` by enumerating every subset of the grid.
pub fn brute_bi_ideal_count(l: &FiniteSupLattice, m: &FiniteSupLattice) -> usize {
    let (nl, nm) = (l.size(), m.size());
    let cells = nl * nm;
    assert!(cells <= 20, "grid too large for subset enumeration");
    let at = |s: u32, a: usize, b: usize| s >> (a * nm + b) & 1 == 1;
    (0u32..1 << cells)
        .filter(|&s| {
            let lines = (0..nl).all(|a| at(s, a, m.bottom())) && (0..nm).all(|b| at(s, l.bottom(), b));
            let down = (0..nl).all(|a| {
                (0..nm).all(|b| {
                    !at(s, a, b) || (0..nl).all(|a2| (0..nm).all(|b2| !(l.leq(a2, a) && m.leq(b2, b)) || at(s, a2, b2)))
                })
            });
            let joins = (0..nl).all(|a| {
                (0..nm).all(|b| {
                    (0..nl).all(|a2| {
                        (!at(s, a, b) || !at(s, a2, b) || at(s, l.join2(a, a2), b))
                            && (0..nm).all(|b2| !at(s, a, b) || !at(s, a, b2) || at(s, a, m.join2(b, b2)))
                    })
                })
            });
            lines && down && joins
        })
        .count()
}
