//! Finite sup-lattices, join-preserving maps, Galois adjoints and closure
//! operators.
//!
//! Elements are dense indices `0..n`. The order is stored as a bit matrix of
//! up-sets and the binary join/meet tables are precomputed when a lattice is
//! validated, so every downstream check is a plain table lookup.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Which partial-order axiom a relation violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderAxiom {
    Antisymmetry,
    Transitivity,
}

impl fmt::Display for OrderAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderAxiom::Antisymmetry => f.write_str("antisymmetry"),
            OrderAxiom::Transitivity => f.write_str("transitivity"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("element index {index} out of range for {size} elements")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("{names} names given for {size} elements")]
    NameCount { names: usize, size: usize },
    #[error("not a partial order: {axiom} fails at {witness:?}")]
    NotAPartialOrder {
        axiom: OrderAxiom,
        witness: Vec<usize>,
    },
    #[error("no bottom element")]
    NoBottom,
    #[error("elements {0} and {1} have no least upper bound")]
    MissingJoin(usize, usize),
}

/// Square bit matrix; row `i` holds the up-set of `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// First column set in `row(sup)` but not in `row(sub)`.
    fn first_missing(&self, sub: usize, sup: usize) -> Option<usize> {
        let a = self.row(sub);
        let b = self.row(sup);
        for w in 0..self.words {
            let diff = b[w] & !a[w];
            if diff != 0 {
                return Some(w * 64 + diff.trailing_zeros() as usize);
            }
        }
        None
    }

    fn row_contains(&self, sup: usize, sub_row: &[u64]) -> bool {
        self.row(sup)
            .iter()
            .zip(sub_row)
            .all(|(big, small)| small & !big == 0)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix({}x{})", self.n, self.n)
    }
}

/// A finite lattice given by its order relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSupLattice {
    size: usize,
    up: BitMatrix,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
    names: Option<Vec<String>>,
}

impl FiniteSupLattice {
    /// Validates an order relation and precomputes join and meet tables.
    /// Reflexive pairs may be omitted.
    pub fn validate(
        size: usize,
        leq: impl IntoIterator<Item = (usize, usize)>,
        names: Option<Vec<String>>,
    ) -> Result<Self, LatticeError> {
        if size == 0 {
            return Err(LatticeError::Empty);
        }
        if let Some(names) = &names {
            if names.len() != size {
                return Err(LatticeError::NameCount {
                    names: names.len(),
                    size,
                });
            }
        }
        let mut up = BitMatrix::new(size);
        for i in 0..size {
            up.set(i, i);
        }
        for (i, j) in leq {
            for index in [i, j] {
                if index >= size {
                    return Err(LatticeError::IndexOutOfRange { index, size });
                }
            }
            up.set(i, j);
        }
        for i in 0..size {
            for j in (i + 1)..size {
                if up.get(i, j) && up.get(j, i) {
                    return Err(LatticeError::NotAPartialOrder {
                        axiom: OrderAxiom::Antisymmetry,
                        witness: vec![i, j],
                    });
                }
            }
        }
        // i <= j implies up(j) ⊆ up(i)
        for i in 0..size {
            for j in 0..size {
                if i != j && up.get(i, j) {
                    if let Some(k) = up.first_missing(i, j) {
                        return Err(LatticeError::NotAPartialOrder {
                            axiom: OrderAxiom::Transitivity,
                            witness: vec![i, j, k],
                        });
                    }
                }
            }
        }
        let bottom = (0..size)
            .find(|&b| (0..size).all(|x| up.get(b, x)))
            .ok_or(LatticeError::NoBottom)?;

        let mut join = vec![0; size * size];
        let mut upper = vec![0u64; up.words];
        for a in 0..size {
            for b in a..size {
                for (w, slot) in upper.iter_mut().enumerate() {
                    *slot = up.row(a)[w] & up.row(b)[w];
                }
                let least = (0..size)
                    .filter(|&c| upper[c / 64] >> (c % 64) & 1 == 1)
                    .find(|&c| up.row_contains(c, &upper))
                    .ok_or(LatticeError::MissingJoin(a, b))?;
                join[a * size + b] = least;
                join[b * size + a] = least;
            }
        }
        Ok(Self::from_parts(size, up, join, bottom, names))
    }

    fn from_parts(
        size: usize,
        up: BitMatrix,
        join: Vec<usize>,
        bottom: usize,
        names: Option<Vec<String>>,
    ) -> Self {
        let top = (0..size).fold(bottom, |acc, x| join[acc * size + x]);
        let mut meet = vec![0; size * size];
        for a in 0..size {
            for b in a..size {
                let m = (0..size)
                    .filter(|&c| up.get(c, a) && up.get(c, b))
                    .fold(bottom, |acc, c| join[acc * size + c]);
                meet[a * size + b] = m;
                meet[b * size + a] = m;
            }
        }
        FiniteSupLattice {
            size,
            up,
            join,
            meet,
            bottom,
            top,
            names,
        }
    }

    /// The powerset of a `bits`-element set; element `m` is the subset with
    /// bitmask `m`.
    pub fn powerset(bits: u32) -> Self {
        assert!(bits < 16, "powerset of {bits} points is too large to tabulate");
        let size = 1usize << bits;
        let mut up = BitMatrix::new(size);
        let mut join = vec![0; size * size];
        let mut meet = vec![0; size * size];
        for a in 0..size {
            for b in 0..size {
                if a & b == a {
                    up.set(a, b);
                }
                join[a * size + b] = a | b;
                meet[a * size + b] = a & b;
            }
        }
        FiniteSupLattice {
            size,
            up,
            join,
            meet,
            bottom: 0,
            top: size - 1,
            names: None,
        }
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let pairs = (0..n).flat_map(|i| (i..n).map(move |j| (i, j)));
        Self::validate(n, pairs, None).expect("a chain is a lattice")
    }

    /// `M3`: bottom 0, atoms 1, 2, 3, top 4.
    pub fn diamond() -> Self {
        let mut pairs = vec![(0, 4)];
        for a in 1..4 {
            pairs.extend([(0, a), (a, 4)]);
        }
        Self::validate(5, pairs, None).expect("M3 is a lattice")
    }

    /// `N5`: `0 < 1 < 2 < 4` and `0 < 3 < 4`.
    pub fn pentagon() -> Self {
        let pairs = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 4), (2, 4), (3, 4)];
        Self::validate(5, pairs, None).expect("N5 is a lattice")
    }

    /// Two-element lattice `{0 < 1}`.
    pub fn omega() -> Self {
        Self::chain(2)
    }

    /// Cartesian product ordered coordinatewise; element `(a, b)` has index
    /// `a * right.size() + b`.
    pub fn product(left: &Self, right: &Self) -> Self {
        let (n, m) = (left.size, right.size);
        let size = n * m;
        let mut up = BitMatrix::new(size);
        let mut join = vec![0; size * size];
        for a in 0..size {
            for b in 0..size {
                let (a1, a2) = (a / m, a % m);
                let (b1, b2) = (b / m, b % m);
                if left.leq(a1, b1) && right.leq(a2, b2) {
                    up.set(a, b);
                }
                join[a * size + b] = left.join2(a1, b1) * m + right.join2(a2, b2);
            }
        }
        let bottom = left.bottom * m + right.bottom;
        Self::from_parts(size, up, join, bottom, None)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up.get(a, b)
    }

    #[inline]
    pub fn join2(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b]
    }

    #[inline]
    pub fn meet2(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b]
    }

    /// Least upper bound; the empty join is bottom.
    pub fn join(&self, elems: impl IntoIterator<Item = usize>) -> usize {
        elems
            .into_iter()
            .fold(self.bottom, |acc, x| self.join2(acc, x))
    }

    /// Greatest lower bound; the empty meet is top.
    pub fn meet(&self, elems: impl IntoIterator<Item = usize>) -> usize {
        elems.into_iter().fold(self.top, |acc, x| self.meet2(acc, x))
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn name(&self, i: usize) -> String {
        match &self.names {
            Some(names) => names[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, LatticeError> {
        if names.len() != self.size {
            return Err(LatticeError::NameCount {
                names: names.len(),
                size: self.size,
            });
        }
        self.names = Some(names);
        Ok(self)
    }

    /// All strict order pairs `(i, j)` with `i < j`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.size {
            for j in 0..self.size {
                if i != j && self.leq(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Same carrier and order, names ignored.
    pub fn same_order(&self, other: &Self) -> bool {
        self.size == other.size && self.up == other.up
    }
}

/// Why a function between lattices fails to preserve joins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum SupMapViolation {
    #[error("bottom is sent to {image}")]
    Bottom { image: usize },
    #[error("join of {a} and {b} is not preserved")]
    Join { a: usize, b: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SupMapError {
    #[error("expected {expected} values, got {got}")]
    Length { expected: usize, got: usize },
    #[error("value {value} at {at} is not an element of the codomain")]
    OutOfRange { at: usize, value: usize },
    #[error("not join-preserving: {0}")]
    NotSupPreserving(SupMapViolation),
}

/// Checks that `values` (indexed by `dom`) preserves bottom and binary joins.
/// The least violating pair in lexicographic order is reported.
pub fn is_sup_map(
    dom: &FiniteSupLattice,
    cod: &FiniteSupLattice,
    values: &[usize],
) -> Result<(), SupMapViolation> {
    let image = values[dom.bottom()];
    if image != cod.bottom() {
        return Err(SupMapViolation::Bottom { image });
    }
    for a in dom.elements() {
        for b in dom.elements() {
            if values[dom.join2(a, b)] != cod.join2(values[a], values[b]) {
                return Err(SupMapViolation::Join { a, b });
            }
        }
    }
    Ok(())
}

/// The adjunction `g(m) <= l  <=>  m <= f(l)` fails at `(m, l)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("no left adjoint: adjunction fails at (m = {m}, l = {l})")]
pub struct NoLeftAdjoint {
    pub m: usize,
    pub l: usize,
}

/// A join-preserving map between finite lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupMap {
    dom: Arc<FiniteSupLattice>,
    cod: Arc<FiniteSupLattice>,
    values: Vec<usize>,
}

impl SupMap {
    pub fn new(
        dom: Arc<FiniteSupLattice>,
        cod: Arc<FiniteSupLattice>,
        values: Vec<usize>,
    ) -> Result<Self, SupMapError> {
        if values.len() != dom.size() {
            return Err(SupMapError::Length {
                expected: dom.size(),
                got: values.len(),
            });
        }
        if let Some((at, &value)) = values.iter().enumerate().find(|(_, &v)| v >= cod.size()) {
            return Err(SupMapError::OutOfRange { at, value });
        }
        is_sup_map(&dom, &cod, &values).map_err(SupMapError::NotSupPreserving)?;
        Ok(SupMap { dom, cod, values })
    }

    pub fn identity(lattice: Arc<FiniteSupLattice>) -> Self {
        let values = lattice.elements().collect();
        SupMap {
            dom: lattice.clone(),
            cod: lattice,
            values,
        }
    }

    pub fn constant_bottom(dom: Arc<FiniteSupLattice>, cod: Arc<FiniteSupLattice>) -> Self {
        let values = vec![cod.bottom(); dom.size()];
        SupMap { dom, cod, values }
    }

    pub fn dom(&self) -> &Arc<FiniteSupLattice> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FiniteSupLattice> {
        &self.cod
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.values[a]
    }

    /// `self` after `first`.
    pub fn compose_after(&self, first: &SupMap) -> SupMap {
        assert!(first.cod.same_order(&self.dom), "maps do not compose");
        SupMap {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            values: first.values.iter().map(|&x| self.values[x]).collect(),
        }
    }

    /// `f_*(m) = ⋁{l : f(l) <= m}`; always exists for a join-preserving `f`.
    pub fn right_adjoint(&self) -> SupMap {
        let values: Vec<usize> = self
            .cod
            .elements()
            .map(|m| {
                self.dom
                    .join(self.dom.elements().filter(|&l| self.cod.leq(self.values[l], m)))
            })
            .collect();
        debug_assert!(self.dom.elements().all(|l| self.cod.elements().all(|m| {
            self.cod.leq(self.values[l], m) == self.dom.leq(l, values[m])
        })));
        SupMap {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            values,
        }
    }

    /// Candidate `g(m) = ⋀{l : m <= f(l)}`, kept only if the adjunction holds
    /// on every pair.
    pub fn left_adjoint(&self) -> Result<SupMap, NoLeftAdjoint> {
        let values: Vec<usize> = self
            .cod
            .elements()
            .map(|m| {
                self.dom
                    .meet(self.dom.elements().filter(|&l| self.cod.leq(m, self.values[l])))
            })
            .collect();
        for m in self.cod.elements() {
            for l in self.dom.elements() {
                if self.dom.leq(values[m], l) != self.cod.leq(m, self.values[l]) {
                    return Err(NoLeftAdjoint { m, l });
                }
            }
        }
        Ok(SupMap {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            values,
        })
    }

    /// Preservation of all meets, including the empty one.
    pub fn preserves_meets(&self) -> bool {
        self.values[self.dom.top()] == self.cod.top()
            && self.dom.elements().all(|a| {
                self.dom.elements().all(|b| {
                    self.values[self.dom.meet2(a, b)]
                        == self.cod.meet2(self.values[a], self.values[b])
                })
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("closed family is missing the top element")]
    MissingTop,
    #[error("closed family is not meet-closed: meet of {0} and {1} is missing")]
    NotMeetClosed(usize, usize),
    #[error("element {0} is not in the lattice")]
    OutOfRange(usize),
    #[error("not inflationary at {0}")]
    NotInflationary(usize),
    #[error("not monotone at ({0}, {1})")]
    NotMonotone(usize, usize),
    #[error("not idempotent at {0}")]
    NotIdempotent(usize),
}

/// An inflationary, monotone, idempotent self-map of a finite lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureOperator {
    lattice: Arc<FiniteSupLattice>,
    values: Vec<usize>,
}

impl ClosureOperator {
    pub fn new(lattice: Arc<FiniteSupLattice>, values: Vec<usize>) -> Result<Self, ClosureError> {
        if let Some(&bad) = values.iter().find(|&&v| v >= lattice.size()) {
            return Err(ClosureError::OutOfRange(bad));
        }
        assert_eq!(values.len(), lattice.size());
        for a in lattice.elements() {
            if !lattice.leq(a, values[a]) {
                return Err(ClosureError::NotInflationary(a));
            }
            if values[values[a]] != values[a] {
                return Err(ClosureError::NotIdempotent(a));
            }
        }
        for a in lattice.elements() {
            for b in lattice.elements() {
                if lattice.leq(a, b) && !lattice.leq(values[a], values[b]) {
                    return Err(ClosureError::NotMonotone(a, b));
                }
            }
        }
        Ok(ClosureOperator { lattice, values })
    }

    /// `j(a)` is the meet of the closed elements above `a`.
    pub fn from_closed_family(
        lattice: Arc<FiniteSupLattice>,
        closed: &[usize],
    ) -> Result<Self, ClosureError> {
        let mut member = vec![false; lattice.size()];
        for &c in closed {
            if c >= lattice.size() {
                return Err(ClosureError::OutOfRange(c));
            }
            member[c] = true;
        }
        if !member[lattice.top()] {
            return Err(ClosureError::MissingTop);
        }
        for &a in closed {
            for &b in closed {
                if !member[lattice.meet2(a, b)] {
                    return Err(ClosureError::NotMeetClosed(a, b));
                }
            }
        }
        let values = lattice
            .elements()
            .map(|a| {
                lattice.meet(
                    lattice
                        .elements()
                        .filter(|&c| member[c] && lattice.leq(a, c)),
                )
            })
            .collect();
        Ok(ClosureOperator { lattice, values })
    }

    pub fn identity(lattice: Arc<FiniteSupLattice>) -> Self {
        let values = lattice.elements().collect();
        ClosureOperator { lattice, values }
    }

    pub fn lattice(&self) -> &Arc<FiniteSupLattice> {
        &self.lattice
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.values[a]
    }

    /// Closed elements in increasing index order.
    pub fn fixed_points(&self) -> Vec<usize> {
        self.lattice
            .elements()
            .filter(|&a| self.values[a] == a)
            .collect()
    }
}
