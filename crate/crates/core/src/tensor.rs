//! Tensor products and direct sums of finite sup-lattices.
//!
//! An element of `L_1 ⊗ ... ⊗ L_k` is a bi-ideal: a subset of the product
//! grid that is down-closed, contains every tuple with a bottom coordinate,
//! and is closed under joins along each coordinate line. Bi-ideals are
//! stored as bitsets over the grid (row-major, last coordinate fastest).

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::suplattice::{FiniteSupLattice, SupMap};

/// Default largest grid that is enumerated.
pub const DEFAULT_ENUMERATION_BOUND: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("grid of {grid} tuples exceeds the enumeration bound {bound}")]
    EnumerationBoundExceeded { grid: usize, bound: usize },
    #[error("not a bimorphism in coordinate {coordinate} at {tuple:?}: values {pair:?}")]
    NotBimorphism {
        coordinate: usize,
        tuple: Vec<usize>,
        pair: (usize, usize),
    },
    #[error("tuple {0:?} does not fit the factors")]
    BadTuple(Vec<usize>),
    #[error("no factors")]
    NoFactors,
}

/// A subset of the product grid closed under the bi-ideal rules.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BiIdeal {
    bits: Vec<u64>,
}

impl BiIdeal {
    fn empty(grid: usize) -> Self {
        BiIdeal {
            bits: vec![0; grid.div_ceil(64)],
        }
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.bits[idx / 64] >> (idx % 64) & 1 == 1
    }

    fn insert(&mut self, idx: usize) -> bool {
        let fresh = !self.contains(idx);
        self.bits[idx / 64] |= 1 << (idx % 64);
        fresh
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            (0..64)
                .filter(move |b| word >> b & 1 == 1)
                .map(move |b| w * 64 + b)
        })
    }

    fn union(&self, other: &Self) -> Self {
        BiIdeal {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect(),
        }
    }

    fn intersection(&self, other: &Self) -> Self {
        BiIdeal {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect(),
        }
    }
}

/// `L_1 ⊗ ... ⊗ L_k`. Element operations work for any grid size; full
/// enumeration needs the grid within the enumeration bound.
#[derive(Debug)]
pub struct TensorLattice {
    factors: Vec<Arc<FiniteSupLattice>>,
    strides: Vec<usize>,
    grid: usize,
    bound: usize,
    lower_covers: Vec<Vec<Vec<usize>>>,
    upper_covers: Vec<Vec<Vec<usize>>>,
    axes: BiIdeal,
    enumerated: OnceLock<Enumeration>,
}

#[derive(Debug)]
struct Enumeration {
    elements: Vec<BiIdeal>,
    index: HashMap<BiIdeal, usize>,
    lattice: Arc<FiniteSupLattice>,
}

fn covers(l: &FiniteSupLattice) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let n = l.size();
    let mut lower = vec![Vec::new(); n];
    let mut upper = vec![Vec::new(); n];
    for (a, b) in l.strict_pairs() {
        let between = l
            .elements()
            .any(|c| c != a && c != b && l.leq(a, c) && l.leq(c, b));
        if !between {
            lower[b].push(a);
            upper[a].push(b);
        }
    }
    (lower, upper)
}

impl TensorLattice {
    pub fn new(factors: Vec<Arc<FiniteSupLattice>>) -> Result<Self, TensorError> {
        Self::with_bound(factors, DEFAULT_ENUMERATION_BOUND)
    }

    pub fn with_bound(factors: Vec<Arc<FiniteSupLattice>>, bound: usize) -> Result<Self, TensorError> {
        if factors.is_empty() {
            return Err(TensorError::NoFactors);
        }
        let k = factors.len();
        let mut strides = vec![1; k];
        for i in (0..k - 1).rev() {
            strides[i] = strides[i + 1] * factors[i + 1].size();
        }
        let grid = strides[0] * factors[0].size();
        let (lower_covers, upper_covers) = factors.iter().map(|l| covers(l)).unzip();
        let mut t = TensorLattice {
            factors,
            strides,
            grid,
            bound,
            lower_covers,
            upper_covers,
            axes: BiIdeal::empty(grid),
            enumerated: OnceLock::new(),
        };
        let mut axes = BiIdeal::empty(grid);
        for idx in 0..grid {
            let tuple = t.decode(idx);
            if tuple
                .iter()
                .zip(&t.factors)
                .any(|(&c, l)| c == l.bottom())
            {
                axes.insert(idx);
            }
        }
        t.axes = axes;
        Ok(t)
    }

    pub fn factors(&self) -> &[Arc<FiniteSupLattice>] {
        &self.factors
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        tuple.iter().zip(&self.strides).map(|(t, s)| t * s).sum()
    }

    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|s| {
                let c = idx / s;
                idx %= s;
                c
            })
            .collect()
    }

    fn check_tuple(&self, tuple: &[usize]) -> Result<(), TensorError> {
        if tuple.len() != self.factors.len()
            || tuple.iter().zip(&self.factors).any(|(&c, l)| c >= l.size())
        {
            return Err(TensorError::BadTuple(tuple.to_vec()));
        }
        Ok(())
    }

    /// The bottom element: tuples with some bottom coordinate.
    pub fn bottom(&self) -> BiIdeal {
        self.axes.clone()
    }

    pub fn top(&self) -> BiIdeal {
        let mut b = BiIdeal::empty(self.grid);
        for idx in 0..self.grid {
            b.insert(idx);
        }
        b
    }

    /// Least bi-ideal containing the given tuple indices.
    pub fn closure(&self, seed: impl IntoIterator<Item = usize>) -> BiIdeal {
        let mut set = self.axes.clone();
        let mut work: Vec<usize> = Vec::new();
        for idx in seed {
            if set.insert(idx) {
                work.push(idx);
            }
        }
        loop {
            self.down_close(&mut set, work.drain(..).collect());
            let added = self.line_joins(&mut set);
            if added.is_empty() {
                return set;
            }
            work = added;
        }
    }

    fn down_close(&self, set: &mut BiIdeal, mut work: Vec<usize>) {
        while let Some(idx) = work.pop() {
            let tuple = self.decode(idx);
            for (i, &c) in tuple.iter().enumerate() {
                for &below in &self.lower_covers[i][c] {
                    let j = idx - c * self.strides[i] + below * self.strides[i];
                    if set.insert(j) {
                        work.push(j);
                    }
                }
            }
        }
    }

    /// Adds the join of the members on every coordinate line; returns the
    /// newly added indices.
    fn line_joins(&self, set: &mut BiIdeal) -> Vec<usize> {
        let mut added = Vec::new();
        for (i, l) in self.factors.iter().enumerate() {
            let s = self.strides[i];
            for base in 0..self.grid {
                if (base / s) % l.size() != 0 {
                    continue;
                }
                let j = l.join(l.elements().filter(|&v| set.contains(base + v * s)));
                if set.insert(base + j * s) {
                    added.push(base + j * s);
                }
            }
        }
        added
    }

    /// `t_1 ⊗ ... ⊗ t_k`: the down-set of the tuple together with the axes.
    pub fn pure(&self, tuple: &[usize]) -> Result<BiIdeal, TensorError> {
        self.check_tuple(tuple)?;
        let mut set = self.axes.clone();
        let idx = self.encode(tuple);
        set.insert(idx);
        self.down_close(&mut set, vec![idx]);
        Ok(set)
    }

    pub fn join(&self, a: &BiIdeal, b: &BiIdeal) -> BiIdeal {
        let u = a.union(b);
        let members: Vec<usize> = u.members().collect();
        self.closure(members)
    }

    pub fn meet(&self, a: &BiIdeal, b: &BiIdeal) -> BiIdeal {
        a.intersection(b)
    }

    pub fn leq(&self, a: &BiIdeal, b: &BiIdeal) -> bool {
        a.is_subset(b)
    }

    /// Checks the bi-ideal rules on an arbitrary member set.
    pub fn is_bi_ideal(&self, set: &BiIdeal) -> bool {
        self.axes.is_subset(set) && self.closure(set.members()) == *set
    }

    /// Maximal members not on an axis: the pure tensors whose join is
    /// `g`.
    pub fn generators(&self, g: &BiIdeal) -> Vec<Vec<usize>> {
        g.members()
            .filter(|&idx| !self.axes.contains(idx))
            .filter(|&idx| {
                let tuple = self.decode(idx);
                tuple.iter().enumerate().all(|(i, &c)| {
                    self.upper_covers[i][c]
                        .iter()
                        .all(|&up| !g.contains(idx - c * self.strides[i] + up * self.strides[i]))
                })
            })
            .map(|idx| self.decode(idx))
            .collect()
    }

    fn enumeration(&self) -> Result<&Enumeration, TensorError> {
        if self.grid > self.bound {
            return Err(TensorError::EnumerationBoundExceeded {
                grid: self.grid,
                bound: self.bound,
            });
        }
        Ok(self.enumerated.get_or_init(|| self.enumerate()))
    }

    fn enumerate(&self) -> Enumeration {
        let pures: Vec<BiIdeal> = (0..self.grid)
            .filter(|&idx| !self.axes.contains(idx))
            .map(|idx| self.pure(&self.decode(idx)).unwrap())
            .collect();
        let mut seen: HashSet<BiIdeal> = HashSet::from([self.bottom()]);
        let mut queue = VecDeque::from([self.bottom()]);
        while let Some(e) = queue.pop_front() {
            for p in &pures {
                if p.is_subset(&e) {
                    continue;
                }
                let next = self.join(&e, p);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        let mut elements: Vec<BiIdeal> = seen.into_iter().collect();
        elements.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index: HashMap<BiIdeal, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let n = elements.len();
        let mut leq = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if elements[i].is_subset(&elements[j]) {
                    leq.push((i, j));
                }
            }
        }
        let lattice = FiniteSupLattice::validate(n, leq, None)
            .expect("bi-ideals ordered by inclusion form a lattice");
        Enumeration {
            elements,
            index,
            lattice: Arc::new(lattice),
        }
    }

    /// All elements, ordered by size then bits.
    pub fn elements(&self) -> Result<&[BiIdeal], TensorError> {
        Ok(&self.enumeration()?.elements)
    }

    /// The tensor product as a finite sup-lattice; element `i` is
    /// `elements()[i]`.
    pub fn lattice(&self) -> Result<Arc<FiniteSupLattice>, TensorError> {
        Ok(self.enumeration()?.lattice.clone())
    }

    pub fn index_of(&self, g: &BiIdeal) -> Result<Option<usize>, TensorError> {
        Ok(self.enumeration()?.index.get(g).copied())
    }
}

/// A map out of the tensor product induced by a bimorphism.
pub struct InducedMap<'a> {
    tensor: &'a TensorLattice,
    codomain: Arc<FiniteSupLattice>,
    values: Vec<usize>,
}

impl InducedMap<'_> {
    /// Join of the bimorphism over the members of `g`.
    pub fn apply(&self, g: &BiIdeal) -> usize {
        self.codomain.join(g.members().map(|idx| self.values[idx]))
    }

    /// The bimorphism's value on a tuple.
    pub fn on_tuple(&self, tuple: &[usize]) -> usize {
        self.values[self.tensor.encode(tuple)]
    }

    /// The induced map as a sup-lattice map on the enumerated tensor.
    pub fn sup_map(&self) -> Result<SupMap, TensorError> {
        let dom = self.tensor.lattice()?;
        let values = self
            .tensor
            .elements()?
            .iter()
            .map(|g| self.apply(g))
            .collect();
        Ok(SupMap::new(dom, self.codomain.clone(), values).expect("induced maps preserve joins"))
    }
}

/// Checks that `b` preserves joins (including the empty join) in each
/// coordinate separately and returns the induced map on the tensor.
pub fn induced_from_bimorphism<'a>(
    tensor: &'a TensorLattice,
    codomain: Arc<FiniteSupLattice>,
    b: impl Fn(&[usize]) -> usize,
) -> Result<InducedMap<'a>, TensorError> {
    let values: Vec<usize> = (0..tensor.grid).map(|idx| b(&tensor.decode(idx))).collect();
    for idx in 0..tensor.grid {
        let tuple = tensor.decode(idx);
        for (i, l) in tensor.factors.iter().enumerate() {
            let s = tensor.strides[i];
            let base = idx - tuple[i] * s;
            if tuple[i] == l.bottom() && values[idx] != codomain.bottom() {
                return Err(TensorError::NotBimorphism {
                    coordinate: i,
                    tuple,
                    pair: (l.bottom(), l.bottom()),
                });
            }
            // pairs (tuple[i], v) with v >= tuple[i] cover all pairs once
            for v in l.elements() {
                let u = tuple[i];
                let j = l.join2(u, v);
                if values[base + j * s] != codomain.join2(values[idx], values[base + v * s]) {
                    return Err(TensorError::NotBimorphism {
                        coordinate: i,
                        tuple,
                        pair: (u, v),
                    });
                }
            }
        }
    }
    Ok(InducedMap {
        tensor,
        codomain,
        values,
    })
}

/// Isomorphism `L -> Ω ⊗ L`, `l ↦ 1 ⊗ l`, as an index table.
pub fn unit_iso(omega_tensor_l: &TensorLattice) -> Result<Vec<usize>, TensorError> {
    let l = omega_tensor_l.factors[1].clone();
    l.elements()
        .map(|x| {
            let p = omega_tensor_l.pure(&[1, x])?;
            Ok(omega_tensor_l.index_of(&p)?.expect("pure tensors are elements"))
        })
        .collect()
}

/// `L ⊗ M -> M ⊗ L` by reversing tuples.
pub fn swap_iso(lm: &TensorLattice, ml: &TensorLattice) -> Result<Vec<usize>, TensorError> {
    lm.elements()?
        .iter()
        .map(|g| {
            let mut out = BiIdeal::empty(ml.grid);
            for idx in g.members() {
                let mut t = lm.decode(idx);
                t.reverse();
                out.insert(ml.encode(&t));
            }
            Ok(ml.index_of(&out)?.expect("reversed bi-ideal is a bi-ideal"))
        })
        .collect()
}

/// `L ⊗ M ⊗ N -> L ⊗ (M ⊗ N)` on enumerated elements. `inner` is `M ⊗ N`
/// and `nested` has factors `L` and `inner.lattice()`.
pub fn flat_to_nested(
    flat: &TensorLattice,
    inner: &TensorLattice,
    nested: &TensorLattice,
) -> Result<Vec<usize>, TensorError> {
    flat.elements()?
        .iter()
        .map(|g| {
            let mut seeds = Vec::new();
            for idx in g.members() {
                let t = flat.decode(idx);
                let p = inner.pure(&t[1..])?;
                let pi = inner.index_of(&p)?.expect("pure tensors are elements");
                seeds.push(nested.encode(&[t[0], pi]));
            }
            Ok(nested.index_of(&nested.closure(seeds))?.expect("closure is an element"))
        })
        .collect()
}

/// Checks that an index table between two lattices is an order isomorphism.
pub fn is_order_iso(from: &FiniteSupLattice, to: &FiniteSupLattice, table: &[usize]) -> bool {
    let mut hit = vec![false; to.size()];
    for &t in table {
        if t >= to.size() || hit[t] {
            return false;
        }
        hit[t] = true;
    }
    table.len() == to.size()
        && from
            .elements()
            .all(|a| from.elements().all(|b| from.leq(a, b) == to.leq(table[a], table[b])))
}

/// `L_1 ⊕ ... ⊕ L_k` (= product), with injections and copairing.
#[derive(Clone, Debug)]
pub struct DirectSum {
    summands: Vec<Arc<FiniteSupLattice>>,
    lattice: Arc<FiniteSupLattice>,
    strides: Vec<usize>,
}

impl DirectSum {
    pub fn new(summands: Vec<Arc<FiniteSupLattice>>) -> Self {
        assert!(!summands.is_empty(), "direct sum of no summands");
        let mut lattice = (*summands[0]).clone();
        for s in &summands[1..] {
            lattice = FiniteSupLattice::product(&lattice, s);
        }
        let k = summands.len();
        let mut strides = vec![1; k];
        for i in (0..k - 1).rev() {
            strides[i] = strides[i + 1] * summands[i + 1].size();
        }
        DirectSum {
            summands,
            lattice: Arc::new(lattice),
            strides,
        }
    }

    pub fn lattice(&self) -> &Arc<FiniteSupLattice> {
        &self.lattice
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        tuple.iter().zip(&self.strides).map(|(t, s)| t * s).sum()
    }

    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|s| {
                let c = idx / s;
                idx %= s;
                c
            })
            .collect()
    }

    /// `a ↦ (⊥, ..., a, ..., ⊥)` at position `k`.
    pub fn injection(&self, k: usize) -> SupMap {
        let bottoms: Vec<usize> = self.summands.iter().map(|s| s.bottom()).collect();
        let values = self.summands[k]
            .elements()
            .map(|a| {
                let mut t = bottoms.clone();
                t[k] = a;
                self.encode(&t)
            })
            .collect();
        SupMap::new(self.summands[k].clone(), self.lattice.clone(), values)
            .expect("injections preserve joins")
    }

    /// `(a_1, ..., a_k) ↦ ⋁ f_i(a_i)`.
    pub fn copair(&self, maps: &[SupMap]) -> SupMap {
        assert_eq!(maps.len(), self.summands.len());
        let cod = maps[0].cod().clone();
        let values = self
            .lattice
            .elements()
            .map(|idx| {
                let t = self.decode(idx);
                cod.join(t.iter().zip(maps).map(|(&a, f)| f.apply(a)))
            })
            .collect();
        SupMap::new(self.lattice.clone(), cod, values).expect("copairing preserves joins")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega() -> Arc<FiniteSupLattice> {
        Arc::new(FiniteSupLattice::omega())
    }

    #[test]
    fn omega_tensor_omega() {
        let t = TensorLattice::new(vec![omega(), omega()]).unwrap();
        assert_eq!(t.elements().unwrap().len(), 2);
        assert_eq!(t.pure(&[1, 1]).unwrap(), t.top());
        assert_eq!(t.pure(&[0, 1]).unwrap(), t.bottom());
        assert_eq!(t.bottom().len(), 3);
    }

    #[test]
    fn pure_tensor_equals_general_closure() {
        let chain = Arc::new(FiniteSupLattice::chain(3));
        let p2 = Arc::new(FiniteSupLattice::powerset(2));
        let t = TensorLattice::new(vec![chain, p2, omega()]).unwrap();
        for idx in 0..t.grid() {
            let tuple = t.decode(idx);
            let p = t.pure(&tuple).unwrap();
            assert_eq!(p, t.closure([idx]));
            assert!(t.is_bi_ideal(&p));
        }
    }

    #[test]
    fn bad_tuples_and_bounds() {
        let t = TensorLattice::with_bound(vec![omega(), omega()], 3).unwrap();
        assert_eq!(
            t.pure(&[2, 0]).unwrap_err(),
            TensorError::BadTuple(vec![2, 0])
        );
        assert_eq!(
            t.elements().unwrap_err(),
            TensorError::EnumerationBoundExceeded { grid: 4, bound: 3 }
        );
        // lazy operations still work
        assert_eq!(t.join(&t.bottom(), &t.pure(&[1, 1]).unwrap()), t.top());
        assert!(matches!(TensorLattice::new(vec![]), Err(TensorError::NoFactors)));
    }

    #[test]
    fn meet_on_omega_square() {
        let t = TensorLattice::new(vec![omega(), omega()]).unwrap();
        let m = induced_from_bimorphism(&t, omega(), |v| v[0] & v[1]).unwrap();
        let f = m.sup_map().unwrap();
        assert_eq!(f.values(), &[0, 1]);
        let z = induced_from_bimorphism(&t, omega(), |_| 0).unwrap();
        assert_eq!(z.sup_map().unwrap().values(), &[0, 0]);
        let bad = induced_from_bimorphism(&t, omega(), |v| v[0] | v[1]);
        assert!(matches!(bad, Err(TensorError::NotBimorphism { coordinate: 0, .. })));
    }

    #[test]
    fn direct_sum_of_omegas() {
        let s = DirectSum::new(vec![omega(), omega()]);
        assert_eq!(s.lattice().size(), 4);
        assert_eq!(s.decode(s.injection(0).apply(1)), vec![1, 0]);
        assert_eq!(s.decode(s.injection(1).apply(1)), vec![0, 1]);
        let id = SupMap::identity(omega());
        let c = s.copair(&[id.clone(), id]);
        for idx in 0..4 {
            let t = s.decode(idx);
            assert_eq!(c.apply(idx), t[0] | t[1]);
        }
    }

    #[test]
    fn generators_rebuild_the_element() {
        let chain = Arc::new(FiniteSupLattice::chain(3));
        let t = TensorLattice::new(vec![chain.clone(), chain]).unwrap();
        for g in t.elements().unwrap() {
            let mut acc = t.bottom();
            for tuple in t.generators(g) {
                acc = t.join(&acc, &t.pure(&tuple).unwrap());
            }
            assert_eq!(&acc, g);
        }
    }
}
