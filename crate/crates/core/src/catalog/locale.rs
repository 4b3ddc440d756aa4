//! Finite topological spaces and the locale maps they induce.
//!
//! A space is a point count and an explicit family of open sets (bitmasks).
//! Its frame of opens is a quantale with multiplication = intersection and
//! trivial involution; a continuous map `f` gives `p* = f⁻¹`, and when `f`
//! is open the direct image is the image of opens.

use std::sync::Arc;

use thiserror::Error;

use crate::quantale::{FiniteInvQuantale, FiniteMap};
use crate::suplattice::FiniteSupLattice;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LocaleError {
    #[error("open set {0:#b} mentions points outside the space")]
    OutOfRange(u64),
    #[error("the empty set or the whole space is not open")]
    MissingTrivialOpen,
    #[error("opens {0:#b} and {1:#b} have a union or intersection that is not open")]
    NotClosed(u64, u64),
    #[error("map has {got} values for {expected} points")]
    Length { expected: usize, got: usize },
    #[error("preimage of the open {0:#b} is not open")]
    NotContinuous(u64),
    #[error("image of the open {0:#b} is not open")]
    NotOpen(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTopology {
    points: usize,
    /// Sorted by cardinality, then by bitmask.
    opens: Vec<u64>,
}

impl FiniteTopology {
    pub fn new(points: usize, opens: impl IntoIterator<Item = u64>) -> Result<Self, LocaleError> {
        let all = if points == 64 { u64::MAX } else { (1u64 << points) - 1 };
        let mut opens: Vec<u64> = opens.into_iter().collect();
        if let Some(&bad) = opens.iter().find(|&&u| u & !all != 0) {
            return Err(LocaleError::OutOfRange(bad));
        }
        opens.sort_by_key(|&u| (u.count_ones(), u));
        opens.dedup();
        if !opens.contains(&0) || !opens.contains(&all) {
            return Err(LocaleError::MissingTrivialOpen);
        }
        for &u in &opens {
            for &v in &opens {
                if opens.binary_search_by_key(&((u | v).count_ones(), u | v), |&w| (w.count_ones(), w)).is_err()
                    || opens.binary_search_by_key(&((u & v).count_ones(), u & v), |&w| (w.count_ones(), w)).is_err()
                {
                    return Err(LocaleError::NotClosed(u, v));
                }
            }
        }
        Ok(FiniteTopology { points, opens })
    }

    pub fn discrete(points: usize) -> Self {
        Self::new(points, 0..1u64 << points).expect("powerset is a topology")
    }

    pub fn point() -> Self {
        Self::discrete(1)
    }

    /// Two points, `{0}` open and `{1}` closed.
    pub fn sierpinski() -> Self {
        Self::new(2, [0, 0b01, 0b11]).expect("valid topology")
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn opens(&self) -> &[u64] {
        &self.opens
    }

    pub fn index_of(&self, open: u64) -> Option<usize> {
        self.opens.iter().position(|&u| u == open)
    }

    /// The frame of opens, element `i` being `opens()[i]`.
    pub fn frame(&self) -> FiniteInvQuantale {
        let n = self.opens.len();
        let mut leq = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.opens[i] & !self.opens[j] == 0 {
                    leq.push((i, j));
                }
            }
        }
        let names = self.opens.iter().map(|&u| set_name(u)).collect();
        let lattice = FiniteSupLattice::validate(n, leq, Some(names))
            .expect("opens ordered by inclusion form a lattice");
        FiniteInvQuantale::from_frame(Arc::new(lattice))
    }
}

fn set_name(u: u64) -> String {
    let members: Vec<String> = (0..64)
        .filter(|i| u >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", members.join(","))
}

/// The locale map of a continuous `f: source -> target` (given pointwise),
/// from the frame of `source` to the frame of `target`. With
/// `with_direct_image`, `f` must be open and the map carries `p_!(U) = f(U)`.
pub fn finite_locale_map(
    source: &FiniteTopology,
    target: &FiniteTopology,
    f: &[usize],
    with_direct_image: bool,
) -> Result<FiniteMap, LocaleError> {
    if f.len() != source.points || f.iter().any(|&y| y >= target.points) {
        return Err(LocaleError::Length {
            expected: source.points,
            got: f.len(),
        });
    }
    let preimage = |v: u64| {
        (0..source.points)
            .filter(|&i| v >> f[i] & 1 == 1)
            .fold(0u64, |acc, i| acc | 1 << i)
    };
    let image = |u: u64| {
        (0..source.points)
            .filter(|&i| u >> i & 1 == 1)
            .fold(0u64, |acc, i| acc | 1 << f[i])
    };
    let mut table = Vec::with_capacity(target.opens.len());
    for &v in &target.opens {
        table.push(
            source
                .index_of(preimage(v))
                .ok_or(LocaleError::NotContinuous(v))?,
        );
    }
    let q = Arc::new(source.frame());
    let x = Arc::new(target.frame());
    let map = FiniteMap::from_table(q, x, table).expect("table shape matches");
    if !with_direct_image {
        return Ok(map);
    }
    let mut direct = Vec::with_capacity(source.opens.len());
    for &u in &source.opens {
        direct.push(target.index_of(image(u)).ok_or(LocaleError::NotOpen(u))?);
    }
    Ok(map.with_direct_table(direct))
}

/// The two-point discrete space mapped onto a point.
pub fn discrete_two_to_point() -> FiniteMap {
    finite_locale_map(&FiniteTopology::discrete(2), &FiniteTopology::point(), &[0, 0], true)
        .expect("constant map from a discrete space is continuous and open")
}

/// The inclusion of the closed point of the Sierpinski space. It is not an
/// open map, so no direct image is attached.
pub fn sierpinski_closed_point() -> FiniteMap {
    finite_locale_map(&FiniteTopology::point(), &FiniteTopology::sierpinski(), &[1], false)
        .expect("point inclusion is continuous")
}

/// The discrete two-point subspace `{1, 2}` included in the three-point
/// space with opens `{}, {1}, {2}, {1,2}, {1,2,3}`.
pub fn open_inclusion() -> FiniteMap {
    let big = FiniteTopology::new(3, [0, 0b001, 0b010, 0b011, 0b111]).expect("valid topology");
    finite_locale_map(&FiniteTopology::discrete(2), &big, &[0, 1], true)
        .expect("inclusion of an open subspace is continuous and open")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn topology_axioms_are_checked() {
        assert_eq!(
            FiniteTopology::new(2, [0, 0b01, 0b10, 0b11]).unwrap().opens(),
            &[0, 0b01, 0b10, 0b11]
        );
        assert_eq!(
            FiniteTopology::new(2, [0, 0b01]).unwrap_err(),
            LocaleError::MissingTrivialOpen
        );
        assert_eq!(
            FiniteTopology::new(3, [0, 0b011, 0b110, 0b111]).unwrap_err(),
            LocaleError::NotClosed(0b011, 0b110)
        );
        assert_eq!(
            FiniteTopology::new(1, [0, 1, 2]).unwrap_err(),
            LocaleError::OutOfRange(2)
        );
    }

    #[test]
    fn frames_are_locales() {
        for t in [
            FiniteTopology::sierpinski(),
            FiniteTopology::discrete(3),
            FiniteTopology::point(),
        ] {
            let q = t.frame();
            q.validate().unwrap();
            assert!(q.is_locale());
        }
    }

    #[test]
    fn sierpinski_closed_point_inverse_image() {
        let p = sierpinski_closed_point();
        assert_eq!(p.inverse_table(), vec![0, 0, 1]);
        assert!(!p.has_direct_image());
    }

    #[test]
    fn continuity_and_openness_are_checked() {
        let s = FiniteTopology::sierpinski();
        // the swap is not continuous
        assert_eq!(
            finite_locale_map(&s, &s, &[1, 0], false).unwrap_err(),
            LocaleError::NotContinuous(0b01)
        );
        assert_eq!(
            finite_locale_map(&FiniteTopology::point(), &s, &[1], true).unwrap_err(),
            LocaleError::NotOpen(0b1)
        );
        let p = discrete_two_to_point();
        assert_eq!(p.inverse_table(), vec![0, 3]);
        assert_eq!(p.direct_table().unwrap(), vec![0, 1, 1, 1]);
        let i = open_inclusion();
        assert_eq!(i.inverse_table(), vec![0, 1, 2, 3, 3]);
    }
}
