//! Subspaces of `Q^d` in canonical reduced row echelon form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::{Deserialize, Deserializer, Error as _};
use serde::ser::{Serialize, SerializeStruct, Serializer};

/// A linear subspace of `Q^ambient`. The basis is the nonzero rows of the
/// reduced row echelon form, so equal subspaces have equal representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalSubspace {
    ambient: usize,
    basis: Vec<Vec<BigRational>>,
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rref(ambient: usize, mut rows: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let mut rank = 0;
    for col in 0..ambient {
        let Some(pivot) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].recip();
        for v in rows[rank].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v = &*v - &f * p;
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

impl RationalSubspace {
    pub fn zero(ambient: usize) -> Self {
        RationalSubspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, (0..ambient).map(|i| unit_vector(ambient, i)))
    }

    /// Span of the given vectors, each of length `ambient`.
    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vec<BigRational>>) -> Self {
        let rows: Vec<Vec<BigRational>> = vectors
            .into_iter()
            .inspect(|v| assert_eq!(v.len(), ambient, "vector length"))
            .collect();
        RationalSubspace {
            ambient,
            basis: rref(ambient, rows),
        }
    }

    /// Span of integer vectors.
    pub fn span_ints(ambient: usize, vectors: &[&[i64]]) -> Self {
        Self::span(
            ambient,
            vectors.iter().map(|v| v.iter().map(|&x| rational(x)).collect()),
        )
    }

    /// Span of the coordinate vectors selected by `mask`.
    pub fn coordinate(ambient: usize, mask: u64) -> Self {
        Self::span(
            ambient,
            (0..ambient)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| unit_vector(ambient, i)),
        )
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigRational>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self::span(
            self.ambient,
            self.basis.iter().chain(&other.basis).cloned(),
        )
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        // reduce v against the echelon basis
        let mut w = v.to_vec();
        for row in &self.basis {
            let col = row.iter().position(|x| !x.is_zero()).unwrap();
            if !w[col].is_zero() {
                let f = w[col].clone();
                for (x, r) in w.iter_mut().zip(row) {
                    *x = &*x - &f * r;
                }
            }
        }
        w.iter().all(Zero::is_zero)
    }

    /// Coordinates on which some vector of the subspace is nonzero.
    pub fn support(&self) -> u64 {
        let mut mask = 0u64;
        for row in &self.basis {
            for (i, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    mask |= 1 << i;
                }
            }
        }
        mask
    }

    /// Applies `f` to every basis vector and spans the images.
    pub fn map(&self, f: impl Fn(&[BigRational]) -> Vec<BigRational>) -> Self {
        Self::span(self.ambient, self.basis.iter().map(|v| f(v)))
    }
}

pub fn unit_vector(ambient: usize, i: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); ambient];
    v[i] = BigRational::one();
    v
}

fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl std::fmt::Display for RationalSubspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "span{{")?;
        for (k, row) in self.basis.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            let entries: Vec<String> = row.iter().map(format_rational).collect();
            write!(f, "({})", entries.join(" "))?;
        }
        write!(f, "}}")
    }
}

impl Serialize for RationalSubspace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .basis
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect();
        let mut st = s.serialize_struct("RationalSubspace", 2)?;
        st.serialize_field("ambient", &self.ambient)?;
        st.serialize_field("basis", &rows)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for RationalSubspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Raw {
            ambient: usize,
            basis: Vec<Vec<String>>,
        }
        let raw = Raw::deserialize(d)?;
        let mut rows = Vec::with_capacity(raw.basis.len());
        for row in raw.basis {
            if row.len() != raw.ambient {
                return Err(D::Error::custom("basis vector has the wrong length"));
            }
            let parsed: Result<Vec<BigRational>, _> = row.iter().map(|x| x.parse::<BigRational>()).collect();
            rows.push(parsed.map_err(D::Error::custom)?);
        }
        Ok(RationalSubspace::span(raw.ambient, rows))
    }
}
