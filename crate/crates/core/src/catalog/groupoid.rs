//! Finite groups and groupoids given by (partial) multiplication tables.

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("no elements")]
    Empty,
    #[error("table has {got} entries, expected {expected}")]
    TableShape { expected: usize, got: usize },
    #[error("entry {0} out of range")]
    OutOfRange(usize),
    #[error("{0} has no left or right identity")]
    NoIdentity(usize),
    #[error("product {g}·{h} is defined exactly when it should not be (or vice versa)")]
    Composability { g: usize, h: usize },
    #[error("({g}·{h})·{k} != {g}·({h}·{k})")]
    NotAssociative { g: usize, h: usize, k: usize },
    #[error("{0} has no inverse")]
    NoInverse(usize),
}

/// A finite groupoid. `product[g * n + h]` is `g·h` when the domain of `g`
/// equals the range of `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    names: Vec<String>,
    product: Vec<Option<usize>>,
    range: Vec<usize>,
    domain: Vec<usize>,
    inverse: Vec<usize>,
    identities: Vec<usize>,
}

impl FiniteGroupoid {
    /// Derives identities, range, domain and inverses from the table and
    /// checks the groupoid axioms.
    pub fn new(names: Vec<String>, product: Vec<Option<usize>>) -> Result<Self, GroupoidError> {
        let n = names.len();
        if n == 0 {
            return Err(GroupoidError::Empty);
        }
        if product.len() != n * n {
            return Err(GroupoidError::TableShape {
                expected: n * n,
                got: product.len(),
            });
        }
        if let Some(bad) = product.iter().flatten().find(|&&v| v >= n) {
            return Err(GroupoidError::OutOfRange(*bad));
        }
        let mul = |g: usize, h: usize| product[g * n + h];
        let identities: Vec<usize> = (0..n).filter(|&u| mul(u, u) == Some(u)).collect();
        let mut range = vec![0; n];
        let mut domain = vec![0; n];
        for g in 0..n {
            range[g] = *identities
                .iter()
                .find(|&&u| mul(u, g) == Some(g))
                .ok_or(GroupoidError::NoIdentity(g))?;
            domain[g] = *identities
                .iter()
                .find(|&&u| mul(g, u) == Some(g))
                .ok_or(GroupoidError::NoIdentity(g))?;
        }
        for g in 0..n {
            for h in 0..n {
                let expected = domain[g] == range[h];
                match mul(g, h) {
                    Some(gh) if expected && range[gh] == range[g] && domain[gh] == domain[h] => {}
                    None if !expected => {}
                    _ => return Err(GroupoidError::Composability { g, h }),
                }
            }
        }
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    if let (Some(gh), Some(hk)) = (mul(g, h), mul(h, k)) {
                        if mul(gh, k) != mul(g, hk) {
                            return Err(GroupoidError::NotAssociative { g, h, k });
                        }
                    }
                }
            }
        }
        let mut inverse = vec![0; n];
        for g in 0..n {
            inverse[g] = (0..n)
                .find(|&h| mul(g, h) == Some(range[g]) && mul(h, g) == Some(domain[g]))
                .ok_or(GroupoidError::NoInverse(g))?;
        }
        Ok(FiniteGroupoid {
            names,
            product,
            range,
            domain,
            inverse,
            identities,
        })
    }

    /// A group from its full Cayley table `table[g][h] = gh`.
    pub fn group(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupoidError> {
        let n = names.len();
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(GroupoidError::TableShape {
                expected: n * n,
                got: table.iter().map(Vec::len).sum(),
            });
        }
        let product = table.into_iter().flatten().map(Some).collect();
        let g = Self::new(names, product)?;
        // a one-object groupoid whose table is total
        if g.identities.len() != 1 {
            return Err(GroupoidError::NoIdentity(g.identities[1]));
        }
        Ok(g)
    }

    /// `Z/n` with elements `e, g, g^2, ...`.
    pub fn cyclic(n: usize) -> Self {
        let names = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            })
            .collect();
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        Self::group(names, table).expect("cyclic group table is valid")
    }

    /// The symmetric group on three letters, elements as permutations of
    /// `{0, 1, 2}` in lexicographic order of their one-line notation; the
    /// identity comes first.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        let names = perms
            .iter()
            .map(|p| format!("{}{}{}", p[0] + 1, p[1] + 1, p[2] + 1))
            .collect();
        // (gh)(i) = g(h(i))
        let table = perms
            .iter()
            .map(|g| {
                perms
                    .iter()
                    .map(|h| index([g[h[0]], g[h[1]], g[h[2]]]))
                    .collect()
            })
            .collect();
        Self::group(names, table).expect("permutation table is valid")
    }

    /// The pair groupoid on `{1..n}`: arrow `(i, j)` has index
    /// `(i-1) * n + (j-1)` and `(i, j)·(j, k) = (i, k)`.
    pub fn pair(n: usize) -> Self {
        let m = n * n;
        let names = (0..m)
            .map(|g| format!("({},{})", g / n + 1, g % n + 1))
            .collect();
        let mut product = vec![None; m * m];
        for g in 0..m {
            for h in 0..m {
                if g % n == h / n {
                    product[g * m + h] = Some((g / n) * n + h % n);
                }
            }
        }
        Self::new(names, product).expect("pair groupoid table is valid")
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn mul(&self, g: usize, h: usize) -> Option<usize> {
        self.product[g * self.size() + h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn identities(&self) -> &[usize] {
        &self.identities
    }

    pub fn range(&self, g: usize) -> usize {
        self.range[g]
    }

    pub fn domain(&self, g: usize) -> usize {
        self.domain[g]
    }

    pub fn is_group(&self) -> bool {
        self.identities.len() == 1
    }
}
