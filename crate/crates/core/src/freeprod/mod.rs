//! Truncated free product `Y*Q` of two finite involutive quantales.
//!
//! The free product is the direct sum of the alternating tensor powers
//! `T_n` (see [`GradeIndex`]). An element is kept as one bi-ideal per
//! grade up to a truncation `N`; products that would leave the truncation
//! are reported instead of silently dropped.

mod pullback;
mod word;

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::quantale::{FiniteInvQuantale, FiniteMap};
use crate::tensor::{BiIdeal, TensorError, TensorLattice};

pub use pullback::*;
pub use word::{GradeIndex, Tag, Word, WordError};

/// Truncation used when none is given.
pub const DEFAULT_TRUNCATION: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FreeProductError {
    #[error("product of grades {m} and {n} lands in grade {grade}, beyond the truncation {truncation}")]
    TruncationOverflow {
        m: usize,
        n: usize,
        grade: usize,
        truncation: usize,
    },
    #[error("grade {grade} exceeds the truncation {truncation}")]
    GradeTooLarge { grade: usize, truncation: usize },
    #[error("letter {value} out of range for tag {tag:?}")]
    LetterOutOfRange { tag: Tag, value: usize },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// The two factors and the lazily built tensor lattices `T_1 … T_N`.
#[derive(Debug)]
pub struct FreeProduct {
    y: Arc<FiniteInvQuantale>,
    q: Arc<FiniteInvQuantale>,
    truncation: usize,
    grades: Vec<OnceLock<TensorLattice>>,
}

/// Element of the truncated free product: a bi-ideal per nonzero grade.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedElement {
    components: BTreeMap<usize, BiIdeal>,
}

impl GradedElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, grade: usize) -> Option<&BiIdeal> {
        self.components.get(&grade)
    }

    pub fn grades(&self) -> impl Iterator<Item = usize> + '_ {
        self.components.keys().copied()
    }
}

impl FreeProduct {
    pub fn new(y: Arc<FiniteInvQuantale>, q: Arc<FiniteInvQuantale>, truncation: usize) -> Self {
        FreeProduct {
            y,
            q,
            truncation,
            grades: (0..truncation).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn y(&self) -> &Arc<FiniteInvQuantale> {
        &self.y
    }

    pub fn q(&self) -> &Arc<FiniteInvQuantale> {
        &self.q
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    fn factor(&self, tag: Tag) -> &FiniteInvQuantale {
        match tag {
            Tag::Y => &self.y,
            Tag::Q => &self.q,
        }
    }

    /// The tensor lattice `T_n`; the grid is never enumerated, so no
    /// enumeration bound applies.
    pub fn tensor(&self, grade: GradeIndex) -> Result<&TensorLattice, FreeProductError> {
        let n = grade.0;
        if n == 0 || n > self.truncation {
            return Err(FreeProductError::GradeTooLarge {
                grade: n,
                truncation: self.truncation,
            });
        }
        Ok(self.grades[n - 1].get_or_init(|| {
            let factors = grade
                .tags()
                .into_iter()
                .map(|t| self.factor(t).lattice().clone())
                .collect();
            TensorLattice::with_bound(factors, usize::MAX).expect("grades have factors")
        }))
    }

    fn check_word(&self, w: &Word) -> Result<(), FreeProductError> {
        for &(tag, value) in w.letters() {
            if value >= self.factor(tag).size() {
                return Err(FreeProductError::LetterOutOfRange { tag, value });
            }
        }
        Ok(())
    }

    /// Concatenation merging equal-tag boundary letters by multiplication.
    pub fn word_multiply(&self, u: &Word, v: &Word) -> Word {
        u.multiply(v, |tag, a, b| self.factor(tag).mul(*a, *b))
    }

    pub fn word_involution(&self, w: &Word) -> Word {
        w.involution(|tag, a| self.factor(tag).star(*a))
    }

    /// True when some letter is the bottom of its factor, so the pure
    /// tensor is zero.
    pub fn is_zero_word(&self, w: &Word) -> bool {
        w.letters()
            .iter()
            .any(|&(tag, v)| v == self.factor(tag).lattice().bottom())
    }

    /// The pure tensor of a word, placed in its grade.
    pub fn embed(&self, w: &Word) -> Result<GradedElement, FreeProductError> {
        self.check_word(w)?;
        if self.is_zero_word(w) {
            return Ok(GradedElement::zero());
        }
        let grade = w.grade();
        let t = self.tensor(grade)?;
        let values: Vec<usize> = w.values().copied().collect();
        let mut out = GradedElement::zero();
        out.components.insert(grade.0, t.pure(&values)?);
        Ok(out)
    }

    /// The words of the maximal pure tensors below `g`.
    pub fn generators(&self, g: &GradedElement) -> Vec<Word> {
        let mut out = Vec::new();
        for (&n, ideal) in &g.components {
            let grade = GradeIndex(n);
            let t = self.tensor(grade).expect("components stay within the truncation");
            for tuple in t.generators(ideal) {
                out.push(Word::alternating(grade.start(), tuple).expect("tuples are nonempty"));
            }
        }
        out
    }

    pub fn join(&self, a: &GradedElement, b: &GradedElement) -> GradedElement {
        let mut out = a.clone();
        for (&n, ideal) in &b.components {
            let t = self.tensor(GradeIndex(n)).expect("within truncation");
            let merged = match out.components.get(&n) {
                Some(prev) => t.join(prev, ideal),
                None => ideal.clone(),
            };
            out.components.insert(n, merged);
        }
        out
    }

    pub fn leq(&self, a: &GradedElement, b: &GradedElement) -> bool {
        a.components.iter().all(|(n, ideal)| {
            b.components
                .get(n)
                .is_some_and(|other| ideal.is_subset(other))
        })
    }

    fn join_words(&self, words: impl IntoIterator<Item = Word>) -> Result<GradedElement, FreeProductError> {
        let mut out = GradedElement::zero();
        for w in words {
            let e = self.embed(&w)?;
            out = self.join(&out, &e);
        }
        Ok(out)
    }

    /// Product computed on generators: the multiplication of the free
    /// product is the join of the word products of generator pairs.
    pub fn multiply(&self, a: &GradedElement, b: &GradedElement) -> Result<GradedElement, FreeProductError> {
        for &m in a.components.keys() {
            for &n in b.components.keys() {
                let grade = GradeIndex(m).product(GradeIndex(n)).0;
                if grade > self.truncation {
                    return Err(FreeProductError::TruncationOverflow {
                        m,
                        n,
                        grade,
                        truncation: self.truncation,
                    });
                }
            }
        }
        let left = self.generators(a);
        let right = self.generators(b);
        self.join_words(
            left.iter()
                .flat_map(|u| right.iter().map(move |v| (u, v)))
                .map(|(u, v)| self.word_multiply(u, v)),
        )
    }

    /// The involution reverses grades: `T_3 ↔ T_4`, odd grades fixed.
    pub fn involution(&self, a: &GradedElement) -> GradedElement {
        self.join_words(self.generators(a).iter().map(|w| self.word_involution(w)))
            .expect("involution preserves word length")
    }

    /// `π₁*(y)`: the word `(y)` in grade 1.
    pub fn pi1_star(&self, y: usize) -> GradedElement {
        self.embed(&Word::y(y)).expect("grade 1 is inside every truncation")
    }

    /// `π₂*(a)`: the word `(a)` in grade 2.
    pub fn pi2_star(&self, a: usize) -> Result<GradedElement, FreeProductError> {
        self.embed(&Word::q(a))
    }

    /// Pairing `⟨f, g⟩` of maps `f: R → Y`, `g: R → Q` (inverse images into
    /// `Y` and `Q`) on a word: the product of the letter images in `R`.
    pub fn pairing_word(&self, f: &FiniteMap, g: &FiniteMap, w: &Word) -> usize {
        let r = f.source();
        w.letters()
            .iter()
            .map(|&(tag, v)| match tag {
                Tag::Y => f.inverse_image(&v),
                Tag::Q => g.inverse_image(&v),
            })
            .reduce(|acc, v| r.mul(acc, v))
            .expect("words are nonempty")
    }

    /// Pairing extended to graded elements by joins.
    pub fn pairing(&self, f: &FiniteMap, g: &FiniteMap, a: &GradedElement) -> usize {
        let r = f.source();
        r.lattice()
            .join(self.generators(a).iter().map(|w| self.pairing_word(f, g, w)))
    }
}
