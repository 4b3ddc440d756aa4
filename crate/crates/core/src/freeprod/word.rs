//! Alternating words over two alphabets and their grades.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tag {
    Y,
    Q,
}

impl Tag {
    pub fn other(self) -> Tag {
        match self {
            Tag::Y => Tag::Q,
            Tag::Q => Tag::Y,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("words have at least one letter")]
    Empty,
    #[error("letter {0} and its successor carry the same tag")]
    NotAlternating(usize),
}

/// A nonempty sequence of letters whose tags alternate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<(Tag, L)>", into = "Vec<(Tag, L)>")]
#[serde(bound(serialize = "L: Clone + Serialize", deserialize = "L: Deserialize<'de>"))]
pub struct Word<L = usize> {
    letters: Vec<(Tag, L)>,
}

impl<L> Word<L> {
    pub fn new(letters: Vec<(Tag, L)>) -> Result<Self, WordError> {
        if letters.is_empty() {
            return Err(WordError::Empty);
        }
        if let Some(i) = (0..letters.len() - 1).find(|&i| letters[i].0 == letters[i + 1].0) {
            return Err(WordError::NotAlternating(i));
        }
        Ok(Word { letters })
    }

    /// Alternating word from a start tag and letter values.
    pub fn alternating(start: Tag, values: impl IntoIterator<Item = L>) -> Result<Self, WordError> {
        let mut tag = start;
        let letters = values
            .into_iter()
            .map(|v| {
                let t = tag;
                tag = tag.other();
                (t, v)
            })
            .collect();
        Self::new(letters)
    }

    pub fn y(value: L) -> Self {
        Word {
            letters: vec![(Tag::Y, value)],
        }
    }

    pub fn q(value: L) -> Self {
        Word {
            letters: vec![(Tag::Q, value)],
        }
    }

    pub fn letters(&self) -> &[(Tag, L)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start(&self) -> Tag {
        self.letters[0].0
    }

    pub fn end(&self) -> Tag {
        self.letters[self.letters.len() - 1].0
    }

    pub fn grade(&self) -> GradeIndex {
        GradeIndex::from_shape(self.start(), self.len())
    }

    pub fn values(&self) -> impl Iterator<Item = &L> {
        self.letters.iter().map(|(_, v)| v)
    }
}

impl<L> TryFrom<Vec<(Tag, L)>> for Word<L> {
    type Error = WordError;

    fn try_from(letters: Vec<(Tag, L)>) -> Result<Self, WordError> {
        Word::new(letters)
    }
}

impl<L> From<Word<L>> for Vec<(Tag, L)> {
    fn from(w: Word<L>) -> Self {
        w.letters
    }
}

impl<L: Clone> Word<L> {
    /// Concatenation; boundary letters with the same tag merge via `merge`.
    pub fn multiply(&self, other: &Self, merge: impl Fn(Tag, &L, &L) -> L) -> Self {
        let mut letters = self.letters.clone();
        let mut rest = other.letters.iter();
        if self.end() == other.start() {
            let (tag, last) = letters.pop().expect("nonempty");
            let (_, first) = rest.next().expect("nonempty");
            letters.push((tag, merge(tag, &last, first)));
        }
        letters.extend(rest.cloned());
        Word { letters }
    }

    /// Reverses the word and applies the letterwise involution.
    pub fn involution(&self, star: impl Fn(Tag, &L) -> L) -> Self {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|(t, v)| (*t, star(*t, v)))
                .collect(),
        }
    }
}

impl<L: fmt::Display> fmt::Display for Word<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (_, v)) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊗ ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Index `n` of the summand `T_n` of the free product:
///
/// * `T_{4k+1} = Y ⊗ (Q ⊗ Y)^k` (starts with Y, odd length)
/// * `T_{4k+2} = Q ⊗ (Y ⊗ Q)^k` (starts with Q, odd length)
/// * `T_{4k+3} = (Y ⊗ Q)^{k+1}` (starts with Y, even length)
/// * `T_{4k+4} = (Q ⊗ Y)^{k+1}` (starts with Q, even length)
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct GradeIndex(pub usize);

impl GradeIndex {
    pub fn from_shape(start: Tag, len: usize) -> Self {
        assert!(len > 0, "grades have positive length");
        let k = (len - 1) / 2;
        let n = match (start, len % 2 == 1) {
            (Tag::Y, true) => 4 * k + 1,
            (Tag::Q, true) => 4 * k + 2,
            (Tag::Y, false) => 4 * k + 3,
            (Tag::Q, false) => 4 * k + 4,
        };
        GradeIndex(n)
    }

    pub fn start(self) -> Tag {
        match (self.0 - 1) % 4 {
            0 | 2 => Tag::Y,
            _ => Tag::Q,
        }
    }

    pub fn len(self) -> usize {
        let k = (self.0 - 1) / 4;
        match (self.0 - 1) % 4 {
            0 | 1 => 2 * k + 1,
            _ => 2 * k + 2,
        }
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn end(self) -> Tag {
        if self.len() % 2 == 1 {
            self.start()
        } else {
            self.start().other()
        }
    }

    pub fn tags(self) -> Vec<Tag> {
        let mut t = self.start();
        (0..self.len())
            .map(|_| {
                let c = t;
                t = t.other();
                c
            })
            .collect()
    }

    /// Grade of a product of words of grades `self` and `other`.
    pub fn product(self, other: GradeIndex) -> GradeIndex {
        let merged = usize::from(self.end() == other.start());
        GradeIndex::from_shape(self.start(), self.len() + other.len() - merged)
    }

    /// Grade of the involution of a word of this grade.
    pub fn reversed(self) -> GradeIndex {
        GradeIndex::from_shape(self.end(), self.len())
    }
}
