use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::FreeGroupError;

/// A freely reduced word in the free group of rank `rank`.
///
/// Letter `k > 0` stands for `x_k`, letter `-k` for its inverse.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWord")]
pub struct FreeWord {
    letters: Vec<i32>,
    rank: usize,
}

#[derive(Deserialize)]
struct RawWord {
    letters: Vec<i32>,
    rank: usize,
}

impl TryFrom<RawWord> for FreeWord {
    type Error = FreeGroupError;

    fn try_from(raw: RawWord) -> Result<Self, Self::Error> {
        let w = free_reduce(&raw.letters, raw.rank)?;
        if w.letters != raw.letters {
            return Err(FreeGroupError::NotReduced);
        }
        Ok(w)
    }
}

/// Cancels adjacent inverse pairs until none remain.
pub fn free_reduce(raw: &[i32], rank: usize) -> Result<FreeWord, FreeGroupError> {
    let mut out: Vec<i32> = Vec::with_capacity(raw.len());
    for &g in raw {
        check_letter(g, rank)?;
        if out.last() == Some(&-g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    Ok(FreeWord { letters: out, rank })
}

fn check_letter(g: i32, rank: usize) -> Result<(), FreeGroupError> {
    if g == 0 || g.unsigned_abs() as usize > rank {
        return Err(FreeGroupError::IndexOutOfRange { index: g, rank });
    }
    Ok(())
}

fn reduce_unchecked(raw: impl IntoIterator<Item = i32>, rank: usize) -> FreeWord {
    let mut out: Vec<i32> = Vec::new();
    for g in raw {
        if out.last() == Some(&-g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    FreeWord { letters: out, rank }
}

impl FreeWord {
    pub fn identity(rank: usize) -> Self {
        FreeWord {
            letters: Vec::new(),
            rank,
        }
    }

    /// The generator `x_k` (`k` one-based), or its inverse for negative `k`.
    pub fn generator(k: i32, rank: usize) -> Result<Self, FreeGroupError> {
        check_letter(k, rank)?;
        Ok(FreeWord {
            letters: vec![k],
            rank,
        })
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            letters: self.letters.iter().rev().map(|g| -g).collect(),
            rank: self.rank,
        }
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        debug_assert_eq!(self.rank, other.rank);
        reduce_unchecked(self.letters.iter().chain(other.letters.iter()).copied(), self.rank)
    }

    pub fn pow(&self, k: i64) -> FreeWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = FreeWord::identity(self.rank);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Replaces each `x_k` by `images[k - 1]`. The result lives in the rank
    /// of the images.
    pub fn substitute(&self, images: &[FreeWord]) -> Result<FreeWord, FreeGroupError> {
        if images.len() != self.rank {
            return Err(FreeGroupError::SizeMismatch {
                expected: self.rank,
                found: images.len(),
            });
        }
        let rank = images.first().map_or(self.rank, |w| w.rank);
        let mut raw = Vec::new();
        for &g in &self.letters {
            let img = &images[g.unsigned_abs() as usize - 1];
            if g > 0 {
                raw.extend_from_slice(&img.letters);
            } else {
                raw.extend(img.letters.iter().rev().map(|h| -h));
            }
        }
        Ok(reduce_unchecked(raw, rank))
    }

    /// Same letters regarded in a group of larger rank.
    pub fn with_rank(&self, rank: usize) -> Result<FreeWord, FreeGroupError> {
        free_reduce(&self.letters, rank)
    }

    /// Largest generator index occurring in the word.
    pub fn max_index(&self) -> usize {
        self.letters.iter().map(|g| g.unsigned_abs() as usize).max().unwrap_or(0)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, g) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if *g > 0 {
                write!(f, "x{g}")?;
            } else {
                write!(f, "x{}^-1", -g)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeWord({self})")
    }
}

/// Order on letters used for canonical rotations: by index, then `x_k`
/// before `x_k^-1`.
pub fn letter_order(a: i32, b: i32) -> Ordering {
    (a.unsigned_abs(), a < 0).cmp(&(b.unsigned_abs(), b < 0))
}

fn sequence_order(a: &[i32], b: &[i32]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match letter_order(*x, *y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// A cyclically reduced word stored in its least rotation; two words are
/// conjugate iff their cyclic words are equal.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWord", into = "FreeWord")]
pub struct CyclicWord(FreeWord);

impl TryFrom<RawWord> for CyclicWord {
    type Error = FreeGroupError;

    fn try_from(raw: RawWord) -> Result<Self, Self::Error> {
        let w = FreeWord::try_from(raw)?;
        let c = cyclic_reduce(&w);
        if c.0 != w {
            return Err(FreeGroupError::NotCanonical);
        }
        Ok(c)
    }
}

impl From<CyclicWord> for FreeWord {
    fn from(c: CyclicWord) -> Self {
        c.0
    }
}

/// Strips inverse pairs from the two ends and rotates to the least
/// rotation.
pub fn cyclic_reduce(w: &FreeWord) -> CyclicWord {
    let l = &w.letters;
    let (mut s, mut e) = (0, l.len());
    while e >= s + 2 && l[s] == -l[e - 1] {
        s += 1;
        e -= 1;
    }
    let core = &l[s..e];
    let n = core.len();
    let mut best: Vec<i32> = core.to_vec();
    let mut rot = Vec::with_capacity(n);
    for r in 1..n {
        rot.clear();
        rot.extend_from_slice(&core[r..]);
        rot.extend_from_slice(&core[..r]);
        if sequence_order(&rot, &best) == Ordering::Less {
            best.clone_from(&rot);
        }
    }
    CyclicWord(FreeWord {
        letters: best,
        rank: w.rank,
    })
}

impl CyclicWord {
    pub fn word(&self) -> &FreeWord {
        &self.0
    }

    pub fn letters(&self) -> &[i32] {
        &self.0.letters
    }

    pub fn rank(&self) -> usize {
        self.0.rank
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclicWord({})", self.0)
    }
}

/// An ordered tuple of words of one rank.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTuple")]
pub struct GeneratorTuple {
    words: Vec<FreeWord>,
    rank: usize,
}

#[derive(Deserialize)]
struct RawTuple {
    words: Vec<FreeWord>,
    rank: usize,
}

impl TryFrom<RawTuple> for GeneratorTuple {
    type Error = FreeGroupError;

    fn try_from(raw: RawTuple) -> Result<Self, Self::Error> {
        if raw.words.iter().any(|w| w.rank != raw.rank) {
            return Err(FreeGroupError::RankMismatch);
        }
        Ok(GeneratorTuple {
            words: raw.words,
            rank: raw.rank,
        })
    }
}

impl GeneratorTuple {
    pub fn new(words: Vec<FreeWord>) -> Result<Self, FreeGroupError> {
        let rank = words.first().ok_or(FreeGroupError::EmptyTuple)?.rank;
        if words.iter().any(|w| w.rank != rank) {
            return Err(FreeGroupError::RankMismatch);
        }
        Ok(GeneratorTuple { words, rank })
    }

    /// The tuple `(x1, ..., xn)`.
    pub fn basis(rank: usize) -> Self {
        GeneratorTuple {
            words: (1..=rank as i32)
                .map(|k| FreeWord {
                    letters: vec![k],
                    rank,
                })
                .collect(),
            rank,
        }
    }

    /// A tuple that may have no words at all, as left by deleting trivial
    /// words.
    pub(crate) fn from_parts(words: Vec<FreeWord>, rank: usize) -> Self {
        GeneratorTuple { words, rank }
    }

    pub fn words(&self) -> &[FreeWord] {
        &self.words
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Sum of the word lengths.
    pub fn complexity(&self) -> usize {
        self.words.iter().map(FreeWord::len).sum()
    }

    pub(crate) fn words_mut(&mut self) -> &mut Vec<FreeWord> {
        &mut self.words
    }

    /// The endomorphism `x_k -> words[k - 1]` applied to every word.
    pub fn substitute_into(&self, images: &[FreeWord]) -> Result<GeneratorTuple, FreeGroupError> {
        let words = self
            .words
            .iter()
            .map(|w| w.substitute(images))
            .collect::<Result<Vec<_>, _>>()?;
        let rank = images.first().map_or(self.rank, |w| w.rank);
        Ok(GeneratorTuple { words, rank })
    }
}

impl fmt::Display for GeneratorTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for GeneratorTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GeneratorTuple{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_examples() {
        assert!(free_reduce(&[1, -1], 2).unwrap().is_empty());
        assert_eq!(free_reduce(&[1, 2, -2, 1], 2).unwrap().letters(), &[1, 1]);
        assert_eq!(free_reduce(&[1, 2], 2).unwrap().letters(), &[1, 2]);
        assert!(free_reduce(&[3], 2).is_err());
        assert!(free_reduce(&[0], 2).is_err());
    }

    #[test]
    fn cyclic_examples() {
        let w = free_reduce(&[2, 1, -2], 2).unwrap();
        assert_eq!(cyclic_reduce(&w).letters(), &[1]);
        let w = free_reduce(&[1, 2], 2).unwrap();
        assert_eq!(cyclic_reduce(&w).letters(), &[1, 2]);
        let w = free_reduce(&[-2, 1, 2, -1], 2).unwrap();
        assert_eq!(cyclic_reduce(&w).letters(), &[1, 2, -1, -2]);
        assert!(cyclic_reduce(&FreeWord::identity(2)).is_empty());
    }

    #[test]
    fn display_and_serde() {
        let w = free_reduce(&[1, -2], 2).unwrap();
        assert_eq!(w.to_string(), "x1 x2^-1");
        assert_eq!(FreeWord::identity(2).to_string(), "1");
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(serde_json::from_str::<FreeWord>(&json).unwrap(), w);
        assert!(serde_json::from_str::<FreeWord>(r#"{"letters":[1,-1],"rank":2}"#).is_err());
    }

    #[test]
    fn substitution() {
        let w = free_reduce(&[1, 2, -1], 2).unwrap();
        let images = [free_reduce(&[1, 2], 2).unwrap(), free_reduce(&[2], 2).unwrap()];
        assert_eq!(w.substitute(&images).unwrap().letters(), &[1, 2, -1]);
    }
}
