//! Finite binary words over {0, 1}.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// A finite word over the alphabet {0, 1}, stored one letter per byte.
///
/// Ordering is lexicographic with 0 < 1, which is what every deterministic
/// listing in this crate relies on.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    /// The empty word.
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from raw letters; panics if a letter is not 0 or 1.
    pub fn from_letters(letters: Vec<u8>) -> Self {
        assert!(letters.iter().all(|&b| b <= 1), "letters must be 0 or 1");
        Word(letters)
    }

    /// The word `0^n`.
    pub fn zeros(n: usize) -> Self {
        Word(vec![0; n])
    }

    /// The single-letter word.
    pub fn letter_word(b: u8) -> Self {
        Word::from_letters(vec![b])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn letter(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn push(&mut self, b: u8) {
        debug_assert!(b <= 1);
        self.0.push(b);
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Appends one letter, returning the extended word.
    pub fn extended(&self, b: u8) -> Word {
        debug_assert!(b <= 1);
        let mut v = self.0.clone();
        v.push(b);
        Word(v)
    }

    /// Prefix of length `l`, clamped to the whole word when `l >= len`.
    pub fn prefix(&self, l: usize) -> Word {
        Word(self.0[..l.min(self.0.len())].to_vec())
    }

    /// Suffix of length `l`, clamped to the whole word when `l >= len`.
    pub fn suffix(&self, l: usize) -> Word {
        let n = self.0.len();
        Word(self.0[n - l.min(n)..].to_vec())
    }

    /// The subword of length `len` starting at `start`.
    pub fn range(&self, start: usize, len: usize) -> Word {
        Word(self.0[start..start + len].to_vec())
    }

    pub fn reverse(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    pub fn count_ones(&self) -> u64 {
        self.0.iter().map(|&b| u64::from(b)).sum()
    }

    /// True when the word contains no 1 (the empty word counts as zero).
    pub fn is_zero_word(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    /// Index of the last occurrence of 1, if any.
    pub fn last_one(&self) -> Option<usize> {
        self.0.iter().rposition(|&b| b == 1)
    }

    /// Number of trailing zeros.
    pub fn trailing_zeros(&self) -> usize {
        self.0.iter().rev().take_while(|&&b| b == 0).count()
    }

    pub fn starts_with(&self, other: &Word) -> bool {
        self.0.starts_with(&other.0)
    }

    pub fn ends_with(&self, other: &Word) -> bool {
        self.0.ends_with(&other.0)
    }

    /// Sliding windows of length `k`; empty when `k == 0` or `k > len`.
    pub fn windows(&self, k: usize) -> std::slice::Windows<'_, u8> {
        if k >= 1 && k <= self.0.len() {
            self.0.windows(k)
        } else {
            // `slice::windows` panics on 0 and we want "no windows" instead.
            static EMPTY: [u8; 0] = [];
            EMPTY.windows(1)
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut letters = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => letters.push(0),
                '1' => letters.push(1),
                other => return Err(Error::InvalidLetter(other)),
            }
        }
        Ok(Word(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}
