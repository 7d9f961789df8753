//! Factor sets of the sequence: enumeration, special factors, occurrence
//! positions and their residues modulo powers of 3.
//!
//! Enumeration never scans an unbounded prefix. Because the sequence is the
//! fixed point of a 3-uniform substitution and `11` never occurs, every
//! factor of length `n <= 3^m` appears inside `sigma^m(ab)` for one of the
//! three two-letter factors `ab` in {00, 01, 10}, starting in the first
//! block. Scanning those three windows is therefore a complete and sound
//! enumeration, and it also yields an explicit witness position for every
//! factor found.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::sequence::{cantor_letter, prefix, sigma_power};
use crate::word::Word;
use crate::{Error, Result};

/// Default bound on the factor length / scan limit accepted by the capped
/// entry points. Overridable per call (the CLI threads its own value).
pub const DEFAULT_ENUM_CAP: u64 = 10_000;

/// The two-letter factors and a position where each occurs.
const PAIRS: [(&str, u64); 3] = [("10", 0), ("01", 1), ("00", 3)];

/// The set of all factors of one length, sorted lexicographically, each with
/// the smallest witness position this enumeration strategy produces.
#[derive(Debug, Clone)]
pub struct FactorSet {
    length: usize,
    entries: Vec<(Word, u64)>,
}

impl FactorSet {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.entries.iter().map(|(w, _)| w)
    }

    pub fn entries(&self) -> &[(Word, u64)] {
        &self.entries
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.entries
            .binary_search_by(|(e, _)| e.cmp(w))
            .is_ok()
    }

    /// A position at which the word occurs, if it is in the set.
    pub fn witness(&self, w: &Word) -> Option<u64> {
        self.entries
            .binary_search_by(|(e, _)| e.cmp(w))
            .ok()
            .map(|idx| self.entries[idx].1)
    }
}

/// Smallest `m` with `3^m >= n`.
fn block_exponent(n: usize) -> u32 {
    let mut m = 0u32;
    let mut pow = 1usize;
    while pow < n {
        pow *= 3;
        m += 1;
    }
    m
}

/// Occurrence positions of `u` harvested from the three substitution
/// windows for block exponent `m`; complete when `|u| <= 3^m`.
fn window_occurrences(u: &Word, m: u32) -> Vec<u64> {
    let block = 3u64.pow(m);
    let mut positions = Vec::new();
    for (pair, anchor) in PAIRS {
        let image = sigma_power(&pair.parse().unwrap(), m);
        let letters = image.letters();
        for t in 0..block as usize {
            if t + u.len() <= letters.len() && &letters[t..t + u.len()] == u.letters() {
                positions.push(block * anchor + t as u64);
            }
        }
    }
    positions.sort_unstable();
    positions
}

fn enumerate(n: usize) -> FactorSet {
    let m = block_exponent(n);
    let mut found: BTreeMap<Word, u64> = BTreeMap::new();
    for (pair, anchor) in PAIRS {
        let image = sigma_power(&pair.parse().unwrap(), m);
        let letters = image.letters();
        let block = 3usize.pow(m);
        for t in 0..block {
            if t + n > letters.len() {
                break;
            }
            let w = Word::from_letters(letters[t..t + n].to_vec());
            let pos = 3u64.pow(m) * anchor + t as u64;
            found
                .entry(w)
                .and_modify(|p| *p = (*p).min(pos))
                .or_insert(pos);
        }
    }
    FactorSet {
        length: n,
        entries: found.into_iter().collect(),
    }
}

/// The complete set of length-`n` factors, under the default cap.
pub fn factors(n: usize) -> Result<FactorSet> {
    factors_capped(n, DEFAULT_ENUM_CAP)
}

/// The complete set of length-`n` factors; errors past the given cap.
pub fn factors_capped(n: usize, cap: u64) -> Result<FactorSet> {
    if n as u64 > cap {
        return Err(Error::CapExceeded {
            requested: n as u64,
            cap,
        });
    }
    Ok(enumerate(n))
}

/// Whether `u` occurs in the sequence. The empty word counts as a factor.
pub fn is_factor(u: &Word) -> bool {
    if u.is_empty() {
        return true;
    }
    let m = block_exponent(u.len());
    !window_occurrences(u, m).is_empty()
}

/// Factors of length `n` extendable by both letters on the right.
pub fn right_special(n: usize) -> Vec<Word> {
    let current = enumerate(n);
    let longer = enumerate(n + 1);
    current
        .words()
        .filter(|w| longer.contains(&w.extended(0)) && longer.contains(&w.extended(1)))
        .cloned()
        .collect()
}

/// Factors of length `n` extendable by both letters on the left.
pub fn left_special(n: usize) -> Vec<Word> {
    let current = enumerate(n);
    let longer = enumerate(n + 1);
    current
        .words()
        .filter(|w| {
            longer.contains(&Word::letter_word(0).concat(w))
                && longer.contains(&Word::letter_word(1).concat(w))
        })
        .cloned()
        .collect()
}

/// The two-element closed form for the right special factors of length `k`:
/// `0^k` together with the length-`k` suffix of `sigma^i(010)`, where `i`
/// satisfies `3^i < k <= 3^{i+1}`. Defined for `k >= 2`.
pub fn closed_right_special(k: usize) -> Result<Vec<Word>> {
    closed_special(k, false)
}

/// Left-hand counterpart: `0^k` and the length-`k` prefix of `sigma^i(010)`.
pub fn closed_left_special(k: usize) -> Result<Vec<Word>> {
    closed_special(k, true)
}

fn closed_special(k: usize, left: bool) -> Result<Vec<Word>> {
    if k < 2 {
        return Err(Error::UnsupportedK {
            k: k as u64,
            reason: "the closed form needs 3^i < k for some i >= 0",
        });
    }
    let mut i = 0u32;
    while 3usize.pow(i + 1) < k {
        i += 1;
    }
    debug_assert!(3usize.pow(i) < k && k <= 3usize.pow(i + 1));
    let core = sigma_power(&"010".parse().unwrap(), i);
    let second = if left { core.prefix(k) } else { core.suffix(k) };
    let mut out = vec![Word::zeros(k), second];
    out.sort();
    out.dedup();
    Ok(out)
}

/// Residues modulo `3^level` of the starting positions of a factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeSet {
    pub level: u32,
    pub residues: BTreeSet<u64>,
}

/// All residues `j mod 3^level` at which `u` occurs in the sequence.
///
/// Errors when `u` is not a factor. Every residue reported is backed by an
/// explicit occurrence, re-verified letter by letter.
pub fn type_set(level: u32, u: &Word) -> Result<TypeSet> {
    assert!(level >= 1, "type level must be at least 1");
    if u.is_empty() || !is_factor(u) {
        return Err(Error::NotAFactor(u.clone()));
    }
    let m = block_exponent(u.len()).max(level);
    let modulus = 3u64.pow(level);
    let mut residues = BTreeSet::new();
    for pos in window_occurrences(u, m) {
        if residues.insert(pos % modulus) {
            debug_assert!(occurs_at(u, pos), "witness check failed at {pos}");
        }
    }
    Ok(TypeSet { level, residues })
}

fn occurs_at(u: &Word, pos: u64) -> bool {
    u.letters()
        .iter()
        .enumerate()
        .all(|(j, &b)| cantor_letter(pos + j as u64) == b)
}

/// For a non-zero factor `v`: the number of trailing zeros `z`, and the set
/// of residues modulo `3^modulus_exp` of the position of the last 1 of `v`,
/// taken over all occurrences of `v` in the sequence.
pub fn last_one_types(v: &Word, modulus_exp: u32) -> Result<(usize, BTreeSet<u64>)> {
    if v.is_zero_word() {
        return Err(Error::AllZeroWord);
    }
    let last_one = v.last_one().expect("non-zero word has a 1");
    let z = v.trailing_zeros();
    debug_assert_eq!(last_one + z + 1, v.len());
    if !is_factor(v) {
        return Err(Error::NotAFactor(v.clone()));
    }
    let m = block_exponent(v.len()).max(modulus_exp);
    let modulus = 3u64.pow(modulus_exp);
    let residues = window_occurrences(v, m)
        .into_iter()
        .map(|pos| (pos + last_one as u64) % modulus)
        .collect();
    Ok((z, residues))
}

/// All start positions `< limit` at which `u` occurs, in ascending order.
pub fn occurrences(u: &Word, limit: u64) -> Result<Vec<u64>> {
    occurrences_capped(u, limit, DEFAULT_ENUM_CAP)
}

/// As [`occurrences`], but with an explicit cap on the scan limit.
pub fn occurrences_capped(u: &Word, limit: u64, cap: u64) -> Result<Vec<u64>> {
    if limit > cap {
        return Err(Error::CapExceeded {
            requested: limit,
            cap,
        });
    }
    let head = prefix(limit as usize + u.len());
    let letters = head.letters();
    Ok((0..limit as usize)
        .filter(|&p| &letters[p..p + u.len()] == u.letters())
        .map(|p| p as u64)
        .collect())
}
