//! The Cantor sequence and its generating morphism.
//!
//! The sequence `c = 101000101000000000101000101...` is the fixed point,
//! starting with 1, of the morphism `0 -> 000`, `1 -> 101`. Equivalently
//! `c[0] = 1`, `c[3n] = c[3n+2] = c[n]` and `c[3n+1] = 0`, and `c[n] = 1`
//! exactly when the base-3 expansion of `n` contains no digit 1.
//!
//! Everything here is a pure function; [`PrefixSums`] is an immutable
//! table for O(1) window sums over an explicit prefix.

use std::collections::HashMap;

use crate::word::Word;

/// Letter `c[n]`, computed from the base-3 digits of `n` in O(log n).
///
/// The digit characterization is a shortcut; the defining recurrence is kept
/// as a test oracle next to the unit tests.
pub fn cantor_letter(n: u64) -> u8 {
    let mut m = n;
    while m > 0 {
        if m % 3 == 1 {
            return 0;
        }
        m /= 3;
    }
    1
}

/// Image of a word under the substitution `0 -> 000`, `1 -> 101`.
pub fn sigma_image(w: &Word) -> Word {
    let mut out = Vec::with_capacity(3 * w.len());
    for &b in w.letters() {
        if b == 0 {
            out.extend_from_slice(&[0, 0, 0]);
        } else {
            out.extend_from_slice(&[1, 0, 1]);
        }
    }
    Word::from_letters(out)
}

/// `t`-fold iterate of the substitution.
pub fn sigma_power(w: &Word, t: u32) -> Word {
    let mut out = w.clone();
    for _ in 0..t {
        out = sigma_image(&out);
    }
    out
}

/// First `n` letters of the sequence.
///
/// Built as a truncated iterate of the morphism on `1`, so
/// `prefix(3m) = sigma_image(prefix(m))` holds by construction.
pub fn prefix(n: usize) -> Word {
    let mut w = Word::letter_word(1);
    while w.len() < n {
        w = sigma_image(&w);
    }
    w.prefix(n)
}

/// Window `c[start..start+len]`, letter by letter.
pub fn window(start: u64, len: usize) -> Word {
    Word::from_letters((0..len as u64).map(|j| cantor_letter(start + j)).collect())
}

/// Window sum `c[i] + ... + c[i+n-1]`.
///
/// Splitting the window along base-3 blocks reduces `(i, n)` to the four
/// neighbours `(i or i+1, n or n+1)` one level down, so with memoization the
/// evaluation touches O(log n) states.
pub fn digit_sum(i: u64, n: u64) -> u64 {
    fn go(i: u64, n: u64, memo: &mut HashMap<(u64, u64), u64>) -> u64 {
        match n {
            0 => return 0,
            1 => return u64::from(cantor_letter(i)),
            2 => return u64::from(cantor_letter(i)) + u64::from(cantor_letter(i + 1)),
            _ => {}
        }
        if let Some(&v) = memo.get(&(i, n)) {
            return v;
        }
        let (q, r) = (i / 3, i % 3);
        let (m, s) = (n / 3, n % 3);
        let v = match (r, s) {
            (0, 0) => 2 * go(q, m, memo),
            (0, _) => go(q, m, memo) + go(q, m + 1, memo),
            (1, 0) | (1, 1) => go(q, m, memo) + go(q + 1, m, memo),
            (1, 2) => go(q, m + 1, memo) + go(q + 1, m, memo),
            (2, 0) => go(q, m, memo) + go(q + 1, m, memo),
            (2, 1) => go(q, m + 1, memo) + go(q + 1, m, memo),
            _ => go(q, m + 1, memo) + go(q + 1, m + 1, memo),
        };
        memo.insert((i, n), v);
        v
    }
    go(i, n, &mut HashMap::new())
}

/// Immutable prefix table with cumulative one-counts, for bulk window sums.
#[derive(Debug, Clone)]
pub struct PrefixSums {
    letters: Vec<u8>,
    ones: Vec<u64>,
}

impl PrefixSums {
    /// Materializes the first `len` letters.
    pub fn new(len: usize) -> Self {
        let letters = prefix(len).letters().to_vec();
        let mut ones = Vec::with_capacity(len + 1);
        ones.push(0);
        for &b in &letters {
            ones.push(ones.last().unwrap() + u64::from(b));
        }
        PrefixSums { letters, ones }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// `c[i] + ... + c[i+n-1]`; the window must lie inside the table.
    pub fn ones_in(&self, i: usize, n: usize) -> u64 {
        self.ones[i + n] - self.ones[i]
    }
}
