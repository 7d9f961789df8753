//! Ground-truth k-abelian machinery: signatures, brute-force class counts,
//! and exhaustive sweeps of the occurrence-count identities that back the
//! closed formulas.
//!
//! Two words are k-abelian equivalent when they share their length-(k-1)
//! prefix and suffix and every length-k word occurs in both equally often.
//! The signature below captures exactly that, so "equivalent" is literal
//! key equality, and class counting is grouping by signature.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::factors::{self, FactorSet};
use crate::word::Word;
use crate::{Error, Result};

/// The complete k-abelian invariant of a word.
///
/// For words shorter than `k - 1` the prefix and suffix fields clamp to the
/// whole word and the count map is empty, so equivalence between short words
/// of equal length degenerates to equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AbelianSignature {
    pub k: usize,
    pub prefix: Word,
    pub suffix: Word,
    /// Occurrence counts of the length-k factors present in the word;
    /// absent keys mean zero.
    pub counts: BTreeMap<Word, u64>,
}

/// The signature of `u` under k-abelian equivalence, `k >= 1`.
pub fn signature(u: &Word, k: usize) -> AbelianSignature {
    assert!(k >= 1, "k must be at least 1");
    let mut counts = BTreeMap::new();
    for win in u.windows(k) {
        *counts.entry(Word::from_letters(win.to_vec())).or_insert(0) += 1;
    }
    AbelianSignature {
        k,
        prefix: u.prefix(k - 1),
        suffix: u.suffix(k - 1),
        counts,
    }
}

/// Number of (possibly overlapping) occurrences of `z` in `u`.
///
/// The empty pattern occurs once per position boundary, `|u| + 1` times.
pub fn count_occurrences(u: &Word, z: &Word) -> u64 {
    if z.is_empty() {
        return u.len() as u64 + 1;
    }
    u.windows(z.len()).filter(|w| *w == z.letters()).count() as u64
}

/// 1 when `z` is a prefix of `w`, else 0.
pub fn pref_flag(z: &Word, w: &Word) -> u64 {
    u64::from(w.starts_with(z))
}

/// 1 when `z` is a suffix of `w`, else 0.
pub fn suff_flag(z: &Word, w: &Word) -> u64 {
    u64::from(w.ends_with(z))
}

/// One equivalence class: its lexicographically least member and its size.
#[derive(Debug, Clone, Serialize)]
pub struct ClassSummary {
    pub representative: Word,
    pub size: u64,
}

/// Outcome of a class count or of a verification sweep.
///
/// Complexity queries fill `classes`; verification sweeps fill
/// `counterexamples` (expected empty) and leave the class list empty.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub n: u64,
    pub k: u64,
    pub class_count: u64,
    pub classes: Vec<ClassSummary>,
    /// How many objects (factors, pairs, equations) the sweep examined.
    pub checked: u64,
    pub counterexamples: Vec<String>,
}

impl EquivalenceReport {
    fn sweep(k: u64, max_len: u64, checked: u64, mut counterexamples: Vec<String>) -> Self {
        counterexamples.sort();
        EquivalenceReport {
            n: max_len,
            k,
            class_count: 0,
            classes: Vec::new(),
            checked,
            counterexamples,
        }
    }

    pub fn is_clean(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Groups the given factors by signature; returns sorted class summaries.
fn classify(set: &FactorSet, k: usize) -> Vec<ClassSummary> {
    let mut classes: BTreeMap<AbelianSignature, ClassSummary> = BTreeMap::new();
    for w in set.words() {
        // Words iterate in lexicographic order, so the first member seen is
        // the representative.
        classes
            .entry(signature(w, k))
            .and_modify(|c| c.size += 1)
            .or_insert_with(|| ClassSummary {
                representative: w.clone(),
                size: 1,
            });
    }
    let mut out: Vec<ClassSummary> = classes.into_values().collect();
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    out
}

/// Brute-force k-abelian class count over the length-`n` factors.
pub fn complexity_bruteforce(n: usize, k: usize) -> Result<EquivalenceReport> {
    complexity_bruteforce_capped(n, k, factors::DEFAULT_ENUM_CAP)
}

/// As [`complexity_bruteforce`] with an explicit enumeration cap.
pub fn complexity_bruteforce_capped(n: usize, k: usize, cap: u64) -> Result<EquivalenceReport> {
    let set = factors::factors_capped(n, cap)?;
    let classes = classify(&set, k);
    Ok(EquivalenceReport {
        n: n as u64,
        k: k as u64,
        class_count: classes.len() as u64,
        checked: set.len() as u64,
        classes,
        counterexamples: Vec::new(),
    })
}

/// Per-(prefix, suffix) class counts: for each pair `(x, y)` of length-(k-1)
/// words, the number of k-abelian classes among length-`n` factors with
/// prefix `x` and suffix `y`. Cells with no factors are absent.
pub fn cell_class_counts(n: usize, k: usize) -> Result<BTreeMap<(Word, Word), u64>> {
    let set = factors::factors_capped(n, factors::DEFAULT_ENUM_CAP)?;
    let mut cells: BTreeMap<(Word, Word), BTreeSet<AbelianSignature>> = BTreeMap::new();
    for w in set.words() {
        let sig = signature(w, k);
        cells
            .entry((sig.prefix.clone(), sig.suffix.clone()))
            .or_default()
            .insert(sig);
    }
    Ok(cells
        .into_iter()
        .map(|(cell, sigs)| (cell, sigs.len() as u64))
        .collect())
}

/// Zero-run boundary defect of a factor `u`, for block size `3^i`:
/// `|u|_{0^{3^i + 2}} + |u|_{1 0^{3^i} 1} - |u|_{0^{3^i + 1}} + 1`.
///
/// Always lies in {0, 1, 2} for factors of the sequence.
pub fn delta(i: u32, u: &Word) -> Result<i64> {
    if !factors::is_factor(u) {
        return Err(Error::NotAFactor(u.clone()));
    }
    Ok(delta_value(i, u))
}

fn delta_value(i: u32, u: &Word) -> i64 {
    let b = 3usize.pow(i);
    let long_zeros = Word::zeros(b + 2);
    let one_gap_one = one_zeros_one(b);
    let zeros = Word::zeros(b + 1);
    count_occurrences(u, &long_zeros) as i64 + count_occurrences(u, &one_gap_one) as i64
        - count_occurrences(u, &zeros) as i64
        + 1
}

/// `1 0^m 1`.
fn one_zeros_one(m: usize) -> Word {
    let mut w = Word::letter_word(1);
    for _ in 0..m {
        w.push(0);
    }
    w.push(1);
    w
}

/// Sweeps every factor up to `max_len` and checks the boundary-defect
/// congruences for block size `3^i`: the defect lies in {0, 1, 2}, reduces
/// mod 3 through the zero-run counts when the word neither starts nor ends
/// with `0^{3^i + 1}`, and mod 2 through the prefix/suffix flags otherwise.
pub fn verify_delta_congruences(i: u32, max_len: usize) -> Result<EquivalenceReport> {
    let b = 3usize.pow(i);
    let zeros_long = Word::zeros(b + 1);
    let zeros_one = {
        let mut w = Word::zeros(b);
        w.push(1);
        w
    };
    let mut bad = Vec::new();
    let mut checked = 0u64;
    for n in 1..=max_len {
        for u in factors::factors_capped(n, max_len as u64)?.words() {
            checked += 1;
            let d = delta_value(i, u);
            if !(0..=2).contains(&d) {
                bad.push(format!("defect {d} outside {{0,1,2}} for {u}"));
                continue;
            }
            let p_long = pref_flag(&zeros_long, u) as i64;
            let s_long = suff_flag(&zeros_long, u) as i64;
            let run_count = count_occurrences(u, &zeros_one) as i64;
            let p_run = pref_flag(&zeros_one, u) as i64;
            if p_long == 0 && s_long == 0 {
                let long_zero_windows = count_occurrences(u, &zeros_long) as i64;
                if long_zero_windows % b as i64 != 0 {
                    bad.push(format!(
                        "window count {long_zero_windows} not divisible by {b} for {u}"
                    ));
                    continue;
                }
                let rhs = run_count + 2 * (long_zero_windows / b as i64) + 1 - p_run;
                if d.rem_euclid(3) != rhs.rem_euclid(3) {
                    bad.push(format!("mod-3 branch fails for {u}: {d} vs {rhs}"));
                }
            } else {
                let rhs = run_count + 1 - s_long - p_run;
                if d.rem_euclid(2) != rhs.rem_euclid(2) {
                    bad.push(format!("mod-2 branch fails for {u}: {d} vs {rhs}"));
                }
            }
        }
    }
    Ok(EquivalenceReport::sweep(i as u64, max_len as u64, checked, bad))
}

/// Sweeps the occurrence-count identities: for every factor `z = a y b` of
/// length `k + 1` and every factor `u` with `|u| >= |z|`, the count of `z`
/// in `u` is determined by the counts of `a y` (resp. `y b`) corrected by a
/// suffix (resp. prefix) flag, with the extra sibling term exactly when the
/// shorter word is right (resp. left) special.
pub fn verify_occurrence_identities(k: usize, max_len: usize) -> Result<EquivalenceReport> {
    assert!(k >= 1);
    let rs: BTreeSet<Word> = factors::right_special(k).into_iter().collect();
    let ls: BTreeSet<Word> = factors::left_special(k).into_iter().collect();
    let z_set = factors::factors_capped(k + 1, u64::MAX)?;
    let mut bad = Vec::new();
    let mut checked = 0u64;
    for n in (k + 1)..=max_len {
        for u in factors::factors_capped(n, max_len as u64)?.words() {
            for z in z_set.words() {
                checked += 1;
                let target = count_occurrences(u, z) as i64;
                let ay = z.prefix(k);
                let yb = z.suffix(k);
                let via_right = if rs.contains(&ay) {
                    let sibling = ay.extended(1 - z.letter(k));
                    count_occurrences(u, &ay) as i64
                        - count_occurrences(u, &sibling) as i64
                        - suff_flag(&ay, u) as i64
                } else {
                    count_occurrences(u, &ay) as i64 - suff_flag(&ay, u) as i64
                };
                let via_left = if ls.contains(&yb) {
                    let sibling = Word::letter_word(1 - z.letter(0)).concat(&yb);
                    count_occurrences(u, &yb) as i64
                        - count_occurrences(u, &sibling) as i64
                        - pref_flag(&yb, u) as i64
                } else {
                    count_occurrences(u, &yb) as i64 - pref_flag(&yb, u) as i64
                };
                if via_right != target {
                    bad.push(format!(
                        "right route for z = {z}, u = {u}: {via_right} != {target}"
                    ));
                }
                if via_left != target {
                    bad.push(format!(
                        "left route for z = {z}, u = {u}: {via_left} != {target}"
                    ));
                }
            }
        }
    }
    Ok(EquivalenceReport::sweep(k as u64, max_len as u64, checked, bad))
}

/// Checks, over all length-`n` factors, that within every group sharing a
/// length-`k` prefix and suffix, (k+1)-abelian equivalence coincides with
/// having the same number of 1s.
pub fn verify_reduction(k: usize, n: usize) -> Result<EquivalenceReport> {
    let set = factors::factors_capped(n, factors::DEFAULT_ENUM_CAP.max(n as u64))?;
    let mut cells: BTreeMap<(Word, Word), Vec<&Word>> = BTreeMap::new();
    for w in set.words() {
        cells.entry((w.prefix(k), w.suffix(k))).or_default().push(w);
    }
    let mut bad = Vec::new();
    let checked = set.len() as u64;
    for members in cells.values() {
        // ones -> one representative per distinct (k+1)-signature
        let mut by_ones: BTreeMap<u64, BTreeMap<AbelianSignature, &Word>> = BTreeMap::new();
        for w in members {
            by_ones
                .entry(w.count_ones())
                .or_default()
                .entry(signature(w, k + 1))
                .or_insert(w);
        }
        for (ones, sigs) in &by_ones {
            if sigs.len() > 1 {
                let mut reps = sigs.values();
                let a = reps.next().unwrap();
                let b = reps.next().unwrap();
                bad.push(format!(
                    "abelian-equivalent pair not ({})-equivalent: {a} and {b} ({} ones)",
                    k + 1,
                    ones
                ));
            }
        }
    }
    Ok(EquivalenceReport::sweep(k as u64, n as u64, checked, bad))
}

/// Sweeps the four-equation linear system tying together the counts of
/// `0^{k+1}`, `0^k 1`, `1 0^k` and `1 0^{k-1} 1` inside every factor, for
/// `k = 3^i + 1`. Errors for other `k`.
pub fn verify_linear_system(k: u64, max_len: usize) -> Result<EquivalenceReport> {
    let i = block_index_for_system(k)?;
    let ku = k as usize;
    let zeros_k = Word::zeros(ku);
    let zeros_k1 = Word::zeros(ku + 1);
    let zeros_k_one = {
        let mut w = Word::zeros(ku);
        w.push(1);
        w
    };
    let one_zeros_k = Word::letter_word(1).concat(&Word::zeros(ku));
    let one_gap_one = one_zeros_one(ku - 1);
    let one_zeros_km1 = Word::letter_word(1).concat(&Word::zeros(ku - 1));
    let mut bad = Vec::new();
    let mut checked = 0u64;
    for n in 1..=max_len {
        for w in factors::factors_capped(n, max_len as u64)?.words() {
            checked += 1;
            let c_zeros_k1 = count_occurrences(w, &zeros_k1) as i64;
            let c_zeros_k = count_occurrences(w, &zeros_k) as i64;
            let c_zeros_k_one = count_occurrences(w, &zeros_k_one) as i64;
            let c_one_zeros_k = count_occurrences(w, &one_zeros_k) as i64;
            let c_one_gap_one = count_occurrences(w, &one_gap_one) as i64;
            let c_one_zeros_km1 = count_occurrences(w, &one_zeros_km1) as i64;
            let eqs = [
                (
                    "suffix route",
                    c_zeros_k1 + c_zeros_k_one,
                    c_zeros_k - suff_flag(&zeros_k, w) as i64,
                ),
                (
                    "prefix route",
                    c_zeros_k1 + c_one_zeros_k,
                    c_zeros_k - pref_flag(&zeros_k, w) as i64,
                ),
                (
                    "bridge route",
                    c_one_zeros_k + c_one_gap_one,
                    c_one_zeros_km1 - suff_flag(&one_zeros_km1, w) as i64,
                ),
                (
                    "defect route",
                    c_zeros_k1 + c_one_gap_one,
                    c_zeros_k - 1 + delta_value(i, w),
                ),
            ];
            for (name, lhs, rhs) in eqs {
                if lhs != rhs {
                    bad.push(format!("{name} fails for w = {w}: {lhs} != {rhs}"));
                }
            }
        }
    }
    Ok(EquivalenceReport::sweep(k, max_len as u64, checked, bad))
}

/// The exponent `i` with `k = 3^i + 1`, required by the linear system.
fn block_index_for_system(k: u64) -> Result<u32> {
    let mut i = 0u32;
    let mut pow = 1u64;
    loop {
        match (pow + 1).cmp(&k) {
            std::cmp::Ordering::Equal => return Ok(i),
            std::cmp::Ordering::Greater => {
                return Err(Error::UnsupportedK {
                    k,
                    reason: "the linear system needs k = 3^i + 1",
                })
            }
            std::cmp::Ordering::Less => {
                pow *= 3;
                i += 1;
            }
        }
    }
}
