//! Recurrences and closed forms for the complexity functions, with the
//! brute-force route as fallback below the proven thresholds.
//!
//! The backbone is the maximal window sum `max_sum`: the largest number of
//! 1s in any length-`n` window, which for this sequence is attained by the
//! initial window and satisfies
//!
//! ```text
//! M(1) = M(2) = 1,  M(3n) = 2 M(n),  M(3n+1) = M(3n+2) = M(n) + M(n+1).
//! ```
//!
//! Abelian complexity is `M(n) + 1` in recurrence form, 2-abelian complexity
//! has a closed form in `M`, and for `k >= 3` the class count splits over
//! (prefix, suffix) cells of length k-1, each cell being either an `M`
//! evaluation or a periodic 0/1 membership test. The cell formulas are valid
//! from `threshold = 2 * 3^(i+1) + 2k - 2` on, where `i` is fixed by
//! `3^i + 1 < k <= 3^(i+1) + 1`; below that everything falls back to brute
//! force and the method used is recorded.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::factors;
use crate::kabelian;
use crate::word::Word;
use crate::{Error, Result};

fn with_cache<F: FnOnce(&mut HashMap<u64, u64>) -> u64>(
    cell: &'static OnceLock<Mutex<HashMap<u64, u64>>>,
    f: F,
) -> u64 {
    let mut guard = cell
        .get_or_init(|| Mutex::new(HashMap::new()))
        .lock()
        .expect("cache poisoned");
    f(&mut guard)
}

/// Maximal number of 1s in a length-`n` window, `M(0) = 0`.
pub fn max_sum(n: u64) -> u64 {
    static CACHE: OnceLock<Mutex<HashMap<u64, u64>>> = OnceLock::new();
    fn go(n: u64, memo: &mut HashMap<u64, u64>) -> u64 {
        match n {
            0 => return 0,
            1 | 2 => return 1,
            _ => {}
        }
        if let Some(&v) = memo.get(&n) {
            return v;
        }
        let q = n / 3;
        let v = if n % 3 == 0 {
            2 * go(q, memo)
        } else {
            go(q, memo) + go(q + 1, memo)
        };
        memo.insert(n, v);
        v
    }
    with_cache(&CACHE, |memo| go(n, memo))
}

/// Abelian complexity: number of abelian classes of length-`n` factors.
///
/// Since the minimal window sum is 0 at every length, this equals
/// `max_sum(n) + 1`; the recurrence form is kept as the primary definition
/// and both routes are exercised in tests. `P(0) = 1`.
pub fn abelian_complexity(n: u64) -> u64 {
    static CACHE: OnceLock<Mutex<HashMap<u64, u64>>> = OnceLock::new();
    fn go(n: u64, memo: &mut HashMap<u64, u64>) -> u64 {
        match n {
            0 => return 1,
            1 | 2 => return 2,
            _ => {}
        }
        if let Some(&v) = memo.get(&n) {
            return v;
        }
        let q = n / 3;
        let v = if n % 3 == 0 {
            2 * go(q, memo) - 1
        } else {
            go(q, memo) + go(q + 1, memo) - 1
        };
        memo.insert(n, v);
        v
    }
    with_cache(&CACHE, |memo| go(n, memo))
}

/// 2-abelian complexity by the closed form
/// `M(n-2) + 2 M(n-1) + 1 + [n odd]` for `n >= 2`, with the enumerated
/// initial values below.
pub fn two_abelian(n: u64) -> u64 {
    match n {
        0 => 1,
        1 => 2,
        _ => max_sum(n - 2) + 2 * max_sum(n - 1) + 1 + n % 2,
    }
}

/// Number of 2-abelian classes among length-`n` factors that start with
/// letter `x` and end with letter `y`.
pub fn two_abelian_cell(n: u64, x: u8, y: u8) -> u64 {
    assert!(n >= 1 && x <= 1 && y <= 1);
    if n == 1 {
        return u64::from(x == y);
    }
    match (x, y) {
        (0, 0) => max_sum(n - 2) + 1,
        (1, 1) => n % 2,
        _ => max_sum(n - 1),
    }
}

/// Length of the run of 0s between the j-th and (j+1)-th 1 of the sequence:
/// `d(2j-1) = 1`, `d(2j) = 3 d(j)`.
pub fn gap(j: u64) -> u64 {
    assert!(j >= 1, "gaps are indexed from 1");
    if j % 2 == 1 {
        1
    } else {
        3 * gap(j / 2)
    }
}

/// Distance spanned by `j` consecutive 1s starting at the i-th:
/// `f(i, j) = j + d(i) + ... + d(i+j-1)`, evaluated through the parity
/// recurrences with the defining sum as base case.
pub fn f_span(i: u64, j: u64) -> u64 {
    assert!(i >= 1 && j >= 1);
    if i == 1 {
        return j + (1..=j).map(gap).sum::<u64>();
    }
    if j == 1 {
        return 1 + gap(i);
    }
    match (i % 2, j % 2) {
        (0, 0) => 3 * f_span(i / 2, j / 2),
        (0, 1) => 3 * f_span(i / 2, (j + 1) / 2) - 2,
        (1, 0) => 3 * f_span((i + 1) / 2, j / 2),
        _ => 3 * f_span((i + 1) / 2, (j - 1) / 2) + 2,
    }
}

/// Block indexing for the cell decomposition at a given `k >= 3`: the
/// exponent `i` with `3^i + 1 < k <= 3^(i+1) + 1`, the block length
/// `3^(i+1)`, and the length from which the cell formulas are proven.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KIndexing {
    pub k: u64,
    pub i: u32,
    pub block: u64,
    pub threshold: u64,
}

impl KIndexing {
    pub fn new(k: u64) -> Result<Self> {
        if k < 3 {
            return Err(Error::UnsupportedK {
                k,
                reason: "the cell decomposition needs k >= 3",
            });
        }
        let mut i = 0u32;
        while 3u64.pow(i + 1) + 1 < k {
            i += 1;
        }
        debug_assert!(3u64.pow(i) + 1 < k && k <= 3u64.pow(i + 1) + 1);
        let block = 3u64.pow(i + 1);
        Ok(KIndexing {
            k,
            i,
            block,
            threshold: 2 * block + 2 * k - 2,
        })
    }
}

/// Cell `(0^(k-1), 0^(k-1))`: `M(floor((n - 2k + 2) / block)) + 1`.
/// `None` below the threshold, where the formula is not proven.
pub fn pk_zero_zero(n: u64, idx: &KIndexing) -> Option<u64> {
    if n < idx.threshold {
        return None;
    }
    let scaled = (n - (2 * idx.k - 2)) / idx.block;
    Some(max_sum(scaled) + 1)
}

/// Cell `(0^(k-1), y)` for a non-zero boundary word `y`: one `M` term per
/// residue of the last 1 of `y`, or `None` below the threshold.
///
/// The symmetric cell `(x, 0^(k-1))` equals this with `y` the reversal of
/// `x`, because the factor set is closed under reversal.
pub fn pk_zero_y(n: u64, idx: &KIndexing, y: &Word) -> Result<Option<u64>> {
    assert_eq!(
        y.len() as u64,
        idx.k - 1,
        "boundary word must have length k - 1"
    );
    let rule = tail_rule(idx, y)?;
    if n < idx.threshold {
        return Ok(None);
    }
    Ok(Some(tail_value(n, idx, &rule)))
}

/// Cell `(x, y)` for non-zero boundary words: 0/1 by membership of `n` in a
/// union of arithmetic progressions of period `2 * block`, or `None` below
/// the threshold.
pub fn pk_x_y(n: u64, idx: &KIndexing, x: &Word, y: &Word) -> Result<Option<u64>> {
    assert_eq!(
        x.len() as u64,
        idx.k - 1,
        "boundary word must have length k - 1"
    );
    assert_eq!(
        y.len() as u64,
        idx.k - 1,
        "boundary word must have length k - 1"
    );
    let spans = pair_spans(idx, x, y)?;
    if n < idx.threshold {
        return Ok(None);
    }
    Ok(Some(pair_value(n, idx, &spans)))
}

/// Last-1 data of a non-zero boundary word: trailing zeros and the residues
/// of its last 1 modulo the block length.
struct TailRule {
    z: u64,
    offsets: Vec<u64>,
}

fn tail_rule(idx: &KIndexing, y: &Word) -> Result<TailRule> {
    let (z, offsets) = factors::last_one_types(y, idx.i + 1)?;
    Ok(TailRule {
        z: z as u64,
        offsets: offsets.into_iter().collect(),
    })
}

fn tail_value(n: u64, idx: &KIndexing, rule: &TailRule) -> u64 {
    rule.offsets
        .iter()
        .map(|&o| {
            let scaled = (n - idx.k - o - rule.z) / idx.block;
            max_sum(scaled + 1)
        })
        .sum()
}

/// All values `k - 1 - o_x - z_x + o_y + z_y` over the last-1 residues of
/// the two boundary words; `n` belongs to the cell's support exactly when
/// `n = 2 * block * j + span` for one of these spans and some `j >= 1`.
fn pair_spans(idx: &KIndexing, x: &Word, y: &Word) -> Result<Vec<i64>> {
    let (zx, offs_x) = factors::last_one_types(x, idx.i + 1)?;
    let (zy, offs_y) = factors::last_one_types(y, idx.i + 1)?;
    let mut spans = Vec::new();
    for &ox in &offs_x {
        for &oy in &offs_y {
            spans.push((idx.k as i64 - 1) - ox as i64 - zx as i64 + oy as i64 + zy as i64);
        }
    }
    spans.sort_unstable();
    spans.dedup();
    Ok(spans)
}

fn pair_value(n: u64, idx: &KIndexing, spans: &[i64]) -> u64 {
    let period = 2 * idx.block as i64;
    let n = n as i64;
    let member = spans
        .iter()
        .any(|&span| n - span >= period && (n - span) % period == 0);
    u64::from(member)
}

/// Which route produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodUsed {
    Brute,
    Fast,
    Both,
}

impl fmt::Display for MethodUsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MethodUsed::Brute => "brute",
            MethodUsed::Fast => "fast",
            MethodUsed::Both => "both",
        };
        f.write_str(s)
    }
}

/// Computation route requested by a caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Brute,
    Fast,
    Both,
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "brute" => Ok(Method::Brute),
            "fast" => Ok(Method::Fast),
            "both" => Ok(Method::Both),
            other => Err(format!("unknown method {other:?} (expected brute|fast|both)")),
        }
    }
}

/// One cell of the decomposition for `k >= 3` together with its evaluation
/// rule above the threshold.
struct CellRule {
    x: Word,
    y: Word,
    kind: CellKind,
}

enum CellKind {
    ZeroZero,
    Tail(TailRule),
    Pair(Vec<i64>),
}

fn build_cells(idx: &KIndexing) -> Result<Vec<CellRule>> {
    let boundary = factors::factors_capped(idx.k as usize - 1, u64::MAX)?;
    let mut cells = Vec::new();
    for x in boundary.words() {
        for y in boundary.words() {
            let kind = match (x.is_zero_word(), y.is_zero_word()) {
                (true, true) => CellKind::ZeroZero,
                (true, false) => CellKind::Tail(tail_rule(idx, y)?),
                (false, true) => CellKind::Tail(tail_rule(idx, &x.reverse())?),
                (false, false) => CellKind::Pair(pair_spans(idx, x, y)?),
            };
            cells.push(CellRule {
                x: x.clone(),
                y: y.clone(),
                kind,
            });
        }
    }
    Ok(cells)
}

fn cell_value(n: u64, idx: &KIndexing, rule: &CellRule) -> u64 {
    match &rule.kind {
        CellKind::ZeroZero => pk_zero_zero(n, idx).expect("caller checks threshold"),
        CellKind::Tail(tail) => tail_value(n, idx, tail),
        CellKind::Pair(spans) => pair_value(n, idx, spans),
    }
}

/// Per-cell values by the formulas for `k >= 3`; `None` below the threshold.
pub fn fast_cell_counts(n: u64, k: u64) -> Result<Option<BTreeMap<(Word, Word), u64>>> {
    let idx = KIndexing::new(k)?;
    if n < idx.threshold {
        return Ok(None);
    }
    let mut map = BTreeMap::new();
    for rule in build_cells(&idx)? {
        map.insert((rule.x.clone(), rule.y.clone()), cell_value(n, &idx, &rule));
    }
    Ok(Some(map))
}

/// k-abelian complexity by the requested route.
///
/// With [`Method::Fast`] and `k >= 3`, lengths below the threshold fall back
/// to brute force and the returned [`MethodUsed`] says so. With
/// [`Method::Both`] the two routes must agree — totals for `k <= 2`,
/// cell by cell for `k >= 3` — and any disagreement is an error carrying
/// both values and the offending cell.
pub fn k_abelian_complexity(n: u64, k: u64, method: Method) -> Result<(u64, MethodUsed)> {
    k_abelian_complexity_capped(n, k, method, factors::DEFAULT_ENUM_CAP)
}

/// As [`k_abelian_complexity`] with an explicit enumeration cap for the
/// brute-force route.
pub fn k_abelian_complexity_capped(
    n: u64,
    k: u64,
    method: Method,
    cap: u64,
) -> Result<(u64, MethodUsed)> {
    assert!(n >= 1 && k >= 1);
    let brute = || -> Result<u64> {
        Ok(kabelian::complexity_bruteforce_capped(n as usize, k as usize, cap)?.class_count)
    };
    match method {
        Method::Brute => Ok((brute()?, MethodUsed::Brute)),
        Method::Fast => match fast_total(n, k)? {
            Some(v) => Ok((v, MethodUsed::Fast)),
            None => Ok((brute()?, MethodUsed::Brute)),
        },
        Method::Both => {
            let b = brute()?;
            match k {
                1 | 2 => {
                    let f = fast_total(n, k)?.expect("k <= 2 has no threshold");
                    if f != b {
                        return Err(Error::MethodMismatch {
                            n,
                            k,
                            brute: b,
                            fast: f,
                            cell: None,
                        });
                    }
                }
                _ => {
                    if let Some(fast_cells) = fast_cell_counts(n, k)? {
                        let brute_cells = kabelian::cell_class_counts(n as usize, k as usize)?;
                        let mut fast_sum = 0u64;
                        for ((x, y), fv) in &fast_cells {
                            let bv = brute_cells
                                .get(&(x.clone(), y.clone()))
                                .copied()
                                .unwrap_or(0);
                            if *fv != bv {
                                return Err(Error::MethodMismatch {
                                    n,
                                    k,
                                    brute: bv,
                                    fast: *fv,
                                    cell: Some((x.clone(), y.clone())),
                                });
                            }
                            fast_sum += fv;
                        }
                        // No brute-force cell may fall outside the formula cells.
                        let brute_sum: u64 = brute_cells.values().sum();
                        if fast_sum != b || brute_sum != b {
                            return Err(Error::MethodMismatch {
                                n,
                                k,
                                brute: b,
                                fast: fast_sum,
                                cell: None,
                            });
                        }
                    }
                }
            }
            Ok((b, MethodUsed::Both))
        }
    }
}

/// Fast-route total; `None` when `k >= 3` and `n` is below the threshold.
fn fast_total(n: u64, k: u64) -> Result<Option<u64>> {
    match k {
        1 => Ok(Some(abelian_complexity(n))),
        2 => Ok(Some(two_abelian(n))),
        _ => Ok(fast_cell_counts(n, k)?.map(|cells| cells.values().sum())),
    }
}

/// Reusable evaluator for `n -> P^(k)(n)`, extended with value 1 at `n = 0`.
///
/// Cell rules and the brute-forced values below the threshold are computed
/// once at construction, so evaluation is a handful of `M` lookups per call
/// and the struct can be shared across threads.
pub struct KFastEvaluator {
    k: u64,
    idx: Option<KIndexing>,
    cells: Vec<CellRule>,
    below_threshold: Vec<u64>,
}

impl KFastEvaluator {
    pub fn new(k: u64) -> Result<Self> {
        assert!(k >= 1);
        if k <= 2 {
            return Ok(KFastEvaluator {
                k,
                idx: None,
                cells: Vec::new(),
                below_threshold: Vec::new(),
            });
        }
        let idx = KIndexing::new(k)?;
        let cells = build_cells(&idx)?;
        let mut below = vec![1u64];
        for n in 1..idx.threshold {
            below.push(
                kabelian::complexity_bruteforce_capped(n as usize, k as usize, idx.threshold)?
                    .class_count,
            );
        }
        Ok(KFastEvaluator {
            k,
            idx: Some(idx),
            cells,
            below_threshold: below,
        })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn eval(&self, n: u64) -> u64 {
        match self.k {
            1 => abelian_complexity(n),
            2 => two_abelian(n),
            _ => {
                let idx = self.idx.as_ref().unwrap();
                if n < idx.threshold {
                    self.below_threshold[n as usize]
                } else {
                    self.cells.iter().map(|rule| cell_value(n, idx, rule)).sum()
                }
            }
        }
    }
}

/// Values of one complexity function over a range, with the route that
/// produced each entry and free-form provenance notes. Re-recording an `n`
/// with a different value is a method disagreement and is rejected.
#[derive(Debug, Clone, Serialize)]
pub struct ComplexityTable {
    pub k: u64,
    pub entries: BTreeMap<u64, (u64, MethodUsed)>,
    pub notes: Vec<String>,
}

impl ComplexityTable {
    pub fn new(k: u64) -> Self {
        ComplexityTable {
            k,
            entries: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn record(&mut self, n: u64, value: u64, method: MethodUsed) -> Result<()> {
        if let Some(&(existing, _)) = self.entries.get(&n) {
            if existing != value {
                return Err(Error::MethodMismatch {
                    n,
                    k: self.k,
                    brute: existing.min(value),
                    fast: existing.max(value),
                    cell: None,
                });
            }
        }
        self.entries.insert(n, (value, method));
        Ok(())
    }

    pub fn note(&mut self, note: String) {
        self.notes.push(note);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::PrefixSums;

    #[test]
    fn max_sum_examples() {
        assert_eq!(max_sum(1), 1);
        assert_eq!(max_sum(3), 2);
        assert_eq!(max_sum(4), 2);
        assert_eq!(max_sum(0), 0);
    }

    #[test]
    fn max_sum_matches_window_scan() {
        // Oracle: maximum over all window positions in a long prefix;
        // exhaustive for n <= 500, then a sampled grid up to 10^4.
        let table = PrefixSums::new(3usize.pow(9) + 10_001);
        let check = |n: usize| {
            let best = (0..=3usize.pow(9)).map(|i| table.ones_in(i, n)).max().unwrap();
            assert_eq!(max_sum(n as u64), best, "n = {n}");
        };
        for n in 1..=500usize {
            check(n);
        }
        for n in (501..=10_000).step_by(97) {
            check(n);
        }
    }

    #[test]
    fn abelian_examples() {
        assert_eq!(abelian_complexity(1), 2);
        assert_eq!(abelian_complexity(3), 3);
        assert_eq!(abelian_complexity(4), 3);
    }

    #[test]
    fn abelian_matches_brute_force() {
        for n in 1..=300u64 {
            let brute = kabelian::complexity_bruteforce(n as usize, 1)
                .unwrap()
                .class_count;
            assert_eq!(abelian_complexity(n), brute, "n = {n}");
            assert_eq!(abelian_complexity(n), max_sum(n) + 1, "n = {n}");
        }
    }

    #[test]
    fn two_abelian_examples() {
        assert_eq!(two_abelian(2), 3);
        assert_eq!(two_abelian(3), 5);
        assert_eq!(two_abelian(1), 2);
    }

    #[test]
    fn two_abelian_matches_brute_force() {
        for n in 2..=300u64 {
            let brute = kabelian::complexity_bruteforce(n as usize, 2)
                .unwrap()
                .class_count;
            assert_eq!(two_abelian(n), brute, "n = {n}");
        }
    }

    #[test]
    fn two_abelian_cells_match_brute_force() {
        for n in 1..=200u64 {
            let brute = kabelian::cell_class_counts(n as usize, 2).unwrap();
            for x in 0..=1u8 {
                for y in 0..=1u8 {
                    let cell = (Word::letter_word(x), Word::letter_word(y));
                    let expected = brute.get(&cell).copied().unwrap_or(0);
                    assert_eq!(
                        two_abelian_cell(n, x, y),
                        expected,
                        "n = {n}, cell ({x}, {y})"
                    );
                }
            }
        }
    }

    #[test]
    fn cell_examples() {
        assert_eq!(two_abelian_cell(5, 1, 1), 1);
        assert_eq!(two_abelian_cell(4, 1, 1), 0);
        assert_eq!(two_abelian_cell(4, 0, 0), 2);
    }

    #[test]
    fn one_to_one_cells_empty_on_even_lengths() {
        // A factor starting and ending with 1 always has odd length.
        for n in 1..=200usize {
            let any = factors::factors(n)
                .unwrap()
                .words()
                .any(|w| w.letter(0) == 1 && w.letter(n - 1) == 1);
            if n % 2 == 0 {
                assert!(!any, "even n = {n}");
            }
        }
    }

    #[test]
    fn gap_examples() {
        assert_eq!(gap(1), 1);
        assert_eq!(gap(2), 3);
        assert_eq!(gap(4), 9);
    }

    #[test]
    fn gaps_match_prefix_runs() {
        // Oracle: read the zero runs between consecutive 1s off a prefix.
        let head = crate::sequence::prefix(3usize.pow(9));
        let ones: Vec<usize> = head
            .letters()
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(i, _)| i)
            .collect();
        assert!(ones.len() > 501);
        for j in 1..=500usize {
            let run = (ones[j] - ones[j - 1] - 1) as u64;
            assert_eq!(gap(j as u64), run, "j = {j}");
        }
    }

    #[test]
    fn span_examples() {
        assert_eq!(f_span(1, 1), 2);
        assert_eq!(f_span(2, 2), 6);
        assert_eq!(f_span(3, 2), 3 * f_span(2, 1));
    }

    #[test]
    fn span_matches_defining_sum() {
        for i in 1..=100u64 {
            for j in 1..=100u64 {
                let direct: u64 = j + (i..i + j).map(gap).sum::<u64>();
                assert_eq!(f_span(i, j), direct, "i = {i}, j = {j}");
            }
        }
    }

    #[test]
    fn span_parity_identities() {
        for i in 1..=100u64 {
            for j in 1..=100u64 {
                assert_eq!(f_span(2 * i, 2 * j), 3 * f_span(i, j));
                assert_eq!(f_span(2 * i, 2 * j + 1), 3 * f_span(i, j + 1) - 2);
                assert_eq!(f_span(2 * i + 1, 2 * j), 3 * f_span(i + 1, j));
                assert_eq!(f_span(2 * i + 1, 2 * j + 1), 3 * f_span(i + 1, j) + 2);
            }
        }
    }

    #[test]
    fn indexing_examples() {
        let idx = KIndexing::new(3).unwrap();
        assert_eq!((idx.i, idx.block, idx.threshold), (0, 3, 10));
        let idx = KIndexing::new(4).unwrap();
        assert_eq!((idx.i, idx.block, idx.threshold), (0, 3, 12));
        let idx = KIndexing::new(5).unwrap();
        assert_eq!((idx.i, idx.block, idx.threshold), (1, 9, 26));
        let idx = KIndexing::new(10).unwrap();
        assert_eq!((idx.i, idx.block, idx.threshold), (1, 9, 36));
        assert!(KIndexing::new(2).is_err());
    }

    #[test]
    fn zero_zero_cell_examples() {
        let idx = KIndexing::new(3).unwrap();
        assert_eq!(pk_zero_zero(10, &idx), Some(2));
        assert_eq!(pk_zero_zero(13, &idx), Some(3));
        assert_eq!(pk_zero_zero(9, &idx), None);
    }

    #[test]
    fn cells_match_brute_force_above_threshold() {
        for k in [3u64, 4, 5] {
            let idx = KIndexing::new(k).unwrap();
            for n in idx.threshold..=idx.threshold + 4 * idx.block {
                let fast = fast_cell_counts(n, k).unwrap().unwrap();
                let brute = kabelian::cell_class_counts(n as usize, k as usize).unwrap();
                for (cell, fv) in &fast {
                    let bv = brute.get(cell).copied().unwrap_or(0);
                    assert_eq!(*fv, bv, "k = {k}, n = {n}, cell {cell:?}");
                }
                let fast_total: u64 = fast.values().sum();
                let brute_total: u64 = brute.values().sum();
                assert_eq!(fast_total, brute_total, "k = {k}, n = {n}");
            }
        }
    }

    #[test]
    fn both_route_examples() {
        assert_eq!(
            k_abelian_complexity(1, 1, Method::Both).unwrap(),
            (2, MethodUsed::Both)
        );
        assert_eq!(
            k_abelian_complexity(3, 2, Method::Both).unwrap(),
            (5, MethodUsed::Both)
        );
        for n in 30..=120u64 {
            k_abelian_complexity(n, 3, Method::Both).unwrap();
        }
    }

    #[test]
    fn fast_falls_back_below_threshold() {
        let (v, used) = k_abelian_complexity(5, 3, Method::Fast).unwrap();
        assert_eq!(used, MethodUsed::Brute);
        assert_eq!(
            v,
            kabelian::complexity_bruteforce(5, 3).unwrap().class_count
        );
        let (_, used) = k_abelian_complexity(30, 3, Method::Fast).unwrap();
        assert_eq!(used, MethodUsed::Fast);
    }

    #[test]
    fn evaluator_agrees_with_routes() {
        for k in 1..=4u64 {
            let eval = KFastEvaluator::new(k).unwrap();
            assert_eq!(eval.eval(0), 1);
            for n in 1..=80u64 {
                let (v, _) = k_abelian_complexity(n, k, Method::Fast).unwrap();
                assert_eq!(eval.eval(n), v, "k = {k}, n = {n}");
            }
        }
    }

    #[test]
    fn table_rejects_conflicting_values() {
        let mut table = ComplexityTable::new(2);
        table.record(5, 7, MethodUsed::Fast).unwrap();
        table.record(5, 7, MethodUsed::Both).unwrap();
        assert!(table.record(5, 8, MethodUsed::Brute).is_err());
    }

    #[test]
    fn standalone_cell_ops_agree_with_bulk() {
        let idx = KIndexing::new(3).unwrap();
        let y: Word = "01".parse().unwrap();
        let x: Word = "10".parse().unwrap();
        for n in idx.threshold..idx.threshold + 12 {
            let cells = fast_cell_counts(n, 3).unwrap().unwrap();
            assert_eq!(
                pk_zero_y(n, &idx, &y).unwrap().unwrap(),
                cells[&(Word::zeros(2), y.clone())]
            );
            assert_eq!(
                pk_x_y(n, &idx, &x, &y).unwrap().unwrap(),
                cells[&(x.clone(), y.clone())]
            );
            assert_eq!(
                pk_zero_zero(n, &idx).unwrap(),
                cells[&(Word::zeros(2), Word::zeros(2))]
            );
        }
        assert!(pk_zero_y(100, &idx, &Word::zeros(2)).is_err());
        assert!(pk_x_y(100, &idx, &x, &Word::zeros(2)).is_err());
    }

    #[test]
    fn pair_cells_are_periodic_above_threshold() {
        let idx = KIndexing::new(3).unwrap();
        let x: Word = "10".parse().unwrap();
        let y: Word = "01".parse().unwrap();
        let period = 2 * idx.block;
        for n in (idx.threshold + period)..(idx.threshold + 3 * period) {
            assert_eq!(
                pk_x_y(n, &idx, &x, &y).unwrap(),
                pk_x_y(n + period, &idx, &x, &y).unwrap()
            );
        }
    }
}
