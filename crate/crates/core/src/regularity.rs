//! Empirical certification that an integer sequence is base-b regular:
//! discover a linear representation from kernel sequences by exact rational
//! elimination, then verify it on a held-out range.
//!
//! A sequence `s` is regular in base `b` when the module generated by its
//! kernel — all subsequences `n -> s(b^e n + c)` with `0 <= c < b^e` — is
//! finitely generated. The guesser explores the kernel breadth-first,
//! keeping a basis of kernel sequences truncated to a training window. Each
//! explored sequence is either expressed over the basis (a recorded
//! dependency) or joins it. When every child of every basis element is
//! expressible, the dependencies assemble into matrices `A_0..A_{b-1}` and
//! boundary vectors so that
//!
//! ```text
//! s(n) = lambda . A_{d_m} ... A_{d_1} . gamma,   n = sum d_j b^(j-1),
//! ```
//!
//! with the least significant digit applied to `gamma` first.
//!
//! Dependencies are found over the rationals. A rational certificate is
//! weaker than finite generation over the integers, but it is exactly what
//! the verification step can check, and for the sequences in this crate the
//! discovered coefficients come out integral anyway. Exact integer lattice
//! reduction would be the extension point if that ever stops being true.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// One kernel subsequence: `n -> s(base^e * n + c)` with `0 <= c < base^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KernelSpec {
    pub base: u64,
    pub e: u32,
    pub c: u64,
}

impl KernelSpec {
    pub fn root(base: u64) -> Self {
        KernelSpec { base, e: 0, c: 0 }
    }

    /// The subsequence obtained by fixing the next base-b digit to `d`.
    pub fn child(&self, d: u64) -> Self {
        debug_assert!(d < self.base);
        KernelSpec {
            base: self.base,
            e: self.e + 1,
            c: self.c + d * self.base.pow(self.e),
        }
    }

    /// Index into the parent sequence for position `n` of this subsequence.
    pub fn index(&self, n: u64) -> u64 {
        self.base.pow(self.e) * n + self.c
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(e = {}, c = {})", self.e, self.c)
    }
}

/// First `length` values of the kernel subsequence.
pub fn kernel_sequence(
    oracle: &dyn Fn(u64) -> BigInt,
    spec: &KernelSpec,
    length: usize,
) -> Vec<BigInt> {
    (0..length as u64).map(|n| oracle(spec.index(n))).collect()
}

/// Digit order used when evaluating a representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DigitOrder {
    /// The matrix of the least significant digit multiplies `gamma` first.
    LsdFirst,
}

/// A linear representation `(lambda, A_0..A_{base-1}, gamma)` of a sequence.
///
/// `offset` shifts the represented index: the representation at `n` stands
/// for the oracle value at `n + offset`. Everything produced by
/// [`guess_representation`] uses offset 0; the field exists so shifted
/// oracles can be serialized faithfully.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRepresentation {
    pub base: u64,
    pub rank: usize,
    pub lambda: Vec<BigRational>,
    /// One rank x rank matrix per digit, row major.
    pub matrices: Vec<Vec<Vec<BigRational>>>,
    pub gamma: Vec<BigRational>,
    pub digit_order: DigitOrder,
    pub offset: u64,
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mat_vec(m: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    m.iter().map(|row| dot(row, v)).collect()
}

fn vec_mat(v: &[BigRational], m: &[Vec<BigRational>]) -> Vec<BigRational> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let mut out = vec![BigRational::zero(); cols];
    for (coef, row) in v.iter().zip(m) {
        if coef.is_zero() {
            continue;
        }
        for (o, entry) in out.iter_mut().zip(row) {
            *o += coef * entry;
        }
    }
    out
}

impl LinearRepresentation {
    /// Evaluates the representation at `n` by the digit product.
    pub fn evaluate(&self, n: u64) -> BigRational {
        let mut acc = self.gamma.clone();
        let mut m = n;
        while m > 0 {
            let d = (m % self.base) as usize;
            acc = mat_vec(&self.matrices[d], &acc);
            m /= self.base;
        }
        dot(&self.lambda, &acc)
    }

    /// As [`evaluate`](Self::evaluate), demanding an integer value.
    pub fn evaluate_int(&self, n: u64) -> Option<BigInt> {
        let v = self.evaluate(n);
        v.is_integer().then(|| v.to_integer())
    }

    pub fn is_integral(&self) -> bool {
        let entry_ok = |r: &BigRational| r.is_integer();
        self.lambda.iter().all(entry_ok)
            && self.gamma.iter().all(entry_ok)
            && self
                .matrices
                .iter()
                .flatten()
                .flatten()
                .all(entry_ok)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RepDto::from(self)).expect("representation serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, String> {
        let dto: RepDto = serde_json::from_str(s).map_err(|e| e.to_string())?;
        dto.try_into()
    }
}

fn rational_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rational_from_string(s: &str) -> Result<BigRational, String> {
    let parse_int = |t: &str| {
        t.parse::<BigInt>()
            .map_err(|e| format!("bad integer {t:?}: {e}"))
    };
    match s.split_once('/') {
        Some((num, den)) => {
            let d = parse_int(den)?;
            if d.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(BigRational::new(parse_int(num)?, d))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

/// Wire format: entries as exact decimal strings ("7" or "-2/3"), matrices
/// keyed by their digit.
#[derive(Serialize, Deserialize)]
struct RepDto {
    base: u64,
    rank: usize,
    lambda: Vec<String>,
    matrices: std::collections::BTreeMap<String, Vec<Vec<String>>>,
    gamma: Vec<String>,
    digit_order: DigitOrder,
    offset: u64,
}

impl From<&LinearRepresentation> for RepDto {
    fn from(rep: &LinearRepresentation) -> Self {
        RepDto {
            base: rep.base,
            rank: rep.rank,
            lambda: rep.lambda.iter().map(rational_to_string).collect(),
            matrices: rep
                .matrices
                .iter()
                .enumerate()
                .map(|(d, m)| {
                    (
                        d.to_string(),
                        m.iter()
                            .map(|row| row.iter().map(rational_to_string).collect())
                            .collect(),
                    )
                })
                .collect(),
            gamma: rep.gamma.iter().map(rational_to_string).collect(),
            digit_order: rep.digit_order,
            offset: rep.offset,
        }
    }
}

impl TryFrom<RepDto> for LinearRepresentation {
    type Error = String;

    fn try_from(dto: RepDto) -> Result<Self, String> {
        let parse_vec = |v: &[String]| -> Result<Vec<BigRational>, String> {
            v.iter().map(|s| rational_from_string(s)).collect()
        };
        let mut matrices = Vec::new();
        for d in 0..dto.base {
            let m = dto
                .matrices
                .get(&d.to_string())
                .ok_or_else(|| format!("missing matrix for digit {d}"))?;
            let rows: Result<Vec<Vec<BigRational>>, String> =
                m.iter().map(|row| parse_vec(row)).collect();
            let rows = rows?;
            if rows.len() != dto.rank || rows.iter().any(|r| r.len() != dto.rank) {
                return Err(format!("matrix for digit {d} is not rank x rank"));
            }
            matrices.push(rows);
        }
        if dto.lambda.len() != dto.rank || dto.gamma.len() != dto.rank {
            return Err("boundary vectors must have length rank".into());
        }
        Ok(LinearRepresentation {
            base: dto.base,
            rank: dto.rank,
            lambda: parse_vec(&dto.lambda)?,
            matrices,
            gamma: parse_vec(&dto.gamma)?,
            digit_order: dto.digit_order,
            offset: dto.offset,
        })
    }
}

/// A returned representation plus the kernel specs of its basis, which is
/// what the recorded dependencies quantify over.
#[derive(Debug, Clone)]
pub struct GuessedRepresentation {
    pub rep: LinearRepresentation,
    pub basis: Vec<KernelSpec>,
    pub train_length: usize,
}

impl GuessedRepresentation {
    /// Re-checks every recorded dependency at one fresh index `m`:
    /// for each basis element and digit, the child kernel value must equal
    /// the recorded combination of basis values.
    ///
    /// The matrix entry `A_d[t][j]` is the coefficient of basis element `t`
    /// in the expansion of the d-child of basis element `j`.
    pub fn dependencies_hold_at(&self, oracle: &dyn Fn(u64) -> BigInt, m: u64) -> bool {
        let rep = &self.rep;
        for (j, spec) in self.basis.iter().enumerate() {
            for d in 0..rep.base {
                let child = spec.child(d);
                let lhs = BigRational::from_integer(oracle(child.index(m)));
                let rhs: BigRational = (0..rep.rank)
                    .map(|t| {
                        &rep.matrices[d as usize][t][j]
                            * BigRational::from_integer(oracle(self.basis[t].index(m)))
                    })
                    .sum();
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// The guess gave up: the kernel basis exceeded the rank bound on the
/// training window. Either the sequence is not regular at this bound or the
/// window is too short.
#[derive(Debug, Clone)]
pub struct GuessFailure {
    pub max_rank: usize,
    pub explored: usize,
}

impl fmt::Display for GuessFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "kernel basis exceeded rank {} after exploring {} subsequences",
            self.max_rank, self.explored
        )
    }
}

/// Row-echelon bookkeeping: the stored vector, its pivot column, and its
/// expression over the original basis vectors.
struct Echelon {
    pivot: usize,
    vec: Vec<BigRational>,
    expr: Vec<BigRational>,
}

/// Reduces `v` against the echelon rows. Returns the coefficients over the
/// original basis and whether the residual vanished.
fn reduce(
    v: &[BigRational],
    echelons: &[Echelon],
    basis_len: usize,
) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut residual = v.to_vec();
    let mut combo = vec![BigRational::zero(); basis_len];
    for ech in echelons {
        if residual[ech.pivot].is_zero() {
            continue;
        }
        let coef = &residual[ech.pivot] / &ech.vec[ech.pivot];
        for (r, e) in residual.iter_mut().zip(&ech.vec) {
            *r -= &coef * e;
        }
        for (c, e) in combo.iter_mut().zip(&ech.expr) {
            *c += &coef * e;
        }
    }
    (combo, residual)
}

/// Breadth-first kernel closure under the rank bound.
///
/// Training vectors have `train_length` entries; the spec requires at least
/// `8 * max_rank` so that a dependency on the window is unlikely to be an
/// artifact. Verification on a longer held-out range stays the caller's job
/// (see [`verify_representation`]).
pub fn guess_representation(
    oracle: &dyn Fn(u64) -> BigInt,
    base: u64,
    max_rank: usize,
    train_length: usize,
) -> Result<GuessedRepresentation, GuessFailure> {
    assert!(base >= 2 && max_rank >= 1);
    assert!(
        train_length >= 8 * max_rank,
        "training window must be at least 8 * max_rank"
    );

    let mut originals: Vec<Vec<BigRational>> = Vec::new();
    let mut basis_specs: Vec<KernelSpec> = Vec::new();
    let mut echelons: Vec<Echelon> = Vec::new();
    let mut deps: HashMap<KernelSpec, Vec<BigRational>> = HashMap::new();
    let mut queue: VecDeque<KernelSpec> = VecDeque::new();
    let mut explored = 0usize;

    queue.push_back(KernelSpec::root(base));
    while let Some(spec) = queue.pop_front() {
        explored += 1;
        let values: Vec<BigRational> = kernel_sequence(oracle, &spec, train_length)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let (combo, residual) = reduce(&values, &echelons, originals.len());
        if residual.iter().all(Zero::is_zero) {
            deps.insert(spec, combo);
            continue;
        }
        if originals.len() == max_rank {
            return Err(GuessFailure { max_rank, explored });
        }
        let pivot = residual
            .iter()
            .position(|r| !r.is_zero())
            .expect("residual is nonzero");
        let new_index = originals.len();
        // residual = values - sum(combo[t] * originals[t])
        let mut expr = vec![BigRational::zero(); new_index + 1];
        for (slot, c) in expr.iter_mut().zip(&combo) {
            *slot = -c.clone();
        }
        expr[new_index] = BigRational::one();
        echelons.push(Echelon {
            pivot,
            vec: residual,
            expr,
        });
        let mut unit = vec![BigRational::zero(); new_index + 1];
        unit[new_index] = BigRational::one();
        deps.insert(spec, unit);
        originals.push(values);
        basis_specs.push(spec);
        for d in 0..base {
            queue.push_back(spec.child(d));
        }
    }

    let rank = originals.len();
    let pad = |mut v: Vec<BigRational>| {
        v.resize(rank, BigRational::zero());
        v
    };

    // Child dependencies, as rows over the basis.
    let mut child_rows: Vec<Vec<Vec<BigRational>>> = Vec::with_capacity(base as usize);
    for d in 0..base {
        let mut rows = Vec::with_capacity(rank);
        for spec in &basis_specs {
            let row = deps
                .get(&spec.child(d))
                .cloned()
                .expect("closure processed every child");
            rows.push(pad(row));
        }
        child_rows.push(rows);
    }

    // Transpose so the least significant digit acts on gamma first.
    let matrices: Vec<Vec<Vec<BigRational>>> = child_rows
        .iter()
        .map(|rows| {
            (0..rank)
                .map(|t| (0..rank).map(|j| rows[j][t].clone()).collect())
                .collect()
        })
        .collect();
    let lambda: Vec<BigRational> = originals.iter().map(|v| v[0].clone()).collect();
    let gamma = pad(deps
        .get(&KernelSpec::root(base))
        .cloned()
        .expect("root was processed"));

    Ok(GuessedRepresentation {
        rep: LinearRepresentation {
            base,
            rank,
            lambda,
            matrices,
            gamma,
            digit_order: DigitOrder::LsdFirst,
            offset: 0,
        },
        basis: basis_specs,
        train_length,
    })
}

/// A disagreement between a representation and its oracle.
#[derive(Debug, Clone)]
pub struct Mismatch {
    pub n: u64,
    pub expected: BigInt,
    pub got: BigRational,
}

/// Result of evaluating a representation against its oracle on a range.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checked: u64,
    pub first_mismatch: Option<Mismatch>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Compares the representation against the oracle on `start..=end`.
///
/// Shares digit products across the range: the row vector for `n` extends
/// the row vector for `n / base`, so the sweep costs one matrix-vector
/// product per index instead of one per digit.
pub fn verify_representation(
    rep: &LinearRepresentation,
    oracle: &dyn Fn(u64) -> BigInt,
    start: u64,
    end: u64,
) -> VerifyReport {
    assert!(start <= end);
    let cutoff = end / rep.base;
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(cutoff as usize + 1);
    rows.push(rep.lambda.clone());
    for n in 1..=cutoff {
        let parent = &rows[(n / rep.base) as usize];
        rows.push(vec_mat(parent, &rep.matrices[(n % rep.base) as usize]));
    }
    let value_at = |n: u64| -> BigRational {
        if n <= cutoff {
            dot(&rows[n as usize], &rep.gamma)
        } else {
            let row = vec_mat(
                &rows[(n / rep.base) as usize],
                &rep.matrices[(n % rep.base) as usize],
            );
            dot(&row, &rep.gamma)
        }
    };
    let mut checked = 0u64;
    for n in start..=end {
        checked += 1;
        let got = value_at(n);
        let expected = oracle(n + rep.offset);
        if got != BigRational::from_integer(expected.clone()) {
            return VerifyReport {
                checked,
                first_mismatch: Some(Mismatch { n, expected, got }),
            };
        }
    }
    VerifyReport {
        checked,
        first_mismatch: None,
    }
}
