//! Exact combinatorics of the Cantor sequence `101000101000000000101000101...`,
//! the fixed point starting with 1 of the substitution `0 -> 000`, `1 -> 101`.
//!
//! The crate computes the k-abelian complexity of the sequence along two
//! independent routes and cross-checks them:
//!
//! * [`kabelian`] enumerates factors and their k-abelian equivalence classes
//!   directly (the ground truth), and sweeps the structural identities the
//!   fast route is built on;
//! * [`formulas`] evaluates the recurrences and closed forms for the same
//!   quantities: maximal window sums, abelian and 2-abelian complexity, and
//!   the per-(prefix, suffix) cell decomposition for k >= 3;
//! * [`regularity`] discovers base-3 linear representations of integer
//!   sequences by exact rational elimination over kernel sequences and
//!   verifies them on held-out ranges, which is how the complexity functions
//!   are certified 3-regular here.
//!
//! Supporting modules: [`word`] (binary words), [`sequence`] (the sequence
//! itself, the morphism, window sums) and [`factors`] (factor sets, special
//! factors, occurrence types).
//!
//! All arithmetic is exact: machine integers where bounds are clear,
//! arbitrary precision in the linear-algebra layer. No randomness anywhere;
//! every listing is sorted, so output is reproducible byte for byte.

pub mod factors;
pub mod formulas;
pub mod kabelian;
pub mod regularity;
pub mod sequence;
pub mod word;

pub use word::Word;

/// Errors shared across the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A word contained a character other than '0' or '1'.
    #[error("invalid letter {0:?}: words are over {{0, 1}}")]
    InvalidLetter(char),

    /// An enumeration was requested past the configured cap.
    #[error("requested length {requested} exceeds the enumeration cap {cap}")]
    CapExceeded { requested: u64, cap: u64 },

    /// The word does not occur in the sequence.
    #[error("{0} is not a factor of the sequence")]
    NotAFactor(Word),

    /// An operation defined only for words containing a 1 was given `0^n`.
    #[error("operation undefined for an all-zero word")]
    AllZeroWord,

    /// `k` is outside the range an operation supports.
    #[error("unsupported k = {k}: {reason}")]
    UnsupportedK { k: u64, reason: &'static str },

    /// The two computation routes disagreed; both values are carried so the
    /// mismatch can be reported verbatim.
    #[error(
        "method disagreement at n = {n}, k = {k}: brute force {brute} vs formulas {fast}{}",
        cell_suffix(cell)
    )]
    MethodMismatch {
        n: u64,
        k: u64,
        brute: u64,
        fast: u64,
        cell: Option<(Word, Word)>,
    },
}

fn cell_suffix(cell: &Option<(Word, Word)>) -> String {
    match cell {
        Some((x, y)) => format!(" in cell ({x}, {y})"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
