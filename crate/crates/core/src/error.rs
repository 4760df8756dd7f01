use thiserror::Error;

use crate::setcore::Subset;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A numeric parameter is outside its allowed range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// `(alpha, beta)` derived or supplied for the decreasing family violate
    /// `beta + 1 <= alpha <= n`.
    #[error("infeasible decreasing parameters: alpha={alpha}, beta={beta}, n={n} (need beta+1 <= alpha <= n)")]
    InfeasibleParams { alpha: u64, beta: u64, n: usize },

    /// An instance is missing something an operation needs (usually the plant).
    #[error("configuration error: {0}")]
    Config(String),

    /// The denominator evaluated to zero.
    #[error("ratio undefined at {0}: denominator is zero")]
    UndefinedRatio(Subset),

    #[error("refusing to enumerate 2^{n} subsets: n={n} exceeds the enumeration guard {guard} (set RATIOLAB_GUARD_N to override)")]
    GuardExceeded { n: usize, guard: usize },

    /// Every subset of the plant cardinality already appears in the transcript.
    #[error("no consistent plant: all {candidates} subsets of size {k} were queried")]
    NoConsistentPlant { k: usize, candidates: u128 },

    #[error("parse error: {0}")]
    Parse(String),
}
