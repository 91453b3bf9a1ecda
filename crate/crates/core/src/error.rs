use thiserror::Error;

/// Every failure mode of the library.
///
/// Variants are grouped by the module that raises them; exact-arithmetic
/// budget errors are shared by everything that composes maps.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // rational / map construction
    #[error("interval endpoints out of order: {lo} > {hi}")]
    IntervalOrder { lo: String, hi: String },
    #[error("node abscissae are not strictly increasing at index {index}")]
    NodeOrder { index: usize },
    #[error("node {index} has value {value} outside the domain")]
    NotSelfMap { index: usize, value: String },
    #[error("nodes do not span the domain exactly")]
    SpanMismatch,
    #[error("point {0} lies outside the domain")]
    OutOfDomain(String),
    #[error("inner map's image is not contained in the outer map's domain")]
    DomainMismatch,
    #[error("piece budget exceeded: {pieces} pieces > {budget}")]
    PieceBudgetExceeded { pieces: usize, budget: usize },
    #[error("denominator budget exceeded: {bits} bits > {budget}")]
    DenominatorBudgetExceeded { bits: u64, budget: u64 },
    #[error("degenerate interval where a non-degenerate one is required")]
    Degenerate,
    #[error("covering fails between chain links {index} and {next}", next = index + 1)]
    NotAChain { index: usize },
    #[error("first chain link is not contained in the last one")]
    NestingFails,

    // periodic / markov
    #[error("point set is not invariant: image of {0} is not in the set")]
    NotInvariant(String),
    #[error("at least two points are required")]
    TooFewPoints,
    #[error("enumeration bound {bound} exceeds the limit {limit}")]
    BoundTooLarge { bound: usize, limit: usize },
    #[error("orbit period {0} is not an odd integer >= 3")]
    NotOddPeriod(usize),
    #[error("path count overflowed 64-bit entries")]
    CountOverflow,
    #[error("orbit is inconsistent: {0}")]
    BadOrbit(String),

    // entropy
    #[error("map is not monotone on P-interval {0}")]
    NotPMonotone(usize),
    #[error("spectral radius iteration did not converge: {0}")]
    NonConvergence(String),

    // chaos statistics
    #[error("trajectory precision exhausted at step {step}")]
    PrecisionExhausted { step: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    // families
    #[error("ill-formed construction: {0}")]
    IllFormed(String),
    #[error("parameter {0} must be an odd integer >= 3")]
    NotOdd(i64),
    #[error("family {0} requires a truncation depth >= 2")]
    DepthRequired(String),

    // io
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
