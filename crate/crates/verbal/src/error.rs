use thiserror::Error;

/// Error type shared by parsing, substitution, and the bounded searches.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("generator '{letter}' is out of range for rank {rank}")]
    GeneratorOutOfRank { letter: char, rank: u8 },

    #[error("rank must be between 1 and 26, got {rank}")]
    RankOutOfRange { rank: usize },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: u8, right: u8 },

    #[error("word map of arity {arity} applied to {given} arguments")]
    ArityMismatch { arity: usize, given: usize },

    #[error("counting pattern must be non-empty")]
    EmptyPattern,

    #[error("cyclic counting needs a cyclically reduced pattern, got \"{pattern}\"")]
    PatternNotCyclicallyReduced { pattern: String },

    #[error("word map body reduces to the trivial map")]
    TrivialWordMap,

    /// Raised by operations that only make sense for a large enough
    /// exponent degree, e.g. witness words need degree at least 2.
    #[error("exponent degree is {degree}, but this operation needs degree >= {needed}")]
    DegreeTooSmall { degree: u64, needed: u64 },

    /// Positive degree makes every high power a single verbal value, so the
    /// stable-length certificate would be vacuous.
    #[error(
        "exponent degree is {degree} >= 1: g^(n*degree) is a single verbal value for every g, \
         lengths of powers stay bounded, and no positive stable bound exists"
    )]
    DegreeNotZero { degree: u64 },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("enumeration guard exceeded: {needed} states needed, guard allows {guard}")]
    GuardExceeded { needed: u128, guard: u64 },

    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("internal verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
