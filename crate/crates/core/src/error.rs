use thiserror::Error;

/// Errors raised by the exact pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("operands belong to different quadratic fields")]
    FieldMismatch,
    #[error("unsupported quadratic field: discriminant {0} is a perfect square")]
    RationalField(i64),

    #[error("unknown letter '{0}' in rule")]
    UnknownLetter(char),
    #[error("empty word for letter '{0}'")]
    EmptyWord(char),
    #[error("letter '{0}' has more than one rule")]
    DuplicateLetter(char),
    #[error("unsupported alphabet size {0} (only binary alphabets are supported)")]
    UnsupportedAlphabetSize(usize),
    #[error("substitution matrix is not primitive")]
    NotPrimitive,
    #[error("substitution is not unimodular (det = {0})")]
    NotUnimodular(i64),
    #[error("characteristic polynomial x^2 - {trace}x + {det} is reducible over the rationals")]
    ReducibleCharPoly { trace: i64, det: i64 },
    #[error("Perron-Frobenius root is not a Pisot-Vijayaraghavan number")]
    NotPisot,
    #[error("illegal seed '{seed}'; legal two-letter seeds: {legal:?}")]
    IllegalSeed { seed: String, legal: Vec<String> },

    #[error("memory guard: {projected} points projected, cap is {cap}")]
    MemoryGuard { projected: u128, cap: usize },
    #[error("cutoff {cutoff} is below the closure bound {required}")]
    CutoffTooSmall { cutoff: String, required: String },
    #[error("distance closure failed: {0}")]
    ClosureFailure(String),
    #[error("self-consistent system degenerate: rank {rank} for {unknowns} unknowns (kernel dimension {kernel})")]
    Degenerate {
        rank: usize,
        unknowns: usize,
        kernel: usize,
    },
    #[error("self-consistent solution inconsistent with tile frequencies: {0}")]
    FrequencyMismatch(String),

    #[error("distance {0} not found in patch")]
    DistanceNotFound(String),
    #[error("shift {0} is not in the return module")]
    NotInReturnModule(String),
    #[error("overlap discovery did not stabilise within {0} types")]
    OverlapCap(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
