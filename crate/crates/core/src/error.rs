//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet must be non-empty")]
    EmptyAlphabet,

    #[error("duplicate label `{0}` in alphabet")]
    DuplicateLabel(String),

    #[error("unknown {role} symbol `{symbol}`")]
    UnknownSymbol { role: &'static str, symbol: String },

    #[error("missing table entry for (x={x}, y={y}, a={a}, b={b})")]
    MissingEntry { x: String, y: String, a: String, b: String },

    #[error("duplicate table entry for (x={x}, y={y}, a={a}, b={b})")]
    DuplicateEntry { x: String, y: String, a: String, b: String },

    #[error("box is not normalized")]
    NotNormalized,

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(&'static str),

    #[error("mixture weight {0} is negative")]
    NegativeWeight(String),

    #[error("mixture weights sum to {0}, expected exactly 1")]
    WeightSum(String),

    #[error("input distribution sums to {0}, expected exactly 1")]
    InputDistSum(String),

    #[error("input distribution entry {0} is negative")]
    NegativeInputProb(String),

    #[error("truth table has {got} entries, expected 2^(l+m) = {want}")]
    TruthTableLength { got: usize, want: usize },

    #[error("bit string has length {got}, expected {want}")]
    BitLength { got: usize, want: usize },

    #[error("correctness probability must satisfy 1/2 < p < 1 strictly for every input pair, got {0}")]
    CorrectnessOutOfRange(String),

    #[error("repetition count must be odd and at least 1, got {0}")]
    BadRepetitionCount(usize),

    #[error("target failure probability must lie strictly inside (0, 1/2), got {0}")]
    EpsilonOutOfRange(String),

    #[error("{count} deterministic strategies exceed the enumeration guard of 2^24")]
    StrategySpaceTooLarge { count: u128 },

    #[error("state vector norm deviates from 1 by {0:.3e}")]
    BadStateNorm(f64),

    #[error("invalid measurement for {party} input {input}: {reason} (deviation {deviation:.3e})")]
    InvalidMeasurement {
        party: &'static str,
        input: usize,
        reason: &'static str,
        deviation: f64,
    },

    #[error("probability {value:.6e} at (x={x}, y={y}, a={a}, b={b}) is negative beyond tolerance")]
    NegativeProbability {
        value: f64,
        x: usize,
        y: usize,
        a: usize,
        b: usize,
    },

    #[error("party {0} has produced no output; reconciliation requires both outputs")]
    MissingOutput(&'static str),

    #[error("protocol execution error: {0}")]
    ProtocolState(String),

    #[error("register index {0} out of range (machine has 4 registers)")]
    BadRegister(usize),

    #[error("jump target {target} out of range [0, {len}]")]
    BadJumpTarget { target: usize, len: usize },

    #[error("program_bits + input_bits = {0} exceeds the table-size guard of 16")]
    WidthGuard(usize),

    #[error("step bound must be at least 1")]
    ZeroStepBound,

    #[error("parse error: {0}")]
    Parse(String),
}
