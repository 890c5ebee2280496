//! Crate-wide error type.
//!
//! Errors split into two families that the CLI maps to exit codes:
//! I/O and parsing problems (exit 1) versus statistical/configuration
//! failures such as a nonpositive variance estimate (exit 2).

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("kernel arity mismatch: expected {expected} points, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unknown kernel `{0}`")]
    UnknownKernel(String),

    #[error("b1/b2 = {ratio} outside the admissible interval ({min_ratio}, 1)")]
    InvalidRatio { ratio: f64, min_ratio: f64 },

    #[error("degenerate window: ceil(b1*M) = {lo} > floor(b2*M) = {hi}")]
    DegenerateWindow { lo: u64, hi: u64 },

    #[error("budget {budget} exceeds universe of {universe} tuples")]
    BudgetExceedsUniverse { budget: u64, universe: u128 },

    #[error("universe of {tuples} tuples exceeds enumeration cap {cap}")]
    UniverseTooLarge { tuples: u128, cap: u128 },

    #[error("disjoint-tuple enumeration needs ~{work} operations, above cap {cap}")]
    EnumerationTooLarge { work: u128, cap: u128 },

    #[error("nonpositive variance: {what} = {value}")]
    NonpositiveVariance { what: &'static str, value: f64 },

    #[error("design violates the subset-count balance assumption: {detail}")]
    Assumption2Violation { detail: String },

    #[error("wrong design scheme: expected {expected}, got {got}")]
    WrongScheme { expected: String, got: String },

    #[error("discrete support of size {size}^{degree} exceeds cap {cap}")]
    SupportTooLarge { size: usize, degree: usize, cap: u128 },

    #[error("node {node} is covered by no design tuple")]
    UncoveredNode { node: usize },

    #[error("zero motif count: no motifs sampled under this design")]
    ZeroCount,

    #[error("regime mismatch: rate bound advises `{advice}`")]
    RegimeMismatch { advice: String },

    #[error("grid mismatch between CDF tables")]
    GridMismatch,

    #[error("true mean unavailable at tolerance {needed} (achieved {got})")]
    TruthUnavailable { needed: f64, got: f64 },

    #[error("edge probability {p} outside [0, 1]")]
    InvalidProbability { p: f64 },

    #[error("motif with {r} nodes exceeds cap {cap}")]
    MotifTooLarge { r: usize, cap: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit code contract: 1 for I/O and file-format problems, 2 for
    /// statistical or configuration failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Parse { .. } => 1,
            _ => 2,
        }
    }
}
