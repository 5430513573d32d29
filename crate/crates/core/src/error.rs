//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 1, got {0}")]
    InvalidModulus(i64),

    #[error("residue {residue} out of range for modulus {modulus}")]
    InvalidResidue { residue: i64, modulus: i64 },

    #[error("interval requires a <= b, got [{a}, {b}]")]
    EmptyInterval { a: i64, b: i64 },

    #[error("window entry {0} outside [-{1}, {1})")]
    WindowEntryOutOfRange(i64, i64),

    #[error("cardinality requested for an infinite set")]
    InfiniteCardinality,

    #[error("denominator polynomial vanishes at n = {0}")]
    VanishingDenominator(i64),

    #[error("rate must be in (0, 1], got {0}")]
    RateOutOfRange(String),

    #[error("tail term is unbounded (rate 1 with deg p > deg q)")]
    UnboundedTail,

    #[error("operation requires a real-valued sequence")]
    NonRealSequence,

    #[error("threshold must be positive, got {0}")]
    NonPositiveThreshold(String),

    #[error("sequence value {value} at n = {n} violates the required range [{lo}, {hi}]")]
    RangeViolation {
        n: i64,
        value: String,
        lo: String,
        hi: String,
    },

    #[error("dyadic depth must be at least 1")]
    InvalidDepth,

    #[error("level form requires a step function; strip or classify the tail part first")]
    TailsInLevelForm,

    #[error("not a filter base: total intersection is empty")]
    EmptyFilterBase,

    #[error("filter base must be nonempty")]
    NoBaseSets,

    #[error("point modulus {have} too coarse; refine to a multiple of {required}")]
    RefinePoint { have: i64, required: i64 },

    #[error("cannot extend direction: {0}")]
    IncompatibleExtension(String),

    #[error("inconsistent trace: selected sides have empty intersection")]
    InconsistentTrace,

    #[error("trace admits no completion of the requested kind")]
    NoAdmissibleCompletion,

    #[error("certificate spec: {0}")]
    CertificateSpec(String),

    #[error("window half-width must be at least 1, got {0}")]
    InvalidHalfWidth(i64),

    #[error("exp_i builtin requires a real Schwartz sequence: {0}")]
    NotRealSchwartz(String),

    #[error("sample count must be at least 1")]
    NoSamples,
}

pub type Result<T> = std::result::Result<T, Error>;
