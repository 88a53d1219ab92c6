use crate::arith::Fraction;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// No covering interval was found for the current walk point. On a true
    /// counterexample to the target inequality the greedy walk would get
    /// stuck exactly like this, so the stall is reported rather than looped.
    #[error("walk stalled at {point}: no covering interval within the search bounds (after {emitted} intervals)")]
    Stalled { point: Fraction, emitted: u64 },

    /// A stall inside one segment of a parallel build.
    #[error("segment {segment} stalled at {point}: no covering interval within the search bounds (after {emitted} intervals)")]
    SegmentStalled {
        segment: usize,
        point: Fraction,
        emitted: u64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// Syntactically bad certificate or checkpoint content.
    #[error("malformed input at line {line}: {msg}")]
    Malformed { line: u64, msg: String },

    /// The certificate header does not match the parameters it was checked against.
    #[error("header mismatch: {0}")]
    HeaderMismatch(String),

    /// A checkpoint that cannot be resumed from (wrong version, p, E, ...).
    #[error("checkpoint mismatch: {0}")]
    CheckpointMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
