use crate::numeric::Rational;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An evaluation point coincides with (or sits numerically on top of) a
    /// pole of the function being evaluated.
    #[error("pole at s = {0}")]
    Pole(Rational),

    /// A series truncation cannot reach the requested accuracy within the
    /// permitted number of terms.
    #[error("convergence too slow: tail bound {bound} exceeds tolerance {tolerance} after {terms} terms")]
    ConvergenceTooSlow {
        bound: String,
        tolerance: String,
        terms: u64,
    },

    /// The shifted-sequence assembly only converges when the shift is
    /// smaller than the smallest shifted eigenvalue.
    #[error("shift {shift} is not smaller than the smallest shifted eigenvalue {smallest}; the series diverges")]
    ShiftTooLarge { shift: Rational, smallest: Rational },

    /// A dimension outside the range supported by the requested operation.
    #[error("dimension {dim} out of range: {reason}")]
    OutOfRange { dim: u32, reason: &'static str },

    /// Any other structurally invalid argument.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
