use core::fmt;

/// Errors raised by the exact arithmetic layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArithError {
    /// Attempted to invert an element that is not a unit.
    NonUnit,
    /// An operation lost all significant ϖ-adic digits at the working precision.
    PrecisionExhausted,
    /// Operands belong to different rings (prime or precision mismatch).
    RingMismatch,
    /// A product landed outside every named double coset; carries no witness
    /// data here, the caller keeps the offending matrix.
    Unclassified,
    /// A point failed the fiber membership constraint of its case.
    NotInFiber,
    /// A character was required to be nontrivial.
    TrivialCharacter,
    /// The requested invariant space is zero-dimensional.
    ZeroSpace,
    /// The operator matrix has no integer-similar form for this spec.
    NonIntegerSpec,
    /// The oracle does not support this character datum.
    UnsupportedCharacter,
    /// A representation spec does not match the requested comparison.
    SpecMismatch,
}

impl fmt::Display for ArithError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ArithError::NonUnit => "non-unit element cannot be inverted",
            ArithError::PrecisionExhausted => "precision exhausted",
            ArithError::RingMismatch => "ring mismatch between operands",
            ArithError::Unclassified => "product lies in no named double coset",
            ArithError::NotInFiber => "point is not in the affine Springer fiber",
            ArithError::TrivialCharacter => "character must be nontrivial",
            ArithError::ZeroSpace => "invariant space is zero",
            ArithError::NonIntegerSpec => "spec has no integer-similar matrix form",
            ArithError::UnsupportedCharacter => "unsupported character datum",
            ArithError::SpecMismatch => "representation spec mismatch",
        };
        f.write_str(s)
    }
}

impl core::error::Error for ArithError {}

pub type Result<T> = core::result::Result<T, ArithError>;
