//! Error type shared by all modules of the crate.

use std::fmt;

/// Everything that can go wrong when constructing or combining the
/// algebraic objects of this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `d` is smaller than 2; the truncation ideal needs nilpotency degree at least 2.
    TruncationTooSmall { d: u64 },
    /// `p` is not a prime number.
    NotPrime { p: u64 },
    /// The Hopf size constraint `d <= n` fails.
    HopfSizeExceeded { d: u64, n: u64 },
    /// `d` is not a power of `p`: the binomial coefficient `C(d, i)` is
    /// nonzero mod `p`, so `J^d` is not a Hopf ideal.
    HopfBinomialObstruction { d: u64, i: u64, residue: u64 },
    /// Uniserial length outside `[1, d]`.
    LengthOutOfRange { length: usize, d: usize },
    /// Two operands were built over different algebra parameters.
    ParamMismatch,
    /// Matrix shapes do not allow the requested operation.
    ShapeMismatch,
    /// A representation violates `J^d = 0`.
    NilpotencyViolated,
    /// Pascal seed violates `l <= min(i, i')` or has the wrong number of coefficients.
    SeedInvariant(String),
    /// Pascal seed is zero mod p; it generates no module.
    ZeroSeed,
    /// Unknown basis element tag passed to the comultiplication.
    UnknownTag(String),
    /// `g(k, a1, a2)` requires `k >= 1`.
    RecurrenceIndexZero,
    /// A string complex needs `j <= i`.
    BadStringRange { i: i64, j: i64 },
    /// A complex operation found a differential with `d^2 != 0` or one that
    /// is not a module morphism.
    NotAComplex(String),
    /// `decompose_complex` requires every term to be projective.
    NonProjectiveTerm { degree: i64 },
    /// The derived machinery is only available for d = 2.
    DerivedNeedsD2 { d: u64 },
    /// An internal consistency check failed (reported, never silently ignored).
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::TruncationTooSmall { d } => {
                write!(f, "nilpotency degree d = {d} is below 2")
            }
            Error::NotPrime { p } => write!(f, "p = {p} is not prime"),
            Error::HopfSizeExceeded { d, n } => write!(f, "d > n: d = {d} exceeds n = {n}"),
            Error::HopfBinomialObstruction { d, i, residue } => write!(
                f,
                "C({d},{i}) = {residue} mod p is nonzero, so d is not a power of p"
            ),
            Error::LengthOutOfRange { length, d } => {
                write!(f, "uniserial length {length} outside [1, {d}]")
            }
            Error::ParamMismatch => write!(f, "operands have different algebra parameters"),
            Error::ShapeMismatch => write!(f, "matrix shape mismatch"),
            Error::NilpotencyViolated => write!(f, "representation violates J^d = 0"),
            Error::SeedInvariant(msg) => write!(f, "invalid Pascal seed: {msg}"),
            Error::ZeroSeed => write!(f, "zero seed"),
            Error::UnknownTag(tag) => write!(f, "unknown basis element tag {tag}"),
            Error::RecurrenceIndexZero => write!(f, "recurrence index k must be positive"),
            Error::BadStringRange { i, j } => {
                write!(f, "string complex needs j <= i, got j = {j}, i = {i}")
            }
            Error::NotAComplex(msg) => write!(f, "not a complex: {msg}"),
            Error::NonProjectiveTerm { degree } => {
                write!(f, "term in degree {degree} is not projective")
            }
            Error::DerivedNeedsD2 { d } => {
                write!(f, "derived-category machinery needs d = 2, got d = {d}")
            }
            Error::Internal(msg) => write!(f, "internal check failed: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
