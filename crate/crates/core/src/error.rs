use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `p`, `q` violate `0 < p < q`, `gcd(p, q) = 1`.
    InvalidCurve { p: i64, q: i64 },
    /// Matrix or vector shapes that cannot be combined.
    ShapeMismatch(String),
    /// A weight outside the domain of an operation.
    WeightOutOfRange { weight: i64, reason: &'static str },
    /// A matrix that was required to be nilpotent is not.
    NotNilpotent,
    /// An element has entries outside the required support pattern.
    SupportViolation { row: usize, col: usize },
    /// Graded bracket whose result would live above degree 2.
    DegreeOverflow { degree: u8 },
    /// An element is not homogeneous where homogeneity is required.
    NotHomogeneous(&'static str),
    /// An element falls outside the finite basis it must be expressed in.
    NotInSpan(String),
    /// A weight exceeded the configured truncation bound.
    TruncationOverflow { weight: i64, max: i64 },
    /// Perturbation whose composite with the homotopy is not nilpotent.
    PerturbationNotNilpotent { bound: usize },
    /// Gauge normalization into `H^1(U_0)` could not be completed.
    NormalizationObstructed(String),
    /// Operation requires a Maurer–Cartan point.
    NotMaurerCartan,
    /// Family definition refers to unknown coordinates or divides by zero.
    MalformedFamily(String),
    /// Exponents outside the Jacobi quotient range.
    OutOfJacobiRange { a: u32, b: u32 },
    /// Inputs that do not fit together.
    Invalid(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidCurve { p, q } => {
                write!(f, "invalid curve x^{p} - y^{q}: need 0 < p < q and p,q must be coprime")
            }
            Error::ShapeMismatch(s) => write!(f, "shape mismatch: {s}"),
            Error::WeightOutOfRange { weight, reason } => {
                write!(f, "weight {weight} out of range: {reason}")
            }
            Error::NotNilpotent => write!(f, "matrix is not nilpotent"),
            Error::SupportViolation { row, col } => {
                write!(f, "entry ({}, {}) lies outside the allowed support", row + 1, col + 1)
            }
            Error::DegreeOverflow { degree } => {
                write!(f, "bracket would have degree {degree} > 2")
            }
            Error::NotHomogeneous(what) => write!(f, "{what} is not homogeneous"),
            Error::NotInSpan(s) => write!(f, "element not in span: {s}"),
            Error::TruncationOverflow { weight, max } => {
                write!(f, "weight {weight} exceeds truncation bound {max}")
            }
            Error::PerturbationNotNilpotent { bound } => {
                write!(f, "h∘perturbation is not nilpotent (checked up to exponent {bound})")
            }
            Error::NormalizationObstructed(s) => write!(f, "normalization obstructed: {s}"),
            Error::NotMaurerCartan => write!(f, "point does not satisfy the Maurer–Cartan equation"),
            Error::MalformedFamily(s) => write!(f, "malformed family: {s}"),
            Error::OutOfJacobiRange { a, b } => {
                write!(f, "monomial x^{a} y^{b} is outside the Jacobi quotient")
            }
            Error::Invalid(s) => f.write_str(s),
        }
    }
}

impl core::error::Error for Error {}
