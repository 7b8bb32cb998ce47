use alloc::string::String;
use core::fmt;

/// Errors shared by every computation in the crate.
///
/// Variants split into three rough classes: rejected inputs (bad degrees,
/// singular models, unusable covers), resource guards (`CapExceeded`), and
/// internal cross-checks that must never fire on a correct build
/// (`ConsistencyFailure`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The curve model has a singular point; the witness names it when one
    /// was found over a small extension.
    SingularModel { witness: Option<String> },
    /// Coefficient degrees do not match any supported curve shape.
    BadDegree { detail: String },
    /// In characteristic 2 the model y^2 = f(x) is always singular; h must
    /// be nonzero.
    Char2NeedsH,
    /// A brute-force enumeration would exceed the configured cap.
    CapExceeded { needed: u128, cap: u128 },
    /// Two independent computations of the same quantity disagree.
    ConsistencyFailure { detail: String },
    /// The requested point is not a Weierstrass point of the model.
    NotWeierstrass,
    /// Point-level covering tests only support separable maps.
    InseparableUnsupported,
    /// The operation needs an exhaustive group profile but only a sampled
    /// one is available.
    SampledProfileUnsupported,
    /// A documented precondition of the called function was violated.
    PreconditionViolated { detail: String },
    /// No prime exists in the requested interval.
    NoPrimeInInterval,
    /// The defining polynomial of a cover must be squarefree.
    NotSquarefree,
    /// The defining polynomial of a cover must not vanish at zero.
    RootAtZero,
    /// No element of the field squares to the requested value.
    NoSquareRoot,
    /// Cover construction found no usable branch point.
    NoUsableBranchPoint,
    /// Division by zero in a field or polynomial ring.
    DivisionByZero,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SingularModel { witness: Some(w) } => {
                write!(f, "singular curve model (witness {w})")
            }
            Error::SingularModel { witness: None } => write!(f, "singular curve model"),
            Error::BadDegree { detail } => write!(f, "unsupported degrees: {detail}"),
            Error::Char2NeedsH => {
                write!(f, "characteristic 2 requires a nonzero h(x)")
            }
            Error::CapExceeded { needed, cap } => {
                write!(f, "enumeration of size {needed} exceeds cap {cap}")
            }
            Error::ConsistencyFailure { detail } => {
                write!(f, "internal consistency check failed: {detail}")
            }
            Error::NotWeierstrass => write!(f, "point is not a Weierstrass point"),
            Error::InseparableUnsupported => {
                write!(f, "inseparable coverings are not supported")
            }
            Error::SampledProfileUnsupported => {
                write!(f, "operation requires an exhaustive group profile")
            }
            Error::PreconditionViolated { detail } => {
                write!(f, "precondition violated: {detail}")
            }
            Error::NoPrimeInInterval => write!(f, "no prime in the requested interval"),
            Error::NotSquarefree => write!(f, "polynomial is not squarefree"),
            Error::RootAtZero => write!(f, "polynomial vanishes at zero"),
            Error::NoSquareRoot => write!(f, "no root of the cubic is a nonzero square"),
            Error::NoUsableBranchPoint => {
                write!(f, "no rational branch point with a square coordinate")
            }
            Error::DivisionByZero => write!(f, "division by zero"),
        }
    }
}

impl core::error::Error for Error {}
