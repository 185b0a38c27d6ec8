//! Error type shared by every algebraic layer of the crate.

use alloc::string::String;
use core::fmt;

/// Structured failure modes of the exact-arithmetic pipeline.
///
/// Arithmetic is total except where a precondition genuinely fails; every
/// failure is reported, never silently absorbed into a wrong coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgError {
    /// Inversion of a non-unit (zero leading coefficient, positive valuation
    /// in power-series mode, or a quotient-ring element sharing a factor with
    /// the modulus; the factor is reported when known).
    NotInvertible { detail: String },
    /// Square root of a series whose leading coefficient is not the square of
    /// a rational.
    NonSquareLeading,
    /// Functional inversion of a local series without an invertible linear
    /// term.
    NonUnitLinearTerm,
    /// A quotient-ring modulus failed the squarefree check gcd(P, P') = unit.
    NotSquarefree { detail: String },
    /// Two truncated objects have no common known window to compare on.
    TruncationMismatch,
    /// A local expansion was requested beyond its soundly-known order.
    InsufficientLocalOrder { needed: i64, known: i64 },
    /// A coefficient was requested at or beyond a series truncation order.
    OrderExhausted { detail: String },
    /// A genuine pole of the special (0,1)/(0,2) forms sits at the requested
    /// expansion point.
    PoleAtExpansionPoint { detail: String },
    /// The exchanged curve has too few ramification points (for example every
    /// coupling is zero) or a non-unit leading ramification coefficient.
    DegenerateRamification { detail: String },
    /// A ramification root collides with a distinguished point of the curve
    /// (0, +1, -1 or infinity) at the working truncation.
    ParameterCollision { detail: String },
    /// Newton iteration for the disc data failed to stabilise.
    NoConvergence,
    /// A census enumeration would exceed the configured oriented-edge cap.
    CapExceeded { requested: usize, cap: usize },
    /// Invalid configuration or malformed input.
    BadInput { detail: String },
}

impl fmt::Display for AlgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgError::NotInvertible { detail } => write!(f, "not invertible: {detail}"),
            AlgError::NonSquareLeading => {
                write!(f, "leading coefficient has no rational square root")
            }
            AlgError::NonUnitLinearTerm => {
                write!(f, "local series has no invertible linear term")
            }
            AlgError::NotSquarefree { detail } => write!(f, "modulus not squarefree: {detail}"),
            AlgError::TruncationMismatch => write!(f, "no common known window"),
            AlgError::InsufficientLocalOrder { needed, known } => write!(
                f,
                "local expansion known to order {known}, order {needed} required"
            ),
            AlgError::OrderExhausted { detail } => write!(f, "truncation exhausted: {detail}"),
            AlgError::PoleAtExpansionPoint { detail } => {
                write!(f, "pole at expansion point: {detail}")
            }
            AlgError::DegenerateRamification { detail } => {
                write!(f, "degenerate ramification: {detail}")
            }
            AlgError::ParameterCollision { detail } => write!(f, "parameter collision: {detail}"),
            AlgError::NoConvergence => write!(f, "disc-data iteration did not converge"),
            AlgError::CapExceeded { requested, cap } => {
                write!(f, "{requested} oriented edges exceeds cap {cap}")
            }
            AlgError::BadInput { detail } => write!(f, "bad input: {detail}"),
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, AlgError>;
