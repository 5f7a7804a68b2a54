use std::fmt;

/// Errors surfaced by constructors and evaluators.
///
/// Every variant carries enough context to state which precondition failed
/// and with what value, so callers can report without re-deriving it.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A point was outside the open unit disk (or past the internal cap).
    PointOutsideDisk { modulus: f64 },
    /// A scalar parameter was outside its documented domain.
    Domain { what: &'static str, value: f64, expected: &'static str },
    /// A hypergeometric denominator parameter is a nonpositive integer.
    InvalidDenominatorParam { value: f64 },
    /// The series diverges for the requested argument (Lemma-type precondition).
    DivergentSeries { excess: f64 },
    /// The term budget ran out before the tolerance was met; the partial sum
    /// and its tail estimate are preserved.
    SeriesBudgetExhausted { partial: f64, tail_bound: f64, terms_used: usize },
    /// An Lᵖ norm was requested for an integrand whose power singularity
    /// makes |f|ᵖ non-integrable.
    NonIntegrablePower { order: f64, p: f64 },
    /// A field id could not be parsed against the builtin catalog.
    UnknownField { id: String },
    /// A suite id is not one of the published suite names.
    UnknownSuite { id: String },
    /// A sampled-grid field was evaluated outside its outermost ring.
    SampledExtrapolation { radius: f64, max_radius: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::PointOutsideDisk { modulus } => {
                write!(f, "point has modulus {modulus} but must lie strictly inside the unit disk (|z| <= 1 - 1e-12)")
            }
            Error::Domain { what, value, expected } => {
                write!(f, "{what} = {value} is outside its domain ({expected})")
            }
            Error::InvalidDenominatorParam { value } => {
                write!(f, "denominator parameter {value} is a nonpositive integer; every term past -{value} would divide by zero")
            }
            Error::DivergentSeries { excess } => {
                write!(f, "series diverges at |x| = 1: sum(b) - sum(a) = {excess} must be positive")
            }
            Error::SeriesBudgetExhausted { partial, tail_bound, terms_used } => {
                write!(f, "term budget exhausted after {terms_used} terms (partial sum {partial}, tail bound {tail_bound})")
            }
            Error::NonIntegrablePower { order, p } => {
                write!(f, "|f|^p with a singularity of order {order} has order*p = {} >= 2 and is not integrable on the disk", order * p)
            }
            Error::UnknownField { id } => write!(f, "unknown field id '{id}'"),
            Error::UnknownSuite { id } => write!(f, "unknown suite id '{id}'"),
            Error::SampledExtrapolation { radius, max_radius } => {
                write!(f, "sampled field evaluated at radius {radius} beyond its outermost ring {max_radius}; extrapolation is refused")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
