use core::fmt;

/// Errors shared by all evaluators in this crate.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A parameter is outside its admissible domain.
    Domain(&'static str),
    /// A Weibullian exponent violates the admissibility bound of the
    /// exact-asymptotics statement; only the logarithmic results apply.
    Admissibility { p: f64, bound: f64 },
    /// The minimizer of the variational problem collapsed to the origin;
    /// the degenerate case is out of scope.
    DegenerateA0 { minimizer: f64 },
    /// The super-critical regime needs the behaviour of sigma at the origin.
    MissingOriginBehavior,
    /// The supplied tail family is not covered by the requested statement.
    UnsupportedTail(&'static str),
    /// The requested case is outside the supported parameter range.
    UnsupportedCase(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::Admissibility { p, bound } => {
                write!(f, "Weibullian exponent p = {p} not in (0, {bound})")
            }
            Error::DegenerateA0 { minimizer } => {
                write!(f, "variational minimizer {minimizer} collapsed to 0 (degenerate case)")
            }
            Error::MissingOriginBehavior => {
                write!(f, "origin behaviour of sigma required but not specified")
            }
            Error::UnsupportedTail(what) => write!(f, "unsupported tail family: {what}"),
            Error::UnsupportedCase(what) => write!(f, "unsupported case: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
