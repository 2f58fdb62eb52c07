use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("wfn parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("wfn inconsistency: {0}")]
    Inconsistent(String),

    #[error("unsupported angular momentum type code {code} at line {line} (codes 1..=35 only)")]
    UnsupportedAngularMomentum { code: i64, line: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("plane-wave amplitude requested at zero momentum transfer")]
    ForwardSingularity,

    #[error("non-finite integrand at grid point {index} (r = {r}, theta = {theta}, phi = {phi})")]
    Integration {
        index: usize,
        r: f64,
        theta: f64,
        phi: f64,
    },

    #[error("target is not linear along the table axis: {0}")]
    NotLinear(String),

    #[error("target is not neutral: nuclear charge {nuclear}, electron count {electrons}")]
    NonNeutral { nuclear: f64, electrons: f64 },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }
}
