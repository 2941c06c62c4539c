use core::fmt;

/// Errors raised by the numerical routines.
///
/// `name()` gives the stable identifier the CLI prints on failure.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    Domain(&'static str),
    Pole(f64),
    NonConvergence(&'static str),
    Integrability(&'static str),
    UnsupportedDimension(usize),
    SingularPoint,
    NoPlateau { last: f64, previous: f64 },
    DivergentInteraction,
    Regularity(&'static str),
    ExcessTruncation { truncated: u64, trials: u64 },
    SingularState,
    BlowupGuard { t: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DomainError",
            Error::Pole(_) => "PoleError",
            Error::NonConvergence(_) => "NonConvergence",
            Error::Integrability(_) => "IntegrabilityError",
            Error::UnsupportedDimension(_) => "UnsupportedDimension",
            Error::SingularPoint => "SingularPoint",
            Error::NoPlateau { .. } => "NoPlateau",
            Error::DivergentInteraction => "DivergentInteraction",
            Error::Regularity(_) => "RegularityError",
            Error::ExcessTruncation { .. } => "ExcessTruncation",
            Error::SingularState => "SingularState",
            Error::BlowupGuard { .. } => "BlowupGuard",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Pole(x) => write!(f, "pole at {x}"),
            Error::NonConvergence(msg) => write!(f, "no convergence: {msg}"),
            Error::Integrability(msg) => write!(f, "not integrable: {msg}"),
            Error::UnsupportedDimension(n) => write!(f, "dimension {n} not supported"),
            Error::SingularPoint => write!(f, "evaluation at a singular point"),
            Error::NoPlateau { last, previous } => {
                write!(f, "no plateau: last two values {previous} and {last}")
            }
            Error::DivergentInteraction => write!(f, "interaction integral diverges"),
            Error::Regularity(msg) => write!(f, "insufficient regularity: {msg}"),
            Error::ExcessTruncation { truncated, trials } => {
                write!(f, "{truncated} of {trials} paths hit the step limit")
            }
            Error::SingularState => write!(f, "coincident particle positions"),
            Error::BlowupGuard { t } => write!(f, "step size underflow at t = {t}"),
        }
    }
}
