use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{what} = {value} is outside the admissible domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// A sampled function returned NaN or an infinity.
    #[error("non-finite function value {value} at abscissa {abscissa}")]
    NonFinite { abscissa: f64, value: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The closed-form parameters of a theorem could not be built.
    #[error("cannot construct closed-form solution: {0}")]
    Construction(String),

    #[error("unsupported coefficient triple (c1, c3, c5) = ({c1}, {c3}, {c5}): {reason}")]
    Unsupported {
        c1: f64,
        c3: f64,
        c5: f64,
        reason: &'static str,
    },

    #[error("invalid model parameters: {condition}{}", at_u.map(|u| format!(" (at u = {u})")).unwrap_or_default())]
    InvalidModel {
        condition: String,
        at_u: Option<f64>,
    },

    #[error("quadrature did not converge on [{lower}, {upper}]: estimate {estimate}, error {error_estimate}")]
    Quadrature {
        lower: f64,
        upper: f64,
        estimate: f64,
        error_estimate: f64,
    },

    #[error("step size underflow at t = {t} (h = {h})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("trajectory spans do not match: closed form period {closed}, oracle end {oracle}")]
    SpanMismatch { closed: f64, oracle: f64 },
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            expected,
        }
    }
}
