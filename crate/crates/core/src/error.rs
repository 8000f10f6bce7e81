use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("{context}: series not settled after {limit} terms")]
    NonConvergence { context: &'static str, limit: usize },
    #[error("E12 parameters diverge (delta1 = {delta1}, delta2 = {delta2})")]
    DivergentParameters { delta1: f64, delta2: f64 },
    #[error("numerator gamma pole at {arg} cannot be folded into a Pochhammer ratio")]
    UnfoldablePole { arg: f64 },
    #[error("quadrature not settled under panel doubling: {coarse} vs {fine}")]
    QuadratureFailure { coarse: f64, fine: f64 },
    #[error("the Caputo-type derivative needs g' but none was supplied")]
    MissingDerivative,
    #[error("closed form {closed} and quadrature {quadrature} disagree")]
    PathMismatch { closed: f64, quadrature: f64 },
    #[error("tridiagonal system singular at step {step}")]
    SingularSystem { step: usize },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("at t = {t}{}: {source}", x.map(|x| format!(", x = {x}")).unwrap_or_default())]
    Node {
        t: f64,
        x: Option<f64>,
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Attach the grid node at which a failure happened.
    pub(crate) fn at(self, t: f64, x: Option<f64>) -> Error {
        match self {
            e @ Error::Node { .. } => e,
            e => Error::Node {
                t,
                x,
                source: Box::new(e),
            },
        }
    }
}
