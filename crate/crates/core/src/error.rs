use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the gamma function at x = {0}")]
    Pole(f64),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("series did not converge after {terms} terms (partial value {partial})")]
    NonConvergence { terms: usize, partial: f64 },

    #[error("result overflows f64")]
    Overflow,

    #[error("hypergeometric series diverges at z = 1 (a + b - c = {0} >= 0)")]
    Divergence(f64),

    #[error("degenerate hypergeometric parameters: {0}")]
    Degenerate(String),

    #[error("query outside the light cone: r = {r} >= t = {t}")]
    LightCone { r: f64, t: f64 },

    #[error("unsupported dimension n = {0}")]
    UnsupportedDimension(usize),

    #[error("quadrature tolerance not met (estimated error {est_error})")]
    Quadrature { est_error: f64 },

    #[error("finite-difference stencil failure: {0}")]
    Stencil(String),

    #[error("initial datum error: {0}")]
    Datum(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
