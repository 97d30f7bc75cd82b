//! Special functions: Γ family, confluent (₁F₁, U) and Gauss (₂F₁)
//! hypergeometric functions with region dispatch.

pub mod gamma;
pub mod hyp1f1;
pub mod hyp2f1;

pub use gamma::{digamma, double_factorial, gamma, gamma_ratio, log_gamma, pochhammer, rgamma};
pub use hyp1f1::{hyp1f1, hypu, TricomiU};
pub use hyp2f1::{hyp2f1, hyp2f1_at_one, hyp2f1_complement, hyp2f1_euler};

/// Truncation control for the hypergeometric series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub abs_floor: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            rel_tol: 1e-13,
            abs_floor: 1e-300,
            max_terms: 600,
        }
    }
}

impl SeriesControl {
    /// Sums until terms fall below one ulp of the running sum. Used by the
    /// kernels, whose finite-difference checks amplify truncation jumps.
    pub fn precise() -> Self {
        SeriesControl {
            rel_tol: 1e-17,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        if !(self.rel_tol > 0.0) || self.max_terms < 1 || !(self.abs_floor >= 0.0) {
            return Err(crate::Error::Config(format!("invalid series control {self:?}")));
        }
        Ok(())
    }
}

/// Parameters of ₁F₁ / U (`b` ignored) and ₂F₁.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeomArgs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: f64,
}

impl HypergeomArgs {
    pub fn confluent(a: f64, c: f64, z: f64) -> Self {
        HypergeomArgs { a, b: f64::NAN, c, z }
    }

    pub fn gauss(a: f64, b: f64, c: f64, z: f64) -> Self {
        HypergeomArgs { a, b, c, z }
    }
}

/// Evaluation route taken by a hypergeometric call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    DirectSeries,
    /// Connection formula between `z` and `1 − z` (non-integer `c − a − b`).
    Connection,
    /// Logarithmic series for integer parameter differences.
    LogSeries,
    IntegralRep,
    GaussPoint,
    EulerTransform,
    Asymptotic,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::DirectSeries => "direct_series",
            Branch::Connection => "connection_321",
            Branch::LogSeries => "log_series_322",
            Branch::IntegralRep => "integral_rep",
            Branch::GaussPoint => "gauss_point_414",
            Branch::EulerTransform => "euler_transform_45",
            Branch::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalDiagnostics {
    pub terms_used: usize,
    pub branch: Branch,
    pub est_error: f64,
}
