//! Gauss rules and 1-D integration with node-doubling error estimates.
//!
//! Interval conventions: Gauss–Jacobi weights are written
//! `(x − a)^α (b − x)^β` on `[a, b]` (α at the left end, β at the right end);
//! Gauss–Laguerre weights are `(x − a)^α e^{−(x − a)}` on `[a, ∞)`. The
//! integrand passed to [`integrate_1d`] is the factor *without* the weight.

use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::specfun::gamma::log_gamma;
use crate::{Error, Result};

/// Nodes and weights of a quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// Sum of `w_i f(x_i)` in node order.
    pub fn apply(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Integral of `f` over `[a, b]` for a rule defined on `[-1, 1]`.
    pub fn apply_on(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self.apply(|x| f(mid + half * x))
    }
}

fn legendre_newton(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let j = j as f64;
                let p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pnm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

const CACHED_LEGENDRE: usize = 257;

/// `n`-point Gauss–Legendre rule on `[-1, 1]`, cached for `n < 257`.
pub fn gauss_legendre(n: usize) -> std::borrow::Cow<'static, Rule> {
    static CACHE: OnceLock<Vec<OnceLock<Rule>>> = OnceLock::new();
    if n >= CACHED_LEGENDRE {
        return std::borrow::Cow::Owned(legendre_newton(n));
    }
    let table = CACHE.get_or_init(|| (0..CACHED_LEGENDRE).map(|_| OnceLock::new()).collect());
    std::borrow::Cow::Borrowed(table[n].get_or_init(|| legendre_newton(n)))
}

fn golub_welsch(diag: &[f64], off: &[f64], mu0: f64) -> Rule {
    let n = diag.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = diag[i];
        if i + 1 < n {
            m[(i, i + 1)] = off[i];
            m[(i + 1, i)] = off[i];
        }
    }
    let eig = SymmetricEigen::new(m);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Gauss–Jacobi rule on `[-1, 1]` for the weight `(1 + x)^α (1 − x)^β`
/// (α at the left end).
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<Rule> {
    if n == 0 || alpha <= -1.0 || beta <= -1.0 {
        return Err(Error::Domain(format!(
            "gauss_jacobi(n={n}, alpha={alpha}, beta={beta})"
        )));
    }
    // Standard recurrence is for (1 − x)^a (1 + x)^b.
    let (a, b) = (beta, alpha);
    let ab = a + b;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    diag[0] = (b - a) / (ab + 2.0);
    for j in 1..n {
        let jf = j as f64;
        let s = 2.0 * jf + ab;
        diag[j] = (b * b - a * a) / (s * (s + 2.0));
    }
    for j in 1..n {
        let jf = j as f64;
        let s = 2.0 * jf + ab;
        let v = if j == 1 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            4.0 * jf * (jf + a) * (jf + b) * (jf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        off[j - 1] = v.sqrt();
    }
    let ln_mu0 = (ab + 1.0) * 2f64.ln() + log_gamma(a + 1.0)?.0 + log_gamma(b + 1.0)?.0
        - log_gamma(ab + 2.0)?.0;
    Ok(golub_welsch(&diag, &off, ln_mu0.exp()))
}

/// Generalized Gauss–Laguerre rule on `[0, ∞)` for the weight `x^α e^{−x}`.
pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<Rule> {
    if n == 0 || alpha <= -1.0 {
        return Err(Error::Domain(format!("gauss_laguerre(n={n}, alpha={alpha})")));
    }
    let diag: Vec<f64> = (0..n).map(|j| 2.0 * j as f64 + alpha + 1.0).collect();
    let off: Vec<f64> = (1..n)
        .map(|j| (j as f64 * (j as f64 + alpha)).sqrt())
        .collect();
    let mu0 = log_gamma(alpha + 1.0)?.0.exp();
    Ok(golub_welsch(&diag, &off, mu0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    GaussLegendre,
    /// Endpoint exponents: α at the left end, β at the right end.
    GaussJacobi { alpha: f64, beta: f64 },
    /// Weight `(x − a)^α e^{−(x − a)}` on `[a, ∞)`.
    GaussLaguerre { alpha: f64 },
    AdaptiveSubdivision,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    pub nodes: usize,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            scheme: Scheme::AdaptiveSubdivision,
            nodes: 20,
            rel_tol: 1e-12,
            max_subdivisions: 400,
        }
    }
}

impl QuadratureSpec {
    pub fn with_scheme(scheme: Scheme, nodes: usize) -> Self {
        QuadratureSpec {
            scheme,
            nodes,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 2 {
            return Err(Error::Config(format!("quadrature nodes = {} < 2", self.nodes)));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::Config(format!("quadrature rel_tol = {}", self.rel_tol)));
        }
        Ok(())
    }
}

/// Integration interval; `b` may be `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Self {
        Interval { a, b }
    }
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn panel_pair(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, n: usize) -> (f64, f64) {
    let lo = gauss_legendre(n).apply_on(a, b, &mut *f);
    let hi = gauss_legendre(2 * n).apply_on(a, b, &mut *f);
    (hi, (hi - lo).abs())
}

/// Adaptive bisection with Gauss–Legendre `n` / `2n` pairs on a finite interval.
pub fn adaptive_legendre(
    f: &mut dyn FnMut(f64) -> f64,
    a: f64,
    b: f64,
    n: usize,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<(f64, f64)> {
    adaptive_legendre_panels(f, &[a, b], n, rel_tol, max_subdivisions)
}

/// Global adaptive bisection starting from the panels between consecutive
/// `breaks`.
pub fn adaptive_legendre_panels(
    f: &mut dyn FnMut(f64) -> f64,
    breaks: &[f64],
    n: usize,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<(f64, f64)> {
    adaptive_legendre_abs(f, breaks, n, rel_tol, 0.0, max_subdivisions)
}

/// [`adaptive_legendre_panels`] that also stops once the error estimate is
/// below `abs_tol`.
pub fn adaptive_legendre_abs(
    f: &mut dyn FnMut(f64) -> f64,
    breaks: &[f64],
    n: usize,
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<(f64, f64)> {
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in breaks.windows(2) {
        let (v, e) = panel_pair(f, w[0], w[1], n);
        total += v;
        total_err += e;
        heap.push(Panel { a: w[0], b: w[1], value: v, err: e });
    }
    let mut splits = 0;
    loop {
        let floor = (1e-15 * total.abs()).max(abs_tol) + 1e-300;
        if total_err <= rel_tol * total.abs() || total_err <= floor {
            return Ok((total, total_err));
        }
        if splits >= max_subdivisions {
            return Err(Error::Quadrature { est_error: total_err });
        }
        let p = heap.pop().expect("non-empty panel heap");
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = panel_pair(f, p.a, m, n);
        let (v2, e2) = panel_pair(f, m, p.b, n);
        total += v1 + v2 - p.value;
        total_err += e1 + e2 - p.err;
        heap.push(Panel { a: p.a, b: m, value: v1, err: e1 });
        heap.push(Panel { a: m, b: p.b, value: v2, err: e2 });
        splits += 1;
        if heap.len() > 1 && splits % 64 == 0 {
            // refresh the running sums to avoid drift
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.err).sum();
        }
    }
}

/// Integral of `f` over `interval` with an error estimate from node doubling.
pub fn integrate_1d(
    mut f: impl FnMut(f64) -> f64,
    interval: Interval,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    spec.validate()?;
    let Interval { a, b } = interval;
    if !(b > a) {
        return Err(Error::Domain(format!("empty interval [{a}, {b}]")));
    }
    let n = spec.nodes;
    match spec.scheme {
        Scheme::GaussLegendre => {
            if !b.is_finite() {
                return Err(Error::Domain("Gauss-Legendre needs a finite interval".into()));
            }
            let (v, e) = panel_pair(&mut f, a, b, n);
            Ok((v, e))
        }
        Scheme::GaussJacobi { alpha, beta } => {
            if !b.is_finite() {
                return Err(Error::Domain("Gauss-Jacobi needs a finite interval".into()));
            }
            let half = 0.5 * (b - a);
            let scale = half.powf(alpha + beta + 1.0);
            let mid = 0.5 * (a + b);
            let lo = gauss_jacobi(n, alpha, beta)?.apply(|x| f(mid + half * x)) * scale;
            let hi = gauss_jacobi(2 * n, alpha, beta)?.apply(|x| f(mid + half * x)) * scale;
            Ok((hi, (hi - lo).abs()))
        }
        Scheme::GaussLaguerre { alpha } => {
            if b.is_finite() {
                return Err(Error::Domain("Gauss-Laguerre needs [a, inf)".into()));
            }
            let lo = gauss_laguerre(n, alpha)?.apply(|x| f(a + x));
            let hi = gauss_laguerre(2 * n, alpha)?.apply(|x| f(a + x));
            Ok((hi, (hi - lo).abs()))
        }
        Scheme::AdaptiveSubdivision => {
            if b.is_finite() {
                adaptive_legendre(&mut f, a, b, n, spec.rel_tol, spec.max_subdivisions)
            } else {
                let mut g = |u: f64| {
                    let om = 1.0 - u;
                    let v = f(a + u / om);
                    if v == 0.0 {
                        0.0
                    } else {
                        v / (om * om)
                    }
                };
                adaptive_legendre(&mut g, 0.0, 1.0, n, spec.rel_tol, spec.max_subdivisions)
            }
        }
    }
}
