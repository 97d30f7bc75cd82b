//! Cauchy-problem solvers for the singular heat and wave equations, reduced to
//! one-dimensional integrals over spherical means of the initial datum.

use std::cell::{Cell, RefCell};
use std::f64::consts::PI;
use std::io::Read;
use std::path::Path;

use crate::kernels::{f21_closed, sphere_area, HeatKernel, Normalization};
use crate::quadrature::{adaptive_legendre_abs, gauss_laguerre, gauss_legendre, QuadratureSpec, Scheme};
use crate::specfun::{gamma, SeriesControl, TricomiU};
use crate::{Error, Result};

/// Regular tensor-product grid of samples with multilinear or cubic
/// interpolation. Evaluation outside the grid is an error.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDatum {
    axes: Vec<Vec<f64>>,
    values: Vec<f64>,
    order: u8,
}

impl GridDatum {
    /// `values` is row-major with the last axis varying fastest.
    pub fn new(axes: Vec<Vec<f64>>, values: Vec<f64>, order: u8) -> Result<Self> {
        if axes.is_empty() || axes.len() > 3 {
            return Err(Error::Datum(format!("grid data supports 1 to 3 axes, got {}", axes.len())));
        }
        if order != 1 && order != 3 {
            return Err(Error::Datum(format!("interpolation order must be 1 or 3, got {order}")));
        }
        let min_len = if order == 3 { 4 } else { 2 };
        for ax in &axes {
            if ax.len() < min_len {
                return Err(Error::Datum(format!("grid axis has {} points, need {min_len}", ax.len())));
            }
            if ax.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::Datum("grid axis not strictly increasing".into()));
            }
        }
        let size: usize = axes.iter().map(Vec::len).product();
        if values.len() != size {
            return Err(Error::Datum(format!("{} values for {size} grid nodes", values.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Datum("grid values must be finite".into()));
        }
        Ok(GridDatum { axes, values, order })
    }

    /// Reads CSV with header `x1,...,xn,value`, one row per grid node.
    pub fn from_csv_reader(reader: impl Read, n: usize, order: u8) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::Datum(e.to_string()))?.clone();
        let expected: Vec<String> = (1..=n).map(|i| format!("x{i}")).chain(["value".into()]).collect();
        if headers.iter().ne(expected.iter().map(String::as_str)) {
            return Err(Error::Datum(format!(
                "grid header must be `{}`",
                expected.join(",")
            )));
        }
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Datum(e.to_string()))?;
            let vals = rec
                .iter()
                .map(|f| f.parse::<f64>().map_err(|e| Error::Datum(format!("{f:?}: {e}"))))
                .collect::<Result<Vec<f64>>>()?;
            rows.push(vals);
        }
        let mut axes: Vec<Vec<f64>> = (0..n)
            .map(|d| {
                let mut ax: Vec<f64> = rows.iter().map(|r| r[d]).collect();
                ax.sort_by(f64::total_cmp);
                ax.dedup();
                ax
            })
            .collect();
        let size: usize = axes.iter().map(Vec::len).product();
        if size != rows.len() {
            return Err(Error::Datum(format!(
                "{} rows do not form a regular grid of {size} nodes",
                rows.len()
            )));
        }
        let mut values = vec![f64::NAN; size];
        for r in &rows {
            let mut idx = 0;
            for (d, ax) in axes.iter().enumerate() {
                let i = ax.binary_search_by(|v| v.total_cmp(&r[d])).expect("coordinate on axis");
                idx = idx * ax.len() + i;
            }
            if !values[idx].is_nan() {
                return Err(Error::Datum("duplicate grid node".into()));
            }
            values[idx] = r[n];
        }
        axes.shrink_to_fit();
        GridDatum::new(axes, values, order)
    }

    pub fn from_csv_path(path: &Path, n: usize, order: u8) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::from_csv_reader(f, n, order)
    }

    pub fn dimension(&self) -> usize {
        self.axes.len()
    }

    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    fn translated(&self, v: &[f64]) -> Self {
        let axes = self
            .axes
            .iter()
            .zip(v)
            .map(|(ax, s)| ax.iter().map(|x| x + s).collect())
            .collect();
        GridDatum { axes, values: self.values.clone(), order: self.order }
    }

    /// Stencil indices and weights along one axis.
    fn axis_weights(&self, ax: &[f64], x: f64) -> Result<Vec<(usize, f64)>> {
        let (lo, hi) = (ax[0], ax[ax.len() - 1]);
        if !(x >= lo && x <= hi) {
            return Err(Error::Datum(format!("point {x} outside grid range [{lo}, {hi}]")));
        }
        let i = match ax.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => i.min(ax.len() - 2),
            Err(i) => i - 1,
        };
        if self.order == 1 {
            let s = (x - ax[i]) / (ax[i + 1] - ax[i]);
            return Ok(vec![(i, 1.0 - s), (i + 1, s)]);
        }
        let j0 = i.saturating_sub(1).min(ax.len() - 4);
        Ok((j0..j0 + 4)
            .map(|j| {
                let w = (j0..j0 + 4)
                    .filter(|&m| m != j)
                    .map(|m| (x - ax[m]) / (ax[j] - ax[m]))
                    .product::<f64>();
                (j, w)
            })
            .collect())
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.axes.len() {
            return Err(Error::Datum(format!(
                "point of dimension {} for a {}-D grid",
                x.len(),
                self.axes.len()
            )));
        }
        let per_axis = self
            .axes
            .iter()
            .zip(x)
            .map(|(ax, &xi)| self.axis_weights(ax, xi))
            .collect::<Result<Vec<_>>>()?;
        let mut acc = 0.0;
        let mut idx = vec![0usize; per_axis.len()];
        loop {
            let mut w = 1.0;
            let mut flat = 0;
            for (d, st) in per_axis.iter().enumerate() {
                let (j, wj) = st[idx[d]];
                w *= wj;
                flat = flat * self.axes[d].len() + j;
            }
            acc += w * self.values[flat];
            let mut d = per_axis.len();
            loop {
                if d == 0 {
                    return Ok(acc);
                }
                d -= 1;
                idx[d] += 1;
                if idx[d] < per_axis[d].len() {
                    break;
                }
                idx[d] = 0;
            }
        }
    }
}

/// Initial datum `f` (heat) or `g` (wave).
#[derive(Debug, Clone, PartialEq)]
pub enum InitialDatum {
    /// `amplitude · exp(−|Y − center|² / (2 width²))`.
    Gaussian { center: Vec<f64>, width: f64, amplitude: f64 },
    /// `amplitude · exp(1 − 1/(1 − |Y − center|²/radius²))` inside the ball, 0 outside.
    Bump { center: Vec<f64>, radius: f64, amplitude: f64 },
    /// `Σ_j coefficients[j] |Y − center|^{2j}`.
    RadialPoly { center: Vec<f64>, coefficients: Vec<f64> },
    Grid(GridDatum),
    /// Linear combination `Σ α_i datum_i`.
    Combination(Vec<(f64, InitialDatum)>),
}

impl InitialDatum {
    pub fn constant(n: usize, value: f64) -> Self {
        InitialDatum::RadialPoly { center: vec![0.0; n], coefficients: vec![value] }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let check_center = |c: &[f64]| {
            if c.len() != n {
                return Err(Error::Datum(format!("center of dimension {} for n = {n}", c.len())));
            }
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::Datum("center must be finite".into()));
            }
            Ok(())
        };
        match self {
            InitialDatum::Gaussian { center, width, amplitude } => {
                check_center(center)?;
                if !(*width > 0.0) || !amplitude.is_finite() {
                    return Err(Error::Datum(format!("gaussian width {width}, amplitude {amplitude}")));
                }
            }
            InitialDatum::Bump { center, radius, amplitude } => {
                check_center(center)?;
                if !(*radius > 0.0) || !amplitude.is_finite() {
                    return Err(Error::Datum(format!("bump radius {radius}, amplitude {amplitude}")));
                }
            }
            InitialDatum::RadialPoly { center, coefficients } => {
                check_center(center)?;
                if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
                    return Err(Error::Datum("radial polynomial needs finite coefficients".into()));
                }
            }
            InitialDatum::Grid(g) => {
                if g.dimension() != n {
                    return Err(Error::Datum(format!(
                        "{}-D grid for n = {n}",
                        g.dimension()
                    )));
                }
            }
            InitialDatum::Combination(parts) => {
                for (a, d) in parts {
                    if !a.is_finite() {
                        return Err(Error::Datum("combination weight must be finite".into()));
                    }
                    d.validate(n)?;
                }
            }
        }
        Ok(())
    }

    /// Bound on `|datum|` used to scale absolute quadrature tolerances.
    pub fn magnitude(&self) -> f64 {
        match self {
            InitialDatum::Gaussian { amplitude, .. } | InitialDatum::Bump { amplitude, .. } => amplitude.abs(),
            InitialDatum::RadialPoly { coefficients, .. } => coefficients.iter().fold(0.0, |m, c| m.max(c.abs())),
            InitialDatum::Grid(g) => g.values.iter().fold(0.0, |m, v| m.max(v.abs())),
            InitialDatum::Combination(parts) => parts.iter().map(|(a, d)| a.abs() * d.magnitude()).sum(),
        }
    }

    /// Whether spherical means are available in closed form (radial data).
    pub fn exact_spherical_mean(&self) -> bool {
        match self {
            InitialDatum::Gaussian { .. } | InitialDatum::Bump { .. } | InitialDatum::RadialPoly { .. } => true,
            InitialDatum::Grid(_) => false,
            InitialDatum::Combination(parts) => parts.iter().all(|(_, d)| d.exact_spherical_mean()),
        }
    }

    fn radial(&self) -> Option<(&[f64], Box<dyn Fn(f64) -> f64 + '_>, Option<f64>)> {
        match self {
            InitialDatum::Gaussian { center, width, amplitude } => {
                let s = 2.0 * width * width;
                Some((center, Box::new(move |rho: f64| amplitude * (-rho * rho / s).exp()), None))
            }
            InitialDatum::Bump { center, radius, amplitude } => Some((
                center,
                Box::new(move |rho: f64| {
                    let q = rho * rho / (radius * radius);
                    if q >= 1.0 {
                        0.0
                    } else {
                        amplitude * (1.0 - 1.0 / (1.0 - q)).exp()
                    }
                }),
                Some(*radius),
            )),
            InitialDatum::RadialPoly { center, coefficients } => Some((
                center,
                Box::new(move |rho: f64| {
                    let q = rho * rho;
                    coefficients.iter().rev().fold(0.0, |acc, c| acc * q + c)
                }),
                None,
            )),
            _ => None,
        }
    }

    pub fn eval(&self, y: &[f64]) -> Result<f64> {
        if let Some((center, phi, _)) = self.radial() {
            return Ok(phi(crate::kernels::distance(y, center)));
        }
        match self {
            InitialDatum::Grid(g) => g.eval(y),
            InitialDatum::Combination(parts) => {
                parts.iter().try_fold(0.0, |acc, (a, d)| Ok(acc + a * d.eval(y)?))
            }
            _ => unreachable!("radial kinds handled above"),
        }
    }

    /// The datum shifted by `v`: `Y ↦ datum(Y − v)`.
    pub fn translated(&self, v: &[f64]) -> Self {
        let shift = |c: &[f64]| c.iter().zip(v).map(|(a, b)| a + b).collect::<Vec<f64>>();
        match self {
            InitialDatum::Gaussian { center, width, amplitude } => InitialDatum::Gaussian {
                center: shift(center),
                width: *width,
                amplitude: *amplitude,
            },
            InitialDatum::Bump { center, radius, amplitude } => InitialDatum::Bump {
                center: shift(center),
                radius: *radius,
                amplitude: *amplitude,
            },
            InitialDatum::RadialPoly { center, coefficients } => InitialDatum::RadialPoly {
                center: shift(center),
                coefficients: coefficients.clone(),
            },
            InitialDatum::Grid(g) => InitialDatum::Grid(g.translated(v)),
            InitialDatum::Combination(parts) => {
                InitialDatum::Combination(parts.iter().map(|(a, d)| (*a, d.translated(v))).collect())
            }
        }
    }
}

/// Runs `body` with a scalar integrand that may fail; the first error is
/// returned after the integration.
fn guarded<T>(
    f: impl Fn(f64) -> Result<f64>,
    body: impl FnOnce(&mut dyn FnMut(f64) -> f64) -> Result<T>,
) -> Result<T> {
    let err = RefCell::new(None);
    let mut g = |x: f64| match f(x) {
        Ok(v) => v,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let out = body(&mut g);
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    out
}

/// Product rule on `S^{n−1}` (`n ∈ {2, 3}`) with `m` polar nodes.
fn sphere_product(f: &dyn Fn(&[f64]) -> Result<f64>, x: &[f64], r: f64, m: usize) -> Result<f64> {
    match x.len() {
        2 => {
            let mut s = 0.0;
            let mut p = [0.0; 2];
            for j in 0..2 * m {
                let phi = PI * j as f64 / m as f64;
                p[0] = x[0] + r * phi.cos();
                p[1] = x[1] + r * phi.sin();
                s += f(&p)?;
            }
            Ok(s * PI / m as f64)
        }
        3 => {
            let rule = gauss_legendre(m);
            let mut s = 0.0;
            let mut p = [0.0; 3];
            for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
                let sn = (1.0 - u * u).sqrt();
                let mut ring = 0.0;
                for j in 0..2 * m {
                    let phi = PI * j as f64 / m as f64;
                    p[0] = x[0] + r * sn * phi.cos();
                    p[1] = x[1] + r * sn * phi.sin();
                    p[2] = x[2] + r * u;
                    ring += f(&p)?;
                }
                s += w * ring * PI / m as f64;
            }
            Ok(s)
        }
        n => Err(Error::Datum(format!(
            "non-radial spherical means are supported for n <= 3, got n = {n}"
        ))),
    }
}

/// Spherical integral with an error estimate from halving the node count.
fn sphere_product_est(datum: &InitialDatum, x: &[f64], r: f64, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    let m = quad.nodes.max(48);
    let f = |y: &[f64]| datum.eval(y);
    let hi = sphere_product(&f, x, r, m)?;
    let lo = sphere_product(&f, x, r, m / 2)?;
    Ok((hi, (hi - lo).abs()))
}

/// Unnormalized spherical integral `∫_{S^{n−1}} datum(X + rω) dω`.
pub fn spherical_mean(datum: &InitialDatum, x: &[f64], r: f64, n: usize, quad: &QuadratureSpec) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("spherical mean radius r = {r}")));
    }
    if x.len() != n {
        return Err(Error::Datum(format!("point of dimension {} for n = {n}", x.len())));
    }
    let omega = sphere_area(n);
    if r == 0.0 {
        return Ok(omega * datum.eval(x)?);
    }
    if let Some((center, phi, support)) = datum.radial() {
        let d = crate::kernels::distance(x, center);
        if d == 0.0 {
            return Ok(omega * phi(r));
        }
        // |X + rω − Z|² = (r − d)² + 4rd sin²(θ/2), θ the angle to Z − X
        let mut theta_max = PI;
        if let Some(rad) = support {
            let u_star = (r * r + d * d - rad * rad) / (2.0 * r * d);
            if u_star >= 1.0 {
                return Ok(0.0);
            }
            if u_star > -1.0 {
                theta_max = u_star.acos();
            }
        }
        let p = n as f64 - 2.0;
        let mut f = |th: f64| {
            let sh = (0.5 * th).sin();
            let rho = ((r - d) * (r - d) + 4.0 * r * d * sh * sh).sqrt();
            let w = if n == 2 { 1.0 } else { th.sin().powf(p) };
            phi(rho) * w
        };
        let breaks: Vec<f64> = (0..=4).map(|i| theta_max * i as f64 / 4.0).collect();
        let tol = (0.1 * quad.rel_tol).max(1e-15);
        let (v, _) = adaptive_legendre_abs(&mut f, &breaks, 12, tol, tol * abs_scale(datum), quad.max_subdivisions.max(200))?;
        return Ok(sphere_area(n - 1) * v);
    }
    match datum {
        InitialDatum::Combination(parts) => parts
            .iter()
            .try_fold(0.0, |acc, (a, d)| Ok(acc + a * spherical_mean(d, x, r, n, quad)?)),
        _ => Ok(sphere_product_est(datum, x, r, quad)?.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    Heat,
    Wave,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveRequest {
    pub problem: Problem,
    pub n: usize,
    pub k: f64,
    pub t: f64,
    pub x: Vec<f64>,
    pub datum: InitialDatum,
    pub quad: QuadratureSpec,
}

impl SolveRequest {
    pub fn new(problem: Problem, n: usize, k: f64, t: f64, x: Vec<f64>, datum: InitialDatum) -> Self {
        SolveRequest { problem, n, k, t, x, datum, quad: QuadratureSpec::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=8).contains(&self.n) {
            return Err(Error::UnsupportedDimension(self.n));
        }
        if !(self.t > 0.0) || !self.t.is_finite() {
            return Err(Error::Domain(format!("time t = {} must be positive", self.t)));
        }
        if self.x.len() != self.n {
            return Err(Error::Datum(format!(
                "point of dimension {} for n = {}",
                self.x.len(),
                self.n
            )));
        }
        match self.problem {
            Problem::Heat if !(self.k > 0.0) || !self.k.is_finite() => {
                return Err(Error::Domain(format!("heat problem needs k > 0, got {}", self.k)));
            }
            Problem::Wave if !(0.0..=1.0).contains(&self.k) => {
                return Err(Error::Domain(format!("wave problem needs k in [0, 1], got {}", self.k)));
            }
            _ => {}
        }
        self.quad.validate()?;
        self.datum.validate(self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolveDiagnostics {
    pub nodes_used: usize,
    pub branch: &'static str,
    /// Log-variable steps used for the operator chain (even `n ≥ 4`).
    pub inner_steps: Vec<f64>,
    /// False for wave problems with `k` on the ends of `[0, 1]`.
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub value: f64,
    pub est_error: f64,
    pub diagnostics: SolveDiagnostics,
}

const HEAT_S_MAX: f64 = 8.0;

fn abs_scale(datum: &InitialDatum) -> f64 {
    1e-3 * datum.magnitude()
}

fn abs_tol(req: &SolveRequest) -> f64 {
    req.quad.rel_tol * abs_scale(&req.datum)
}

fn heat_breaks() -> Vec<f64> {
    let mut b = vec![0.0, 1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.25];
    let mut s = 0.5;
    while s <= HEAT_S_MAX + 1e-12 {
        b.push(s);
        s += 0.25;
    }
    b
}

/// Solution of the singular heat problem with `u(0, ·) = f`:
/// `u = Γ(k+1)/(2π^{n/2}) ∫₀^∞ e^{−z} U(k, n/2, z) z^{n/2−1} f_X^#(√(4tz)) dz`.
pub fn solve_heat(req: &SolveRequest) -> Result<SolveResult> {
    req.validate()?;
    if req.problem != Problem::Heat {
        return Err(Error::Config("solve_heat called with a wave request".into()));
    }
    let n = req.n;
    let c = n as f64 / 2.0;
    let pre = gamma(req.k + 1.0)? / (2.0 * PI.powf(c));
    let u = TricomiU::new(req.k, c, SeriesControl::default())?;
    let count = Cell::new(0usize);
    let mean = |rho: f64| {
        count.set(count.get() + 1);
        spherical_mean(&req.datum, &req.x, rho, n, &req.quad)
    };
    let (v, e, branch) = match req.quad.scheme {
        Scheme::GaussLaguerre { alpha } => {
            let m = req.quad.nodes;
            let apply = |m: usize| -> Result<f64> {
                let rule = gauss_laguerre(m, alpha)?;
                let mut s = 0.0;
                for (&z, &w) in rule.nodes.iter().zip(&rule.weights) {
                    s += w * u.eval(z)?.0 * z.powf(c - 1.0 - alpha) * mean((4.0 * req.t * z).sqrt())?;
                }
                Ok(s)
            };
            let hi = apply(m)?;
            let lo = apply((m / 2).max(2))?;
            (hi, (hi - lo).abs(), "heat_gauss_laguerre")
        }
        _ => {
            let f = |s: f64| -> Result<f64> {
                let z = s * s;
                let uz = u.eval(z)?.0;
                Ok(2.0 * s.powi(n as i32 - 1) * (-z).exp() * uz * mean(2.0 * req.t.sqrt() * s)?)
            };
            let (v, e) = guarded(f, |g| {
                adaptive_legendre_abs(g, &heat_breaks(), req.quad.nodes, req.quad.rel_tol, abs_tol(req), req.quad.max_subdivisions)
            })?;
            (v, e, "heat_radial")
        }
    };
    Ok(SolveResult {
        value: pre * v,
        est_error: pre * e,
        diagnostics: SolveDiagnostics { nodes_used: count.get(), branch, inner_steps: vec![], certified: true },
    })
}

/// Full-space cross-check for `n ≤ 3`: `k ∫ H^k_n(t, |X − Y|) f(Y) dY` in polar
/// coordinates about `X`, with the angular integral done by a product rule on
/// point values of the datum.
pub fn solve_heat_full_space(req: &SolveRequest) -> Result<SolveResult> {
    req.validate()?;
    if req.n > 3 {
        return Err(Error::UnsupportedDimension(req.n));
    }
    let h = HeatKernel::new(req.n, req.k)?;
    let count = Cell::new(0usize);
    let r_max = 2.0 * req.t.sqrt() * HEAT_S_MAX;
    let f = |r: f64| -> Result<f64> {
        count.set(count.get() + 1);
        let ang = sphere_product(&|y: &[f64]| req.datum.eval(y), &req.x, r, 64)?;
        Ok(r.powi(req.n as i32 - 1) * h.eval(req.t, r)? * ang)
    };
    let breaks: Vec<f64> = heat_breaks().iter().map(|s| s * r_max / HEAT_S_MAX).collect();
    let (v, e) = guarded(f, |g| {
        adaptive_legendre_abs(g, &breaks, req.quad.nodes, req.quad.rel_tol, abs_tol(req), req.quad.max_subdivisions)
    })?;
    Ok(SolveResult {
        value: req.k * v,
        est_error: req.k * e,
        diagnostics: SolveDiagnostics {
            nodes_used: count.get(),
            branch: "heat_full_space",
            inner_steps: vec![],
            certified: true,
        },
    })
}

fn check_wave(req: &SolveRequest) -> Result<bool> {
    req.validate()?;
    if req.problem != Problem::Wave {
        return Err(Error::Config("wave solver called with a heat request".into()));
    }
    Ok(req.k > 0.0 && req.k < 1.0)
}

/// Odd `n`: `w = C_n (t/2) ∫₀¹ F((1+k)/2, 1 − k/2; (n+1)/2; 1 − z) g_X^#(t√z) dz`,
/// integrated in `s = √z`.
pub fn solve_wave_odd(req: &SolveRequest) -> Result<SolveResult> {
    let certified = check_wave(req)?;
    if req.n % 2 == 0 || req.n > 7 {
        return Err(Error::UnsupportedDimension(req.n));
    }
    let norm = Normalization::compute(req.n, req.k)?;
    let cn = norm.odd_c.expect("odd entry");
    let (a, b, c) = ((1.0 + req.k) / 2.0, 1.0 - req.k / 2.0, (req.n as f64 + 1.0) / 2.0);
    let count = Cell::new(0usize);
    let f = |s: f64| -> Result<f64> {
        count.set(count.get() + 1);
        Ok(s * f21_closed(a, b, c, s * s)? * spherical_mean(&req.datum, &req.x, req.t * s, req.n, &req.quad)?)
    };
    let breaks = [0.0, 0.25, 0.5, 0.75, 1.0];
    let (v, e) = guarded(f, |g| {
        adaptive_legendre_abs(g, &breaks, req.quad.nodes, req.quad.rel_tol, abs_tol(req), req.quad.max_subdivisions)
    })?;
    let pre = cn * req.t;
    Ok(SolveResult {
        value: pre * v,
        est_error: pre.abs() * e,
        diagnostics: SolveDiagnostics { nodes_used: count.get(), branch: "wave_odd", inner_steps: vec![], certified },
    })
}

/// `t ∫₀^{π/2} F((1−k)/2, k/2; 1/2; cos²θ) g_X^#(t sin θ) sin θ dθ`, the plane
/// integral without its constant; `z = sin²θ` removes the `(1−z)^{−1/2}` end
/// singularity and graded panels resolve the logarithm at θ = 0.
fn plane_integral(req: &SolveRequest, t: f64, count: &Cell<usize>) -> Result<(f64, f64)> {
    let (a, b) = ((1.0 - req.k) / 2.0, req.k / 2.0);
    let f = |th: f64| -> Result<f64> {
        count.set(count.get() + 1);
        let s = th.sin();
        Ok(s * f21_closed(a, b, 0.5, s * s)? * spherical_mean(&req.datum, &req.x, t * s, req.n, &req.quad)?)
    };
    let breaks = [0.0, 1e-8, 1e-6, 1e-4, 1e-2, 0.1, 0.4, 0.8, 1.2, PI / 2.0];
    let (v, e) = guarded(f, |g| {
        adaptive_legendre_abs(g, &breaks, req.quad.nodes, req.quad.rel_tol, abs_tol(req), req.quad.max_subdivisions)
    })?;
    Ok((t * v, t * e))
}

/// `n = 2`: `w = c₂ (t/2) ∫₀¹ (1−z)^{−1/2} F((1−k)/2, k/2; 1/2; 1−z) g_X^#(t√z) dz`.
pub fn solve_wave_2d(req: &SolveRequest) -> Result<SolveResult> {
    let certified = check_wave(req)?;
    if req.n != 2 {
        return Err(Error::UnsupportedDimension(req.n));
    }
    let c2 = crate::kernels::c2_const(req.k)?;
    let count = Cell::new(0usize);
    let (v, e) = plane_integral(req, req.t, &count)?;
    Ok(SolveResult {
        value: c2 * v,
        est_error: c2 * e,
        diagnostics: SolveDiagnostics { nodes_used: count.get(), branch: "wave_2d", inner_steps: vec![], certified },
    })
}

/// Coefficients of `Π_a (D + a)/a` in powers of `D`, for `a = 1/2, 3/2, …, (n−3)/2`.
fn operator_chain(n: usize) -> Vec<f64> {
    let mut p = vec![1.0];
    let mut a = 0.5;
    while a <= (n as f64 - 3.0) / 2.0 + 1e-12 {
        let mut q = vec![0.0; p.len() + 1];
        for (j, &c) in p.iter().enumerate() {
            q[j] += c;
            q[j + 1] += c / a;
        }
        p = q;
        a += 1.0;
    }
    p
}

/// `Σ_j p_j D^j J(s₀)` from fourth-order centered differences of step `h`.
fn chain_stencil(p: &[f64], vals: &[f64; 7], h: f64) -> f64 {
    let [m3, m2, m1, f0, p1, p2, p3] = *vals;
    let d = [
        f0,
        (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h),
        (-p2 + 16.0 * p1 - 30.0 * f0 + 16.0 * m1 - m2) / (12.0 * h * h),
        (-p3 + 8.0 * p2 - 13.0 * p1 + 13.0 * m1 - 8.0 * m2 + m3) / (8.0 * h * h * h),
    ];
    p.iter().zip(d.iter()).map(|(c, v)| c * v).sum()
}

/// Even `n ≥ 4`: the plane integral `I(x)` at `x = t²` is pushed through the
/// operators `(x d/dx + a)/a`, `a = 1/2, …, (n−3)/2`, by differences in
/// `s = ln x`, with the constant `2π c₂ (n−3)!! / (ω_{n−1} (n−2)!!)`.
pub fn solve_wave_even(req: &SolveRequest) -> Result<SolveResult> {
    let certified = check_wave(req)?;
    if req.n % 2 == 1 || !(4..=8).contains(&req.n) {
        return Err(Error::UnsupportedDimension(req.n));
    }
    let norm = Normalization::compute(req.n, req.k)?;
    let kn = norm.even_solver.expect("even entry");
    let ops = operator_chain(req.n);
    let x0 = req.t * req.t;
    let s0 = x0.ln();
    let count = Cell::new(0usize);
    let inner = |s: f64| -> Result<(f64, f64)> { plane_integral(req, (s.exp()).sqrt(), &count) };
    let apply = |h: f64| -> Result<(f64, f64)> {
        let mut vals = [0.0; 7];
        let mut qerr: f64 = 0.0;
        for (i, v) in vals.iter_mut().enumerate() {
            let (y, e) = inner(s0 + (i as f64 - 3.0) * h)?;
            *v = y;
            qerr = qerr.max(e);
        }
        Ok((chain_stencil(&ops, &vals, h), qerr))
    };
    let h = 0.05 / (1.0 + x0);
    let (v1, _) = apply(h)?;
    let (v2, qerr) = apply(h / 2.0)?;
    let stencil_err = (v2 - v1).abs() / 15.0;
    let scale: f64 = ops.iter().map(|c| c.abs()).sum::<f64>() / (h / 2.0).powi(ops.len() as i32 - 1);
    let est = stencil_err + scale * qerr;
    if !v2.is_finite() {
        return Err(Error::Stencil(format!("operator chain not finite at t = {}", req.t)));
    }
    Ok(SolveResult {
        value: kn * v2,
        est_error: kn * est,
        diagnostics: SolveDiagnostics {
            nodes_used: count.get(),
            branch: "wave_even",
            inner_steps: vec![h, h / 2.0],
            certified,
        },
    })
}

/// Dispatches on problem and dimension.
pub fn solve(req: &SolveRequest) -> Result<SolveResult> {
    match (req.problem, req.n) {
        (Problem::Heat, _) => solve_heat(req),
        (Problem::Wave, 2) => solve_wave_2d(req),
        (Problem::Wave, n) if n % 2 == 1 => solve_wave_odd(req),
        (Problem::Wave, _) => solve_wave_even(req),
    }
}
