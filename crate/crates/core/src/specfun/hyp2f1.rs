//! Gauss hypergeometric function ₂F₁ on `[0, 1)` and at `z = 1`.

use super::gamma::{digamma, gamma_ratio, is_nonpositive_integer, rgamma};
use super::{Branch, EvalDiagnostics, HypergeomArgs, SeriesControl};
use crate::{Error, Result};

/// `|c − a − b − m|` below this counts as the integer `m`.
pub const INTEGER_GAP_THRESHOLD: f64 = 1e-6;
const DISPATCH_Z: f64 = 0.5;

fn series(a: f64, b: f64, c: f64, z: f64, ctl: &SeriesControl) -> Result<(f64, usize, f64)> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    if z == 0.0 {
        return Ok((1.0, 1, 0.0));
    }
    for j in 0..ctl.max_terms {
        let jf = j as f64;
        term *= (a + jf) * (b + jf) / ((c + jf) * (jf + 1.0)) * z;
        sum += term;
        abs_sum += term.abs();
        if term == 0.0 {
            return Ok((sum, j + 2, f64::EPSILON * abs_sum));
        }
        let ratio = ((a + jf + 1.0) * (b + jf + 1.0) / ((c + jf + 1.0) * (jf + 2.0)) * z).abs();
        if ratio < 1.0 && (term.abs() <= ctl.rel_tol * sum.abs() || term.abs() <= ctl.abs_floor) {
            let tail = term.abs() * ratio / (1.0 - ratio);
            return Ok((sum, j + 2, tail + f64::EPSILON * abs_sum));
        }
    }
    Err(Error::NonConvergence {
        terms: ctl.max_terms,
        partial: sum,
    })
}

fn diag(terms: usize, branch: Branch, est_error: f64) -> EvalDiagnostics {
    EvalDiagnostics {
        terms_used: terms,
        branch,
        est_error,
    }
}

/// ₂F₁(a, b; c; z) for `z ∈ [0, 1)`.
///
/// `z ≤ 0.5` sums the power series; above that the value is carried over to
/// `1 − z`, by the two-term connection formula when `c − a − b` is not an
/// integer and by the logarithmic series otherwise.
pub fn hyp2f1(args: HypergeomArgs, ctl: &SeriesControl) -> Result<(f64, EvalDiagnostics)> {
    ctl.validate()?;
    let HypergeomArgs { a, b, c, z } = args;
    if is_nonpositive_integer(c) {
        return Err(Error::Domain(format!("2F1 with c = {c}")));
    }
    if !(0.0..1.0).contains(&z) {
        return Err(Error::Domain(format!("2F1 supported on [0, 1), got z = {z}")));
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) || z <= DISPATCH_Z {
        let (v, n, e) = series(a, b, c, z, ctl)?;
        return Ok((v, diag(n, Branch::DirectSeries, e)));
    }
    about_one(a, b, c, 1.0 - z, ctl)
}

/// ₂F₁(a, b; c; 1 − w) for `w ∈ (0, 1]`, taking `w` directly so that points
/// close to `z = 1` keep full relative precision in `1 − z`.
pub fn hyp2f1_complement(
    a: f64,
    b: f64,
    c: f64,
    w: f64,
    ctl: &SeriesControl,
) -> Result<(f64, EvalDiagnostics)> {
    ctl.validate()?;
    if !(w > 0.0 && w <= 1.0) {
        return Err(Error::Domain(format!("2F1 complement needs w in (0, 1], got {w}")));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::Domain(format!("2F1 with c = {c}")));
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) || w >= 1.0 - DISPATCH_Z {
        return hyp2f1(HypergeomArgs::gauss(a, b, c, 1.0 - w), ctl);
    }
    about_one(a, b, c, w, ctl)
}

fn about_one(a: f64, b: f64, c: f64, w: f64, ctl: &SeriesControl) -> Result<(f64, EvalDiagnostics)> {
    let d = c - a - b;
    let m = d.round();
    if (d - m).abs() > INTEGER_GAP_THRESHOLD {
        return connection(a, b, c, w, ctl);
    }
    log_series(a, b, c, m as i64, w, ctl)
}

fn connection(a: f64, b: f64, c: f64, w: f64, ctl: &SeriesControl) -> Result<(f64, EvalDiagnostics)> {
    let d = c - a - b;
    let g1 = gamma_ratio(&[c, d], &[c - a, c - b])?;
    let g2 = gamma_ratio(&[c, -d], &[a, b])?;
    let (f1, n1, e1) = if g1 != 0.0 { series(a, b, 1.0 - d, w, ctl)? } else { (0.0, 0, 0.0) };
    let (f2, n2, e2) = if g2 != 0.0 {
        series(c - a, c - b, 1.0 + d, w, ctl)?
    } else {
        (0.0, 0, 0.0)
    };
    let p = w.powf(d);
    let t1 = g1 * f1;
    let t2 = g2 * p * f2;
    let value = t1 + t2;
    let est = g1.abs() * e1 + (g2 * p).abs() * e2 + 4.0 * f64::EPSILON * (t1.abs() + t2.abs());
    Ok((value, diag(n1 + n2, Branch::Connection, est)))
}

/// Logarithmic expansions about `z = 1` for `c − a − b = m` an integer
/// (Abramowitz & Stegun 15.3.10–15.3.12); `w = 1 − z`.
fn log_series(a: f64, b: f64, c: f64, m: i64, w: f64, ctl: &SeriesControl) -> Result<(f64, EvalDiagnostics)> {
    let lnw = w.ln();
    let mu = m.unsigned_abs() as i64;
    let muf = mu as f64;
    let mut fact_mu = 1.0;
    for j in 2..=mu {
        fact_mu *= j as f64;
    }
    // finite part
    let mut finite = 0.0;
    if mu > 0 {
        let (pa, pb, pre) = if m > 0 {
            (a, b, gamma_ratio(&[muf, c], &[a + muf, b + muf])?)
        } else {
            (a - muf, b - muf, gamma_ratio(&[muf, c], &[a, b])? * w.powi(-(mu as i32)))
        };
        let mut t = 1.0;
        let mut s = 0.0;
        for n in 0..mu {
            s += t;
            let nf = n as f64;
            t *= (pa + nf) * (pb + nf) / ((nf + 1.0) * (1.0 - muf + nf)) * w;
        }
        finite = pre * s;
    }
    // logarithmic part: Σ coef_n w^n [ln w − ψ(n+1) − ψ(n+μ+1) + ψ(x+n) + ψ(y+n)]
    let (x, y, lead) = if m > 0 {
        let sign = if mu % 2 == 0 { 1.0 } else { -1.0 };
        // −(z−1)^m = −(−w)^m
        (a + muf, b + muf, -sign * w.powi(mu as i32) * gamma_ratio(&[c], &[a, b])?)
    } else if m < 0 {
        let sign = if mu % 2 == 0 { 1.0 } else { -1.0 };
        (a, b, -sign * c_gamma(c)? * rgamma(a - muf) * rgamma(b - muf))
    } else {
        (a, b, -gamma_ratio(&[c], &[a, b])?)
    };
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut terms = 0;
    if lead != 0.0 {
        let mut coef = 1.0 / fact_mu;
        let mut psi_n1 = digamma(1.0)?;
        let mut psi_nm = digamma(muf + 1.0)?;
        let mut psi_x = digamma(x)?;
        let mut psi_y = digamma(y)?;
        let mut done = false;
        for n in 0..ctl.max_terms {
            let nf = n as f64;
            let t = coef * (lnw - psi_n1 - psi_nm + psi_x + psi_y);
            sum += t;
            abs_sum += t.abs();
            terms = n + 1;
            if n > 2 && t.abs() <= ctl.rel_tol.max(0.25 * f64::EPSILON) * sum.abs().max(ctl.abs_floor) {
                done = true;
                break;
            }
            coef *= (x + nf) * (y + nf) / ((nf + 1.0) * (nf + muf + 1.0)) * w;
            psi_n1 += 1.0 / (nf + 1.0);
            psi_nm += 1.0 / (nf + muf + 1.0);
            psi_x += 1.0 / (x + nf);
            psi_y += 1.0 / (y + nf);
        }
        if !done {
            return Err(Error::NonConvergence {
                terms,
                partial: finite + lead * sum,
            });
        }
    }
    let value = finite + lead * sum;
    if !value.is_finite() {
        return Err(Error::Degenerate(format!(
            "log series for a={a}, b={b}, c={c} is not finite"
        )));
    }
    let est = 4.0 * f64::EPSILON * (finite.abs() + lead.abs() * abs_sum);
    Ok((value, diag(terms, Branch::LogSeries, est)))
}

fn c_gamma(c: f64) -> Result<f64> {
    gamma_ratio(&[c], &[])
}

/// Euler-transformed evaluation `(1 − z)^{c−a−b} ₂F₁(c − a, c − b; c; z)`.
pub fn hyp2f1_euler(args: HypergeomArgs, ctl: &SeriesControl) -> Result<(f64, EvalDiagnostics)> {
    let HypergeomArgs { a, b, c, z } = args;
    let (v, d) = hyp2f1(HypergeomArgs::gauss(c - a, c - b, c, z), ctl)?;
    let p = (1.0 - z).powf(c - a - b);
    Ok((
        p * v,
        EvalDiagnostics {
            branch: Branch::EulerTransform,
            est_error: p * d.est_error,
            ..d
        },
    ))
}

/// Gauss summation ₂F₁(a, b; c; 1) = Γ(c)Γ(c−a−b) / (Γ(c−a)Γ(c−b)).
pub fn hyp2f1_at_one(a: f64, b: f64, c: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(Error::Domain(format!("2F1 with c = {c}")));
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        // terminating: Chu–Vandermonde is the same Γ ratio when it is finite
        if a == 0.0 || b == 0.0 {
            return Ok(1.0);
        }
    }
    let d = c - a - b;
    if d <= 0.0 {
        return Err(Error::Divergence(-d));
    }
    gamma_ratio(&[c, d], &[c - a, c - b])
}
