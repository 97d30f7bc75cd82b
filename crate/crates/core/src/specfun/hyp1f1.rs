//! Kummer ₁F₁ and Tricomi U.

use std::f64::consts::PI;

use super::gamma::{digamma, is_nonpositive_integer, rgamma, sin_pi};
use super::{Branch, EvalDiagnostics, HypergeomArgs, SeriesControl};
use crate::quadrature::{gauss_jacobi, gauss_legendre, Rule};
use crate::{Error, Result};

/// Distance below which `c` counts as an integer for U.
pub const INTEGER_C_THRESHOLD: f64 = 1e-6;
/// Amplification beyond which the two-series form of U is abandoned.
const MAX_AMPLIFICATION: f64 = 1e8;
const SMALL_Z: f64 = 2.0;
const ASYMPTOTIC_TRY_Z: f64 = 12.0;

/// Plain power series of ₁F₁ at `z` (any sign).
fn m_series(a: f64, c: f64, z: f64, ctl: &SeriesControl) -> Result<(f64, usize, f64)> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    if z == 0.0 {
        return Ok((1.0, 1, 0.0));
    }
    for j in 0..ctl.max_terms {
        let jf = j as f64;
        term *= (a + jf) / (c + jf) * z / (jf + 1.0);
        sum += term;
        abs_sum += term.abs();
        if term == 0.0 {
            return Ok((sum, j + 2, f64::EPSILON * abs_sum));
        }
        let ratio = ((a + jf + 1.0) / (c + jf + 1.0) * z / (jf + 2.0)).abs();
        if ratio < 1.0
            && (term.abs() <= ctl.rel_tol * sum.abs() || term.abs() <= ctl.abs_floor)
        {
            let tail = term.abs() * ratio / (1.0 - ratio);
            return Ok((sum, j + 2, tail + f64::EPSILON * abs_sum));
        }
        if !sum.is_finite() {
            return Err(Error::Overflow);
        }
    }
    Err(Error::NonConvergence {
        terms: ctl.max_terms,
        partial: sum,
    })
}

/// Kummer's confluent hypergeometric function ₁F₁(a; c; z).
///
/// Negative `z` goes through Kummer's transformation `e^z ₁F₁(c − a; c; −z)`
/// so the series has no alternating cancellation.
pub fn hyp1f1(args: HypergeomArgs, ctl: &SeriesControl) -> Result<(f64, EvalDiagnostics)> {
    ctl.validate()?;
    let HypergeomArgs { a, c, z, .. } = args;
    if is_nonpositive_integer(c) {
        return Err(Error::Domain(format!("1F1 with c = {c}")));
    }
    if !z.is_finite() {
        return Err(Error::Domain(format!("1F1 at z = {z}")));
    }
    let terminating = is_nonpositive_integer(a);
    let (value, terms, est) = if z < 0.0 && !terminating {
        let (s, n, e) = m_series(c - a, c, -z, ctl)?;
        let f = z.exp();
        (f * s, n, f * e)
    } else {
        m_series(a, c, z, ctl)?
    };
    Ok((
        value,
        EvalDiagnostics {
            terms_used: terms,
            branch: Branch::DirectSeries,
            est_error: est,
        },
    ))
}

/// Tricomi's U(a, c, z) prepared for repeated evaluation at fixed `(a, c)`.
///
/// Supported range: `a ≥ 0`, `z > 0`. Evaluation routes:
///
/// * large `z`: the asymptotic series `z^{−a} Σ (a)_s (a−c+1)_s / s! (−z)^{−s}`
///   when it reaches full precision;
/// * `z ≤ 2`, integer `c`: the logarithmic series (DLMF 13.2.9);
/// * `z ≤ 2`, non-integer `c`: the two-series combination of ₁F₁ values,
///   unless the two halves cancel by more than 10⁸;
/// * otherwise the Laplace integral
///   `Γ(a)^{-1} ∫₀^∞ e^{−zs} s^{a−1} (1+s)^{c−a−1} ds` on graded Gauss panels.
#[derive(Debug, Clone)]
pub struct TricomiU {
    a: f64,
    c: f64,
    ctl: SeriesControl,
    jacobi: Option<(Rule, Rule)>,
}

impl TricomiU {
    pub fn new(a: f64, c: f64, ctl: SeriesControl) -> Result<Self> {
        ctl.validate()?;
        if !(a >= 0.0) || !c.is_finite() {
            return Err(Error::Domain(format!("U supported for a >= 0, got a = {a}, c = {c}")));
        }
        let jacobi = if a > 0.0 {
            Some((gauss_jacobi(24, a - 1.0, 0.0)?, gauss_jacobi(16, a - 1.0, 0.0)?))
        } else {
            None
        };
        Ok(TricomiU { a, c, ctl, jacobi })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn eval(&self, z: f64) -> Result<(f64, EvalDiagnostics)> {
        if !(z > 0.0) || !z.is_finite() {
            return Err(Error::Domain(format!("U requires z > 0, got {z}")));
        }
        let (a, c) = (self.a, self.c);
        if a == 0.0 {
            return Ok((
                1.0,
                EvalDiagnostics {
                    terms_used: 0,
                    branch: Branch::DirectSeries,
                    est_error: 0.0,
                },
            ));
        }
        if z >= ASYMPTOTIC_TRY_Z || is_nonpositive_integer(a - c + 1.0) {
            if let Some(r) = self.asymptotic(z) {
                return Ok(r);
            }
        }
        if z <= SMALL_Z {
            let cr = c.round();
            if c == cr {
                if c >= 1.0 {
                    return self.log_series(a, cr as i64 - 1, z);
                }
                // U(a, c, z) = z^{1−c} U(a − c + 1, 2 − c, z)
                let (v, d) = self.log_series(a - c + 1.0, 1 - cr as i64, z)?;
                let f = z.powf(1.0 - c);
                return Ok((f * v, EvalDiagnostics { est_error: f * d.est_error, ..d }));
            }
            if (c - cr).abs() > INTEGER_C_THRESHOLD {
                if let Some(r) = self.two_series(z)? {
                    return Ok(r);
                }
            }
        }
        self.laplace(z)
    }

    fn asymptotic(&self, z: f64) -> Option<(f64, EvalDiagnostics)> {
        let (a, c) = (self.a, self.c);
        let b = a - c + 1.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut prev = f64::INFINITY;
        for s in 0..self.ctl.max_terms {
            let sf = s as f64;
            term *= -(a + sf) * (b + sf) / ((sf + 1.0) * z);
            if term == 0.0 {
                let f = z.powf(-a);
                return Some((
                    f * sum,
                    EvalDiagnostics {
                        terms_used: s + 1,
                        branch: Branch::Asymptotic,
                        est_error: f * f64::EPSILON * sum.abs(),
                    },
                ));
            }
            if term.abs() > prev {
                return None;
            }
            prev = term.abs();
            sum += term;
            if term.abs() <= 0.25 * f64::EPSILON * sum.abs() {
                let f = z.powf(-a);
                return Some((
                    f * sum,
                    EvalDiagnostics {
                        terms_used: s + 2,
                        branch: Branch::Asymptotic,
                        est_error: f * (term.abs() + f64::EPSILON * sum.abs()),
                    },
                ));
            }
        }
        None
    }

    /// DLMF 13.2.9 for `c = m + 1`, `m ≥ 0`.
    fn log_series(&self, a: f64, m: i64, z: f64) -> Result<(f64, EvalDiagnostics)> {
        let mf = m as f64;
        let mut mfact = 1.0;
        for j in 2..=m {
            mfact *= j as f64;
        }
        let lead = if m % 2 == 0 { -1.0 } else { 1.0 } / mfact * rgamma(a - mf);
        let lnz = z.ln();
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        let mut terms = 0;
        if lead != 0.0 {
            let mut coef = 1.0;
            let mut psi_a = digamma(a)?;
            let mut psi_1 = digamma(1.0)?;
            let mut psi_m = digamma(mf + 1.0)?;
            let mut converged = false;
            for j in 0..self.ctl.max_terms {
                let jf = j as f64;
                let t = coef * (lnz + psi_a - psi_1 - psi_m);
                sum += t;
                abs_sum += t.abs();
                terms = j + 1;
                if j > 2 && t.abs() <= 0.25 * f64::EPSILON * sum.abs().max(1e-300) && coef.abs() <= 0.25 * f64::EPSILON * abs_sum {
                    converged = true;
                    break;
                }
                coef *= (a + jf) / ((mf + 1.0 + jf) * (jf + 1.0)) * z;
                psi_a += 1.0 / (a + jf);
                psi_1 += 1.0 / (jf + 1.0);
                psi_m += 1.0 / (mf + jf + 1.0);
            }
            if !converged {
                return Err(Error::NonConvergence {
                    terms,
                    partial: lead * sum,
                });
            }
        }
        let mut finite = 0.0;
        if m >= 1 {
            let ra = rgamma(a);
            for k in 1..=m {
                // (k−1)! (1 − a + k)_{m−k} / (m − k)!
                let mut kf = 1.0;
                for j in 2..k {
                    kf *= j as f64;
                }
                let mut poch = 1.0;
                for j in 0..(m - k) {
                    poch *= 1.0 - a + k as f64 + j as f64;
                }
                let mut mk = 1.0;
                for j in 2..=(m - k) {
                    mk *= j as f64;
                }
                finite += kf * poch / mk * z.powi(-(k as i32));
            }
            finite *= ra;
        }
        let value = lead * sum + finite;
        let est = f64::EPSILON * 4.0 * (lead.abs() * abs_sum + finite.abs());
        Ok((
            value,
            EvalDiagnostics {
                terms_used: terms,
                branch: Branch::LogSeries,
                est_error: est,
            },
        ))
    }

    fn two_series(&self, z: f64) -> Result<Option<(f64, EvalDiagnostics)>> {
        let (a, c) = (self.a, self.c);
        let (m1, n1, e1) = m_series(a, c, z, &self.ctl)?;
        let (m2, n2, e2) = m_series(a + 1.0 - c, 2.0 - c, z, &self.ctl)?;
        let pre = PI / sin_pi(c);
        let t1 = pre * m1 * rgamma(c) * rgamma(1.0 + a - c);
        let zf = z.powf(1.0 - c);
        let g2 = pre * zf * rgamma(a) * rgamma(2.0 - c);
        let t2 = g2 * m2;
        let value = t1 - t2;
        let scale = t1.abs() + t2.abs();
        if value == 0.0 || scale / value.abs() > MAX_AMPLIFICATION {
            return Ok(None);
        }
        let est = (pre * rgamma(c) * rgamma(1.0 + a - c)).abs() * e1
            + g2.abs() * e2
            + 4.0 * f64::EPSILON * scale;
        Ok(Some((
            value,
            EvalDiagnostics {
                terms_used: n1 + n2,
                branch: Branch::DirectSeries,
                est_error: est,
            },
        )))
    }

    fn laplace(&self, z: f64) -> Result<(f64, EvalDiagnostics)> {
        let (a, c) = (self.a, self.c);
        let p = c - a - 1.0;
        let (hi_rule, lo_rule) = self.jacobi.as_ref().expect("a > 0 has Jacobi rules");
        let scale_len = 1.0 / z;
        let s0 = scale_len.min(1.0);
        let h = |s: f64| (-z * s).exp() * (1.0 + s).powf(p);
        // [0, s0] with weight s^{a−1}
        let half = 0.5 * s0;
        let jac = |r: &Rule| half.powf(a) * r.apply(|u| h(half * (1.0 + u)));
        let mut hi = jac(hi_rule);
        let mut lo = jac(lo_rule);
        let g = |s: f64| s.powf(a - 1.0) * h(s);
        let gl_hi = gauss_legendre(20);
        let gl_lo = gauss_legendre(14);
        let wide = 4.0 * scale_len;
        let s_end = scale_len * (40.0 + 3.0 * (a + p.abs())) + s0;
        let mut x = s0;
        let mut panels = 0usize;
        while x < s_end {
            let width = x.min(wide);
            let y = (x + width).min(s_end);
            hi += gl_hi.apply_on(x, y, g);
            lo += gl_lo.apply_on(x, y, g);
            x = y;
            panels += 1;
        }
        let ra = rgamma(a);
        let value = ra * hi;
        Ok((
            value,
            EvalDiagnostics {
                terms_used: panels,
                branch: Branch::IntegralRep,
                est_error: (ra * (hi - lo)).abs() + 8.0 * f64::EPSILON * value.abs(),
            },
        ))
    }
}

/// Tricomi's confluent hypergeometric function U(a, c, z) for `a ≥ 0`, `z > 0`.
pub fn hypu(args: HypergeomArgs, ctl: &SeriesControl) -> Result<(f64, EvalDiagnostics)> {
    let HypergeomArgs { a, c, z, .. } = args;
    if !(z > 0.0) {
        return Err(Error::Domain(format!("U requires z > 0, got {z}")));
    }
    if a < 0.0 {
        return Err(Error::Domain(format!("U supported for a >= 0, got {a}")));
    }
    TricomiU::new(a, c, *ctl)?.eval(z)
}
