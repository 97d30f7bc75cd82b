//! Gamma, log-gamma, digamma, Pochhammer symbol and double factorial.

use std::f64::consts::PI;

use crate::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `true` when `x` is one of `0, -1, -2, ...`.
pub fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `sin(πx)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if x == x.round() {
        return 0.0;
    }
    let r = x.rem_euclid(2.0);
    if r <= 0.5 {
        (PI * r).sin()
    } else if r <= 1.5 {
        (PI * (1.0 - r)).sin()
    } else {
        (PI * (r - 2.0)).sin()
    }
}

fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn stirling_ln_gamma(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            + inv2
                * (-1.0 / 360.0
                    + inv2
                        * (1.0 / 1260.0
                            + inv2
                                * (-1.0 / 1680.0
                                    + inv2
                                        * (1.0 / 1188.0
                                            + inv2 * (-691.0 / 360_360.0 + inv2 / 156.0))))));
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series
}

/// Returns `(ln|Γ(x)|, sign Γ(x))`.
pub fn log_gamma(x: f64) -> Result<(f64, f64)> {
    if x.is_nan() {
        return Err(Error::Domain("log_gamma of NaN".into()));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        // Γ(x) Γ(1 − x) = π / sin(πx)
        let s = sin_pi(x);
        let (lg, sg) = log_gamma(1.0 - x)?;
        let sign = if s < 0.0 { -sg } else { sg };
        return Ok((PI.ln() - s.abs().ln() - lg, sign));
    }
    if x >= 10.0 {
        return Ok((stirling_ln_gamma(x), 1.0));
    }
    let mut prod = 1.0;
    let mut y = x;
    while y < 10.0 {
        prod *= y;
        y += 1.0;
    }
    Ok((stirling_ln_gamma(y) - prod.ln(), 1.0))
}

/// Γ(x). Overflows to ±∞ beyond x ≈ 171.6.
pub fn gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x > 0.0 && x == x.round() && x <= 30.0 {
        let mut f = 1.0;
        let mut j = 2.0;
        while j < x {
            f *= j;
            j += 1.0;
        }
        return Ok(f);
    }
    let (lg, s) = log_gamma(x)?;
    Ok(s * lg.exp())
}

/// 1/Γ(x), zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    match log_gamma(x) {
        Ok((lg, s)) => s * (-lg).exp(),
        Err(_) => 0.0,
    }
}

/// Digamma ψ(x) = Γ'(x)/Γ(x).
pub fn digamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("digamma of NaN".into()));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x < 0.0 {
        // ψ(x) = ψ(1 − x) − π cot(πx)
        return Ok(digamma(1.0 - x)? - PI * cos_pi(x) / sin_pi(x));
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let tail = inv2
        * (-1.0 / 12.0
            + inv2
                * (1.0 / 120.0
                    + inv2
                        * (-1.0 / 252.0
                            + inv2
                                * (1.0 / 240.0
                                    + inv2
                                        * (-1.0 / 132.0
                                            + inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    Ok(acc + y.ln() - 0.5 / y + tail)
}

/// ψ(1) = −γ.
pub fn euler_gamma() -> f64 {
    EULER_GAMMA
}

/// Rising factorial `(a)_m = a (a+1) ... (a+m-1)` as a running product.
pub fn pochhammer(a: f64, m: u32) -> Result<f64> {
    let mut p = 1.0;
    for j in 0..m {
        p *= a + j as f64;
        if !p.is_finite() {
            return Err(Error::Overflow);
        }
    }
    Ok(p)
}

/// `m!!` with `(-1)!! = 0!! = 1`.
pub fn double_factorial(m: i64) -> Result<f64> {
    if m < -1 {
        return Err(Error::Domain(format!("double factorial of {m}")));
    }
    let mut p = 1.0;
    let mut j = m;
    while j > 1 {
        p *= j as f64;
        j -= 2;
    }
    if !p.is_finite() {
        return Err(Error::Overflow);
    }
    Ok(p)
}

/// Product of gamma powers `Π Γ(x_i)^{e_i}` evaluated in log space with sign
/// tracking. Exponents are ±1. Any numerator pole is an error; a denominator
/// pole makes the whole product zero.
pub fn gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    let mut ln = 0.0;
    let mut sign = 1.0;
    for &x in den {
        if is_nonpositive_integer(x) {
            return Ok(0.0);
        }
    }
    for &x in num {
        let (l, s) = log_gamma(x)?;
        ln += l;
        sign *= s;
    }
    for &x in den {
        let (l, s) = log_gamma(x)?;
        ln -= l;
        sign *= s;
    }
    let v = sign * ln.exp();
    if !v.is_finite() {
        return Err(Error::Overflow);
    }
    Ok(v)
}
