//! Whittaker functions `M_{k,μ}` and `W_{k,μ}` for complex `k`, real `μ`.
//!
//! `W` uses the Kummer connection formula near the origin and its
//! asymptotic expansion at large `|x|`. In between, the connection formula
//! loses `~|e^{x}|` to cancellation, so the value is obtained by Taylor
//! continuation of the Whittaker equation inward from the asymptotic region
//! along the ray through `x`. Inward is the direction in which `W` is
//! dominant, which keeps the continuation stable.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{recip_gamma, sin_pi};
use super::kummer::{kummer_m, CompensatedSum};
use super::taylor::QuadraticOde;
use crate::error::{Error, Result};

pub const DEGENERACY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhittakerConfig {
    /// `|x|` at and above which the asymptotic expansion is used directly.
    pub switchover: f64,
    /// `|x|` at and below which the connection formula is used.
    pub series_radius: f64,
    pub degeneracy_tol: f64,
}

impl Default for WhittakerConfig {
    fn default() -> Self {
        Self {
            switchover: 30.0,
            series_radius: 4.0,
            degeneracy_tol: DEGENERACY_TOL,
        }
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn check_degenerate(mu: f64, tol: f64) -> Result<()> {
    let two_mu = 2.0 * mu;
    if (two_mu - two_mu.round()).abs() < tol {
        return Err(Error::DegenerateIndex { two_mu });
    }
    Ok(())
}

fn check_argument(x: Complex64) -> Result<()> {
    if x.norm() == 0.0 || !x.re.is_finite() || !x.im.is_finite() {
        return Err(Error::Domain(format!(
            "Whittaker argument {x} must be finite and nonzero"
        )));
    }
    Ok(())
}

/// `M_{k,μ}(x) = e^{−x/2} x^{1/2+μ} M(1/2+μ−k, 1+2μ, x)`.
pub fn whittaker_m(k: Complex64, mu: f64, x: Complex64) -> Result<Complex64> {
    Ok(whittaker_m_and_derivative(k, mu, x)?.0)
}

/// `M_{k,μ}` together with its derivative in `x`.
pub fn whittaker_m_and_derivative(k: Complex64, mu: f64, x: Complex64) -> Result<(Complex64, Complex64)> {
    check_argument(x)?;
    let s = 0.5 + mu;
    let (a, b) = (c(s) - k, c(1.0 + 2.0 * mu));
    let m = kummer_m(a, b, x)?;
    let dm = a / b * kummer_m(a + 1.0, b + 1.0, x)?;
    let pre = (-x / 2.0).exp() * x.powf(s);
    let value = pre * m;
    Ok((value, value * (c(-0.5) + s / x) + pre * dm))
}

/// Truncated asymptotic expansion of `W` and `dW/dx`; the third entry is the
/// relative size of the first omitted term.
pub fn whittaker_w_asymptotic(k: Complex64, mu: f64, x: Complex64) -> (Complex64, Complex64, f64) {
    let p = c(0.5 + mu) - k;
    let q = c(0.5 - mu) - k;
    let w = -x.inv();
    let mut val = CompensatedSum::default();
    let mut der = CompensatedSum::default();
    let mut term = c(1.0);
    val.add(term);
    der.add(term * (c(-0.5) + k / x));
    let mut last = 1.0_f64;
    let mut omitted = 0.0;
    for s in 0..500 {
        let sf = s as f64;
        let next = term * (p + sf) * (q + sf) / (sf + 1.0) * w;
        let n = next.norm();
        if n == 0.0 {
            omitted = 0.0;
            break;
        }
        if n > last {
            omitted = last;
            break;
        }
        val.add(next);
        der.add(next * (c(-0.5) + (k - (sf + 1.0)) / x));
        term = next;
        last = n;
        omitted = n;
        if n <= 1e-17 * val.value().norm() {
            break;
        }
    }
    let pre = (-x / 2.0).exp() * x.powc(k);
    let v = val.value();
    (pre * v, pre * der.value(), omitted / v.norm().max(1e-300))
}

/// Connection formula: `W = π/sin π(1+2μ) · e^{−x/2} x^{1/2+μ} [ … ]`.
pub fn whittaker_w_connection(k: Complex64, mu: f64, x: Complex64) -> Result<(Complex64, Complex64)> {
    let (up, dup) = whittaker_m_and_derivative(k, mu, x)?;
    let (um, dum) = whittaker_m_and_derivative(k, -mu, x)?;
    let (ca, cb) = connection_pair(k, mu);
    Ok((ca * up - cb * um, ca * dup - cb * dum))
}

/// Coefficients `(𝒜, ℬ)` with `W_{k,μ} = 𝒜·M_{k,μ} − ℬ·M_{k,−μ}`; entire in `k`.
pub fn connection_pair(k: Complex64, mu: f64) -> (Complex64, Complex64) {
    let pref = c(PI) / sin_pi(c(1.0 + 2.0 * mu));
    let a = pref * recip_gamma(c(0.5 - mu) - k) * recip_gamma(c(1.0 + 2.0 * mu));
    let b = pref * recip_gamma(c(0.5 + mu) - k) * recip_gamma(c(1.0 - 2.0 * mu));
    (a, b)
}

pub fn whittaker_w(k: Complex64, mu: f64, x: Complex64) -> Result<Complex64> {
    Ok(whittaker_w_with(&WhittakerConfig::default(), k, mu, x)?.0)
}

pub fn whittaker_w_and_derivative(k: Complex64, mu: f64, x: Complex64) -> Result<(Complex64, Complex64)> {
    whittaker_w_with(&WhittakerConfig::default(), k, mu, x)
}

const ASYMPTOTIC_ACCURACY: f64 = 1e-15;

pub fn whittaker_w_with(
    cfg: &WhittakerConfig,
    k: Complex64,
    mu: f64,
    x: Complex64,
) -> Result<(Complex64, Complex64)> {
    check_degenerate(mu, cfg.degeneracy_tol)?;
    check_argument(x)?;
    let r = x.norm();
    if r <= cfg.series_radius {
        return whittaker_w_connection(k, mu, x);
    }
    let mut start = r.max(cfg.switchover);
    for _ in 0..12 {
        let xs = x * (start / r);
        let (w, dw, rel) = whittaker_w_asymptotic(k, mu, xs);
        if rel <= ASYMPTOTIC_ACCURACY {
            if start == r {
                return Ok((w, dw));
            }
            return QuadraticOde::whittaker(k, mu).continue_along(xs, w, dw, x, 2.0);
        }
        start *= 1.5;
    }
    Err(Error::Convergence {
        what: "Whittaker W asymptotic start",
        budget: 12,
    })
}
