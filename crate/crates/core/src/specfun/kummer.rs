//! Kummer's confluent hypergeometric function `M(a, b, x)`.
//!
//! Three regimes: the power series for `|x| <= series_radius`, Taylor
//! continuation of the Kummer equation out to `asymptotic_threshold`, and
//! the two-sided asymptotic expansion beyond that. Arguments with `Re x < 0`
//! are first mapped through `M(a, b, x) = e^x M(b − a, b, −x)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{gamma, pole_index, recip_gamma};
use super::taylor::QuadraticOde;
use crate::error::{Error, Result};

pub const SERIES_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerConfig {
    pub series_radius: f64,
    pub asymptotic_threshold: f64,
}

impl Default for KummerConfig {
    fn default() -> Self {
        Self {
            series_radius: 8.0,
            asymptotic_threshold: 40.0,
        }
    }
}

/// Neumaier-compensated accumulator for complex terms.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier(acc: &mut (f64, f64), x: f64) {
    let t = acc.0 + x;
    if acc.0.abs() >= x.abs() {
        acc.1 += (acc.0 - t) + x;
    } else {
        acc.1 += (x - t) + acc.0;
    }
    acc.0 = t;
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, z.re);
        neumaier(&mut self.im, z.im);
    }

    pub(crate) fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

fn check_b(b: Complex64) -> Result<()> {
    if pole_index(b).is_some() {
        return Err(Error::Pole { re: b.re, im: b.im });
    }
    Ok(())
}

/// Direct power series, valid for any `x` but only accurate for moderate `|x|`.
pub fn kummer_series(a: Complex64, b: Complex64, x: Complex64) -> Result<Complex64> {
    check_b(b)?;
    let mut acc = CompensatedSum::default();
    let mut term = Complex64::new(1.0, 0.0);
    acc.add(term);
    let mut small = 0;
    for k in 0..SERIES_BUDGET {
        let kf = k as f64;
        term = term * (a + kf) / ((b + kf) * (kf + 1.0)) * x;
        acc.add(term);
        if term == Complex64::new(0.0, 0.0) {
            return Ok(acc.value());
        }
        // terms only shrink for good once k exceeds |x| and |a|
        if kf > x.norm() && kf > a.norm() && term.norm() <= 1e-17 * acc.value().norm() {
            small += 1;
            if small >= 2 {
                return Ok(acc.value());
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Convergence {
        what: "Kummer series",
        budget: SERIES_BUDGET,
    })
}

/// Sum of `Π (p)_s (q)_s / s! · w^s`, truncated at its smallest term.
/// Returns the sum and the magnitude of the first omitted term.
pub(crate) fn asymptotic_sum(p: Complex64, q: Complex64, w: Complex64) -> (Complex64, f64) {
    let mut acc = CompensatedSum::default();
    let mut term = Complex64::new(1.0, 0.0);
    acc.add(term);
    let mut last = 1.0_f64;
    for s in 0..500 {
        let sf = s as f64;
        let next = term * (p + sf) * (q + sf) / (sf + 1.0) * w;
        let n = next.norm();
        if n == 0.0 {
            return (acc.value(), 0.0);
        }
        if n > last {
            return (acc.value(), last);
        }
        acc.add(next);
        term = next;
        last = n;
        if n <= 1e-17 * acc.value().norm() {
            return (acc.value(), n);
        }
    }
    (acc.value(), last)
}

/// Large-`|x|` expansion, `Re x >= 0` assumed.
pub fn kummer_asymptotic(a: Complex64, b: Complex64, x: Complex64) -> Result<Complex64> {
    check_b(b)?;
    let one = Complex64::new(1.0, 0.0);
    let (s1, e1) = asymptotic_sum(one - a, b - a, x.inv());
    let (s2, e2) = asymptotic_sum(a, a - b + 1.0, -x.inv());
    let phase = if x.im > 0.0 {
        (Complex64::i() * PI * a).exp()
    } else if x.im < 0.0 {
        (-Complex64::i() * PI * a).exp()
    } else {
        // on the Stokes line the recessive term takes the average
        super::gamma::cos_pi(a)
    };
    let t1 = x.exp() * x.powc(a - b) * recip_gamma(a) * s1;
    let t2 = phase * x.powc(-a) * recip_gamma(b - a) * s2;
    let total = t1 + t2;
    let err = e1 * t1.norm() / s1.norm().max(1e-300) + e2 * t2.norm() / s2.norm().max(1e-300);
    if err > 1e-8 * total.norm() {
        return Err(Error::Convergence {
            what: "Kummer asymptotic expansion",
            budget: 500,
        });
    }
    Ok(gamma(b)? * total)
}

pub fn kummer_m(a: Complex64, b: Complex64, x: Complex64) -> Result<Complex64> {
    kummer_m_with(&KummerConfig::default(), a, b, x)
}

pub fn kummer_m_with(cfg: &KummerConfig, a: Complex64, b: Complex64, x: Complex64) -> Result<Complex64> {
    check_b(b)?;
    if x.re < 0.0 {
        return Ok(x.exp() * kummer_m_with(cfg, b - a, b, -x)?);
    }
    let r = x.norm();
    if r <= cfg.series_radius {
        kummer_series(a, b, x)
    } else if r >= cfg.asymptotic_threshold {
        kummer_asymptotic(a, b, x)
    } else {
        let x0 = x * (cfg.series_radius / r);
        let y0 = kummer_series(a, b, x0)?;
        let dy0 = a / b * kummer_series(a + 1.0, b + 1.0, x0)?;
        let (y, _) = QuadraticOde::kummer(a, b).continue_along(x0, y0, dy0, x, 2.0)?;
        Ok(y)
    }
}

/// `(M(a, b, x), dM/dx)`.
pub fn kummer_m_and_derivative(a: Complex64, b: Complex64, x: Complex64) -> Result<(Complex64, Complex64)> {
    let m = kummer_m(a, b, x)?;
    let dm = a / b * kummer_m(a + 1.0, b + 1.0, x)?;
    Ok((m, dm))
}
