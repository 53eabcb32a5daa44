//! Power-series solutions `w^{1/2±m} Σ c_j w^j` of the radial equation about
//! `w = 0`, built from the three-term recurrence alone.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::PhysicalParams;
use crate::specfun::DEGENERACY_TOL;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrobeniusSeries {
    pub exponent: f64,
    pub coefficients: Vec<f64>,
    /// Radius within which the truncated series is accurate to ~1e-13.
    pub radius_hint: f64,
}

/// Complex-energy counterpart used for the deficiency solutions.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexFrobenius {
    pub exponent: f64,
    pub coefficients: Vec<Complex64>,
}

fn check_index(m: f64) -> Result<()> {
    let two_m = 2.0 * m;
    if (two_m - two_m.round()).abs() < DEGENERACY_TOL {
        return Err(Error::DegenerateIndex { two_mu: two_m });
    }
    Ok(())
}

/// `c_j = −(c_{j−1}/κ + E c_{j−2}) / (j (j ± 2m))`, `c_0 = 1`.
fn recurrence(kappa: f64, m: f64, sign: f64, energy: Complex64, order: usize) -> Vec<Complex64> {
    let mut c = Vec::with_capacity(order + 1);
    c.push(Complex64::new(1.0, 0.0));
    for j in 1..=order {
        let jf = j as f64;
        let prev2 = if j >= 2 { c[j - 2] } else { Complex64::default() };
        let num = -(c[j - 1] / kappa + energy * prev2);
        c.push(num / (jf * (jf + sign * 2.0 * m)));
    }
    c
}

pub fn complex_frobenius_pair(
    params: &PhysicalParams,
    energy: Complex64,
    order: usize,
) -> Result<(ComplexFrobenius, ComplexFrobenius)> {
    let m = params.whittaker_index();
    check_index(m)?;
    if order < 2 {
        return Err(Error::Domain(format!("series order must be >= 2, got {order}")));
    }
    let k = params.kappa();
    Ok((
        ComplexFrobenius {
            exponent: 0.5 + m,
            coefficients: recurrence(k, m, 1.0, energy, order),
        },
        ComplexFrobenius {
            exponent: 0.5 - m,
            coefficients: recurrence(k, m, -1.0, energy, order),
        },
    ))
}

/// `(u₊, u₋)` with exponents `1/2 ± m`.
pub fn frobenius_basis(
    params: &PhysicalParams,
    energy: f64,
    order: usize,
) -> Result<(FrobeniusSeries, FrobeniusSeries)> {
    let (p, m) = complex_frobenius_pair(params, Complex64::new(energy, 0.0), order)?;
    let real = |s: ComplexFrobenius| {
        let coefficients: Vec<f64> = s.coefficients.iter().map(|c| c.re).collect();
        let radius_hint = radius_hint(&coefficients);
        FrobeniusSeries {
            exponent: s.exponent,
            coefficients,
            radius_hint,
        }
    };
    Ok((real(p), real(m)))
}

fn radius_hint(c: &[f64]) -> f64 {
    // the largest r where the last few retained terms stay below 1e-13 of c_0
    let tail = &c[c.len().saturating_sub(4)..];
    let n = c.len() - 1;
    tail.iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(i, v)| {
            let j = (n + 1 - tail.len() + i) as f64;
            (1e-13 / v.abs()).powf(1.0 / j)
        })
        .fold(f64::INFINITY, f64::min)
        .min(1e6)
}

impl ComplexFrobenius {
    /// `(u, u')` at `w > 0`, summing until the terms are negligible.
    pub fn eval(&self, w: f64) -> Result<(Complex64, Complex64)> {
        let mut s = Complex64::default();
        let mut ds = Complex64::default();
        let mut pw = 1.0;
        let mut quiet = 0;
        for (j, c) in self.coefficients.iter().enumerate() {
            let t = c * pw;
            s += t;
            ds += t * (j as f64 + self.exponent);
            let big = s.norm().max(ds.norm()).max(1e-300);
            if t.norm() * (j as f64 + 1.0) < 1e-17 * big {
                quiet += 1;
                if quiet >= 3 {
                    let lead = w.powf(self.exponent);
                    return Ok((s * lead, ds * lead / w));
                }
            } else {
                quiet = 0;
            }
            pw *= w;
        }
        Err(Error::Convergence {
            what: "Frobenius series",
            budget: self.coefficients.len(),
        })
    }
}

impl FrobeniusSeries {
    pub fn eval(&self, w: f64) -> Result<(f64, f64)> {
        let c = ComplexFrobenius {
            exponent: self.exponent,
            coefficients: self
                .coefficients
                .iter()
                .map(|&v| Complex64::new(v, 0.0))
                .collect(),
        };
        let (v, d) = c.eval(w)?;
        Ok((v.re, d.re))
    }

    /// Relative residual of the recurrence at each `j >= 1`.
    pub fn recurrence_residuals(&self, params: &PhysicalParams, energy: f64) -> Vec<f64> {
        let kappa = params.kappa();
        let m = params.whittaker_index();
        let sign = if self.exponent > 0.5 { 1.0 } else { -1.0 };
        let c = &self.coefficients;
        (1..c.len())
            .map(|j| {
                let jf = j as f64;
                let prev2 = if j >= 2 { c[j - 2] } else { 0.0 };
                let lhs = c[j] * jf * (jf + sign * 2.0 * m);
                let rhs = -(c[j - 1] / kappa + energy * prev2);
                (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE)
            })
            .collect()
    }
}

/// Default number of coefficients for `|E| w² ≲ 400`.
pub const DEFAULT_ORDER: usize = 600;
