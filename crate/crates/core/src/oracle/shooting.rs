//! Eigenvalues by inward shooting and a 2×2 Wronskian decomposition into the
//! Frobenius pair, matched against the `Σ` domain.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use serde::Serialize;

use super::asymptotic::decaying_whittaker;
use super::frobenius::{complex_frobenius_pair, DEFAULT_ORDER};
use super::ode::{integrate_w, DEFAULT_RTOL};
use crate::error::{Error, Result};
use crate::model::{energy_from_alpha, PhysicalParams};
use crate::sae::{ExtensionAngle, MatchingMode};
use crate::spectrum::branch_interval;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingConfig {
    pub mode: MatchingMode,
    /// Minimum starting point of the inward integration.
    pub z_max: f64,
    pub rtol: f64,
    /// Samples per branch used to bracket sign changes.
    pub samples: usize,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            mode: MatchingMode::Paper,
            z_max: 40.0,
            rtol: DEFAULT_RTOL,
            samples: 48,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingResult {
    pub branch: usize,
    pub alpha: f64,
    pub energy: f64,
    /// `u₊/u₋` coefficient ratio of the decaying solution, mode-scaled.
    pub boundary_ratio: f64,
    /// Change of the energy when the starting point is doubled.
    pub decay_defect: f64,
    pub bracket_width: f64,
}

fn wronskian(f: (Complex64, Complex64), g: (Complex64, Complex64)) -> Complex64 {
    f.0 * g.1 - f.1 * g.0
}

/// Point where solutions are decomposed into the Frobenius pair.
fn matching_point(params: &PhysicalParams, scale: f64) -> f64 {
    params.a().min(1.0).min(2.0 * scale)
}

/// Coefficients of `w^{1/2±m}(1 + …)` in the solution `χ` given at `w0`,
/// read off at `wd`.
fn decompose(
    params: &PhysicalParams,
    energy: Complex64,
    wd: f64,
    chi: (Complex64, Complex64),
) -> Result<(Complex64, Complex64)> {
    let (sp, sm) = complex_frobenius_pair(params, energy, DEFAULT_ORDER)?;
    let (sp, sm) = match (sp.eval(wd), sm.eval(wd)) {
        (Ok(_), Ok(_)) => (sp, sm),
        _ => complex_frobenius_pair(params, energy, 8 * DEFAULT_ORDER)?,
    };
    let up = sp.eval(wd)?;
    let um = sm.eval(wd)?;
    let w = wronskian(up, um);
    let two_m = 2.0 * params.whittaker_index();
    if ((w + two_m) / two_m).norm() > 1e-6 {
        return Err(Error::Conditioning {
            condition: w.norm() / two_m,
        });
    }
    Ok((wronskian(chi, um) / w, wronskian(up, chi) / w))
}

/// Frobenius coefficients `(d₊, d₋)` of `φ₊ = W_{α₊,m}((a+z)/(κα₊))`,
/// obtained by integrating the equation at `E = i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleDeficiency {
    pub d_plus: Complex64,
    pub d_minus: Complex64,
    pub kappa_alpha_plus: Complex64,
    pub m: f64,
}

pub fn oracle_deficiency(params: &PhysicalParams, rtol: f64) -> Result<OracleDeficiency> {
    let m = params.whittaker_index();
    let kappa = params.kappa();
    let alpha = Complex64::from_polar(0.5 / kappa, FRAC_PI_4);
    let ka = alpha * kappa;
    let energy = Complex64::new(0.0, 1.0);
    let mut w_max = (params.a() + 20.0).max(40.0 * ka.norm());
    let (mut w, mut dw, mut rel) = decaying_whittaker(alpha, m, w_max / ka);
    let mut tries = 0;
    while rel > 1e-15 {
        tries += 1;
        if tries > 40 {
            return Err(Error::Asymptotics("deficiency start point".into()));
        }
        w_max *= 1.5;
        (w, dw, rel) = decaying_whittaker(alpha, m, w_max / ka);
    }
    let wd = matching_point(params, 0.5 / kappa);
    let path = integrate_w(params, energy, w_max, [w, dw / ka], wd, rtol, false)?;
    let end = path.last().expect("nonempty").1;
    let (d_plus, d_minus) = decompose(params, energy, wd, (end[0], end[1]))?;
    Ok(OracleDeficiency {
        d_plus,
        d_minus,
        kappa_alpha_plus: ka,
        m,
    })
}

impl OracleDeficiency {
    /// `(p, q)` coefficients of the domain function in the mode's normalization.
    pub fn domain(&self, mode: MatchingMode, sigma: ExtensionAngle) -> (f64, f64) {
        let (dp, dm) = match mode {
            MatchingMode::Rigorous => (self.d_plus, self.d_minus),
            MatchingMode::Paper => (
                self.d_plus * self.kappa_alpha_plus.powf(0.5 + self.m),
                self.d_minus * self.kappa_alpha_plus.powf(0.5 - self.m),
            ),
        };
        let rot = Complex64::from_polar(1.0, -0.5 * sigma.value());
        (2.0 * (rot * dp).re, 2.0 * (rot * dm).re)
    }
}

/// Real Frobenius coefficients of the solution decaying at infinity, scaled
/// to the mode's normalization, for real `α > 0`.
pub fn decaying_coefficients(
    params: &PhysicalParams,
    alpha: f64,
    cfg: &ShootingConfig,
) -> Result<(f64, f64)> {
    let ka = params.kappa() * alpha;
    let energy = Complex64::new(energy_from_alpha(alpha, params.kappa()), 0.0);
    // beyond the turning point x = 4α the other solution dies off like e^{−x};
    // deep states would otherwise span e^{(a+z_max)/κα}, so cap the start in x
    let x_cap = 4.0 * alpha + 25.0 * cfg.z_max.max(2.0);
    let w_max = (params.a() + cfg.z_max)
        .min(ka * x_cap)
        .max(ka * (4.0 * alpha + 50.0));
    let x = w_max / ka;
    let init = [
        Complex64::new(1.0, 0.0),
        Complex64::new((-0.5 + alpha / x) / ka, 0.0),
    ];
    let wd = matching_point(params, ka);
    let path = integrate_w(params, energy, w_max, init, wd, cfg.rtol, true)?;
    let end = path.last().expect("nonempty").1;
    let (cp, cm) = decompose(params, energy, wd, (end[0], end[1]))?;
    let scale = match cfg.mode {
        MatchingMode::Paper => ka.powf(2.0 * params.whittaker_index()),
        MatchingMode::Rigorous => 1.0,
    };
    Ok((cp.re * scale, cm.re))
}

fn mismatch(params: &PhysicalParams, alpha: f64, pq: (f64, f64), cfg: &ShootingConfig) -> Result<f64> {
    let (cp, cm) = decaying_coefficients(params, alpha, cfg)?;
    let norm = (cp * pq.1).abs() + (cm * pq.0).abs();
    Ok((cp * pq.1 - cm * pq.0) / norm.max(f64::MIN_POSITIVE))
}

/// Every eigenvalue the shooting method finds in branch `branch`, with the
/// bracket in energy narrowed to `tol`. The starting point is doubled from
/// `cfg.z_max` until no energy moves by more than `tol/10`.
pub fn shoot_branch(
    params: &PhysicalParams,
    sigma: ExtensionAngle,
    branch: usize,
    tol: f64,
    cfg: &ShootingConfig,
) -> Result<Vec<ShootingResult>> {
    // bisect well below the acceptance threshold so bracket noise cannot
    // masquerade as cutoff dependence
    let inner = tol / 100.0;
    let mut cur = *cfg;
    let mut prev = shoot_branch_once(params, sigma, branch, inner, &cur)?;
    for _ in 0..MAX_DOUBLINGS {
        cur.z_max *= 2.0;
        let next = shoot_branch_once(params, sigma, branch, inner, &cur)?;
        if next.len() == prev.len() {
            let shift = prev
                .iter()
                .zip(&next)
                .map(|(a, b)| (a.energy - b.energy).abs())
                .fold(0.0, f64::max);
            if shift < tol / 10.0 {
                return Ok(prev
                    .into_iter()
                    .zip(next)
                    .map(|(mut a, b)| {
                        a.decay_defect = (a.energy - b.energy).abs();
                        a
                    })
                    .collect());
            }
        }
        prev = next;
    }
    Err(Error::Convergence {
        what: "shooting cutoff doubling",
        budget: MAX_DOUBLINGS,
    })
}

const MAX_DOUBLINGS: usize = 4;

/// The lowest eigenvalue in branch `branch`.
pub fn shoot_eigenvalue(
    params: &PhysicalParams,
    sigma: ExtensionAngle,
    branch: usize,
    tol: f64,
    cfg: &ShootingConfig,
) -> Result<ShootingResult> {
    shoot_branch(params, sigma, branch, tol, cfg)?
        .into_iter()
        .next()
        .ok_or(Error::Convergence {
            what: "sign change in shooting bracket",
            budget: cfg.samples,
        })
}

// Branch n is sampled on (lower, upper] shifted up by OFFSET so a root
// sitting exactly on the upper pole stays inside.
const OFFSET: f64 = 1e-4;

fn shoot_branch_once(
    params: &PhysicalParams,
    sigma: ExtensionAngle,
    branch: usize,
    tol: f64,
    cfg: &ShootingConfig,
) -> Result<Vec<ShootingResult>> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    let kappa = params.kappa();
    let iv = branch_interval(params.whittaker_index(), branch);
    let lo = (iv.lower + OFFSET).max(1e-3);
    let hi = iv.upper + OFFSET;
    let def = oracle_deficiency(params, cfg.rtol)?;
    let pq = def.domain(cfg.mode, sigma);
    let g = |a: f64| mismatch(params, a, pq, cfg);

    let n = cfg.samples.max(4);
    let mut results = Vec::new();
    let mut prev = (lo, g(lo)?);
    for i in 1..=n {
        let a = lo + (hi - lo) * i as f64 / n as f64;
        let v = g(a)?;
        if (v > 0.0) != (prev.1 > 0.0) || v == 0.0 {
            let (mut l, mut r, mut gl) = (prev.0, a, prev.1);
            let mut iters = 0;
            while (energy_from_alpha(r, kappa) - energy_from_alpha(l, kappa)).abs() > tol {
                iters += 1;
                if iters > 200 {
                    return Err(Error::Convergence {
                        what: "shooting bisection",
                        budget: 200,
                    });
                }
                let mid = 0.5 * (l + r);
                if mid <= l || mid >= r {
                    break;
                }
                let gm = g(mid)?;
                if (gm > 0.0) == (gl > 0.0) && gm != 0.0 {
                    l = mid;
                    gl = gm;
                } else {
                    r = mid;
                }
            }
            let alpha = 0.5 * (l + r);
            let (cp, cm) = decaying_coefficients(params, alpha, cfg)?;
            results.push(ShootingResult {
                branch,
                alpha,
                energy: energy_from_alpha(alpha, kappa),
                boundary_ratio: cp / cm,
                decay_defect: 0.0,
                bracket_width: (energy_from_alpha(r, kappa) - energy_from_alpha(l, kappa)).abs(),
            });
        }
        prev = (a, v);
    }
    Ok(results)
}
