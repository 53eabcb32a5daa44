//! Bound-state spectrum: pole-aware bracketing of the eigenvalue condition,
//! eigenfunctions, normalization and sample tables of the spectral function.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{energy_from_alpha, PhysicalParams};
use crate::quad;
use crate::sae::{
    boundary_rhs, deficiency_data, f_of_alpha, spectral_function, DeficiencyData, ExtReal, ExtensionAngle,
    MatchingMode,
};
use crate::specfun::whittaker_w;

pub const BISECTION_BUDGET: usize = 200;
/// Roots with `α` at or below this are discarded (`E → −∞`).
pub const ALPHA_MIN: f64 = 1e-8;
pub const POLE_GUARD: f64 = 1e-6;
const SAMPLES_PER_PIECE: usize = 64;

/// Open `α` interval of branch `index`; its upper end is a pole of `f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchInterval {
    pub index: usize,
    pub lower: f64,
    pub upper: f64,
}

impl BranchInterval {
    pub fn contains(&self, alpha: f64) -> bool {
        alpha > self.lower && alpha <= self.upper
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundState {
    pub branch: usize,
    pub alpha: f64,
    pub energy: f64,
    /// `N` with `N² = ∫ χ² dz`; filled in by [`Spectrum::normalized`].
    pub norm_constant: Option<f64>,
}

/// A branch whose root count differs from the single root the pole
/// structure suggests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchAnomaly {
    pub branch: usize,
    pub roots: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub rhs: ExtReal,
    pub states: Vec<BoundState>,
    pub anomalies: Vec<BranchAnomaly>,
}

/// `I_0 ..= I_{n_max}`: `(0, 1/2+m]`, then `(1/2+m+n−1, 1/2+m+n]`.
pub fn branch_intervals(m: f64, n_max: usize) -> Vec<BranchInterval> {
    (0..=n_max).map(|n| branch_interval(m, n)).collect()
}

pub fn branch_interval(m: f64, n: usize) -> BranchInterval {
    let first_pole = 0.5 + m;
    if n == 0 {
        BranchInterval {
            index: 0,
            lower: 0.0,
            upper: first_pole,
        }
    } else {
        BranchInterval {
            index: n,
            lower: first_pole + (n - 1) as f64,
            upper: first_pole + n as f64,
        }
    }
}

/// Zeros `α = 1/2 − m + k` of `f` strictly inside `(lo, hi)`.
pub fn f_zeros_in(m: f64, lo: f64, hi: f64) -> Vec<f64> {
    let k0 = (lo - 0.5 + m).floor().max(0.0) as i64;
    (k0..)
        .map(|k| 0.5 - m + k as f64)
        .skip_while(|&z| z <= lo)
        .take_while(|&z| z < hi)
        .collect()
}

/// Poles `α = 1/2 + m + n` of `f` inside `[lo, hi]`.
pub fn f_poles_in(m: f64, lo: f64, hi: f64) -> Vec<f64> {
    (0..)
        .map(|n| 0.5 + m + n as f64)
        .skip_while(|&p| p < lo)
        .take_while(|&p| p <= hi)
        .collect()
}

fn mismatch(alpha: f64, data: &DeficiencyData, rhs: f64) -> f64 {
    match spectral_function(alpha, data) {
        ExtReal::Finite(v) => v - rhs,
        ExtReal::Infinite => f64::INFINITY,
    }
}

fn bisect<F: Fn(f64) -> f64>(h: F, mut lo: f64, mut hi: f64, tol: f64, branch: usize) -> Result<f64> {
    let mut hlo = h(lo);
    for _ in 0..BISECTION_BUDGET {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol * mid.max(1.0) || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let hm = h(mid);
        if hm == 0.0 {
            return Ok(mid);
        }
        if (hm > 0.0) == (hlo > 0.0) {
            lo = mid;
            hlo = hm;
        } else {
            hi = mid;
        }
    }
    Err(Error::BranchConvergence { branch })
}

fn sample_points(lo: f64, hi: f64, geometric: bool) -> Vec<f64> {
    let n = SAMPLES_PER_PIECE;
    let mut pts: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    if geometric {
        let r = (hi / lo).ln();
        pts.extend((1..n).map(|i| lo * (r * i as f64 / n as f64).exp()));
        pts.sort_by(f64::total_cmp);
    }
    pts
}

/// All roots of `spectral_function(α) = rhs` in branch `n`.
fn roots_in_branch(data: &DeficiencyData, rhs: ExtReal, n: usize, tol: f64) -> Result<Vec<f64>> {
    let iv = branch_interval(data.m, n);
    let rhs = match rhs {
        ExtReal::Infinite => return Ok(vec![iv.upper]),
        ExtReal::Finite(0.0) => {
            return Ok(f_zeros_in(data.m, iv.lower.max(ALPHA_MIN), iv.upper));
        }
        ExtReal::Finite(v) => v,
    };
    let lo = if n == 0 { ALPHA_MIN } else { iv.lower + POLE_GUARD };
    let hi = iv.upper - POLE_GUARD;
    let mut cuts = vec![lo];
    cuts.extend(f_zeros_in(data.m, lo, hi));
    cuts.push(hi);
    let h = |a: f64| mismatch(a, data, rhs);
    let mut roots = Vec::new();
    for (i, w) in cuts.windows(2).enumerate() {
        let pts = sample_points(w[0], w[1], n == 0 && i == 0);
        let mut prev = (pts[0], h(pts[0]));
        for &a in &pts[1..] {
            let v = h(a);
            if prev.1 == 0.0 {
                roots.push(prev.0);
            } else if v != 0.0 && (v > 0.0) != (prev.1 > 0.0) {
                roots.push(bisect(h, prev.0, a, tol, n)?);
            }
            prev = (a, v);
        }
        if prev.1 == 0.0 {
            roots.push(prev.0);
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
    Ok(roots)
}

/// Bound states in branches `0..n_max`, ordered by energy.
///
/// `tol` bounds the relative width of the final bisection bracket in `α`.
pub fn solve_spectrum(
    params: &PhysicalParams,
    sigma: ExtensionAngle,
    mode: MatchingMode,
    n_max: usize,
    tol: f64,
) -> Result<Spectrum> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    let data = deficiency_data(params, mode)?;
    let rhs = boundary_rhs(&data, sigma);
    let mut states = Vec::new();
    let mut anomalies = Vec::new();
    for n in 0..n_max {
        let roots = roots_in_branch(&data, rhs, n, tol)?;
        if n > 0 && roots.len() != 1 {
            anomalies.push(BranchAnomaly {
                branch: n,
                roots: roots.len(),
            });
        }
        states.extend(
            roots
                .into_iter()
                .filter(|&a| a > ALPHA_MIN)
                .map(|alpha| BoundState {
                    branch: n,
                    alpha,
                    energy: energy_from_alpha(alpha, params.kappa()),
                    norm_constant: None,
                }),
        );
    }
    Ok(Spectrum {
        rhs,
        states,
        anomalies,
    })
}

impl Spectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.energy).collect()
    }

    /// Fill in every state's normalization constant.
    pub fn normalized(mut self, params: &PhysicalParams, quad_tol: f64) -> Result<Self> {
        for s in &mut self.states {
            s.norm_constant = Some(normalize(params, s, quad_tol)?);
        }
        Ok(self)
    }
}

/// `χ(z) = W_{α,m}((a+z)/(κα))`, unnormalized.
pub fn eigenfunction(params: &PhysicalParams, state: &BoundState, z: f64) -> Result<f64> {
    if !(z > -params.a()) {
        return Err(Error::Domain(format!("z = {z} outside the model domain")));
    }
    let k = num_complex::Complex64::new(state.alpha, 0.0);
    let x = num_complex::Complex64::new((params.a() + z) / (params.kappa() * state.alpha), 0.0);
    let v = whittaker_w(k, params.whittaker_index(), x)?;
    if v.im.abs() > 1e-10 * v.re.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::Domain(format!("eigenfunction not real at z = {z}: {v}")));
    }
    Ok(v.re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    pub norm: f64,
    pub cutoff: f64,
    pub tail_bound: f64,
    pub quad_error: f64,
}

/// `N = (∫₀^∞ χ² dz)^{1/2}` with relative accuracy `quad_tol`.
pub fn normalize(params: &PhysicalParams, state: &BoundState, quad_tol: f64) -> Result<f64> {
    Ok(normalize_detailed(params, state, quad_tol, 1.0)?.norm)
}

/// As [`normalize`], with the automatically chosen cutoff (in `z`) scaled by
/// `cutoff_scale >= 1`.
///
/// Beyond the cutoff `χ²` decays at least as fast as `e^{−(1−2α/x)x}`, which
/// bounds the tail by `χ(Z)² κα / (1 − 2α/x_Z)`.
pub fn normalize_detailed(
    params: &PhysicalParams,
    state: &BoundState,
    quad_tol: f64,
    cutoff_scale: f64,
) -> Result<NormReport> {
    if !(quad_tol > 0.0) || !(cutoff_scale >= 1.0) {
        return Err(Error::Domain(
            "quad_tol must be positive and cutoff_scale >= 1".into(),
        ));
    }
    let scale = params.kappa() * state.alpha;
    let chi = |z: f64| eigenfunction(params, state, z);
    let coarse = |z_end: f64| -> Result<f64> {
        let (v, _) = quad::integrate(|z| Ok(chi(z)?.powi(2)), 0.0, z_end, f64::INFINITY)?;
        Ok(v)
    };

    let mut x_cut = (4.0 * state.alpha + 20.0).max(params.a() / scale + 5.0);
    let mut cutoff;
    let mut tail;
    let mut estimate = coarse(scale * x_cut - params.a())?;
    let mut tries = 0;
    loop {
        cutoff = scale * x_cut - params.a();
        let c = chi(cutoff)?;
        tail = c * c * scale / (1.0 - 2.0 * state.alpha / x_cut);
        estimate = estimate.max(f64::MIN_POSITIVE);
        if tail <= 1e-2 * quad_tol * estimate {
            break;
        }
        tries += 1;
        if tries > 60 {
            return Err(Error::Quadrature {
                tol: quad_tol,
                estimate: tail / estimate,
            });
        }
        x_cut *= 1.25;
        estimate = coarse(scale * x_cut - params.a())?;
    }
    cutoff = (cutoff + params.a()) * cutoff_scale - params.a();
    let abs_tol = 0.5 * quad_tol * estimate;
    // split at a few multiples of the decay length so the adaptive rule starts well
    let pieces = ((cutoff / scale).ceil() as usize).clamp(1, 400);
    let mut total = 0.0;
    let mut err = 0.0;
    for i in 0..pieces {
        let lo = cutoff * i as f64 / pieces as f64;
        let hi = cutoff * (i + 1) as f64 / pieces as f64;
        let (v, e) = quad::integrate(|z| Ok(chi(z)?.powi(2)), lo, hi, abs_tol / pieces as f64)?;
        total += v;
        err += e;
    }
    if !(total > 0.0) {
        return Err(Error::Quadrature {
            tol: quad_tol,
            estimate: total,
        });
    }
    Ok(NormReport {
        norm: total.sqrt(),
        cutoff,
        tail_bound: tail,
        quad_error: err,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FSample {
    pub alpha: f64,
    pub f: f64,
}

/// `count` samples of `f` on a uniform grid over `alpha_range`, each point
/// pushed out of the guard band around the poles `α = 1/2 + m + n`.
pub fn fplot_samples(m: f64, alpha_range: (f64, f64), count: usize) -> Result<Vec<FSample>> {
    let (lo, hi) = alpha_range;
    if count < 2 || !(lo < hi) || !(lo > 0.0) || !hi.is_finite() {
        return Err(Error::Domain(format!(
            "need count >= 2 and 0 < alpha_min < alpha_max, got {count} samples on ({lo}, {hi})"
        )));
    }
    let poles = f_poles_in(m, lo - POLE_GUARD, hi + POLE_GUARD);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let mut a = lo + (hi - lo) * i as f64 / (count - 1) as f64;
        if let Some(&p) = poles.iter().find(|&&p| (a - p).abs() < POLE_GUARD) {
            a = if a < p { p - POLE_GUARD } else { p + POLE_GUARD };
        }
        let f = f_of_alpha(a, m)
            .finite()
            .expect("sample kept out of the pole guard band");
        out.push(FSample { alpha: a, f });
    }
    Ok(out)
}
