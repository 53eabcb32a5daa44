//! Positive-energy solutions `ψ = C·M_{iα̃,m}(y) + D·W_{iα̃,m}(y)`,
//! `y = (a+z)/(iκα̃)`, matched to the `Σ` domain at short distance, and the
//! phase shift they define.
//!
//! Reference waves are `e^{±iθ(z)}`, `θ = kz + α̃ ln 2kz` with `k = √E`,
//! i.e. the Coulomb phase `kz − η ln 2kz` with `η = −1/(2κk) = −α̃`.
//! `S` is the outgoing amplitude over the incoming one and `δ = arg(S)/2`.
//! Other conventions for the logarithmic term shift `δ` by an
//! energy-dependent constant.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{alpha_tilde_from_energy, Energy, PhysicalParams};
use crate::sae::{deficiency_data, ExtensionAngle, MatchingMode};
use crate::specfun::{check_degenerate, connection_pair, ComplexValue, DEGENERACY_TOL};

/// Relative size below which a channel is treated as vanishing.
pub const CHANNEL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringSolution {
    pub energy: f64,
    pub alpha_tilde: f64,
    pub sigma: f64,
    pub mode: MatchingMode,
    /// Coefficient of `M_{iα̃,m}`.
    pub c: ComplexValue,
    /// Coefficient of `W_{iα̃,m}`.
    pub d: ComplexValue,
    /// `C/D`; infinite when the `W` channel drops out.
    pub ratio_c_over_d: ComplexValue,
    pub phase_shift: f64,
    pub s_matrix: ComplexValue,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Factors taking the `y^{1/2±m}` coefficients to the matching
/// normalization.
fn channel_factors(mode: MatchingMode, kappa: f64, alpha_tilde: f64, m: f64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let base = match mode {
        MatchingMode::Paper => i,
        MatchingMode::Rigorous => i * kappa * alpha_tilde,
    };
    (base.powf(-(0.5 + m)), base.powf(-(0.5 - m)))
}

pub fn scattering_coefficients(
    params: &PhysicalParams,
    sigma: ExtensionAngle,
    energy: f64,
) -> Result<ScatteringSolution> {
    scattering_coefficients_with(params, sigma, energy, MatchingMode::default())
}

pub fn scattering_coefficients_with(
    params: &PhysicalParams,
    sigma: ExtensionAngle,
    energy: f64,
    mode: MatchingMode,
) -> Result<ScatteringSolution> {
    let e = Energy::new(energy)?;
    if !e.is_scattering() {
        return Err(Error::Domain(format!("scattering needs E > 0, got {energy}")));
    }
    let m = params.whittaker_index();
    check_degenerate(m, DEGENERACY_TOL)?;
    let at = alpha_tilde_from_energy(e, params.kappa())?;
    let data = deficiency_data(params, mode)?;
    let (p, q) = data.domain_coefficients(sigma);
    let (ca, cb) = connection_pair(Complex64::new(0.0, at), m);
    let (sp, sm) = channel_factors(mode, params.kappa(), at, m);

    let c_channel = -(ca * sp * q + cb * sm * p);
    let d_channel = sp * q;
    let size = (ca * sp).norm().max((cb * sm).norm()).max(sp.norm()) * p.abs().max(q.abs());
    let (cc, dd) = if d_channel.norm() >= CHANNEL_TOL * c_channel.norm() {
        (c_channel / d_channel, c(1.0))
    } else {
        (c(1.0), d_channel / c_channel)
    };
    if c_channel.norm().max(d_channel.norm()) < 1e-14 * size {
        return Err(Error::Conditioning {
            condition: size / c_channel.norm().max(d_channel.norm()).max(f64::MIN_POSITIVE),
        });
    }
    let mut sol = ScatteringSolution {
        energy,
        alpha_tilde: at,
        sigma: sigma.value(),
        mode,
        c: cc,
        d: dd,
        ratio_c_over_d: cc / dd,
        phase_shift: 0.0,
        s_matrix: c(0.0),
    };
    sol.s_matrix = s_matrix(&sol, params)?;
    sol.phase_shift = 0.5 * sol.s_matrix.arg();
    Ok(sol)
}

/// Coefficients of `(a+z)^{1/2±m}` (or `(a+z)/(κα̃)`-powers in paper mode)
/// in the matched solution.
pub fn short_distance_coefficients(
    sol: &ScatteringSolution,
    params: &PhysicalParams,
) -> (ComplexValue, ComplexValue) {
    let m = params.whittaker_index();
    let (ca, cb) = connection_pair(Complex64::new(0.0, sol.alpha_tilde), m);
    let (sp, sm) = channel_factors(sol.mode, params.kappa(), sol.alpha_tilde, m);
    ((sol.c + sol.d * ca) * sp, -sol.d * cb * sm)
}

/// `(incoming, outgoing)` amplitudes of `e^{∓iθ(z)}` up to a common factor.
///
/// Uses `W_{k,m}(y) ~ e^{iθ}` and `W_{−k,m}(e^{πi}y) ~ e^{−iθ}` (up to the
/// same constant) and the Wronskians of `M_{k,m}` with both.
pub fn wave_amplitudes(
    sol: &ScatteringSolution,
    params: &PhysicalParams,
) -> Result<(ComplexValue, ComplexValue)> {
    let m = params.whittaker_index();
    let k = Complex64::new(0.0, sol.alpha_tilde);
    let (_, b_plus) = connection_pair(k, m);
    let (_, b_minus) = connection_pair(-k, m);
    let damp = (-sol.alpha_tilde * PI).exp();
    let rot = Complex64::from_polar(1.0, -PI * (0.5 + m));
    let incoming = -sol.c * 2.0 * m * b_plus * damp;
    let outgoing = sol.d - sol.c * rot * 2.0 * m * b_minus * damp;
    let wave_phase = Complex64::from_polar(1.0, params.a() / (2.0 * params.kappa() * sol.alpha_tilde));
    if !(incoming.norm() > 0.0) || !incoming.is_finite() || !outgoing.is_finite() {
        return Err(Error::Asymptotics(format!(
            "wave splitting failed at E = {}: incoming {incoming}, outgoing {outgoing}",
            sol.energy
        )));
    }
    Ok((incoming / wave_phase, outgoing * wave_phase))
}

pub fn s_matrix(sol: &ScatteringSolution, params: &PhysicalParams) -> Result<ComplexValue> {
    let (i, o) = wave_amplitudes(sol, params)?;
    Ok(o / i)
}

/// `δ = arg(S)/2`.
pub fn phase_shift(sol: &ScatteringSolution, params: &PhysicalParams) -> Result<f64> {
    Ok(0.5 * s_matrix(sol, params)?.arg())
}
