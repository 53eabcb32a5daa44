//! Phase shifts by outward integration from the matched short-distance data
//! and splitting into outgoing and incoming waves far out.

use num_complex::Complex64;
use serde::Serialize;

use super::asymptotic::decaying_whittaker;
use super::frobenius::{complex_frobenius_pair, DEFAULT_ORDER};
use super::ode::integrate_w;
use super::shooting::{oracle_deficiency, ShootingConfig};
use crate::error::{Error, Result};
use crate::model::PhysicalParams;
use crate::sae::{ExtensionAngle, MatchingMode};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveSplitting {
    pub energy: f64,
    pub s_matrix: Complex64,
    pub phase_shift: f64,
    /// Where the solution was split into waves, in `z`.
    pub z_split: f64,
}

fn wronskian(f: (Complex64, Complex64), g: (Complex64, Complex64)) -> Complex64 {
    f.0 * g.1 - f.1 * g.0
}

/// `S` and `δ` for the `Σ`-matched solution at `E > 0`, same conventions as
/// the scattering module.
pub fn oracle_phase_shift(
    params: &PhysicalParams,
    sigma: ExtensionAngle,
    energy: f64,
    cfg: &ShootingConfig,
) -> Result<WaveSplitting> {
    if !(energy > 0.0) {
        return Err(Error::Domain(format!("scattering needs E > 0, got {energy}")));
    }
    let m = params.whittaker_index();
    let kappa = params.kappa();
    let big_k = energy.sqrt();
    let at = 1.0 / (2.0 * kappa * big_k);
    let (p, q) = oracle_deficiency(params, cfg.rtol)?.domain(cfg.mode, sigma);
    let (fp, fm) = match cfg.mode {
        MatchingMode::Rigorous => (1.0, 1.0),
        MatchingMode::Paper => ((kappa * at).powf(-(0.5 + m)), (kappa * at).powf(-(0.5 - m))),
    };

    let e = Complex64::new(energy, 0.0);
    let wd = params.a().min(1.0).min(2.0 * kappa * at);
    let (sp, sm) = complex_frobenius_pair(params, e, DEFAULT_ORDER)?;
    let (up, um) = (sp.eval(wd)?, sm.eval(wd)?);
    let chi0 = up.0 * (p * fp) + um.0 * (q * fm);
    let dchi0 = up.1 * (p * fp) + um.1 * (q * fm);

    // y = −2iKw; far enough out that the asymptotic series is exact to rounding
    let k = Complex64::new(0.0, at);
    let y_of = |w: f64| Complex64::new(0.0, -2.0 * big_k * w);
    let mut w_far = (params.a() + cfg.z_max).max((40.0 + 4.0 * at * at) / (2.0 * big_k));
    let mut tries = 0;
    let (wo, dwo) = loop {
        let (v, dv, rel) = decaying_whittaker(k, m, y_of(w_far));
        if rel < 1e-14 {
            break (v, dv * Complex64::new(0.0, -2.0 * big_k));
        }
        tries += 1;
        if tries > 40 {
            return Err(Error::Asymptotics(format!(
                "no convergent split point at E = {energy}"
            )));
        }
        w_far *= 1.5;
    };
    let path = integrate_w(params, e, wd, [chi0, dchi0], w_far, cfg.rtol, false)?;
    let end = path.last().expect("nonempty").1;
    let chi = (end[0], end[1]);
    let out = (wo, dwo);
    let inc = (wo.conj(), dwo.conj());
    let w0 = wronskian(out, inc);
    let c_out = wronskian(chi, inc) / w0;
    let c_in = wronskian(out, chi) / w0;
    let s = c_out / c_in * Complex64::from_polar(1.0, 2.0 * big_k * params.a());
    Ok(WaveSplitting {
        energy,
        s_matrix: s,
        phase_shift: 0.5 * s.arg(),
        z_split: w_far - params.a(),
    })
}
