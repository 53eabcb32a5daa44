use exciton_sae::oracle::{shoot_branch, ShootingConfig};
use exciton_sae::scattering::{scattering_coefficients_with, ScatteringSolution};
use exciton_sae::spectrum::{
    eigenfunction, f_poles_in, f_zeros_in, fplot_samples, normalize, solve_spectrum, Spectrum,
};
use exciton_sae::Error;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::table::{Cell, Output, Table};
use crate::CliError;

const QUAD_TOL: f64 = 1e-10;
/// Whittaker and shooting energies must agree to this.
pub const ORACLE_THRESHOLD: f64 = 1e-6;
/// Shooting cannot resolve `α` below this.
const SHOOTING_ALPHA_MIN: f64 = 1e-3;

fn numeric(e: Error) -> CliError {
    match e {
        Error::Domain(_) | Error::DegenerateIndex { .. } => CliError::Config(e.to_string()),
        _ => CliError::Numeric(e.to_string()),
    }
}

fn solve(cfg: &RunConfig) -> Result<Spectrum, CliError> {
    let sigma = cfg.extension_angle()?;
    let s = solve_spectrum(&cfg.params, sigma, cfg.mode, cfg.n_max, cfg.tol).map_err(numeric)?;
    for a in &s.anomalies {
        eprintln!("warning: branch {} holds {} roots", a.branch, a.roots);
    }
    Ok(s)
}

pub fn spectrum(cfg: &RunConfig) -> Result<Output, CliError> {
    let s = solve(cfg)?.normalized(&cfg.params, QUAD_TOL).map_err(numeric)?;
    let mut t = Table::new(&["n", "alpha", "energy", "norm_constant"]);
    for st in &s.states {
        t.push(vec![
            st.branch.into(),
            st.alpha.into(),
            st.energy.into(),
            st.norm_constant.into(),
        ]);
    }
    Ok(Output {
        table: t,
        sidecar: None,
    })
}

pub fn fplot(cfg: &RunConfig) -> Result<Output, CliError> {
    let m = cfg.params.whittaker_index();
    let (lo, hi) = cfg.alpha_range;
    let samples = fplot_samples(m, (lo, hi), cfg.samples).map_err(numeric)?;
    let mut t = Table::new(&["alpha", "f"]);
    for s in &samples {
        t.push(vec![s.alpha.into(), s.f.into()]);
    }
    let mut side = Table::new(&["kind", "n", "alpha"]);
    for p in f_poles_in(m, lo, hi) {
        let n = (p - 0.5 - m).round() as usize;
        side.push(vec!["pole".into(), n.into(), p.into()]);
    }
    for z in f_zeros_in(m, lo, hi) {
        let n = (z - 0.5 + m).round() as usize;
        side.push(vec!["zero".into(), n.into(), z.into()]);
    }
    Ok(Output {
        table: t,
        sidecar: Some(("asymptotes", side)),
    })
}

pub fn eigenfunction_table(cfg: &RunConfig) -> Result<Output, CliError> {
    let s = solve(cfg)?;
    let Some(st) = s.states.get(cfg.state) else {
        return Err(CliError::Config(format!(
            "state {} not found: {} states in branches below {}; raise --nmax",
            cfg.state,
            s.states.len(),
            cfg.n_max
        )));
    };
    let norm = normalize(&cfg.params, st, QUAD_TOL).map_err(numeric)?;
    eprintln!(
        "state {}: branch {}, alpha {:.16e}, energy {:.16e}",
        cfg.state, st.branch, st.alpha, st.energy
    );
    let n = cfg.samples;
    let rows: Vec<Result<(f64, f64), CliError>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let z = cfg.z_max * i as f64 / (n - 1) as f64;
            Ok((z, eigenfunction(&cfg.params, st, z).map_err(numeric)? / norm))
        })
        .collect();
    let mut t = Table::new(&["z", "chi"]);
    for r in rows {
        let (z, chi) = r?;
        t.push(vec![z.into(), chi.into()]);
    }
    Ok(Output {
        table: t,
        sidecar: None,
    })
}

/// A jump in `arg S` between neighbouring energies counts as continuous if
/// halving the step shrinks it.
fn continuous(
    cfg: &RunConfig,
    sigma: exciton_sae::ExtensionAngle,
    a: &ScatteringSolution,
    b: &ScatteringSolution,
) -> bool {
    let jump = (b.s_matrix / a.s_matrix).arg().abs();
    if jump <= 0.05 {
        return true;
    }
    match scattering_coefficients_with(&cfg.params, sigma, (a.energy * b.energy).sqrt(), cfg.mode) {
        Ok(mid) => {
            let half = (mid.s_matrix / a.s_matrix)
                .arg()
                .abs()
                .max((b.s_matrix / mid.s_matrix).arg().abs());
            half < 0.75 * jump
        }
        Err(_) => false,
    }
}

pub fn scattering(cfg: &RunConfig) -> Result<Output, CliError> {
    let sigma = cfg.extension_angle()?;
    let energies = cfg.energies();
    let sols: Vec<ScatteringSolution> = energies
        .par_iter()
        .map(|&e| {
            scattering_coefficients_with(&cfg.params, sigma, e, cfg.mode)
                .map_err(|err| CliError::Numeric(format!("E = {e:e}: {err}")))
        })
        .collect::<Result<_, _>>()?;
    let flags: Vec<bool> = (0..sols.len())
        .into_par_iter()
        .map(|i| i == 0 || continuous(cfg, sigma, &sols[i - 1], &sols[i]))
        .collect();
    let mut t = Table::new(&[
        "energy",
        "re_c_over_d",
        "im_c_over_d",
        "delta",
        "unitarity_defect",
        "continuous",
    ]);
    let mut worst: f64 = 0.0;
    for (s, ok) in sols.iter().zip(&flags) {
        let defect = (s.s_matrix.norm() - 1.0).abs();
        worst = worst.max(defect);
        let finite = s.d.norm() > 0.0;
        let ratio = |v: f64| Cell::from(finite.then_some(v));
        t.push(vec![
            s.energy.into(),
            ratio(s.ratio_c_over_d.re),
            ratio(s.ratio_c_over_d.im),
            s.phase_shift.into(),
            defect.into(),
            (*ok).into(),
        ]);
    }
    let flagged = flags.iter().filter(|f| !**f).count();
    eprintln!("max unitarity defect {worst:.3e}; {flagged} rows fail the continuity scan");
    Ok(Output {
        table: t,
        sidecar: None,
    })
}

pub struct OracleReport {
    pub output: Output,
    pub failures: usize,
}

pub fn oracle(cfg: &RunConfig) -> Result<OracleReport, CliError> {
    if cfg.tol > 0.1 * ORACLE_THRESHOLD {
        return Err(CliError::Config(format!(
            "tol {} is too loose for a {ORACLE_THRESHOLD:e} comparison; use tol <= {:e}",
            cfg.tol,
            0.1 * ORACLE_THRESHOLD
        )));
    }
    let sigma = cfg.extension_angle()?;
    let spectrum = solve(cfg)?;
    // the ODE carries ~1e-11 relative error, so bisecting the shooting
    // mismatch much below 1e-9 buys nothing
    let shoot_tol = cfg.tol.max(1e-9);
    let sc = ShootingConfig {
        mode: cfg.mode,
        ..Default::default()
    };
    let shot: Vec<_> = (0..cfg.n_max)
        .into_par_iter()
        .map(|n| shoot_branch(&cfg.params, sigma, n, shoot_tol, &sc).map_err(numeric))
        .collect::<Result<_, _>>()?;

    let mut t = Table::new(&["n", "level", "e_whittaker", "e_shooting", "abs_diff", "pass"]);
    let mut failures = 0;
    for (n, shots) in shot.iter().enumerate() {
        let mine: Vec<f64> = spectrum
            .states
            .iter()
            .filter(|s| s.branch == n)
            .filter(|s| {
                let keep = s.alpha > SHOOTING_ALPHA_MIN;
                if !keep {
                    eprintln!(
                        "note: branch {n} state at alpha {:e} is below the shooting range",
                        s.alpha
                    );
                }
                keep
            })
            .map(|s| s.energy)
            .collect();
        for level in 0..mine.len().max(shots.len()) {
            let a = mine.get(level).copied();
            let b = shots.get(level).map(|r| r.energy);
            let diff = a.zip(b).map(|(a, b)| (a - b).abs());
            let pass = diff.is_some_and(|d| d < ORACLE_THRESHOLD);
            failures += usize::from(!pass);
            t.push(vec![
                n.into(),
                level.into(),
                a.into(),
                b.into(),
                diff.into(),
                pass.into(),
            ]);
        }
    }
    Ok(OracleReport {
        output: Output {
            table: t,
            sidecar: None,
        },
        failures,
    })
}
