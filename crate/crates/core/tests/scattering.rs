use std::f64::consts::PI;

use exciton_sae::oracle::{oracle_phase_shift, ShootingConfig};
use exciton_sae::sae::{deficiency_data, ExtensionAngle, MatchingMode};
use exciton_sae::scattering::*;
use exciton_sae::specfun::connection_pair;
use exciton_sae::PhysicalParams;
use num_complex::Complex64;
use proptest::prelude::*;

fn params() -> PhysicalParams {
    PhysicalParams::new(1.0, 1.0, 1.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn unitarity(sigma in 0.0f64..(2.0 * PI), log_e in -3.0f64..2.0) {
        let e = 10f64.powf(log_e);
        let sol = scattering_coefficients(&params(), ExtensionAngle::new(sigma).unwrap(), e).unwrap();
        prop_assert!((sol.s_matrix.norm() - 1.0).abs() < 1e-8);
        prop_assert!((sol.alpha_tilde - 0.5 / e.sqrt()).abs() < 1e-14 * sol.alpha_tilde);
        prop_assert!(sol.phase_shift > -PI && sol.phase_shift <= PI);
    }

    #[test]
    fn sigma_periodicity(sigma in -10.0f64..10.0, e in 0.01f64..20.0) {
        let a = scattering_coefficients(&params(), ExtensionAngle::new(sigma).unwrap(), e).unwrap();
        let b = scattering_coefficients(&params(), ExtensionAngle::new(sigma + 2.0 * PI).unwrap(), e).unwrap();
        prop_assert!((a.s_matrix - b.s_matrix).norm() < 1e-9);
    }
}

/// Frozen from the wave-splitting oracle (rtol 1e-13).
#[test]
fn phase_shift_fixture() {
    let sol = scattering_coefficients(&params(), ExtensionAngle::new(1.0).unwrap(), 1.0).unwrap();
    assert!((sol.phase_shift + 7.680_638_866_023_545e-1).abs() < 1e-8);
    assert!((phase_shift(&sol, &params()).unwrap() - sol.phase_shift).abs() < 1e-15);
}

#[test]
fn agrees_with_wave_splitting() {
    let p = params();
    for mode in [MatchingMode::Paper, MatchingMode::Rigorous] {
        let cfg = ShootingConfig {
            mode,
            ..Default::default()
        };
        for &(s, e) in &[(0.7, 0.05), (2.5, 0.8), (4.0, 3.0)] {
            let sig = ExtensionAngle::new(s).unwrap();
            let a = scattering_coefficients_with(&p, sig, e, mode).unwrap();
            let b = oracle_phase_shift(&p, sig, e, &cfg).unwrap();
            let d = (a.s_matrix / b.s_matrix).arg().abs();
            assert!(
                d < 1e-6,
                "{mode:?} sigma={s} E={e}: {} vs {}",
                a.phase_shift,
                b.phase_shift
            );
        }
    }
}

#[test]
fn matched_short_distance_ratio() {
    let p = params();
    for mode in [MatchingMode::Paper, MatchingMode::Rigorous] {
        let d = deficiency_data(&p, mode).unwrap();
        for s in [0.3, 1.0, 4.4] {
            let sig = ExtensionAngle::new(s).unwrap();
            let sol = scattering_coefficients_with(&p, sig, 0.7, mode).unwrap();
            let (plus, minus) = short_distance_coefficients(&sol, &p);
            let (dp, dq) = d.domain_coefficients(sig);
            assert!((plus * dq - minus * dp).norm() <= 1e-9 * (plus * dq).norm().max((minus * dp).norm()));
        }
    }
}

#[test]
fn ratio_continuous_in_energy() {
    // the Coulomb phase turns like α̃ ln α̃ with α̃ ~ E^{-1/2}, so the grid is
    // dense at low energy; a genuine jump would not shrink under refinement
    let p = params();
    let sig = ExtensionAngle::new(1.0).unwrap();
    let s = |e: f64| scattering_coefficients(&p, sig, e).unwrap().s_matrix;
    let n = 4000;
    let grid: Vec<f64> = (0..=n)
        .map(|i| 10f64.powf(-3.0 + 5.0 * i as f64 / n as f64))
        .collect();
    let vals: Vec<_> = grid.iter().map(|&e| s(e)).collect();
    for i in 0..n {
        let jump = (vals[i + 1] / vals[i]).arg().abs();
        if jump > 0.05 {
            let mid = s((grid[i] * grid[i + 1]).sqrt());
            let half = (mid / vals[i]).arg().abs().max((vals[i + 1] / mid).arg().abs());
            assert!(
                half < 0.75 * jump,
                "E {} -> {}: {jump} then {half}",
                grid[i],
                grid[i + 1]
            );
        }
    }
}

#[test]
fn rhs_zero_is_the_pure_channel() {
    let p = params();
    let d = deficiency_data(&p, MatchingMode::Paper).unwrap();
    for e in [0.1, 1.0, 10.0] {
        let sol = scattering_coefficients(&p, d.sigma_rhs_zero(), e).unwrap();
        let (a, _) = connection_pair(Complex64::new(0.0, sol.alpha_tilde), p.whittaker_index());
        assert!((sol.ratio_c_over_d + a).norm() < 1e-9 * a.norm());
    }
    // RHS = ∞ removes the W channel entirely, so C is fixed to 1
    let sol = scattering_coefficients(&p, d.sigma_rhs_infinite(), 1.0).unwrap();
    assert_eq!(sol.c, Complex64::new(1.0, 0.0));
    assert!(sol.d.norm() < 1e-10);
    assert!((sol.s_matrix.norm() - 1.0).abs() < 1e-8);
}

/// A real boundary condition: conjugating the matched coefficients equals
/// the solution built from the conjugate data, i.e. the `(p, q)` row is real
/// for every `Σ` and reversing the rotation `e^{−iΣ/2}` only flips overall signs.
#[test]
fn boundary_condition_reality() {
    let p = params();
    for mode in [MatchingMode::Paper, MatchingMode::Rigorous] {
        let d = deficiency_data(&p, mode).unwrap();
        for s in [0.2, 1.3, 3.9, 5.5] {
            let (pp, qq) = d.domain_coefficients(ExtensionAngle::new(s).unwrap());
            // e^{−iΣ/2}(φ₊ + e^{iΣ}φ₋) = conj of e^{iΣ/2}(φ₋ + e^{−iΣ}φ₊)
            let rot = Complex64::from_polar(1.0, 0.5 * s);
            let sp = d.coeff_a_minus * rot + d.coeff_a_plus * rot.conj();
            let sq = -(d.coeff_b_minus * rot + d.coeff_b_plus * rot.conj());
            let (fp, fq) = match mode {
                MatchingMode::Paper => (sp, sq),
                MatchingMode::Rigorous => {
                    let k = d.alpha_plus * d.kappa;
                    let km = d.alpha_minus * d.kappa;
                    (
                        d.coeff_a_minus * rot * km.powf(-(0.5 + d.m))
                            + d.coeff_a_plus * rot.conj() * k.powf(-(0.5 + d.m)),
                        -(d.coeff_b_minus * rot * km.powf(-(0.5 - d.m))
                            + d.coeff_b_plus * rot.conj() * k.powf(-(0.5 - d.m))),
                    )
                }
            };
            assert!(fp.im.abs() < 1e-12 * fp.norm() && fq.im.abs() < 1e-12 * fq.norm().max(1e-300));
            assert!((fp.re - pp).abs() < 1e-12 * pp.abs().max(1.0));
            assert!((fq.re - qq).abs() < 1e-12 * qq.abs().max(1.0));
        }
    }
}

#[test]
fn rejects_bound_energy() {
    assert!(scattering_coefficients(&params(), ExtensionAngle::new(1.0).unwrap(), -0.2).is_err());
    assert!(scattering_coefficients(&params(), ExtensionAngle::new(1.0).unwrap(), 0.0).is_err());
}
