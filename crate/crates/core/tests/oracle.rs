use exciton_sae::model::energy_from_alpha;
use exciton_sae::oracle::highprec::{reference_constant, relative_difference};
use exciton_sae::oracle::*;
use exciton_sae::sae::{deficiency_data, ExtensionAngle, MatchingMode};
use exciton_sae::specfun::{gamma, kummer_m, whittaker_m_and_derivative};
use exciton_sae::PhysicalParams;
use num_complex::Complex64;
use proptest::prelude::*;

fn params() -> PhysicalParams {
    PhysicalParams::new(1.0, 1.0, 1.0).unwrap()
}

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `u±(w) = (κα)^{1/2±m} M_{α,±m}(w/(κα))` for the bound-state `α`.
fn whittaker_pair(p: &PhysicalParams, energy: f64, w: f64, sign: f64) -> (f64, f64) {
    let alpha = 0.5 / (p.kappa() * (-energy).sqrt());
    let s = p.kappa() * alpha;
    let mu = sign * p.whittaker_index();
    let (v, d) = whittaker_m_and_derivative(cx(alpha), mu, cx(w / s)).unwrap();
    let scale = s.powf(0.5 + mu);
    (scale * v.re, scale * d.re / s)
}

#[test]
fn frobenius_matches_whittaker_m() {
    let p = params();
    let e = -0.3;
    let (up, um) = frobenius_basis(&p, e, 600).unwrap();
    for w in [0.1, 0.5, 1.0, 3.0] {
        for (series, sign) in [(&up, 1.0), (&um, -1.0)] {
            let (v, d) = series.eval(w).unwrap();
            let (wv, wd) = whittaker_pair(&p, e, w, sign);
            assert!((v - wv).abs() < 1e-9 * wv.abs(), "w={w} sign={sign}: {v} vs {wv}");
            assert!((d - wd).abs() < 1e-9 * wd.abs().max(1.0));
        }
    }
    // the tail underflows into subnormals, where relative residuals mean nothing
    let r = up.recurrence_residuals(&p, e);
    let live = up
        .coefficients
        .iter()
        .skip(1)
        .take_while(|c| c.abs() > 1e-250)
        .count();
    assert!(live > 50);
    assert!(r[..live].iter().all(|x| *x < 1e-14), "{:?}", &r[..live]);
}

#[test]
fn free_series_is_trivial() {
    // at E = 0 and κ → ∞ the recurrence kills every coefficient past c_0
    let p = PhysicalParams::with_index(1e12, 1.0, 0.8).unwrap();
    let (up, _) = frobenius_basis(&p, 0.0, 20).unwrap();
    assert_eq!(up.coefficients[0], 1.0);
    assert!(up.coefficients[1..].iter().all(|c| c.abs() < 1e-11));
    let (v, _) = up.eval(2.0).unwrap();
    assert!((v - 2f64.powf(1.3)).abs() < 1e-10);
}

#[test]
fn integration_reproduces_whittaker_m() {
    let p = params();
    let e = -0.3;
    let z0 = 0.2;
    let (v, d) = whittaker_pair(&p, e, p.a() + z0, 1.0);
    let sol = integrate_ode(&p, e, (z0, 5.0), Direction::Outward, (cx(v), cx(d))).unwrap();
    let end = sol.last();
    let (wv, wd) = whittaker_pair(&p, e, p.a() + 5.0, 1.0);
    assert!((end.z - 5.0).abs() < 1e-12);
    assert!((end.value.re - wv).abs() < 1e-7 * wv.abs());
    assert!((end.derivative.re - wd).abs() < 1e-7 * wd.abs());
    let mid = sol.value_at(2.5).unwrap();
    let (mv, _) = whittaker_pair(&p, e, p.a() + 2.5, 1.0);
    assert!((mid.re - mv).abs() < 1e-6 * mv.abs());
}

#[test]
fn wronskian_is_constant() {
    let p = params();
    let e = -0.2;
    for z1 in [0.5, 1.7, 4.0, 8.0] {
        let a = integrate_ode(&p, e, (0.1, z1), Direction::Outward, (cx(1.0), cx(0.0)))
            .unwrap()
            .last();
        let b = integrate_ode(&p, e, (0.1, z1), Direction::Outward, (cx(0.0), cx(1.0)))
            .unwrap()
            .last();
        let w = a.value * b.derivative - a.derivative * b.value;
        assert!((w - 1.0).norm() < 1e-9, "z={z1}: {w}");
    }
}

#[test]
fn direction_must_match_span() {
    let p = params();
    assert!(integrate_ode(&p, -0.2, (1.0, 2.0), Direction::Inward, (cx(1.0), cx(0.0))).is_err());
    assert!(integrate_ode(&p, -0.2, (2.0, 1.0), Direction::Inward, (cx(1.0), cx(0.0))).is_ok());
}

#[test]
fn shooting_reproduces_closed_forms() {
    let p = PhysicalParams::new(1.0, 1.0, 0.5).unwrap();
    let m = p.whittaker_index();
    let d = deficiency_data(&p, MatchingMode::Paper).unwrap();
    let cfg = ShootingConfig::default();
    for n in 1..3 {
        // 1/2 − m + n lies below 1/2 + m + n − 1, i.e. in branch n − 1
        let got = shoot_eigenvalue(&p, d.sigma_rhs_zero(), n - 1, 1e-10, &cfg).unwrap();
        let want = energy_from_alpha(0.5 - m + n as f64, 1.0);
        assert!(
            (got.energy - want).abs() < 1e-6,
            "n={n}: {} vs {want}",
            got.energy
        );
        let got = shoot_eigenvalue(&p, d.sigma_rhs_infinite(), n, 1e-10, &cfg).unwrap();
        let want = energy_from_alpha(0.5 + m + n as f64, 1.0);
        assert!(
            (got.energy - want).abs() < 1e-6,
            "n={n}: {} vs {want}",
            got.energy
        );
    }
}

#[test]
fn shooting_is_cutoff_independent() {
    let p = params();
    let sig = ExtensionAngle::new(1.0).unwrap();
    let at = |z_max| {
        let cfg = ShootingConfig {
            z_max,
            ..Default::default()
        };
        shoot_eigenvalue(&p, sig, 1, 1e-11, &cfg).unwrap()
    };
    let (a, b) = (at(30.0), at(60.0));
    assert!((a.energy - b.energy).abs() < 1e-9);
    assert!(a.decay_defect < 1e-9);
    /// Frozen: shooting at rtol 1e-13.
    const E1: f64 = -4.418_460_398_228_945e-2;
    assert!((a.energy - E1).abs() < 1e-9);
}

#[test]
fn shooting_rigorous_fixture() {
    let p = params();
    let cfg = ShootingConfig {
        mode: MatchingMode::Rigorous,
        ..Default::default()
    };
    let r = shoot_eigenvalue(&p, ExtensionAngle::new(1.0).unwrap(), 1, 1e-11, &cfg).unwrap();
    assert!((r.energy + 7.776_030_285_114_921e-2).abs() < 1e-9);
}

#[test]
fn wave_splitting_is_unitary() {
    let p = params();
    for mode in [MatchingMode::Paper, MatchingMode::Rigorous] {
        let cfg = ShootingConfig {
            mode,
            ..Default::default()
        };
        for e in [0.05, 1.0, 6.0] {
            let w = oracle_phase_shift(&p, ExtensionAngle::new(2.0).unwrap(), e, &cfg).unwrap();
            assert!(
                (w.s_matrix.norm() - 1.0).abs() < 1e-7,
                "{mode:?} E={e}: {}",
                w.s_matrix
            );
            assert!((w.phase_shift - 0.5 * w.s_matrix.arg()).abs() < 1e-12);
        }
    }
}

#[test]
fn highprec_constants() {
    let g = highprec_eval(HighPrecFunction::Gamma, &[cx(0.5)], 50).unwrap();
    assert!(relative_difference(&g, &reference_constant("sqrt_pi").unwrap()) < 1e-49);
    let k = highprec_eval(HighPrecFunction::KummerM, &[cx(1.0), cx(2.0), cx(1.0)], 60).unwrap();
    assert!(relative_difference(&k, &reference_constant("e_minus_1").unwrap()) < 1e-59);
    assert!(reference_constant("tau").is_none());
}

#[test]
fn highprec_argument_checks() {
    assert!(highprec_eval(HighPrecFunction::Gamma, &[cx(0.5)], 0).is_err());
    assert!(highprec_eval(HighPrecFunction::Gamma, &[cx(0.5)], 101).is_err());
    assert!(highprec_eval(HighPrecFunction::KummerM, &[cx(0.5)], 20).is_err());
    assert!(highprec_eval(HighPrecFunction::WhittakerW, &[cx(0.3), cx(0.5), cx(1.0)], 20).is_err());
    assert!(highprec_eval(HighPrecFunction::Gamma, &[cx(-2.0)], 20).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn highprec_agrees_with_double(re in 0.1f64..8.0, im in -6.0f64..6.0, x in 0.1f64..6.0) {
        let z = Complex64::new(re, im);
        let hp = highprec_eval(HighPrecFunction::Gamma, &[z], 30).unwrap().to_complex64();
        let d = gamma(z).unwrap();
        prop_assert!((hp - d).norm() < 1e-13 * d.norm());
        let (a, b) = (Complex64::new(0.3, im), cx(1.0 + re));
        let hp = highprec_eval(HighPrecFunction::KummerM, &[a, b, cx(x)], 30).unwrap().to_complex64();
        let d = kummer_m(a, b, cx(x)).unwrap();
        prop_assert!((hp - d).norm() < 1e-12 * d.norm());
    }
}
