//! Self-adjoint extension data: deficiency solutions, their short-distance
//! connection coefficients, the boundary ratio selected by `Σ`, and the
//! spectral function whose level sets give the bound states.
//!
//! Short-distance matching decomposes every solution in the Frobenius pair
//! `u±(x) = e^{−x/2} x^{1/2±m} M(1/2±m−k, 1±2m, x)`. Coefficients are
//! compared either in each solution's own variable `x = (a+z)/(κk)`
//! ([`MatchingMode::Paper`]) or after rescaling every solution to the common
//! variable `a+z` ([`MatchingMode::Rigorous`]).

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, GammaPole, Result};
use crate::model::PhysicalParams;
use crate::specfun::{
    check_degenerate, connection_pair, gamma_polar, pole_index, recip_gamma, whittaker_w, ComplexValue,
    DEGENERACY_TOL,
};

/// `|cos|` below which the boundary ratio is treated as exactly zero or infinite.
pub const RHS_TOL: f64 = 1e-12;

/// The extension parameter `Σ`, stored reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct ExtensionAngle(f64);

impl ExtensionAngle {
    pub fn new(sigma: f64) -> Result<Self> {
        if !sigma.is_finite() {
            return Err(Error::Domain(format!("sigma must be finite, got {sigma}")));
        }
        let mut s = sigma.rem_euclid(2.0 * PI);
        if s >= 2.0 * PI {
            s = 0.0;
        }
        Ok(Self(s))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchingMode {
    /// Coefficients of `x^{1/2±m}` in each solution's own variable.
    #[default]
    Paper,
    /// Coefficients of `(a+z)^{1/2±m}`.
    Rigorous,
}

/// A point of the projective real line `ℝ ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::Infinite)
    }

    pub fn is_zero(self) -> bool {
        matches!(self, ExtReal::Finite(v) if v == 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeficiencySign {
    Plus,
    Minus,
}

/// Coefficients of the `x^{1/2+m}` and `x^{1/2−m}` channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionPair {
    pub coeff_plus_power: ComplexValue,
    pub coeff_minus_power: ComplexValue,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeficiencyData {
    pub mode: MatchingMode,
    pub m: f64,
    pub kappa: f64,
    pub alpha_plus: ComplexValue,
    pub alpha_minus: ComplexValue,
    pub coeff_a_plus: ComplexValue,
    pub coeff_b_plus: ComplexValue,
    pub coeff_a_minus: ComplexValue,
    pub coeff_b_minus: ComplexValue,
    /// `Γ(1/2 − m − α₊) = χ₁ e^{−iθ₁}`
    pub chi1: f64,
    pub theta1: f64,
    /// `Γ(1/2 + m − α₊) = χ₂ e^{−iθ₂}`
    pub chi2: f64,
    pub theta2: f64,
}

/// Polar data after the mode's rescaling of the deficiency coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingPolar {
    pub chi1: f64,
    pub theta1: f64,
    pub chi2: f64,
    pub theta2: f64,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `α± = (1/2κ) e^{±iπ/4}`.
pub fn deficiency_alphas(kappa: f64) -> (Complex64, Complex64) {
    let p = Complex64::from_polar(0.5 / kappa, FRAC_PI_4);
    (p, p.conj())
}

/// Mode factor converting an `x`-variable coefficient of the `x^{1/2±m}`
/// channel to the matching normalization, for `x = (a+z)/scale`.
pub fn channel_scale(mode: MatchingMode, scale: Complex64, exponent: f64) -> Complex64 {
    match mode {
        MatchingMode::Paper => c(1.0),
        MatchingMode::Rigorous => scale.powf(-exponent),
    }
}

pub fn deficiency_data(params: &PhysicalParams, mode: MatchingMode) -> Result<DeficiencyData> {
    let m = params.whittaker_index();
    check_degenerate(m, DEGENERACY_TOL)?;
    let kappa = params.kappa();
    let (ap, am) = deficiency_alphas(kappa);
    let (a_plus, b_plus) = connection_pair(ap, m);
    let (a_minus, b_minus) = connection_pair(am, m);
    let g1 = gamma_polar(c(0.5 - m) - ap)?;
    let g2 = gamma_polar(c(0.5 + m) - ap)?;
    Ok(DeficiencyData {
        mode,
        m,
        kappa,
        alpha_plus: ap,
        alpha_minus: am,
        coeff_a_plus: a_plus,
        coeff_b_plus: b_plus,
        coeff_a_minus: a_minus,
        coeff_b_minus: b_minus,
        chi1: g1.modulus,
        theta1: g1.phase,
        chi2: g2.modulus,
        theta2: g2.phase,
    })
}

impl DeficiencyData {
    pub fn matching_polar(&self) -> MatchingPolar {
        let scale = self.alpha_plus * self.kappa;
        let s1 = channel_scale(self.mode, scale, 0.5 + self.m);
        let s2 = channel_scale(self.mode, scale, 0.5 - self.m);
        MatchingPolar {
            chi1: self.chi1 / s1.norm(),
            theta1: self.theta1 + s1.arg(),
            chi2: self.chi2 / s2.norm(),
            theta2: self.theta2 + s2.arg(),
        }
    }

    /// `Σ` for which the boundary ratio vanishes.
    pub fn sigma_rhs_zero(&self) -> ExtensionAngle {
        let p = self.matching_polar();
        ExtensionAngle::new(2.0 * p.theta1 + PI).expect("finite")
    }

    /// `Σ` for which the boundary ratio is infinite.
    pub fn sigma_rhs_infinite(&self) -> ExtensionAngle {
        let p = self.matching_polar();
        ExtensionAngle::new(2.0 * p.theta2 + PI).expect("finite")
    }

    /// Real coefficients `(p, q)` of the `u₊` and `u₋` channels of
    /// `e^{−iΣ/2}(φ₊ + e^{iΣ}φ₋)` in the matching normalization.
    pub fn domain_coefficients(&self, sigma: ExtensionAngle) -> (f64, f64) {
        let scale = self.alpha_plus * self.kappa;
        let pp = self.coeff_a_plus * channel_scale(self.mode, scale, 0.5 + self.m);
        let qp = -self.coeff_b_plus * channel_scale(self.mode, scale, 0.5 - self.m);
        let rot = Complex64::from_polar(1.0, -0.5 * sigma.value());
        (2.0 * (rot * pp).re, 2.0 * (rot * qp).re)
    }
}

/// `φ±(z) = W_{α±,m}((a+z)/(κα±))`.
pub fn deficiency_solution(params: &PhysicalParams, sign: DeficiencySign, z: f64) -> Result<ComplexValue> {
    if !(z >= 0.0) {
        return Err(Error::Domain(format!("z must be non-negative, got {z}")));
    }
    let (ap, am) = deficiency_alphas(params.kappa());
    let alpha = match sign {
        DeficiencySign::Plus => ap,
        DeficiencySign::Minus => am,
    };
    let x = c(params.a() + z) / (alpha * params.kappa());
    whittaker_w(alpha, params.whittaker_index(), x)
}

/// `(𝒜, −ℬ)`: coefficients of `x^{1/2+m}` and `x^{1/2−m}` in `W_{α,m}(x)`.
///
/// A gamma pole in either coefficient is reported, tagged with the channel;
/// these are exactly the closed-form spectra.
pub fn connection_coefficients(alpha: ComplexValue, m: f64) -> Result<ConnectionPair> {
    check_degenerate(m, DEGENERACY_TOL)?;
    if pole_index(c(0.5 - m) - alpha).is_some() {
        return Err(Error::ConnectionPole {
            which: GammaPole::PlusChannel,
            alpha: alpha.re,
        });
    }
    if pole_index(c(0.5 + m) - alpha).is_some() {
        return Err(Error::ConnectionPole {
            which: GammaPole::MinusChannel,
            alpha: alpha.re,
        });
    }
    let (a, b) = connection_pair(alpha, m);
    Ok(ConnectionPair {
        coeff_plus_power: a,
        coeff_minus_power: -b,
    })
}

/// Boundary ratio `χ₂ cos(θ₁ − Σ/2) / (χ₁ cos(θ₂ − Σ/2))` in the data's mode.
pub fn boundary_rhs(data: &DeficiencyData, sigma: ExtensionAngle) -> ExtReal {
    let p = data.matching_polar();
    let half = 0.5 * sigma.value();
    let num = (p.theta1 - half).cos();
    let den = (p.theta2 - half).cos();
    if den.abs() < RHS_TOL {
        return ExtReal::Infinite;
    }
    if num.abs() < RHS_TOL {
        return ExtReal::Finite(0.0);
    }
    ExtReal::Finite(p.chi2 * num / (p.chi1 * den))
}

/// The ratio with `χ₁/χ₂` in front, as the eigenvalue condition is usually
/// printed. Same zeros and poles in `Σ` as [`boundary_rhs`].
pub fn boundary_rhs_as_printed(data: &DeficiencyData, sigma: ExtensionAngle) -> ExtReal {
    match boundary_rhs(data, sigma) {
        ExtReal::Finite(v) => {
            let p = data.matching_polar();
            ExtReal::Finite(v * (p.chi1 / p.chi2).powi(2))
        }
        ExtReal::Infinite => ExtReal::Infinite,
    }
}

/// `f(α) = Γ(1/2+m−α) / Γ(1/2−m−α)` for real `α`.
pub fn f_of_alpha(alpha: f64, m: f64) -> ExtReal {
    let num_arg = c(0.5 + m - alpha);
    let den_arg = c(0.5 - m - alpha);
    if pole_index(num_arg).is_some() {
        return ExtReal::Infinite;
    }
    if pole_index(den_arg).is_some() {
        return ExtReal::Finite(0.0);
    }
    let r = recip_gamma(den_arg) / recip_gamma(num_arg);
    ExtReal::Finite(r.re)
}

/// Imaginary residue of the gamma ratio behind [`f_of_alpha`], relative to its modulus.
pub fn f_of_alpha_imaginary_residue(alpha: f64, m: f64) -> f64 {
    let r = recip_gamma(c(0.5 - m - alpha)) / recip_gamma(c(0.5 + m - alpha));
    r.im.abs() / r.norm().max(f64::MIN_POSITIVE)
}

/// Left side of the eigenvalue condition in the data's mode:
/// `f(α)` or `f(α) (κα)^{−2m}`.
pub fn spectral_function(alpha: f64, data: &DeficiencyData) -> ExtReal {
    match (f_of_alpha(alpha, data.m), data.mode) {
        (ExtReal::Finite(v), MatchingMode::Rigorous) => {
            ExtReal::Finite(v * (data.kappa * alpha).powf(-2.0 * data.m))
        }
        (v, _) => v,
    }
}
