//! Complex gamma function on the principal branch.
//!
//! `log_gamma` shifts the argument into `Re w >= 15` with the recurrence and
//! then applies the Stirling series. Summing principal logarithms of the
//! shift factors keeps the result on the principal branch everywhere off the
//! non-positive real axis.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Distance from a non-positive integer below which a gamma argument is a pole.
pub const POLE_TOL: f64 = 1e-10;

const STIRLING_SHIFT: f64 = 15.0;
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k-1)), k = 1..=10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// `Γ(w) = modulus · exp(−i · phase)`, phase principal in `(−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarGamma {
    pub modulus: f64,
    pub phase: f64,
}

impl PolarGamma {
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.modulus, -self.phase)
    }
}

/// Returns the non-positive integer `w` sits on, if any.
pub fn pole_index(w: Complex64) -> Option<i64> {
    let n = w.re.round();
    if n <= 0.0 && (w - n).norm() < POLE_TOL {
        Some(n as i64)
    } else {
        None
    }
}

fn check_pole(w: Complex64) -> Result<()> {
    match pole_index(w) {
        Some(_) => Err(Error::Pole { re: w.re, im: w.im }),
        None => Ok(()),
    }
}

/// `sin(π w)` with the real part reduced exactly before scaling by π.
pub fn sin_pi(w: Complex64) -> Complex64 {
    let n = w.re.round();
    let r = w.re - n;
    let sign = if n.rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 };
    let (s, c) = (PI * r).sin_cos();
    let y = PI * w.im;
    Complex64::new(s * y.cosh(), c * y.sinh()) * sign
}

/// `cos(π w)`, reduced like [`sin_pi`].
pub fn cos_pi(w: Complex64) -> Complex64 {
    sin_pi(w + 0.5)
}

/// Principal-branch `ln Γ(w)`.
pub fn log_gamma(w: Complex64) -> Result<Complex64> {
    check_pole(w)?;
    let mut z = w;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < STIRLING_SHIFT {
        shift += z.ln();
        z += 1.0;
    }
    let zinv = z.inv();
    let zinv2 = zinv * zinv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = zinv;
    for c in STIRLING {
        series += pow * c;
        pow *= zinv2;
    }
    Ok((z - 0.5) * z.ln() - z + HALF_LN_TWO_PI + series - shift)
}

pub fn gamma(w: Complex64) -> Result<Complex64> {
    Ok(log_gamma(w)?.exp())
}

/// `1/Γ(w)`, entire: exactly zero on the poles of Γ.
pub fn recip_gamma(w: Complex64) -> Complex64 {
    if w.re >= 0.5 {
        // cannot hit a pole in the right half-plane
        (-log_gamma(w).expect("no poles for Re w >= 1/2")).exp()
    } else {
        let lg = log_gamma(Complex64::new(1.0, 0.0) - w).expect("1 - w has Re > 1/2");
        sin_pi(w) * lg.exp() / PI
    }
}

/// Polar form of `Γ(w)` under the `χ e^{−iθ}` convention.
pub fn gamma_polar(w: Complex64) -> Result<PolarGamma> {
    let lg = log_gamma(w)?;
    let mut phase = -lg.im;
    phase = phase.rem_euclid(2.0 * PI);
    if phase > PI {
        phase -= 2.0 * PI;
    }
    Ok(PolarGamma {
        modulus: lg.re.exp(),
        phase,
    })
}
