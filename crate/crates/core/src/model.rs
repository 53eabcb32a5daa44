//! Model constants of the effective one-dimensional Hamiltonian, in units
//! with `ħ² = 2μ = e² = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct PhysicalParams {
    kappa: f64,
    a: f64,
    big_a: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    kappa: f64,
    a: f64,
    #[serde(rename = "A")]
    big_a: f64,
}

impl TryFrom<RawParams> for PhysicalParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        PhysicalParams::new(r.kappa, r.a, r.big_a)
    }
}

impl From<PhysicalParams> for RawParams {
    fn from(p: PhysicalParams) -> Self {
        RawParams {
            kappa: p.kappa,
            a: p.a,
            big_a: p.big_a,
        }
    }
}

impl PhysicalParams {
    /// `kappa > 0`, `a > 0`, `big_a >= 0`, all finite.
    pub fn new(kappa: f64, a: f64, big_a: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::Domain(format!("kappa must be positive, got {kappa}")));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::Domain(format!("a must be positive, got {a}")));
        }
        if !(big_a.is_finite() && big_a >= 0.0) {
            return Err(Error::Domain(format!("A must be non-negative, got {big_a}")));
        }
        Ok(Self { kappa, a, big_a })
    }

    /// Parameters with `a` and `κ` given and `A` chosen so that the Whittaker
    /// index equals `m`.
    pub fn with_index(kappa: f64, a: f64, m: f64) -> Result<Self> {
        if !(m >= 0.5) {
            return Err(Error::Domain(format!("Whittaker index must be >= 1/2, got {m}")));
        }
        Self::new(kappa, a, (m * m - 0.25) * kappa / a)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn big_a(&self) -> f64 {
        self.big_a
    }

    /// `A a / κ`, the strength of the inverse-square term.
    pub fn barrier_strength(&self) -> f64 {
        self.big_a * self.a / self.kappa
    }

    pub fn whittaker_index(&self) -> f64 {
        whittaker_index(self)
    }

    pub fn potential(&self, z: f64) -> Result<f64> {
        potential(self, z)
    }
}

/// `m = √(1/4 + A a/κ)`.
pub fn whittaker_index(params: &PhysicalParams) -> f64 {
    (0.25 + params.barrier_strength()).sqrt()
}

/// `V(z) = −1/(κ(a+z)) + A a/(κ(a+z)²)`.
pub fn potential(params: &PhysicalParams, z: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::Domain(format!("z must be non-negative, got {z}")));
    }
    if z.is_infinite() {
        return Ok(0.0);
    }
    let w = params.a + z;
    Ok((-1.0 + params.big_a * params.a / w) / (params.kappa * w))
}

/// Energy in model units; zero is never a valid solver input.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Energy(f64);

impl Energy {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value == 0.0 {
            return Err(Error::Domain(format!(
                "energy must be finite and nonzero, got {value}"
            )));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_bound(self) -> bool {
        self.0 < 0.0
    }

    pub fn is_scattering(self) -> bool {
        self.0 > 0.0
    }
}

/// `α = (1/2κ) √(−1/E)` for `E < 0`.
pub fn alpha_from_energy(energy: Energy, kappa: f64) -> Result<f64> {
    if !energy.is_bound() {
        return Err(Error::Domain(format!(
            "alpha is defined for bound energies, got E = {}",
            energy.value()
        )));
    }
    Ok((-1.0 / energy.value()).sqrt() / (2.0 * kappa))
}

/// `E = −1/(4 κ² α²)`.
pub fn energy_from_alpha(alpha: f64, kappa: f64) -> f64 {
    -1.0 / (4.0 * kappa * kappa * alpha * alpha)
}

/// `α̃ = (1/2κ) √(1/E)` for `E > 0`.
pub fn alpha_tilde_from_energy(energy: Energy, kappa: f64) -> Result<f64> {
    if !energy.is_scattering() {
        return Err(Error::Domain(format!(
            "alpha-tilde is defined for positive energies, got E = {}",
            energy.value()
        )));
    }
    Ok((1.0 / energy.value()).sqrt() / (2.0 * kappa))
}
