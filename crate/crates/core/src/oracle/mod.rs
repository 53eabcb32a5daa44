//! Independent verification: direct ODE integration, Frobenius series,
//! shooting, wave splitting and extended-precision special functions. None
//! of this touches the `specfun` evaluators.

mod asymptotic;
pub mod frobenius;
pub mod highprec;
pub mod ode;
pub mod shooting;
pub mod waves;

pub use frobenius::{frobenius_basis, FrobeniusSeries};
pub use highprec::{highprec_eval, HighPrecFunction, HighPrecValue};
pub use ode::{integrate_ode, Direction, OdeSample, OdeSolution};
pub use shooting::{shoot_branch, shoot_eigenvalue, ShootingConfig, ShootingResult};
pub use waves::{oracle_phase_shift, WaveSplitting};
