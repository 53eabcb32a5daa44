//! Bound states and scattering for the strong-field exciton Hamiltonian
//! `H = −d²/dz² − 1/(κ(a+z)) + A a/(κ(a+z)²)` on `z >= 0`, over the
//! one-parameter family of self-adjoint extensions labelled by `Σ`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod model;
pub mod oracle;
pub mod quad;
pub mod sae;
pub mod scattering;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, GammaPole, Result};
pub use model::{Energy, PhysicalParams};
pub use sae::{DeficiencyData, ExtReal, ExtensionAngle, MatchingMode};
pub use scattering::ScatteringSolution;
pub use spectrum::{BoundState, BranchInterval};
