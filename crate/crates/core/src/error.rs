use thiserror::Error;

/// Which gamma factor of a connection coefficient sits on a pole.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaPole {
    /// `Γ(1/2 − α − m)` in the coefficient of the `(a+|z|)^{1/2+m}` channel.
    PlusChannel,
    /// `Γ(1/2 − α + m)` in the coefficient of the `(a+|z|)^{1/2−m}` channel.
    MinusChannel,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gamma pole at argument {re}{im:+}i")]
    Pole { re: f64, im: f64 },

    #[error("connection coefficient hits a gamma pole ({which:?}) at alpha = {alpha}")]
    ConnectionPole { which: GammaPole, alpha: f64 },

    #[error("degenerate Whittaker index: 2*mu = {two_mu} is within tolerance of an integer")]
    DegenerateIndex { two_mu: f64 },

    #[error("{what} did not converge within {budget} iterations")]
    Convergence { what: &'static str, budget: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("ill-conditioned matching system (condition estimate {condition:e})")]
    Conditioning { condition: f64 },

    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e})")]
    Quadrature { tol: f64, estimate: f64 },

    #[error("step size underflow at z = {z}")]
    StepSize { z: f64 },

    #[error("asymptotic decomposition failed: {0}")]
    Asymptotics(String),

    #[error("bisection on branch {branch} did not converge")]
    BranchConvergence { branch: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
