//! Special functions: complex gamma, Kummer `M`, Whittaker `M` and `W`.

mod gamma;
mod kummer;
mod taylor;
mod whittaker;

pub use gamma::{
    cos_pi, gamma, gamma_polar, log_gamma, pole_index, recip_gamma, sin_pi, PolarGamma, POLE_TOL,
};
pub use kummer::{
    kummer_asymptotic, kummer_m, kummer_m_and_derivative, kummer_m_with, kummer_series, KummerConfig,
    SERIES_BUDGET,
};
pub use taylor::QuadraticOde;
pub use whittaker::{
    check_degenerate, connection_pair, whittaker_m, whittaker_m_and_derivative, whittaker_w,
    whittaker_w_and_derivative, whittaker_w_asymptotic, whittaker_w_connection, whittaker_w_with,
    WhittakerConfig, DEGENERACY_TOL,
};

/// Complex scalar used throughout.
pub type ComplexValue = num_complex::Complex64;
