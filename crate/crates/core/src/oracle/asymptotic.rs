//! Large-argument series for the decaying Whittaker solution, kept separate
//! from `specfun` so the oracle shares no special-function code with it.

use num_complex::Complex64;

const MAX_TERMS: usize = 500;

/// `(W, dW/dx, |omitted term| / |sum|)` from
/// `W ≈ e^{−x/2} x^k Σ_s (1/2+m−k)_s (1/2−m−k)_s / s! · (−x)^{−s}`.
pub(crate) fn decaying_whittaker(k: Complex64, m: f64, x: Complex64) -> (Complex64, Complex64, f64) {
    let a = Complex64::new(0.5 + m, 0.0) - k;
    let b = Complex64::new(0.5 - m, 0.0) - k;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut dsum = Complex64::default();
    let mut omitted = f64::INFINITY;
    for s in 0..MAX_TERMS {
        let sf = s as f64;
        let next = term * (a + sf) * (b + sf) / ((sf + 1.0) * -x);
        if next.norm() >= term.norm() {
            omitted = term.norm();
            break;
        }
        sum += next;
        dsum += next * (-(sf + 1.0)) / x;
        term = next;
        if next.norm() < 1e-18 * sum.norm() {
            omitted = next.norm();
            break;
        }
    }
    let pre = (-x / 2.0 + k * x.ln()).exp();
    let w = pre * sum;
    let dw = pre * (sum * (-0.5 + k / x) + dsum);
    (w, dw, omitted / sum.norm())
}
