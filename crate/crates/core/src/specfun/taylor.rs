//! Taylor-series continuation for `P2(x) y'' + P1(x) y' + P0(x) y = 0` with
//! polynomial coefficients of degree at most two. Both the Whittaker and the
//! Kummer equations have this shape, and their only finite singular point
//! is the origin.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_TERMS: usize = 400;
const TERM_EPS: f64 = 1e-17;

type Quad = [Complex64; 3];

#[derive(Debug, Clone, Copy)]
pub struct QuadraticOde {
    pub p2: Quad,
    pub p1: Quad,
    pub p0: Quad,
}

fn shifted(p: &Quad, x0: Complex64) -> Quad {
    [p[0] + p[1] * x0 + p[2] * x0 * x0, p[1] + p[2] * x0 * 2.0, p[2]]
}

impl QuadraticOde {
    /// Whittaker equation multiplied through by `x²`.
    pub fn whittaker(k: Complex64, mu: f64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        Self {
            p2: [z, z, one],
            p1: [z, z, z],
            p0: [Complex64::new(0.25 - mu * mu, 0.0), k, Complex64::new(-0.25, 0.0)],
        }
    }

    /// Kummer equation `x M'' + (b − x) M' − a M = 0`.
    pub fn kummer(a: Complex64, b: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        Self {
            p2: [z, one, z],
            p1: [b, -one, z],
            p0: [-a, z, z],
        }
    }

    /// One Taylor step of (complex) length `h` from `x0`.
    pub fn step(
        &self,
        x0: Complex64,
        y0: Complex64,
        dy0: Complex64,
        h: Complex64,
    ) -> Result<(Complex64, Complex64)> {
        let q2 = shifted(&self.p2, x0);
        let q1 = shifted(&self.p1, x0);
        let q0 = shifted(&self.p0, x0);
        let (h2, h3) = (h * h, h * h * h);
        let h4 = h2 * h2;

        // a[n] = y_n h^n
        let mut a: Vec<Complex64> = Vec::with_capacity(64);
        a.push(y0);
        a.push(dy0 * h);
        let mut sum = a[0] + a[1];
        let mut dsum = a[1];
        let mut scale = sum.norm().max(a[0].norm()).max(a[1].norm());
        let get = |a: &[Complex64], i: isize| -> Complex64 {
            if i < 0 {
                Complex64::new(0.0, 0.0)
            } else {
                a[i as usize]
            }
        };
        for n in 0..MAX_TERMS {
            let nf = n as f64;
            let i = n as isize;
            let rhs = q2[1] * ((nf + 1.0) * nf) * get(&a, i + 1) * h
                + q2[2] * (nf * (nf - 1.0)) * get(&a, i) * h2
                + q1[0] * (nf + 1.0) * get(&a, i + 1) * h
                + q1[1] * nf * get(&a, i) * h2
                + q1[2] * (nf - 1.0) * get(&a, i - 1) * h3
                + q0[0] * get(&a, i) * h2
                + q0[1] * get(&a, i - 1) * h3
                + q0[2] * get(&a, i - 2) * h4;
            let next = -rhs / (q2[0] * ((nf + 2.0) * (nf + 1.0)));
            a.push(next);
            sum += next;
            dsum += next * (nf + 2.0);
            scale = scale.max(sum.norm()).max(next.norm());
            let tail = next.norm() + a[n + 1].norm() + a[n].norm();
            if n >= 6 && tail <= TERM_EPS * scale {
                return Ok((sum, dsum / h));
            }
        }
        Err(Error::Convergence {
            what: "Taylor continuation step",
            budget: MAX_TERMS,
        })
    }

    /// Continue `(y, y')` along the straight segment `from -> to`.
    ///
    /// Step length is capped at half the distance to the origin and at `h_max`.
    pub fn continue_along(
        &self,
        from: Complex64,
        mut y: Complex64,
        mut dy: Complex64,
        to: Complex64,
        h_max: f64,
    ) -> Result<(Complex64, Complex64)> {
        let mut x = from;
        loop {
            let remaining = to - x;
            let dist = remaining.norm();
            if dist == 0.0 {
                return Ok((y, dy));
            }
            let cap = (0.5 * x.norm()).min(h_max);
            let len = dist.min(cap.max(1e-3));
            let h = remaining * (len / dist);
            let (ny, ndy) = self.step(x, y, dy, h)?;
            y = ny;
            dy = ndy;
            x = if len == dist { to } else { x + h };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kummer_with_a_equal_b_continues_exponential() {
        // M(a, a, x) = e^x
        let a = Complex64::new(0.7, 0.0);
        let ode = QuadraticOde::kummer(a, a);
        let x0 = Complex64::new(1.0, 0.0);
        let e = x0.exp();
        let (y, dy) = ode
            .continue_along(x0, e, e, Complex64::new(9.0, 3.0), 2.0)
            .unwrap();
        let want = Complex64::new(9.0, 3.0).exp();
        assert!((y - want).norm() < 1e-12 * want.norm());
        assert!((dy - want).norm() < 1e-12 * want.norm());
    }

    #[test]
    fn whittaker_terminating_solution() {
        // W_{mu+1/2, mu}(x) = e^{-x/2} x^{mu+1/2}
        let mu = 0.7;
        let k = Complex64::new(mu + 0.5, 0.0);
        let f = |x: Complex64| (-x / 2.0).exp() * x.powf(mu + 0.5);
        let df = |x: Complex64| f(x) * ((mu + 0.5) / x - 0.5);
        let ode = QuadraticOde::whittaker(k, mu);
        let x0 = Complex64::new(30.0, 0.0);
        let x1 = Complex64::new(2.0, 0.0);
        let (y, dy) = ode.continue_along(x0, f(x0), df(x0), x1, 2.0).unwrap();
        assert!((y - f(x1)).norm() < 1e-12 * f(x1).norm());
        assert!((dy - df(x1)).norm() < 1e-12 * df(x1).norm());
    }
}
