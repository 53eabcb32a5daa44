//! Adaptive Dormand–Prince 5(4) integration of `χ'' = (V(w) − E) χ` in
//! `w = a + z`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::PhysicalParams;

pub const DEFAULT_RTOL: f64 = 1e-11;
const MAX_STEPS: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Inward,
    Outward,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSample {
    pub z: f64,
    pub value: Complex64,
    pub derivative: Complex64,
}

/// Accepted steps of one integration run, in integration order.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    pub samples: Vec<OdeSample>,
}

impl OdeSolution {
    pub fn last(&self) -> OdeSample {
        *self.samples.last().expect("at least the initial sample")
    }

    /// Cubic Hermite interpolation of the value between accepted steps.
    pub fn value_at(&self, z: f64) -> Option<Complex64> {
        let s = &self.samples;
        let i = s.windows(2).position(|p| {
            let (lo, hi) = if p[0].z <= p[1].z {
                (p[0].z, p[1].z)
            } else {
                (p[1].z, p[0].z)
            };
            z >= lo && z <= hi
        })?;
        let (p, q) = (s[i], s[i + 1]);
        let h = q.z - p.z;
        if h == 0.0 {
            return Some(p.value);
        }
        let t = (z - p.z) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        Some(
            p.value * (2.0 * t3 - 3.0 * t2 + 1.0)
                + p.derivative * h * (t3 - 2.0 * t2 + t)
                + q.value * (-2.0 * t3 + 3.0 * t2)
                + q.derivative * h * (t3 - t2),
        )
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

type State = [Complex64; 2];

/// Integrate a first-order system `y' = f(t, y)` from `t0` to `t1`,
/// recording every accepted step.
pub fn dopri<F: Fn(f64, &State) -> State>(
    f: F,
    t0: f64,
    y0: State,
    t1: f64,
    rtol: f64,
) -> Result<Vec<(f64, State)>> {
    dopri_scaled(f, t0, y0, t1, rtol, false)
}

/// As [`dopri`]; with `rescale` the state is divided by a positive constant
/// whenever it grows past `1e100`, so only ratios of the output are meaningful.
pub fn dopri_scaled<F: Fn(f64, &State) -> State>(
    f: F,
    t0: f64,
    y0: State,
    t1: f64,
    rtol: f64,
    rescale: bool,
) -> Result<Vec<(f64, State)>> {
    let span = t1 - t0;
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut h = dir * (span.abs() * 1e-3).max(1e-8).min(span.abs());
    let mut out = vec![(t, y)];
    let mut k = [[Complex64::default(); 2]; 7];
    k[0] = f(t, &y);
    let mut steps = 0;
    while (t1 - t) * dir > 0.0 {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::StepSize { z: t });
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    ys[0] += kj[0] * (h * a);
                    ys[1] += kj[1] * (h * a);
                }
            }
            k[s] = f(t + C[s] * h, &ys);
        }
        let mut y5 = y;
        let mut err = [Complex64::default(); 2];
        for s in 0..7 {
            for c in 0..2 {
                y5[c] += k[s][c] * (h * B5[s]);
                err[c] += k[s][c] * (h * (B5[s] - B4[s]));
            }
        }
        let scale = |c: usize| rtol * y[c].norm().max(y5[c].norm()).max(1e-300);
        let e = (0..2).map(|c| err[c].norm() / scale(c)).fold(0.0, f64::max);
        if e <= 1.0 {
            t += h;
            y = y5;
            k[0] = k[6];
            let size = y[0].norm().max(y[1].norm());
            if rescale && size > 1e100 {
                y = [y[0] / size, y[1] / size];
                k[0] = [k[0][0] / size, k[0][1] / size];
            }
            out.push((t, y));
        }
        let factor = if e == 0.0 {
            5.0
        } else {
            (0.9 * e.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h.abs() < 1e-14 * t.abs().max(1e-300) {
            return Err(Error::StepSize { z: t });
        }
    }
    Ok(out)
}

/// `V(w) − E` in `w = a + z`.
pub(crate) fn coefficient(params: &PhysicalParams, energy: Complex64, w: f64) -> Complex64 {
    let kappa = params.kappa();
    let v = -1.0 / (kappa * w) + params.a() * params.big_a() / (kappa * w * w);
    Complex64::new(v, 0.0) - energy
}

/// Integrate in `w` from `w0` to `w1` (both positive).
pub(crate) fn integrate_w(
    params: &PhysicalParams,
    energy: Complex64,
    w0: f64,
    init: State,
    w1: f64,
    rtol: f64,
    rescale: bool,
) -> Result<Vec<(f64, State)>> {
    if !(w0 > 0.0 && w1 > 0.0) {
        return Err(Error::Domain(format!(
            "integration span ({w0}, {w1}) must stay in w > 0"
        )));
    }
    dopri_scaled(
        |w, y| [y[1], coefficient(params, energy, w) * y[0]],
        w0,
        init,
        w1,
        rtol,
        rescale,
    )
}

/// Integrate the radial equation at real energy over `z_span`, ordered per
/// `direction`, from `(χ, χ')` at the span's first end.
pub fn integrate_ode(
    params: &PhysicalParams,
    energy: f64,
    z_span: (f64, f64),
    direction: Direction,
    init: (Complex64, Complex64),
) -> Result<OdeSolution> {
    integrate_ode_complex(
        params,
        Complex64::new(energy, 0.0),
        z_span,
        direction,
        init,
        DEFAULT_RTOL,
    )
}

pub fn integrate_ode_complex(
    params: &PhysicalParams,
    energy: Complex64,
    z_span: (f64, f64),
    direction: Direction,
    init: (Complex64, Complex64),
    rtol: f64,
) -> Result<OdeSolution> {
    let (z0, z1) = z_span;
    let ordered = match direction {
        Direction::Outward => z0 < z1,
        Direction::Inward => z0 > z1,
    };
    if !ordered {
        return Err(Error::Domain(format!("z span ({z0}, {z1}) is not {direction:?}")));
    }
    let a = params.a();
    let raw = integrate_w(params, energy, a + z0, [init.0, init.1], a + z1, rtol, false)?;
    Ok(OdeSolution {
        samples: raw
            .into_iter()
            .map(|(w, y)| OdeSample {
                z: w - a,
                value: y[0],
                derivative: y[1],
            })
            .collect(),
    })
}
