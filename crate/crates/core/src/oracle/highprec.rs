//! Software extended-precision gamma and Kummer/Whittaker M, used as the
//! provenance source for frozen reference values.

use astro_float::{BigFloat, Consts, RoundingMode};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_DIGITS: u32 = 100;
const RM: RoundingMode = RoundingMode::ToEven;
const SERIES_BUDGET: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HighPrecFunction {
    /// `Γ(z)`, args `[z]`.
    Gamma,
    /// `M(a, b, x)`, args `[a, b, x]`.
    KummerM,
    /// `M_{k,μ}(x)`, args `[k, μ, x]` (μ real).
    WhittakerM,
    /// `W_{k,μ}(x)` from the connection formula, args `[k, μ, x]` (μ real,
    /// 2μ not an integer). The working precision absorbs its `e^{|x|}`
    /// cancellation, so keep `|x|` moderate.
    WhittakerW,
}

/// A complex number carried at `bits` of binary precision.
#[derive(Debug, Clone)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

#[derive(Debug, Clone)]
pub struct HighPrecValue {
    pub value: BigComplex,
    pub digits: u32,
}

impl HighPrecValue {
    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.value.re), to_f64(&self.value.im))
    }

    /// Declared relative error bound `10^{1−digits}`.
    pub fn error_bound(&self) -> f64 {
        10f64.powi(1 - self.digits as i32)
    }

    pub fn re_string(&self) -> String {
        self.value.re.to_string()
    }

    pub fn im_string(&self) -> String {
        self.value.im.to_string()
    }
}

pub fn to_f64(x: &BigFloat) -> f64 {
    x.to_string().parse().unwrap_or(f64::NAN)
}

struct Ctx {
    p: usize,
    cc: Consts,
}

impl Ctx {
    fn new(p: usize) -> Result<Self> {
        let cc = Consts::new().map_err(|e| Error::Domain(format!("extended precision: {e:?}")))?;
        Ok(Self { p, cc })
    }

    fn real(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.p)
    }

    fn c(&self, z: Complex64) -> BigComplex {
        BigComplex {
            re: self.real(z.re),
            im: self.real(z.im),
        }
    }

    fn add(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        BigComplex {
            re: a.re.add(&b.re, self.p, RM),
            im: a.im.add(&b.im, self.p, RM),
        }
    }

    fn sub(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        BigComplex {
            re: a.re.sub(&b.re, self.p, RM),
            im: a.im.sub(&b.im, self.p, RM),
        }
    }

    fn mul(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        let p = self.p;
        BigComplex {
            re: a.re.mul(&b.re, p, RM).sub(&a.im.mul(&b.im, p, RM), p, RM),
            im: a.re.mul(&b.im, p, RM).add(&a.im.mul(&b.re, p, RM), p, RM),
        }
    }

    fn norm_sqr(&self, a: &BigComplex) -> BigFloat {
        a.re.mul(&a.re, self.p, RM)
            .add(&a.im.mul(&a.im, self.p, RM), self.p, RM)
    }

    fn div(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        let p = self.p;
        let d = self.norm_sqr(b);
        let conj = BigComplex {
            re: b.re.clone(),
            im: b.im.neg(),
        };
        let n = self.mul(a, &conj);
        BigComplex {
            re: n.re.div(&d, p, RM),
            im: n.im.div(&d, p, RM),
        }
    }

    fn scale(&self, a: &BigComplex, s: &BigFloat) -> BigComplex {
        BigComplex {
            re: a.re.mul(s, self.p, RM),
            im: a.im.mul(s, self.p, RM),
        }
    }

    fn abs(&self, a: &BigComplex) -> BigFloat {
        self.norm_sqr(a).sqrt(self.p, RM)
    }

    fn atan2(&mut self, y: &BigFloat, x: &BigFloat) -> BigFloat {
        let p = self.p;
        let pi = self.cc.pi(p, RM);
        if x.is_zero() {
            let half = pi.div(&self.real(2.0), p, RM);
            return if y.is_negative() { half.neg() } else { half };
        }
        let t = y.div(x, p, RM).atan(p, RM, &mut self.cc);
        if x.is_positive() {
            t
        } else if y.is_negative() {
            t.sub(&pi, p, RM)
        } else {
            t.add(&pi, p, RM)
        }
    }

    fn ln(&mut self, a: &BigComplex) -> BigComplex {
        let p = self.p;
        let r = self.abs(a).ln(p, RM, &mut self.cc);
        let th = self.atan2(&a.im, &a.re);
        BigComplex { re: r, im: th }
    }

    fn exp(&mut self, a: &BigComplex) -> BigComplex {
        let p = self.p;
        let e = a.re.exp(p, RM, &mut self.cc);
        let c = a.im.cos(p, RM, &mut self.cc);
        let s = a.im.sin(p, RM, &mut self.cc);
        BigComplex {
            re: e.mul(&c, p, RM),
            im: e.mul(&s, p, RM),
        }
    }

    fn tiny(&self, a: &BigFloat, relative_to: &BigFloat, bits: usize) -> bool {
        if a.is_zero() {
            return true;
        }
        match (a.exponent(), relative_to.exponent()) {
            (Some(ea), Some(eb)) => (eb as i64 - ea as i64) > bits as i64,
            _ => false,
        }
    }

    /// `B_0 … B_n` by the binomial recurrence.
    fn bernoulli(&self, n: usize) -> Vec<BigFloat> {
        let p = self.p;
        let mut b: Vec<BigFloat> = vec![self.real(1.0)];
        for k in 1..=n {
            // Σ_{j<k} C(k+1, j) B_j = −(k+1) B_k
            let mut sum = self.real(0.0);
            let mut binom = self.real(1.0);
            for (j, bj) in b.iter().enumerate() {
                sum = sum.add(&binom.mul(bj, p, RM), p, RM);
                binom =
                    binom
                        .mul(&self.real((k + 1 - j) as f64), p, RM)
                        .div(&self.real((j + 1) as f64), p, RM);
            }
            b.push(sum.neg().div(&self.real((k + 1) as f64), p, RM));
        }
        b
    }

    fn gamma(&mut self, z: Complex64, digits: u32) -> Result<BigComplex> {
        let zc = self.c(z);
        self.gamma_big(&zc, digits)
    }

    fn gamma_big(&mut self, zc: &BigComplex, digits: u32) -> Result<BigComplex> {
        let p = self.p;
        let z = Complex64::new(to_f64(&zc.re), to_f64(&zc.im));
        let r = digits as f64 + 10.0;
        let shift = (r - z.re).ceil().max(0.0) as usize;
        let zc = zc.clone();
        let mut prod = self.c(Complex64::new(1.0, 0.0));
        for k in 0..shift {
            let t = self.add(&zc, &self.c(Complex64::new(k as f64, 0.0)));
            if t.re.is_zero() && t.im.is_zero() {
                return Err(Error::Pole { re: z.re, im: z.im });
            }
            prod = self.mul(&prod, &t);
        }
        let w = self.add(&zc, &self.c(Complex64::new(shift as f64, 0.0)));
        let lnw = self.ln(&w);
        let half = self.c(Complex64::new(0.5, 0.0));
        let two_pi = self.cc.pi(p, RM).mul(&self.real(2.0), p, RM);
        let half_ln_2pi = two_pi.ln(p, RM, &mut self.cc).div(&self.real(2.0), p, RM);
        let mut lg = self.sub(&self.mul(&self.sub(&w, &half), &lnw), &w);
        lg.re = lg.re.add(&half_ln_2pi, p, RM);

        let max_terms = 4 * digits as usize + 20;
        let bern = self.bernoulli(2 * max_terms);
        let w2 = self.mul(&w, &w);
        let mut wpow = w.clone();
        let mut converged = false;
        for j in 1..=max_terms {
            let coef = bern[2 * j].div(&self.real((2 * j * (2 * j - 1)) as f64), p, RM);
            let one = self.c(Complex64::new(1.0, 0.0));
            let term = self.scale(&self.div(&one, &wpow), &coef);
            lg = self.add(&lg, &term);
            let size = self.abs(&term);
            if self.tiny(&size, &self.real(1.0), (digits as f64 * 3.33) as usize + 20) {
                converged = true;
                break;
            }
            wpow = self.mul(&wpow, &w2);
        }
        if !converged {
            return Err(Error::Convergence {
                what: "extended-precision Stirling series",
                budget: max_terms,
            });
        }
        let g = self.exp(&lg);
        Ok(self.div(&g, &prod))
    }

    fn kummer(&mut self, a: Complex64, b: Complex64, x: Complex64) -> Result<BigComplex> {
        let (ac, bc, xc) = (self.c(a), self.c(b), self.c(x));
        self.kummer_big(&ac, &bc, &xc)
    }

    fn kummer_big(&mut self, ac: &BigComplex, bc: &BigComplex, xc: &BigComplex) -> Result<BigComplex> {
        let p = self.p;
        let b = Complex64::new(to_f64(&bc.re), to_f64(&bc.im));
        let one = self.c(Complex64::new(1.0, 0.0));
        let mut term = one.clone();
        let mut sum = one;
        let mut quiet = 0;
        for s in 0..SERIES_BUDGET {
            let sc = self.c(Complex64::new(s as f64, 0.0));
            let den = self.mul(&self.add(bc, &sc), &self.c(Complex64::new(s as f64 + 1.0, 0.0)));
            if den.re.is_zero() && den.im.is_zero() {
                return Err(Error::Pole { re: b.re, im: b.im });
            }
            term = self.div(&self.mul(&self.mul(&term, &self.add(ac, &sc)), xc), &den);
            sum = self.add(&sum, &term);
            let (ts, ss) = (self.abs(&term), self.abs(&sum));
            if self.tiny(&ts, &ss, p - 16) {
                quiet += 1;
                if quiet >= 3 {
                    return Ok(sum);
                }
            } else {
                quiet = 0;
            }
        }
        Err(Error::Convergence {
            what: "extended-precision Kummer series",
            budget: SERIES_BUDGET,
        })
    }
}

impl Ctx {
    /// Exact `1/2 + μ − k`, `1 + 2μ` and friends, so that paired terms
    /// describe the same `(k, μ)` to full working precision.
    fn shifted(&self, base: f64, mu_factor: f64, mu: &BigFloat, k: &BigComplex) -> BigComplex {
        let p = self.p;
        let re = self.real(base).add(&mu.mul(&self.real(mu_factor), p, RM), p, RM);
        BigComplex {
            re: re.sub(&k.re, p, RM),
            im: k.im.neg(),
        }
    }

    fn whittaker_m(&mut self, k: Complex64, mu: f64, x: Complex64) -> Result<BigComplex> {
        let kc = self.c(k);
        let mb = self.real(mu);
        self.whittaker_m_big(&kc, &mb, x)
    }

    fn whittaker_m_big(&mut self, k: &BigComplex, mu: &BigFloat, x: Complex64) -> Result<BigComplex> {
        let p = self.p;
        let a = self.shifted(0.5, 1.0, mu, k);
        let zero = BigComplex {
            re: self.real(0.0),
            im: self.real(0.0),
        };
        let b = self.shifted(1.0, 2.0, mu, &zero);
        let xc = self.c(x);
        let m = self.kummer_big(&a, &b, &xc)?;
        let lnx = self.ln(&xc);
        let expo = BigComplex {
            re: self.real(0.5).add(mu, p, RM),
            im: self.real(0.0),
        };
        let pow = self.mul(&expo, &lnx);
        let damp = self.c(-x / 2.0);
        let pre = self.exp(&self.add(&pow, &damp));
        Ok(self.mul(&pre, &m))
    }

    /// `π/sin π(1+2μ) · [M_{k,μ}/(Γ(1/2−μ−k)Γ(1+2μ)) − M_{k,−μ}/(Γ(1/2+μ−k)Γ(1−2μ))]`
    fn whittaker_w(&mut self, k: Complex64, mu: f64, x: Complex64, digits: u32) -> Result<BigComplex> {
        let p = self.p;
        let kc = self.c(k);
        let zero = BigComplex {
            re: self.real(0.0),
            im: self.real(0.0),
        };
        let mp_ = self.real(mu);
        let mm_ = mp_.neg();
        let mp = self.whittaker_m_big(&kc, &mp_, x)?;
        let mm = self.whittaker_m_big(&kc, &mm_, x)?;
        let ga = self.gamma_big(&self.shifted(0.5, -1.0, &mp_, &kc), digits + 10)?;
        let gb = self.gamma_big(&self.shifted(1.0, 2.0, &mp_, &zero), digits + 10)?;
        let gc = self.gamma_big(&self.shifted(0.5, 1.0, &mp_, &kc), digits + 10)?;
        let gd = self.gamma_big(&self.shifted(1.0, -2.0, &mp_, &zero), digits + 10)?;
        let t1 = self.div(&mp, &self.mul(&ga, &gb));
        let t2 = self.div(&mm, &self.mul(&gc, &gd));
        let diff = self.sub(&t1, &t2);
        // π / sin π(1+2μ) = −π / sin 2πμ
        let pi = self.cc.pi(p, RM);
        let arg = pi.mul(&self.real(2.0).mul(&mp_, p, RM), p, RM);
        let sin = arg.sin(p, RM, &mut self.cc);
        let pref = pi.div(&sin, p, RM).neg();
        Ok(self.scale(&diff, &pref))
    }
}

fn bits_for(digits: u32, extra: usize) -> usize {
    ((digits as f64 * 3.33).ceil() as usize + 64 + extra).div_ceil(64) * 64
}

/// Evaluate `function` at `args` with about `digits` correct decimal digits.
pub fn highprec_eval(function: HighPrecFunction, args: &[Complex64], digits: u32) -> Result<HighPrecValue> {
    if digits == 0 || digits > MAX_DIGITS {
        return Err(Error::Domain(format!(
            "digits must be in 1..={MAX_DIGITS}, got {digits}"
        )));
    }
    let need = match function {
        HighPrecFunction::Gamma => 1,
        HighPrecFunction::KummerM | HighPrecFunction::WhittakerM | HighPrecFunction::WhittakerW => 3,
    };
    if args.len() != need {
        return Err(Error::Domain(format!(
            "{function:?} takes {need} arguments, got {}",
            args.len()
        )));
    }
    let value = match function {
        HighPrecFunction::Gamma => {
            let mut ctx = Ctx::new(bits_for(digits, 128))?;
            ctx.gamma(args[0], digits)?
        }
        HighPrecFunction::KummerM => {
            // cancellation in the series costs about |x| log2(e) bits
            let extra = (2.0 * args[2].norm() * std::f64::consts::LOG2_E) as usize + 64;
            let mut ctx = Ctx::new(bits_for(digits, extra))?;
            ctx.kummer(args[0], args[1], args[2])?
        }
        HighPrecFunction::WhittakerM => {
            let (k, mu, x) = (args[0], args[1], args[2]);
            if mu.im != 0.0 {
                return Err(Error::Domain("WhittakerM needs a real index".into()));
            }
            let extra = (2.0 * x.norm() * std::f64::consts::LOG2_E) as usize + 64;
            let mut ctx = Ctx::new(bits_for(digits, extra))?;
            ctx.whittaker_m(k, mu.re, x)?
        }
        HighPrecFunction::WhittakerW => {
            let (k, mu, x) = (args[0], args[1].re, args[2]);
            if args[1].im != 0.0 || ((2.0 * mu) - (2.0 * mu).round()).abs() < 1e-6 {
                return Err(Error::DegenerateIndex { two_mu: 2.0 * mu });
            }
            let extra = (4.0 * x.norm() * std::f64::consts::LOG2_E) as usize + 64;
            let mut ctx = Ctx::new(bits_for(digits, extra))?;
            ctx.whittaker_w(k, mu, x, digits)?
        }
    };
    Ok(HighPrecValue { value, digits })
}

/// `|a − b| / |b|` at high precision, for comparisons beyond double precision.
pub fn relative_difference(a: &HighPrecValue, b: &BigComplex) -> f64 {
    let ctx = Ctx {
        p: 1024,
        cc: Consts::new().expect("constants cache"),
    };
    let d = ctx.sub(&a.value, b);
    let r = ctx.abs(&d).div(&ctx.abs(b), 1024, RM);
    to_f64(&r)
}

/// `√π` and `e − 1` at 1024 bits, for self-checks.
pub fn reference_constant(which: &str) -> Option<BigComplex> {
    let mut cc = Consts::new().ok()?;
    let p = 1024;
    let zero = BigFloat::from_f64(0.0, p);
    let re = match which {
        "sqrt_pi" => cc.pi(p, RM).sqrt(p, RM),
        "e_minus_1" => cc.e(p, RM).sub(&BigFloat::from_f64(1.0, p), p, RM),
        _ => return None,
    };
    Some(BigComplex { re, im: zero })
}
