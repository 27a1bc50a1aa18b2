//! Riemann and Hurwitz zeta functions, their s-derivatives, and the digamma
//! function, for exact rational arguments at arbitrary decimal precision.
//!
//! The evaluation engine is Euler-Maclaurin summation
//!
//! ```text
//! zeta(s,a) = sum_{k=0}^{N-1} (a+k)^{-s}
//!           + (a+N)^{1-s}/(s-1) + (a+N)^{-s}/2
//!           + sum_{j=1}^{J} B_{2j}/(2j)! * s(s+1)...(s+2j-2) * (a+N)^{-s-2j+1}
//!           + R_J
//! ```
//!
//! with, for real s such that s + 2J + 1 > 0, the classical remainder bound
//! `|R_J| <= |first omitted correction term|`. The derivative is the
//! term-wise analytic s-derivative of the same expansion, with the analogous
//! first-omitted-term bound; both bounds are recomputed and checked on every
//! call, and the cutoffs escalate until the check passes. Rising factorials
//! and their derivatives are carried as exact rationals (s is always an exact
//! rational here), so the only rounding happens in the final float assembly,
//! at a working precision padded for the cancellation that Euler-Maclaurin
//! suffers at negative s.

use once_cell::sync::Lazy;
use rug::ops::{CompleteRound, Pow};
use rug::{Complete, Float};
use std::collections::HashMap;
use std::sync::Mutex;

use crate::combinatorics::{bernoulli, factorial, harmonic};
use crate::error::{Error, Result};
use crate::numeric::{
    bits_for_digits, constant_euler_gamma, constant_ln2, constant_pi, BigReal, Rational,
};

/// One zeta evaluation request: `zeta(s, a)` or its s-derivative.
/// An absent `a` means the Riemann case `a = 1`.
#[derive(Debug, Clone)]
pub struct ZetaQuery {
    pub s: Rational,
    pub a: Option<Rational>,
    pub derivative_order: u8,
    pub digits: u32,
}

impl ZetaQuery {
    pub fn eval(&self) -> Result<BigReal> {
        let a = self.a.clone().unwrap_or_else(|| Rational::from(1));
        match self.derivative_order {
            0 => hurwitz_zeta(&self.s, &a, self.digits),
            1 => hurwitz_zeta_deriv(&self.s, &a, self.digits),
            d => Err(Error::InvalidInput(format!(
                "derivative order {d} not supported (only 0 and 1)"
            ))),
        }
    }
}

/// `B_{2j}/(2j)!`, exact.
static EM_COEFF: Lazy<Mutex<Vec<Rational>>> = Lazy::new(|| Mutex::new(Vec::new()));

fn em_coeff(j: u32) -> Rational {
    let idx = j as usize;
    let mut cache = EM_COEFF.lock().unwrap();
    while cache.len() <= idx {
        let m = cache.len() as u32; // coefficient for index m is B_{2m}/(2m)!
        let c = bernoulli(2 * m) * Rational::from((rug::Integer::from(1), factorial(2 * m)));
        cache.push(c);
    }
    cache[idx].clone()
}

struct EmPlan {
    n: u64,
    j: u32,
    work: u32,
}

/// Chooses the series cutoff N, the number of correction terms J, and the
/// working precision. The working precision absorbs the cancellation between
/// the partial sum (whose terms grow like N^{-sigma} when sigma < 0) and the
/// boundary terms. A short-sum plan replaces the generic one when sigma is
/// comfortably inside the convergent half-plane.
fn em_plan(sigma: f64, a_f: f64, digits: u32, round: u32, pole_extra: u32) -> EmPlan {
    let base = digits + 12 + pole_extra;
    let abs_s = sigma.abs().ceil();

    let seed_n = |work: u32| -> f64 {
        ((0.7 * work as f64).ceil() + abs_s)
            .max(2.0 * abs_s)
            .max(8.0)
    };

    // two passes pin down the precision/cutoff fixpoint
    let mut work = base;
    for _ in 0..2 {
        let n = seed_n(work);
        let guard = if sigma < 0.0 {
            ((-sigma + 2.0) * (a_f + n + 2.0).log10()).ceil() as u32
        } else {
            0
        };
        work = base + guard;
    }

    let j_min = (((3.0 - sigma) / 2.0).ceil().max(2.0)) as u32;
    let mut n = seed_n(work);
    let mut j = ((work as f64 / 3.0).ceil() as u32).max(j_min);

    // Convergent regime: the boundary terms alone reach the target after a
    // short sum, so solve |C_2 P_3(s)| x^(-sigma-3) <= tol for x = a + N,
    // with tol relative to the crude magnitude a^(-sigma).
    if sigma >= 2.0 && a_f > 0.0 {
        let target = -((digits + 2) as f64) - sigma * a_f.log10();
        let lx = ((3.0 * (sigma + 2.0).log10() - 2.85 - target) / (sigma + 3.0)).max(0.0);
        let n_fast = (10f64.powf(lx) - a_f).ceil().max(4.0) + 2.0;
        if 2.0 * n_fast < n {
            n = n_fast;
            j = j_min;
        }
    }

    let grow_n = 1.5f64.powi(round as i32);
    let grow_j = 1.7f64.powi(round as i32);
    EmPlan {
        n: (n * grow_n) as u64,
        j: ((j as f64) * grow_j) as u32,
        work,
    }
}

fn float_log2(f: &Float) -> Option<i64> {
    f.get_exp().map(|e| e as i64)
}

/// Core Euler-Maclaurin evaluation of `zeta(s,a)` and optionally its
/// s-derivative, to `digits` digits of relative precision (absolute once the
/// value drops below 1).
fn em_core(
    s: &Rational,
    a: &Rational,
    digits: u32,
    want_deriv: bool,
) -> Result<(Float, Option<Float>)> {
    if *a <= 0 {
        return Err(Error::InvalidInput(format!(
            "shift a = {a} must be positive"
        )));
    }
    if *s == 1 {
        return Err(Error::Pole(Rational::from(1)));
    }

    let sigma = s.to_f64();
    let a_f = a.to_f64();
    let dist_pole = (s.clone() - Rational::from(1)).abs().to_f64();
    let pole_extra = if dist_pole < 1.0 {
        (-dist_pole.log10()).ceil() as u32 + 2
    } else {
        0
    };

    let mut last_bound_exp: i64 = 0;
    let mut last_n: u64 = 0;

    for round in 0..8u32 {
        let plan = em_plan(sigma, a_f, digits, round, pole_extra);
        if plan.n > 20_000_000 {
            break;
        }
        last_n = plan.n;
        let bits = bits_for_digits(plan.work);
        let neg_s = Float::with_val(bits, -s.clone());

        let af = Float::with_val(bits, a);
        let mut ksum = Float::new(bits);
        let mut dksum = Float::new(bits);
        for k in 0..plan.n {
            let t = (&af + k).complete(bits);
            let p = t.clone().pow(&neg_s);
            if want_deriv {
                dksum -= t.ln() * &p;
            }
            ksum += p;
        }

        // boundary point x = a + N, with x >= 2 by the plan's floor on N
        let x = a + Rational::from(plan.n);
        let xf = Float::with_val(bits, &x);
        let ln_x = xf.clone().ln();
        let xs = xf.clone().pow(&neg_s); // x^{-s}

        let sm1 = s - Rational::from(1);
        let sm1_f = Float::with_val(bits, &sm1);
        let t1 = xs.clone().mul_add(&xf, &Float::new(bits)) / &sm1_f; // x^{1-s}/(s-1)
        let dt1 = -(t1.clone() * (&ln_x + Float::with_val(bits, Rational::from(1) / &sm1)));

        let t2 = xs.clone() / 2u32;
        let dt2 = -(ln_x.clone() * &t2);

        // correction terms, exact rising factorials P and P'
        let mut p_rat = s.clone();
        let mut dp_rat = Rational::from(1);
        let mut xpow = xs.clone() / &xf; // x^{-s-(2j-1)} at j = 1
        let inv_x2 = Float::with_val(bits, 1u32) / (xf.clone().square());
        let mut cors = Float::new(bits);
        let mut dcors = Float::new(bits);
        for j in 1..=plan.j {
            let c = em_coeff(j);
            let q = (&c * &p_rat).complete();
            cors += Float::with_val(bits, &q) * &xpow;
            if want_deriv {
                let dq = (&c * &dp_rat).complete();
                let dterm =
                    (Float::with_val(bits, &dq) - Float::with_val(bits, &q) * &ln_x) * &xpow;
                dcors += dterm;
            }
            // advance P_{2j-1} -> P_{2j+1}
            let m = 2 * (j as i64) - 1;
            let f1 = s + Rational::from(m);
            let f2 = s + Rational::from(m + 1);
            let ff = (&f1 * &f2).complete();
            dp_rat = (&dp_rat * &ff).complete() + &p_rat * ((&f1 + &f2).complete());
            p_rat *= ff;
            xpow *= &inv_x2;
        }

        // first omitted terms bound the remainders
        let c_next = em_coeff(plan.j + 1);
        let bound_val: Float = Float::with_val(bits, (&c_next * &p_rat).complete()).abs() * &xpow;
        let bound_der: Float = Float::with_val(bits, &c_next).abs()
            * (Float::with_val(bits, &dp_rat).abs() + Float::with_val(bits, &p_rat).abs() * &ln_x)
            * &xpow;

        let val = ksum + &t1 + &t2 + &cors;
        let tol_exp = |v: &Float| -> i64 {
            let mag = float_log2(v).unwrap_or(0).max(0);
            mag - (((digits + 1) as f64) * std::f64::consts::LOG2_10).ceil() as i64
        };

        let val_ok = bound_val.is_zero() || float_log2(&bound_val).unwrap() <= tol_exp(&val);
        if want_deriv {
            let dval = dksum + &dt1 + &dt2 + &dcors;
            let der_ok = bound_der.is_zero() || float_log2(&bound_der).unwrap() <= tol_exp(&dval);
            if val_ok && der_ok {
                return Ok((val, Some(dval)));
            }
            last_bound_exp = float_log2(&bound_der)
                .unwrap_or(0)
                .max(float_log2(&bound_val).unwrap_or(0));
        } else {
            if val_ok {
                return Ok((val, None));
            }
            last_bound_exp = float_log2(&bound_val).unwrap_or(0);
        }
    }

    Err(Error::ConvergenceTooSlow {
        bound: format!("2^{last_bound_exp}"),
        tolerance: format!("1e-{digits}"),
        terms: last_n,
    })
}

/// Hurwitz zeta `zeta(s,a)` for rational `s != 1` and rational `a > 0`,
/// analytically continued to all real `s`.
pub fn hurwitz_zeta(s: &Rational, a: &Rational, digits: u32) -> Result<BigReal> {
    let (v, _) = em_core(s, a, digits, false)?;
    Ok(BigReal::from_float(v, digits))
}

/// s-derivative of the Hurwitz zeta function at rational `s != 1`, `a > 0`.
pub fn hurwitz_zeta_deriv(s: &Rational, a: &Rational, digits: u32) -> Result<BigReal> {
    let (_, d) = em_core(s, a, digits, true)?;
    Ok(BigReal::from_float(d.unwrap(), digits))
}

/// Riemann zeta at rational `s != 1`.
pub fn riemann_zeta(s: &Rational, digits: u32) -> Result<BigReal> {
    hurwitz_zeta(s, &Rational::from(1), digits)
}

/// Riemann zeta s-derivative at rational `s != 1`.
pub fn riemann_zeta_deriv(s: &Rational, digits: u32) -> Result<BigReal> {
    hurwitz_zeta_deriv(s, &Rational::from(1), digits)
}

/// Highest-precision-so-far cache of `zeta'(-k)`.
static ZETA_PRIME_CACHE: Lazy<Mutex<HashMap<u32, BigReal>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// `zeta'(-k)` for integer `k >= 0` (`k = 0` gives `zeta'(0) = -ln(2pi)/2`).
/// Values are memoized at the highest precision requested so far; lower
/// requests round the cached value down.
pub fn zeta_prime_neg_int(k: u32, digits: u32) -> BigReal {
    {
        let cache = ZETA_PRIME_CACHE.lock().unwrap();
        if let Some(v) = cache.get(&k) {
            if v.digits() >= digits {
                return v.with_digits(digits);
            }
        }
    }
    // Euler-Maclaurin at s = -k loses O(k log k) digits to cancellation, so
    // past a modest k the reflected evaluation is much cheaper.
    let v = if k < 32 {
        let s = Rational::from(-(k as i64));
        hurwitz_zeta_deriv(&s, &Rational::from(1), digits)
            .expect("Euler-Maclaurin converges at integer arguments")
    } else {
        zeta_prime_neg_int_functional(k, digits)
    };
    let mut cache = ZETA_PRIME_CACHE.lock().unwrap();
    let entry = cache.entry(k).or_insert_with(|| v.clone());
    if entry.digits() < digits {
        *entry = v.clone();
    }
    v
}

/// `zeta'(-k)` computed from the reflection formula, so that every zeta
/// evaluation happens at a large positive argument:
///
/// ```text
/// zeta'(-2m)   = (-1)^m (2m)! zeta(2m+1) / (2 (2pi)^{2m})
/// zeta'(1-2m)  = 2 (-1)^m (2m-1)!/(2pi)^{2m}
///                  * [ (ln 2pi + gamma - H_{2m-1}) zeta(2m) - zeta'(2m) ]
/// ```
///
/// This shares no code path with the direct Euler-Maclaurin evaluation at
/// negative argument, which makes the two usable as mutual checks.
pub fn zeta_prime_neg_int_functional(k: u32, digits: u32) -> BigReal {
    let work = digits + 16;
    let two_pi = constant_pi(work).mul_rational(&Rational::from(2));
    if k == 0 {
        return (-two_pi.ln())
            .mul_rational(&Rational::from((1, 2)))
            .with_digits(digits);
    }
    let value = if k % 2 == 0 {
        let m = k / 2;
        let z = riemann_zeta(&Rational::from(2 * m + 1), work)
            .expect("Euler-Maclaurin converges for s > 1");
        let num = BigReal::from_integer(&factorial(2 * m), work) * z;
        let den = two_pi.powi(i64::from(k)).mul_rational(&Rational::from(2));
        let v = num / den;
        if m % 2 == 0 {
            v
        } else {
            -v
        }
    } else {
        let m = (k + 1) / 2;
        let z = riemann_zeta(&Rational::from(2 * m), work)
            .expect("Euler-Maclaurin converges for s > 1");
        let zd = riemann_zeta_deriv(&Rational::from(2 * m), work)
            .expect("Euler-Maclaurin converges for s > 1");
        let log_factor =
            two_pi.ln() + constant_euler_gamma(work) - BigReal::from_rational(&harmonic(k), work);
        let bracket = log_factor * z - zd;
        let mut scale = Rational::from(2) * Rational::from(factorial(k));
        if m % 2 == 1 {
            scale = -scale;
        }
        bracket.mul_rational(&scale) / two_pi.powi(i64::from(2 * m))
    };
    value.with_digits(digits)
}

/// Digamma at integer or half-integer `x > 0`, via the exact finite forms
/// `psi(n) = H_{n-1} - gamma` and
/// `psi(n + 1/2) = -gamma - 2 ln 2 + 2 sum_{j=1}^{n} 1/(2j-1)`.
pub fn digamma_half_int(x: &Rational, digits: u32) -> BigReal {
    let two_x = x * Rational::from(2);
    assert!(
        *x > 0 && two_x.is_integer(),
        "digamma_half_int requires positive integer or half-integer argument, got {x}"
    );
    let work = digits + 5;
    let gamma = constant_euler_gamma(work);
    let value = if x.is_integer() {
        let n = x.numer().to_u32().expect("argument fits in u32");
        BigReal::from_rational(&harmonic(n - 1), work) - gamma
    } else {
        let n = ((two_x.numer().to_u32().expect("argument fits in u32")) - 1) / 2;
        let mut odd_sum = Rational::new();
        for j in 1..=n {
            odd_sum += Rational::from((2, 2 * (j as i64) - 1));
        }
        let ln2 = constant_ln2(work);
        BigReal::from_rational(&odd_sum, work) - gamma - &ln2 - &ln2
    };
    value.with_digits(digits)
}

/// Digamma at arbitrary positive rational argument: recurrence shift to a
/// large abscissa followed by the asymptotic series
/// `psi(y) = ln y - 1/(2y) - sum_j B_{2j}/(2j y^{2j})`, whose error is
/// bounded by the first omitted term.
pub fn digamma(a: &Rational, digits: u32) -> BigReal {
    assert!(*a > 0, "digamma requires a positive argument, got {a}");
    let two_a = a * Rational::from(2);
    if two_a.is_integer() {
        return digamma_half_int(a, digits);
    }
    let work = digits + 12;
    let bits = bits_for_digits(work);

    // shift until y = a + m is large enough that the series bottoms out
    // below the target (minimum term ~ e^{-2 pi y})
    let y_target = (0.45 * work as f64).ceil() + 6.0;
    let m = (y_target - a.to_f64()).ceil().max(0.0) as u64;
    let af = Float::with_val(bits, a);
    let mut shift = Float::new(bits);
    for i in 0..m {
        shift += Float::with_val(bits, 1u32) / (&af + i).complete(bits);
    }
    let y = a + Rational::from(m);
    let yf = Float::with_val(bits, &y);

    let mut acc = yf.clone().ln() - Float::with_val(bits, 1u32) / (yf.clone() * 2u32);
    let y2 = yf.clone().square();
    let inv_y2 = Float::with_val(bits, 1u32) / &y2;
    let mut ypow = inv_y2.clone();
    let tol_exp = -(((work - 2) as f64) * std::f64::consts::LOG2_10).ceil() as i64;
    let mut converged = false;
    for j in 1..(4 * work as u64) {
        let c = bernoulli(2 * j as u32) * Rational::from((1, 2 * j as i64));
        let term = Float::with_val(bits, &c) * &ypow;
        if !term.is_zero() && float_log2(&term).unwrap() <= tol_exp {
            converged = true;
            break;
        }
        acc -= term;
        ypow *= &inv_y2;
    }
    assert!(converged, "digamma asymptotic series stalled at y = {y}");
    BigReal::from_float(acc - shift, digits)
}
