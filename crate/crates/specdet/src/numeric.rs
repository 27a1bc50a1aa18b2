//! Arbitrary-precision real arithmetic and fundamental constants.
//!
//! [`BigReal`] wraps an MPFR float together with its advertised precision in
//! decimal digits. Every arithmetic operation rounds correctly at the
//! working precision, which is generous enough that the documented contract
//! (2 units in the last decimal place) always holds. Precision propagates as
//! the minimum of the operand precisions; values are immutable after
//! construction and safe to share across threads.
//!
//! Exact arithmetic uses [`Rational`] directly; it is canonical by
//! construction (lowest terms, positive denominator).

use rug::float::Round;
use rug::ops::Pow;
use rug::{float::Constant, Float, Integer};

pub use rug::Rational;

/// Extra binary guard bits beyond the requested decimal precision.
const GUARD_BITS: u32 = 8;

/// Binary precision needed to honor `digits` decimal digits.
pub(crate) fn bits_for_digits(digits: u32) -> u32 {
    // log2(10) = 3.3219...; round up and pad.
    let d = digits.max(1) as u64;
    ((d * 3_322 + 999) / 1_000) as u32 + GUARD_BITS
}

/// Arbitrary-precision real number with explicit decimal precision.
#[derive(Debug, Clone)]
pub struct BigReal {
    f: Float,
    digits: u32,
}

impl BigReal {
    /// Wraps an existing float, re-rounding it to the precision implied by
    /// `digits`.
    pub(crate) fn from_float(f: Float, digits: u32) -> Self {
        let bits = bits_for_digits(digits);
        let f = if f.prec() == bits {
            f
        } else {
            Float::with_val(bits, &f)
        };
        BigReal { f, digits }
    }

    pub fn zero(digits: u32) -> Self {
        BigReal::from_float(Float::new(bits_for_digits(digits)), digits)
    }

    pub fn from_rational(q: &Rational, digits: u32) -> Self {
        BigReal::from_float(Float::with_val(bits_for_digits(digits), q), digits)
    }

    pub fn from_integer(n: &Integer, digits: u32) -> Self {
        BigReal::from_float(Float::with_val(bits_for_digits(digits), n), digits)
    }

    pub fn from_u64(n: u64, digits: u32) -> Self {
        BigReal::from_float(Float::with_val(bits_for_digits(digits), n), digits)
    }

    pub fn from_i64(n: i64, digits: u32) -> Self {
        BigReal::from_float(Float::with_val(bits_for_digits(digits), n), digits)
    }

    /// Parses a plain decimal string such as `-3.33885108195937649805`.
    pub fn from_decimal_str(s: &str, digits: u32) -> Option<Self> {
        let parsed = Float::parse(s).ok()?;
        Some(BigReal::from_float(
            Float::with_val(bits_for_digits(digits), parsed),
            digits,
        ))
    }

    /// 10^e at the given precision (exact whenever representable).
    pub fn pow10(e: i64, digits: u32) -> Self {
        let bits = bits_for_digits(digits);
        BigReal::from_float(Float::with_val(bits, 10).pow(e as i32), digits)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Rounds to a (usually lower) precision.
    pub fn with_digits(&self, digits: u32) -> Self {
        BigReal::from_float(self.f.clone(), digits)
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.f.is_finite()
    }

    pub fn is_negative(&self) -> bool {
        self.f.is_sign_negative() && !self.f.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.f.to_f64()
    }

    /// Base-2 magnitude exponent, `None` for zero. `v ~ 2^(exp-1)`.
    pub fn log2_magnitude(&self) -> Option<i64> {
        self.f.get_exp().map(|e| e as i64)
    }

    pub fn abs(&self) -> Self {
        BigReal::from_float(self.f.clone().abs(), self.digits)
    }

    pub fn neg(&self) -> Self {
        BigReal::from_float(Float::with_val(self.f.prec(), -&self.f), self.digits)
    }

    pub fn ln(&self) -> Self {
        BigReal::from_float(Float::with_val(self.f.prec(), self.f.ln_ref()), self.digits)
    }

    pub fn exp(&self) -> Self {
        BigReal::from_float(
            Float::with_val(self.f.prec(), self.f.exp_ref()),
            self.digits,
        )
    }

    pub fn sqrt(&self) -> Self {
        BigReal::from_float(
            Float::with_val(self.f.prec(), self.f.sqrt_ref()),
            self.digits,
        )
    }

    pub fn gamma(&self) -> Self {
        BigReal::from_float(
            Float::with_val(self.f.prec(), self.f.gamma_ref()),
            self.digits,
        )
    }

    pub fn powi(&self, e: i64) -> Self {
        BigReal::from_float(
            Float::with_val(self.f.prec(), (&self.f).pow(e as i32)),
            self.digits,
        )
    }

    /// Real power with a real exponent; `self` must be positive.
    pub fn pow(&self, e: &BigReal) -> Self {
        let digits = self.digits.min(e.digits);
        BigReal::from_float(
            Float::with_val(bits_for_digits(digits), (&self.f).pow(&e.f)),
            digits,
        )
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        BigReal::from_float(Float::with_val(self.f.prec(), &self.f * q), self.digits)
    }

    pub fn add_rational(&self, q: &Rational) -> Self {
        BigReal::from_float(Float::with_val(self.f.prec(), &self.f + q), self.digits)
    }

    /// Natural logarithm of a positive rational, carried out at full
    /// precision of `digits`.
    pub fn ln_rational(q: &Rational, digits: u32) -> Self {
        let bits = bits_for_digits(digits);
        BigReal::from_float(Float::with_val(bits, q).ln(), digits)
    }

    /// `q^e` for rational base `q > 0` and real exponent.
    pub fn rational_pow_real(q: &Rational, e: &BigReal, digits: u32) -> Self {
        let bits = bits_for_digits(digits);
        let base = Float::with_val(bits, q);
        BigReal::from_float(Float::with_val(bits, base.pow(&e.f)), digits)
    }

    /// Formats to `sig` significant decimal digits in plain (non-scientific)
    /// notation, rounding to nearest with ties to even.
    pub fn to_decimal_string(&self, sig: usize) -> String {
        let sig = sig.max(1);
        if self.f.is_zero() {
            return "0".to_string();
        }
        let (neg, digs, exp) = self.f.to_sign_string_exp(10, Some(sig));
        let exp = exp.unwrap_or(0);
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if exp <= 0 {
            out.push_str("0.");
            for _ in 0..(-exp) {
                out.push('0');
            }
            out.push_str(&digs);
        } else if (exp as usize) >= digs.len() {
            out.push_str(&digs);
            for _ in 0..(exp as usize - digs.len()) {
                out.push('0');
            }
        } else {
            let (int_part, frac_part) = digs.split_at(exp as usize);
            out.push_str(int_part);
            out.push('.');
            out.push_str(frac_part);
        }
        out
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.f.partial_cmp(&other.f)
    }
}

impl std::fmt::Display for BigReal {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fmt.write_str(&self.to_decimal_string(self.digits as usize))
    }
}

macro_rules! bigreal_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl std::ops::$trait<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                let digits = self.digits.min(rhs.digits);
                BigReal::from_float(
                    Float::with_val(bits_for_digits(digits), &self.f $op &rhs.f),
                    digits,
                )
            }
        }
        impl std::ops::$trait<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                (&self).$method(rhs)
            }
        }
    };
}

bigreal_binop!(Add, add, +);
bigreal_binop!(Sub, sub, -);
bigreal_binop!(Mul, mul, *);
bigreal_binop!(Div, div, /);

impl std::ops::Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::neg(self)
    }
}

impl std::ops::Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::neg(&self)
    }
}

/// Embeds a rational exactly, then rounds once to `digits` decimal digits.
pub fn big_real_from_rational(q: &Rational, digits: u32) -> BigReal {
    BigReal::from_rational(q, digits)
}

pub fn constant_pi(digits: u32) -> BigReal {
    BigReal::from_float(
        Float::with_val(bits_for_digits(digits), Constant::Pi),
        digits,
    )
}

pub fn constant_euler_gamma(digits: u32) -> BigReal {
    BigReal::from_float(
        Float::with_val(bits_for_digits(digits), Constant::Euler),
        digits,
    )
}

pub fn constant_ln2(digits: u32) -> BigReal {
    BigReal::from_float(
        Float::with_val(bits_for_digits(digits), Constant::Log2),
        digits,
    )
}

/// Glaisher-Kinkelin constant `A = exp(1/12 - zeta'(-1))`.
///
/// Computed through the zeta engine; an algebraically independent route via
/// `zeta'(2)` is exercised in the test suite.
pub fn constant_glaisher(digits: u32) -> BigReal {
    let work = digits + 10;
    let zp1 = crate::special::zeta_prime_neg_int(1, work);
    let twelfth = BigReal::from_rational(&Rational::from((1, 12)), work);
    (twelfth - zp1).exp().with_digits(digits)
}

/// Exact `q^e` for rational `q > 0` and rational exponent `e`, when the
/// result is itself rational. Needed so residues and half-integer
/// substitutions stay in exact arithmetic.
pub fn rational_pow_exact(q: &Rational, e: &Rational) -> Option<Rational> {
    if *q <= 0 {
        return None;
    }
    let p = e.numer();
    let root = e.denom().to_u32()?;
    let base = if root == 1 {
        q.clone()
    } else {
        let (num_root, num_rem) = q.numer().clone().root_rem(Integer::new(), root);
        let (den_root, den_rem) = q.denom().clone().root_rem(Integer::new(), root);
        if num_rem != 0 || den_rem != 0 {
            return None;
        }
        Rational::from((num_root, den_root))
    };
    let p_i32 = p.to_i32()?;
    Some(base.pow(p_i32))
}

/// Round-half-even decimal rounding of a rational to `digits` significant
/// digits, as a string. Used for deterministic text output of exact values.
pub fn rational_to_decimal_string(q: &Rational, digits: u32) -> String {
    BigReal::from_rational(q, digits + 4).to_decimal_string(digits as usize)
}

/// Nearest-even rounding mode alias used by output formatting.
#[allow(dead_code)]
pub(crate) const ROUND: Round = Round::Nearest;
