//! Closed-form expansions of spectral zeta functions.
//!
//! Every supported spectrum has a zeta function expressible as a finite sum
//! of Hurwitz terms `q·g^s·ζ(αs+β, a)` plus pure exponentials `q·r^s`. The
//! builders produce that form two independent ways: straight from the
//! closed-form coefficient tables, or by exact symbolic iteration of the
//! dimension recursion from printed initial conditions. Both land on the
//! same canonical form, which makes their agreement a structural equality
//! check rather than a numerical one.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Complete, Integer};

use crate::combinatorics::{binomial, factorial, u, u_bar, v, v_bar};
use crate::error::{Error, Result};
use crate::numeric::{rational_pow_exact, BigReal, Rational};
use crate::special;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ManifoldKind {
    Sphere,
    HemisphereDirichlet,
    RealProjective,
    HarmonicOscillator,
}

impl ManifoldKind {
    pub fn name(self) -> &'static str {
        match self {
            ManifoldKind::Sphere => "sphere",
            ManifoldKind::HemisphereDirichlet => "hemisphere",
            ManifoldKind::RealProjective => "projective",
            ManifoldKind::HarmonicOscillator => "oscillator",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Manifold {
    pub kind: ManifoldKind,
    pub dim: u32,
}

impl Manifold {
    pub fn new(kind: ManifoldKind, dim: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::OutOfRange {
                dim,
                reason: "dimension must be at least 1",
            });
        }
        Ok(Manifold { kind, dim })
    }

    /// Constant subtracted from each squared shifted eigenvalue to recover
    /// the original spectrum: `((dim-1)/2)^2` for the geometric families,
    /// zero for the oscillator (whose sequence is used unshifted).
    pub fn sequence_shift(&self) -> Rational {
        let d = i64::from(self.dim);
        match self.kind {
            ManifoldKind::HarmonicOscillator => Rational::new(),
            _ => Rational::from(((d - 1) * (d - 1), 4)),
        }
    }

    /// First member of the shifted sequence the zeta function sums over.
    pub fn first_shifted_eigenvalue(&self) -> Rational {
        let k0 = match self.kind {
            ManifoldKind::HarmonicOscillator => 0,
            _ => 1,
        };
        shifted_eigenvalue(*self, k0)
    }
}

impl std::fmt::Display for Manifold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} dim {}", self.kind.name(), self.dim)
    }
}

/// `k`-th term of the shifted sequence: `((2k+dim-1)/2)^2` for sphere and
/// hemisphere (k >= 1), `((4k+dim-1)/2)^2` for projective space (k >= 1),
/// `2k+dim` for the oscillator (k >= 0).
pub fn shifted_eigenvalue(m: Manifold, k: u32) -> Rational {
    let n = i64::from(m.dim);
    let k = i64::from(k);
    match m.kind {
        ManifoldKind::Sphere | ManifoldKind::HemisphereDirichlet => {
            Rational::from(((2 * k + n - 1) * (2 * k + n - 1), 4))
        }
        ManifoldKind::RealProjective => Rational::from(((4 * k + n - 1) * (4 * k + n - 1), 4)),
        ManifoldKind::HarmonicOscillator => Rational::from(2 * k + n),
    }
}

/// Eigenvalue multiplicity paired with `shifted_eigenvalue(m, k)`.
pub fn multiplicity(m: Manifold, k: u32) -> Integer {
    let n = m.dim;
    match m.kind {
        ManifoldKind::Sphere => harmonic_space_dim(n, k),
        ManifoldKind::HemisphereDirichlet => {
            assert!(k >= 1, "hemisphere spectrum starts at k = 1");
            binomial(n + k - 2, k - 1)
        }
        ManifoldKind::RealProjective => harmonic_space_dim(n, 2 * k),
        ManifoldKind::HarmonicOscillator => binomial(n - 1 + k, k),
    }
}

/// Dimension of the space of degree-`j` harmonic polynomials in `n+1`
/// variables: `C(n+j, j) - C(n+j-2, j-2)`.
fn harmonic_space_dim(n: u32, j: u32) -> Integer {
    let head = binomial(n + j, j);
    if j >= 2 {
        head - binomial(n + j - 2, j - 2)
    } else {
        head
    }
}

/// One Hurwitz zeta building block `coeff · base^s · ζ(arg_scale·s + arg_offset, shift)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaTerm {
    pub coeff: Rational,
    /// Multiplier base `g > 0`, contributing `g^s`.
    pub base: Rational,
    /// Argument scale α, 2 for the geometric families, 1 for the oscillator.
    pub arg_scale: u8,
    /// Argument offset β.
    pub arg_offset: i64,
    /// Hurwitz shift `a > 0`.
    pub shift: Rational,
}

/// Degenerate exponential block `coeff · base^s` with `base > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpTerm {
    pub coeff: Rational,
    pub base: Rational,
}

/// A spectral zeta function in closed form.
///
/// Terms are kept canonical: zeta terms sorted by `(shift, arg_scale,
/// arg_offset, base)` with no duplicate key and no zero coefficient,
/// exponential terms sorted by base under the same rules. `mu` is the
/// rightmost pole location, which for these spectra coincides with the
/// abscissa of convergence of the defining series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaExpansion {
    pub manifold: Manifold,
    pub zeta_terms: Vec<ZetaTerm>,
    pub exp_terms: Vec<ExpTerm>,
    pub mu: Rational,
}

fn zt(
    coeff: Rational,
    base: Rational,
    arg_scale: u8,
    arg_offset: i64,
    shift: Rational,
) -> ZetaTerm {
    debug_assert!(base.cmp0() == Ordering::Greater);
    debug_assert!(shift.cmp0() == Ordering::Greater);
    debug_assert!(arg_scale == 1 || arg_scale == 2);
    ZetaTerm {
        coeff,
        base,
        arg_scale,
        arg_offset,
        shift,
    }
}

fn pow2r(e: i64) -> Rational {
    if e >= 0 {
        Rational::from(Integer::from(1) << e as u32)
    } else {
        Rational::from((Integer::from(1), Integer::from(1) << (-e) as u32))
    }
}

fn canonicalize(mut zs: Vec<ZetaTerm>, mut es: Vec<ExpTerm>) -> (Vec<ZetaTerm>, Vec<ExpTerm>) {
    zs.sort_by(|x, y| {
        x.shift
            .cmp(&y.shift)
            .then(x.arg_scale.cmp(&y.arg_scale))
            .then(x.arg_offset.cmp(&y.arg_offset))
            .then(x.base.cmp(&y.base))
    });
    let mut zeta_terms: Vec<ZetaTerm> = Vec::with_capacity(zs.len());
    for t in zs {
        if let Some(last) = zeta_terms.last_mut() {
            if last.shift == t.shift
                && last.arg_scale == t.arg_scale
                && last.arg_offset == t.arg_offset
                && last.base == t.base
            {
                last.coeff += t.coeff;
                continue;
            }
        }
        zeta_terms.push(t);
    }
    zeta_terms.retain(|t| t.coeff.cmp0() != Ordering::Equal);

    es.sort_by(|x, y| x.base.cmp(&y.base));
    let mut exp_terms: Vec<ExpTerm> = Vec::with_capacity(es.len());
    for t in es {
        if let Some(last) = exp_terms.last_mut() {
            if last.base == t.base {
                last.coeff += t.coeff;
                continue;
            }
        }
        exp_terms.push(t);
    }
    exp_terms.retain(|t| t.coeff.cmp0() != Ordering::Equal);

    (zeta_terms, exp_terms)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum EvalMode {
    Value,
    Derivative,
    FinitePart,
}

impl ZetaExpansion {
    fn from_parts(manifold: Manifold, zs: Vec<ZetaTerm>, es: Vec<ExpTerm>) -> Self {
        let (zeta_terms, exp_terms) = canonicalize(zs, es);
        let mut e = ZetaExpansion {
            manifold,
            zeta_terms,
            exp_terms,
            mu: Rational::new(),
        };
        e.mu = e
            .poles()
            .last()
            .map(|(p, _)| p.clone())
            .expect("every supported spectrum has at least one pole");
        e
    }

    /// All poles with their residues, ascending by location. A term
    /// `q·g^s·ζ(αs+β, a)` contributes residue `q·g^{s0}/α` at
    /// `s0 = (1-β)/α`; locations whose aggregate residue vanishes are
    /// dropped. Residues stay exact because every `g^{s0}` arising here is
    /// rational.
    pub fn poles(&self) -> Vec<(Rational, Rational)> {
        let mut agg: BTreeMap<Rational, Rational> = BTreeMap::new();
        for t in &self.zeta_terms {
            let loc = Rational::from((1 - t.arg_offset, i64::from(t.arg_scale)));
            let gpow =
                rational_pow_exact(&t.base, &loc).expect("residue base power must stay rational");
            let res = (&t.coeff * &gpow).complete() / Rational::from(t.arg_scale);
            *agg.entry(loc).or_insert_with(Rational::new) += res;
        }
        agg.into_iter()
            .filter(|(_, r)| r.cmp0() != Ordering::Equal)
            .collect()
    }

    /// Value at rational `s`, accurate to `digits` significant digits.
    pub fn eval(&self, s: &Rational, digits: u32) -> Result<BigReal> {
        self.guard_pole(s, digits)?;
        self.assemble(s, digits, EvalMode::Value)
    }

    /// Derivative at rational `s`, term-wise:
    /// `q·g^s·(ln g·ζ(αs+β,a) + α·ζ'(αs+β,a))` and `q·r^s·ln r`.
    pub fn eval_deriv(&self, s: &Rational, digits: u32) -> Result<BigReal> {
        self.guard_pole(s, digits)?;
        self.assemble(s, digits, EvalMode::Derivative)
    }

    /// Finite part at the positive integer `m`: the value when `m` is not a
    /// pole, otherwise the limit of `eval(m+ε) - residue/ε`. Terms that are
    /// singular at `m` contribute `q·g^m·(ln g/α - ψ(a))`, from
    /// `ζ(1+ε', a) = 1/ε' - ψ(a) + O(ε')`.
    pub fn finite_part(&self, m: u32, digits: u32) -> Result<BigReal> {
        assert!(m >= 1, "finite parts are taken at positive integers");
        self.assemble(&Rational::from(m), digits, EvalMode::FinitePart)
    }

    /// Coefficient `c_{-m}` of the Laurent expansion data at the positive
    /// integer `m`: the residue there times `(m-1)!`, zero when `m` is not
    /// a pole.
    pub fn c_coefficient(&self, m: u32, digits: u32) -> BigReal {
        assert!(m >= 1, "coefficients are indexed by positive integers");
        let loc = Rational::from(m);
        for (p, r) in self.poles() {
            if p == loc {
                let c = r * Rational::from(factorial(m - 1));
                return BigReal::from_rational(&c, digits);
            }
        }
        BigReal::zero(digits)
    }

    fn guard_pole(&self, s: &Rational, digits: u32) -> Result<()> {
        for (p, _) in self.poles() {
            let gap = (s - &p).complete().abs();
            if gap.cmp0() == Ordering::Equal {
                return Err(Error::Pole(p));
            }
            // num/den bit lengths bracket log2 of the gap within one bit;
            // only flag distances clearly below 10^-digits.
            let log2_gap =
                gap.numer().significant_bits() as i64 - gap.denom().significant_bits() as i64;
            if log2_gap + 2 < -((digits as i64) * 3322 / 1000) {
                return Err(Error::Pole(p));
            }
        }
        Ok(())
    }

    /// Sums the terms at `s`, re-running with more working precision until
    /// the digits lost to cancellation between terms are fully covered.
    fn assemble(&self, s: &Rational, digits: u32, mode: EvalMode) -> Result<BigReal> {
        let mut work = digits + 18;
        let mut last = BigReal::zero(digits);
        for _ in 0..6 {
            let (sum, err_mag) = self.assemble_at(s, work, mode)?;
            let sum_mag = sum
                .log2_magnitude()
                .unwrap_or(err_mag - (work as i64) * 3322 / 1000 - 40);
            let cancel_digits = (((err_mag - sum_mag).max(0) as u64) * 1000 / 3322) as u32;
            if work >= digits + cancel_digits + 12 {
                return Ok(sum.with_digits(digits));
            }
            last = sum.with_digits(digits);
            work = digits + cancel_digits + 24;
        }
        // Cancellation kept pace with every escalation: the value is below
        // the resolvable scale, and `last` already bounds it in absolute
        // terms.
        Ok(last)
    }

    fn assemble_at(&self, s: &Rational, work: u32, mode: EvalMode) -> Result<(BigReal, i64)> {
        let mut acc = BigReal::zero(work);
        // log2 of the largest absolute-error scale among the terms,
        // relative to one ulp at `work` digits
        let mut err_mag = i64::MIN / 4;
        let bump = |m: Option<i64>, err: &mut i64| {
            if let Some(b) = m {
                if b > *err {
                    *err = b;
                }
            }
        };

        for t in &self.zeta_terms {
            let arg = Rational::from(i64::from(t.arg_scale)) * s + Rational::from(t.arg_offset);
            let qgs = match rational_pow_exact(&t.base, s) {
                Some(p) => BigReal::from_rational(&((&t.coeff * &p).complete()), work),
                None => {
                    let sv = BigReal::from_rational(s, work);
                    BigReal::from_rational(&t.coeff, work)
                        * BigReal::rational_pow_real(&t.base, &sv, work)
                }
            };
            let qgs_mag = qgs.log2_magnitude().unwrap_or(i64::MIN / 4);

            let contrib = match mode {
                EvalMode::Value => {
                    let z = special::hurwitz_zeta(&arg, &t.shift, work)?;
                    bump(
                        Some(qgs_mag + z.log2_magnitude().unwrap_or(0).max(0)),
                        &mut err_mag,
                    );
                    &qgs * &z
                }
                EvalMode::Derivative => {
                    let z = special::hurwitz_zeta(&arg, &t.shift, work)?;
                    let zd = special::hurwitz_zeta_deriv(&arg, &t.shift, work)?;
                    let scale_mag = z
                        .log2_magnitude()
                        .unwrap_or(0)
                        .max(zd.log2_magnitude().unwrap_or(0))
                        .max(0);
                    bump(Some(qgs_mag + scale_mag + 4), &mut err_mag);
                    let ln_g = BigReal::ln_rational(&t.base, work);
                    let piece = &ln_g * &z + zd.mul_rational(&Rational::from(t.arg_scale));
                    &qgs * &piece
                }
                EvalMode::FinitePart => {
                    if arg == 1 {
                        let psi = special::digamma(&t.shift, work);
                        bump(
                            Some(qgs_mag + psi.log2_magnitude().unwrap_or(0).max(0) + 4),
                            &mut err_mag,
                        );
                        let ln_g = BigReal::ln_rational(&t.base, work)
                            .mul_rational(&Rational::from((1, u32::from(t.arg_scale))));
                        let piece = &ln_g - &psi;
                        &qgs * &piece
                    } else {
                        let z = special::hurwitz_zeta(&arg, &t.shift, work)?;
                        bump(
                            Some(qgs_mag + z.log2_magnitude().unwrap_or(0).max(0)),
                            &mut err_mag,
                        );
                        &qgs * &z
                    }
                }
            };
            acc = &acc + &contrib;
        }

        for t in &self.exp_terms {
            let val = match rational_pow_exact(&t.base, s) {
                Some(p) => BigReal::from_rational(&((&t.coeff * &p).complete()), work),
                None => {
                    let sv = BigReal::from_rational(s, work);
                    BigReal::from_rational(&t.coeff, work)
                        * BigReal::rational_pow_real(&t.base, &sv, work)
                }
            };
            let contrib = match mode {
                EvalMode::Value | EvalMode::FinitePart => val,
                EvalMode::Derivative => {
                    let ln_r = BigReal::ln_rational(&t.base, work);
                    &val * &ln_r
                }
            };
            bump(contrib.log2_magnitude(), &mut err_mag);
            acc = &acc + &contrib;
        }

        Ok((acc, err_mag))
    }
}

/// Builds the expansion straight from the closed-form coefficient tables.
pub fn explicit_build(m: Manifold) -> ZetaExpansion {
    assert!(m.dim >= 1, "dimension must be at least 1");
    let (zs, es) = match m.kind {
        ManifoldKind::Sphere => explicit_sphere(m.dim),
        ManifoldKind::HemisphereDirichlet => explicit_hemisphere(m.dim),
        ManifoldKind::RealProjective => explicit_projective(m.dim),
        ManifoldKind::HarmonicOscillator => explicit_oscillator(m.dim),
    };
    ZetaExpansion::from_parts(m, zs, es)
}

fn one() -> Rational {
    Rational::from(1)
}

fn quarter() -> Rational {
    Rational::from((1, 4))
}

fn half() -> Rational {
    Rational::from((1, 2))
}

fn explicit_sphere(dim: u32) -> (Vec<ZetaTerm>, Vec<ExpTerm>) {
    let mut zs = Vec::new();
    let mut es = Vec::new();
    if dim == 1 {
        zs.push(zt(Rational::from(2), one(), 2, 0, one()));
        return (zs, es);
    }
    if dim % 2 == 1 {
        let n = (dim - 1) / 2;
        for i in 1..=n {
            zs.push(zt(u_bar(n, i), one(), 2, -2 * i64::from(i), one()));
        }
        let nn = i64::from(n);
        es.push(ExpTerm {
            coeff: Rational::from(-1),
            base: Rational::from((1, nn * nn)),
        });
    } else {
        let n = dim / 2;
        for i in 1..=n {
            let vb = v_bar(n, i);
            let off = -2 * i64::from(i) + 1;
            zs.push(zt(vb.clone(), Rational::from(4), 2, off, one()));
            zs.push(zt(
                -(vb * pow2r(2 * i64::from(i) - 1)),
                one(),
                2,
                off,
                one(),
            ));
        }
        let w = 2 * i64::from(n) - 1;
        es.push(ExpTerm {
            coeff: Rational::from(-1),
            base: Rational::from((4, w * w)),
        });
    }
    (zs, es)
}

fn explicit_hemisphere(dim: u32) -> (Vec<ZetaTerm>, Vec<ExpTerm>) {
    let mut zs = Vec::new();
    if dim % 2 == 1 {
        let n = (dim + 1) / 2;
        for i in 1..=n {
            let c = u_bar(n - 1, i - 1) / Rational::from(2);
            let off = -2 * i64::from(i);
            zs.push(zt(c.clone(), one(), 2, off + 2, one()));
            zs.push(zt(-(c * Rational::from(n - 1)), one(), 2, off + 3, one()));
        }
    } else {
        let n = dim / 2;
        let w = 2 * i64::from(n) - 1;
        for i in 1..=n {
            let vb = v_bar(n, i);
            let ii = i64::from(i);
            zs.push(zt(
                vb.clone() / Rational::from(2),
                Rational::from(4),
                2,
                -2 * ii + 1,
                one(),
            ));
            zs.push(zt(
                -(vb.clone() * pow2r(2 * ii - 2)),
                one(),
                2,
                -2 * ii + 1,
                one(),
            ));
            zs.push(zt(
                -(vb.clone() * Rational::from((w, 2))),
                Rational::from(4),
                2,
                -2 * ii + 2,
                one(),
            ));
            zs.push(zt(
                vb * Rational::from(w) * pow2r(2 * ii - 3),
                one(),
                2,
                -2 * ii + 2,
                one(),
            ));
        }
    }
    (zs, Vec::new())
}

fn explicit_projective(dim: u32) -> (Vec<ZetaTerm>, Vec<ExpTerm>) {
    let mut zs = Vec::new();
    let mut es = Vec::new();
    if dim == 1 {
        zs.push(zt(Rational::from(2), quarter(), 2, 0, one()));
        return (zs, es);
    }
    if dim % 2 == 1 {
        let n = (dim + 1) / 2;
        let n_even = n % 2 == 0;
        for i in 1..=n {
            let ub = u_bar(n - 1, i - 1);
            let off = -2 * i64::from(i) + 2;
            if n_even {
                zs.push(zt(ub.clone(), one(), 2, off, one()));
            }
            // sign carries -(-1)^n
            let signed = if n_even { -ub } else { ub };
            zs.push(zt(
                signed * pow2r(2 * i64::from(i) - 2),
                quarter(),
                2,
                off,
                one(),
            ));
        }
        let w = i64::from(n) - 1;
        es.push(ExpTerm {
            coeff: Rational::from(-1),
            base: Rational::from((1, w * w)),
        });
    } else {
        let n = dim / 2;
        let a = if n % 2 == 0 {
            Rational::from((7, 4))
        } else {
            Rational::from((5, 4))
        };
        for i in 1..=n {
            zs.push(zt(
                v_bar(n, i) * pow2r(4 * i64::from(i) - 2),
                quarter(),
                2,
                -2 * i64::from(i) + 1,
                a.clone(),
            ));
        }
        if n >= 3 {
            let w = 2 * i64::from(n) - 1;
            es.push(ExpTerm {
                coeff: Rational::from(-1),
                base: Rational::from((4, w * w)),
            });
        }
    }
    (zs, es)
}

fn explicit_oscillator(dim: u32) -> (Vec<ZetaTerm>, Vec<ExpTerm>) {
    let mut zs = Vec::new();
    if dim % 2 == 0 {
        let n = dim / 2;
        let f = Rational::from(factorial(2 * n - 1));
        for i in 1..=n {
            zs.push(zt(u(n, i) / &f, half(), 1, -2 * i64::from(i) + 1, one()));
        }
    } else {
        let n = (dim + 1) / 2;
        let d = Rational::from(Integer::from(4).pow(n) * factorial(2 * n - 2));
        for i in 1..=n {
            let off = -2 * i64::from(i) + 2;
            zs.push(zt(Rational::from(4) * v(n, i) / &d, one(), 1, off, one()));
            zs.push(zt(
                -(v(n, i) * pow2r(2 * i64::from(i)) / &d),
                half(),
                1,
                off,
                one(),
            ));
        }
    }
    (zs, Vec::new())
}

/// Builds the expansion by exact symbolic iteration of the dimension
/// recursion from the low-dimensional initial conditions. Agrees with
/// `explicit_build` term by term.
pub fn recursive_build(m: Manifold) -> ZetaExpansion {
    assert!(m.dim >= 1, "dimension must be at least 1");
    let step = match m.kind {
        ManifoldKind::RealProjective => 4,
        _ => 2,
    };
    let base = ((m.dim - 1) % step) + 1;
    let (mut zs, mut es) = initial_condition(m.kind, base);
    let mut n = base;
    while n < m.dim {
        let (nzs, nes) = apply_recursion(m.kind, n, &zs, &es);
        // canonicalizing between steps keeps the term count linear in dim
        let merged = canonicalize(nzs, nes);
        zs = merged.0;
        es = merged.1;
        n += step;
    }
    ZetaExpansion::from_parts(m, zs, es)
}

fn initial_condition(kind: ManifoldKind, dim: u32) -> (Vec<ZetaTerm>, Vec<ExpTerm>) {
    let mut zs = Vec::new();
    let mut es = Vec::new();
    match (kind, dim) {
        (ManifoldKind::Sphere, 1) => {
            zs.push(zt(Rational::from(2), one(), 2, 0, one()));
        }
        (ManifoldKind::Sphere, 2) => {
            zs.push(zt(one(), Rational::from(4), 2, -1, one()));
            zs.push(zt(Rational::from(-2), one(), 2, -1, one()));
            es.push(ExpTerm {
                coeff: Rational::from(-1),
                base: Rational::from(4),
            });
        }
        (ManifoldKind::HemisphereDirichlet, 1) => {
            zs.push(zt(one(), one(), 2, 0, one()));
        }
        (ManifoldKind::HemisphereDirichlet, 2) => {
            zs.push(zt(half(), Rational::from(4), 2, -1, one()));
            zs.push(zt(Rational::from(-1), one(), 2, -1, one()));
            zs.push(zt(-half(), Rational::from(4), 2, 0, one()));
            zs.push(zt(half(), one(), 2, 0, one()));
        }
        (ManifoldKind::RealProjective, 1) => {
            zs.push(zt(Rational::from(2), quarter(), 2, 0, one()));
        }
        (ManifoldKind::RealProjective, 2) => {
            zs.push(zt(
                Rational::from(4),
                quarter(),
                2,
                -1,
                Rational::from((5, 4)),
            ));
        }
        (ManifoldKind::RealProjective, 3) => {
            zs.push(zt(one(), one(), 2, -2, one()));
            zs.push(zt(Rational::from(-4), quarter(), 2, -2, one()));
            es.push(ExpTerm {
                coeff: Rational::from(-1),
                base: one(),
            });
        }
        (ManifoldKind::RealProjective, 4) => {
            zs.push(zt(
                Rational::from((8, 3)),
                quarter(),
                2,
                -3,
                Rational::from((7, 4)),
            ));
            zs.push(zt(
                Rational::from((-1, 6)),
                quarter(),
                2,
                -1,
                Rational::from((7, 4)),
            ));
        }
        (ManifoldKind::HarmonicOscillator, 1) => {
            zs.push(zt(one(), one(), 1, 0, one()));
            zs.push(zt(Rational::from(-1), half(), 1, 0, one()));
        }
        (ManifoldKind::HarmonicOscillator, 2) => {
            zs.push(zt(one(), half(), 1, -1, one()));
        }
        _ => unreachable!("initial conditions cover dims 1..=step"),
    }
    (zs, es)
}

fn shift_zeta(t: &ZetaTerm, delta: &Rational) -> ZetaTerm {
    let neg = -delta.clone();
    let scale =
        rational_pow_exact(&t.base, &neg).expect("recursion shifts must keep term bases rational");
    let off = Rational::from(i64::from(t.arg_scale)) * delta;
    assert!(off.is_integer(), "argument offsets stay integral");
    ZetaTerm {
        coeff: (&t.coeff * &scale).complete(),
        base: t.base.clone(),
        arg_scale: t.arg_scale,
        arg_offset: t.arg_offset - off.numer().to_i64().unwrap(),
        shift: t.shift.clone(),
    }
}

fn shift_exp(t: &ExpTerm, delta: &Rational) -> ExpTerm {
    let neg = -delta.clone();
    let scale =
        rational_pow_exact(&t.base, &neg).expect("recursion shifts must keep term bases rational");
    ExpTerm {
        coeff: (&t.coeff * &scale).complete(),
        base: t.base.clone(),
    }
}

/// Appends `factor` times the `delta`-shifted copy of `(zs, es)`.
fn accumulate(
    out_z: &mut Vec<ZetaTerm>,
    out_e: &mut Vec<ExpTerm>,
    zs: &[ZetaTerm],
    es: &[ExpTerm],
    delta: Option<&Rational>,
    factor: &Rational,
) {
    for t in zs {
        let mut nt = match delta {
            Some(d) => shift_zeta(t, d),
            None => t.clone(),
        };
        nt.coeff *= factor;
        out_z.push(nt);
    }
    for t in es {
        let mut nt = match delta {
            Some(d) => shift_exp(t, d),
            None => t.clone(),
        };
        nt.coeff *= factor;
        out_e.push(nt);
    }
}

fn apply_recursion(
    kind: ManifoldKind,
    n: u32,
    zs: &[ZetaTerm],
    es: &[ExpTerm],
) -> (Vec<ZetaTerm>, Vec<ExpTerm>) {
    let ni = i64::from(n);
    let mut out_z = Vec::new();
    let mut out_e = Vec::new();
    match kind {
        ManifoldKind::Sphere => {
            // next(s) = [cur(s-1) - ((n-1)/2)^2 cur(s)]/(n(n+1)) - ((n+1)/2)^{-2s}
            let denom = Rational::from((1, ni * (ni + 1)));
            let lam = Rational::from(((ni - 1) * (ni - 1), 4));
            accumulate(&mut out_z, &mut out_e, zs, es, Some(&one()), &denom);
            accumulate(&mut out_z, &mut out_e, zs, es, None, &-(lam * &denom));
            out_e.push(ExpTerm {
                coeff: Rational::from(-1),
                base: Rational::from((4, (ni + 1) * (ni + 1))),
            });
        }
        ManifoldKind::HemisphereDirichlet => {
            // next(s) = [cur(s-1) - cur(s-1/2) - (n^2-1)/4 cur(s)]/(n(n+1))
            let denom = Rational::from((1, ni * (ni + 1)));
            let lam = Rational::from((ni * ni - 1, 4));
            accumulate(&mut out_z, &mut out_e, zs, es, Some(&one()), &denom);
            accumulate(
                &mut out_z,
                &mut out_e,
                zs,
                es,
                Some(&half()),
                &-denom.clone(),
            );
            accumulate(&mut out_z, &mut out_e, zs, es, None, &-(lam * &denom));
        }
        ManifoldKind::RealProjective => {
            // next(s) = [cur(s-2) - (n^2+1)/2 cur(s-1) + ((n^2-1)/4)^2 cur(s)]
            //           / (n(n+1)(n+2)(n+3)) - ((n+3)/2)^{-2s}
            let denom = Rational::from((1, ni * (ni + 1) * (ni + 2) * (ni + 3)));
            let mid = Rational::from(((ni * ni + 1), 2));
            let lam = Rational::from((ni * ni - 1, 4));
            let lam2 = (&lam * &lam).complete();
            accumulate(
                &mut out_z,
                &mut out_e,
                zs,
                es,
                Some(&Rational::from(2)),
                &denom,
            );
            accumulate(
                &mut out_z,
                &mut out_e,
                zs,
                es,
                Some(&one()),
                &-(mid * &denom),
            );
            accumulate(&mut out_z, &mut out_e, zs, es, None, &(lam2 * &denom));
            out_e.push(ExpTerm {
                coeff: Rational::from(-1),
                base: Rational::from((4, (ni + 3) * (ni + 3))),
            });
        }
        ManifoldKind::HarmonicOscillator => {
            // next(s) = cur(s-2)/(4n(n+1)) - (n/(4(n+1))) cur(s)
            let d1 = Rational::from((1, 4 * ni * (ni + 1)));
            let d2 = Rational::from((ni, 4 * (ni + 1)));
            accumulate(
                &mut out_z,
                &mut out_e,
                zs,
                es,
                Some(&Rational::from(2)),
                &d1,
            );
            accumulate(&mut out_z, &mut out_e, zs, es, None, &-d2);
        }
    }
    (out_z, out_e)
}
