//! Zeta-regularized spectral determinants.
//!
//! The determinant of an operator with spectral zeta function `Z` is
//! `exp(-Z'(0))`, with `Z` continued through `s = 0`. Three routes are
//! implemented and kept deliberately independent of one another:
//!
//! * [`det_closed_form`]: finite combinations of `zeta'(-k)`, Stirling and
//!   central-factorial coefficients, harmonic numbers, and one logarithm.
//! * [`det_voros`]: the shift-assembly route. The expansion machinery only
//!   knows the zeta function of the *shifted* sequence; the derivative at
//!   zero of the unshifted one is reassembled from finite parts, pole
//!   coefficients, and a convergent power series in the shift.
//! * [`det_lowdim_constant`]: the printed low-dimensional sphere constants
//!   in terms of `pi`, the Glaisher constant, and zeta values.
//!
//! [`direct_series_zeta`] backs all of this with raw eigenvalue sums.

use std::cmp::Ordering;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Complete, Integer};

use crate::combinatorics::{bernoulli, factorial, harmonic, stirling_s1, u, v};
use crate::error::{Error, Result};
use crate::expansion::{explicit_build, multiplicity, shifted_eigenvalue, Manifold, ManifoldKind};
use crate::numeric::{
    constant_glaisher, constant_ln2, constant_pi, rational_pow_exact, BigReal, Rational,
};
use crate::special::{riemann_zeta, zeta_prime_neg_int};

/// How a [`DetResult`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetMethod {
    ClosedForm,
    VorosAssembly,
    LowDimConstant,
}

impl DetMethod {
    pub fn name(self) -> &'static str {
        match self {
            DetMethod::ClosedForm => "closed-form",
            DetMethod::VorosAssembly => "voros",
            DetMethod::LowDimConstant => "lowdim-constant",
        }
    }
}

/// A computed determinant. `det = exp(-log_det_negated)` always holds, and
/// `det > 0`.
#[derive(Clone, Debug)]
pub struct DetResult {
    pub manifold: Manifold,
    /// `Z'(0)`, i.e. `-log det`.
    pub log_det_negated: BigReal,
    pub det: BigReal,
    pub method: DetMethod,
    pub digits: u32,
    /// For the series-assembled route, the bound on the discarded tail.
    pub tail_bound: Option<BigReal>,
}

fn finish(
    m: Manifold,
    neg_log: BigReal,
    method: DetMethod,
    digits: u32,
    tail_bound: Option<BigReal>,
) -> DetResult {
    let det = neg_log.neg().exp().with_digits(digits);
    DetResult {
        manifold: m,
        log_det_negated: neg_log.with_digits(digits),
        det,
        method,
        digits,
        tail_bound,
    }
}

/// Sums `summands(work)` at a working precision that is escalated until the
/// cancellation observed between the summands cannot eat into the requested
/// digits.
fn guarded_sum<F>(digits: u32, summands: F) -> BigReal
where
    F: Fn(u32) -> Vec<BigReal>,
{
    let mut work = digits + 20;
    let mut last = BigReal::zero(digits);
    for _ in 0..6 {
        let parts = summands(work);
        let mut acc = BigReal::zero(work);
        let mut max_mag = i64::MIN / 4;
        for p in &parts {
            if let Some(b) = p.log2_magnitude() {
                max_mag = max_mag.max(b);
            }
            acc = &acc + p;
        }
        let sum_mag = acc
            .log2_magnitude()
            .unwrap_or(max_mag - i64::from(work) * 3322 / 1000 - 40);
        let cancel = (((max_mag - sum_mag).max(0) as u64) * 1000 / 3322) as u32;
        last = acc.with_digits(digits);
        if work >= digits + cancel + 12 {
            return last;
        }
        work = digits + cancel + 24;
    }
    last
}

// ---------------------------------------------------------------------------
// Coefficient access: memoized tables for ordinary dimensions, rolling rows
// for dimensions large enough that caching every row would exhaust memory.

const EXACT_TABLE_LIMIT: u32 = 256;

trait CoeffSource {
    /// Signed Stirling number of the first kind `s(m, k)`; zero for `k > m`.
    fn s1(&self, m: u32, k: u32) -> Rational;
    /// `u(n, k) = t(2n, 2k)`.
    fn u_val(&self, n: u32, k: u32) -> Rational;
    /// `v(n, k) = 4^(n-k) t(2n-1, 2k-1)`.
    fn v_val(&self, n: u32, k: u32) -> Rational;
}

struct CachedSource;

impl CoeffSource for CachedSource {
    fn s1(&self, m: u32, k: u32) -> Rational {
        stirling_s1(m, k)
    }
    fn u_val(&self, n: u32, k: u32) -> Rational {
        u(n, k)
    }
    fn v_val(&self, n: u32, k: u32) -> Rational {
        v(n, k)
    }
}

/// The three coefficient rows a single closed form reads, held as exact
/// integers and advanced in place. Row `m` of the signed Stirling triangle
/// follows row `m-1`; the central-factorial families step by one in their
/// half-index. Only O(dim) values are alive at any moment.
struct RollingRows {
    s1_m: u32,
    s1_prev: Vec<Integer>,
    s1_cur: Vec<Integer>,
    u_n: u32,
    u_row: Vec<Integer>,
    v_n: u32,
    v_row: Vec<Integer>,
}

impl RollingRows {
    fn new() -> Self {
        RollingRows {
            s1_m: 0,
            s1_prev: Vec::new(),
            s1_cur: vec![Integer::from(1)],
            u_n: 1,
            u_row: vec![Integer::new(), Integer::from(1)],
            v_n: 1,
            v_row: vec![Integer::new(), Integer::from(1)],
        }
    }

    /// `s(m+1, k) = s(m, k-1) - m s(m, k)`
    fn advance_s1(&mut self, target: u32) {
        while self.s1_m < target {
            let m = self.s1_m;
            let mut next = Vec::with_capacity(self.s1_cur.len() + 1);
            for k in 0..=(m as usize + 1) {
                let mut e = if k >= 1 {
                    self.s1_cur[k - 1].clone()
                } else {
                    Integer::new()
                };
                if let Some(c) = self.s1_cur.get(k) {
                    e -= (c * &Integer::from(m)).complete();
                }
                next.push(e);
            }
            self.s1_prev = std::mem::replace(&mut self.s1_cur, next);
            self.s1_m += 1;
        }
    }

    /// `u(n+1, k) = u(n, k-1) - n^2 u(n, k)`
    fn advance_u(&mut self, target: u32) {
        while self.u_n < target {
            let n = self.u_n;
            let sq = Integer::from(n) * Integer::from(n);
            self.u_row = roll_central(&self.u_row, &sq);
            self.u_n += 1;
        }
    }

    /// `v(n+1, k) = v(n, k-1) - (2n-1)^2 v(n, k)`
    fn advance_v(&mut self, target: u32) {
        while self.v_n < target {
            let n = self.v_n;
            let sq = Integer::from(2 * n - 1) * Integer::from(2 * n - 1);
            self.v_row = roll_central(&self.v_row, &sq);
            self.v_n += 1;
        }
    }

    /// Rows needed by the closed form in dimension `d` of `kind`.
    fn advance_for(&mut self, kind: ManifoldKind, d: u32) {
        if kind != ManifoldKind::HarmonicOscillator {
            self.advance_s1(d);
        }
        match kind {
            ManifoldKind::Sphere | ManifoldKind::RealProjective => {
                if d % 2 == 0 {
                    self.advance_v(d / 2);
                }
            }
            ManifoldKind::HemisphereDirichlet => {
                if d % 2 == 0 {
                    self.advance_v(d / 2);
                } else if d >= 3 {
                    self.advance_u((d - 1) / 2);
                }
            }
            ManifoldKind::HarmonicOscillator => {
                if d % 2 == 0 {
                    self.advance_u(d / 2);
                } else {
                    self.advance_v((d + 1) / 2);
                }
            }
        }
    }
}

fn roll_central(row: &[Integer], sq: &Integer) -> Vec<Integer> {
    let mut next = Vec::with_capacity(row.len() + 1);
    for k in 0..=row.len() {
        let mut e = if k >= 1 {
            row[k - 1].clone()
        } else {
            Integer::new()
        };
        if let Some(c) = row.get(k) {
            e -= (c * sq).complete();
        }
        next.push(e);
    }
    next
}

struct RowSource<'a> {
    rows: &'a RollingRows,
}

impl CoeffSource for RowSource<'_> {
    fn s1(&self, m: u32, k: u32) -> Rational {
        if k > m {
            return Rational::new();
        }
        let row = if m == self.rows.s1_m {
            &self.rows.s1_cur
        } else if m + 1 == self.rows.s1_m {
            &self.rows.s1_prev
        } else {
            unreachable!("rolling state never holds row {m}");
        };
        Rational::from(&row[k as usize])
    }

    fn u_val(&self, n: u32, k: u32) -> Rational {
        assert_eq!(n, self.rows.u_n);
        match self.rows.u_row.get(k as usize) {
            Some(e) => Rational::from(e),
            None => Rational::new(),
        }
    }

    fn v_val(&self, n: u32, k: u32) -> Rational {
        assert_eq!(n, self.rows.v_n);
        match self.rows.v_row.get(k as usize) {
            Some(e) => Rational::from(e),
            None => Rational::new(),
        }
    }
}

// ---------------------------------------------------------------------------
// Closed forms.

/// `-log det` as an exact-coefficient expression
/// `sum_k zp[k]·zeta'(-k) + ln2·log 2 + ln_pi·log pi + log(log_of) + constant`.
/// Building the plan is exact; only its final evaluation rounds.
struct ClosedFormPlan {
    zp: Vec<(u32, Rational)>,
    ln2: Rational,
    ln_pi: Rational,
    log_of: Option<Rational>,
    constant: Rational,
}

impl ClosedFormPlan {
    fn empty() -> Self {
        ClosedFormPlan {
            zp: Vec::new(),
            ln2: Rational::new(),
            ln_pi: Rational::new(),
            log_of: None,
            constant: Rational::new(),
        }
    }

    fn summands(&self, work: u32) -> Vec<BigReal> {
        let mut out = Vec::with_capacity(self.zp.len() + 4);
        for (k, c) in &self.zp {
            if c.cmp0() != Ordering::Equal {
                out.push(zeta_prime_neg_int(*k, work).mul_rational(c));
            }
        }
        if self.ln2.cmp0() != Ordering::Equal {
            out.push(constant_ln2(work).mul_rational(&self.ln2));
        }
        if self.ln_pi.cmp0() != Ordering::Equal {
            out.push(constant_pi(work).ln().mul_rational(&self.ln_pi));
        }
        if let Some(q) = &self.log_of {
            out.push(BigReal::ln_rational(q, work));
        }
        if self.constant.cmp0() != Ordering::Equal {
            out.push(BigReal::from_rational(&self.constant, work));
        }
        out
    }
}

/// `sum_{i=1}^{top} weight(i) · base^{2i} / (den·i) · (H_{i-1}/2 - H_{2i-1})`,
/// the correction shared by the even-dimensional closed forms.
fn harmonic_correction(
    top: u32,
    base: u32,
    den: u32,
    weight: &dyn Fn(u32) -> Rational,
) -> Rational {
    let b2 = Rational::from(Integer::from(base) * Integer::from(base));
    let mut pow = Rational::from(1);
    let mut acc = Rational::new();
    for i in 1..=top {
        pow *= &b2;
        let h = harmonic(i - 1) / Rational::from(2) - harmonic(2 * i - 1);
        acc += weight(i) * &pow * h / Rational::from(i64::from(den) * i64::from(i));
    }
    acc
}

fn closed_form_plan(m: Manifold, src: &dyn CoeffSource) -> ClosedFormPlan {
    let d = m.dim;
    let mut plan = ClosedFormPlan::empty();
    match (m.kind, d % 2) {
        (ManifoldKind::Sphere, 1) if d == 1 => {
            plan.ln2 = Rational::from(-2);
            plan.ln_pi = Rational::from(-2);
        }
        (ManifoldKind::Sphere, 1) => {
            let n = (d - 1) / 2;
            let f = Rational::from((Integer::from(2), factorial(2 * n)));
            for k in 1..=n {
                let c = (src.s1(2 * n, 2 * k) + src.s1(2 * n + 1, 2 * k + 1)) * &f;
                plan.zp.push((2 * k, c));
            }
            plan.ln_pi = Rational::from(-1);
            plan.log_of = Some(Rational::from(n));
        }
        (ManifoldKind::Sphere, 0) => {
            let n = d / 2;
            let f = Rational::from((Integer::from(2), factorial(2 * n - 1)));
            for k in 1..=n {
                let c = (src.s1(2 * n - 1, 2 * k - 1) + src.s1(2 * n, 2 * k)) * &f;
                plan.zp.push((2 * k - 1, c));
            }
            plan.constant = harmonic_correction(n, 2 * n - 1, 2, &|i| vbar_of(src, n, i));
            plan.log_of = Some(Rational::from(2 * n - 1));
        }
        (ManifoldKind::HemisphereDirichlet, 1) => {
            let n = (d + 1) / 2;
            let f = Rational::from((Integer::from(1), factorial(2 * n - 2)));
            for k in 0..=(2 * n - 1) {
                let mut c = src.s1(2 * n - 1, k + 1);
                let alt = src.s1(2 * n - 2, k);
                if k % 2 == 0 {
                    c += alt;
                } else {
                    c -= alt;
                }
                plan.zp.push((k, c * &f));
            }
            if n >= 2 {
                plan.constant = -harmonic_correction(n - 1, n - 1, 2, &|i| {
                    ubar_of(src, n - 1, i) * Rational::from(n - 1)
                });
            }
        }
        (ManifoldKind::HemisphereDirichlet, 0) => {
            let n = d / 2;
            let f = Rational::from((Integer::from(1), factorial(2 * n - 1)));
            for k in 0..=(2 * n - 1) {
                let mut c = src.s1(2 * n, k + 1);
                let alt = src.s1(2 * n - 1, k);
                if k % 2 == 0 {
                    c -= alt;
                } else {
                    c += alt;
                }
                plan.zp.push((k, c * &f));
            }
            plan.constant = harmonic_correction(n, 2 * n - 1, 4, &|i| vbar_of(src, n, i));
        }
        (ManifoldKind::RealProjective, 1) if d == 1 => {
            plan.ln_pi = Rational::from(-2);
        }
        (ManifoldKind::RealProjective, 1) => {
            let n = (d + 1) / 2;
            let f = Rational::from((Integer::from(1), factorial(2 * n - 2)));
            for k in 0..=(n - 1) {
                let two = Rational::from(Integer::from(2).pow(2 * k + 1));
                let c = (src.s1(2 * n - 1, 2 * k + 1) + src.s1(2 * n - 2, 2 * k)) * &f * two;
                plan.zp.push((2 * k, c));
            }
            plan.log_of = Some(Rational::from(4 * (n - 1)));
        }
        (ManifoldKind::RealProjective, 0) => {
            let n = d / 2;
            let f = Rational::from((Integer::from(1), factorial(2 * n - 1)));
            for k in 0..=(2 * n - 1) {
                let mut scale = Rational::from(1);
                if k % 2 == 0 {
                    scale -= Rational::from(Integer::from(2).pow(k + 1));
                }
                let c = (src.s1(2 * n, k + 1) + src.s1(2 * n - 1, k)) * &f * scale;
                plan.zp.push((k, c));
            }
            plan.constant = harmonic_correction(n, 2 * n - 1, 4, &|i| vbar_of(src, n, i));
            plan.log_of = Some(Rational::from(4 * n - 2));
        }
        (ManifoldKind::HarmonicOscillator, 0) => {
            let n = d / 2;
            let f = Rational::from((Integer::from(1), factorial(2 * n - 1)));
            let mut ln2 = Rational::new();
            for i in 1..=n {
                let ui = src.u_val(n, i) * &f;
                // zeta(-2i+1) = -B_{2i}/(2i) exactly, so that part of
                // zeta'(-2i+1) - log2 · zeta(-2i+1) stays rational
                ln2 += &ui * bernoulli(2 * i) / Rational::from(2 * i);
                plan.zp.push((2 * i - 1, ui));
            }
            plan.ln2 = ln2;
        }
        (ManifoldKind::HarmonicOscillator, 1) => {
            let n = (d + 1) / 2;
            let f = Rational::from((
                Integer::from(1),
                Integer::from(4).pow(n) * factorial(2 * n - 2),
            ));
            for i in 2..=n {
                let gap = Rational::from(4) - Rational::from(Integer::from(4).pow(i));
                plan.zp.push((2 * i - 2, src.v_val(n, i) * &f * gap));
            }
            let mut ln2 = Rational::from((
                Integer::from(8) * factorial(2 * n - 2),
                Integer::from(16).pow(n) * factorial(n - 1).pow(2),
            ));
            if n % 2 == 1 {
                ln2 = -ln2;
            }
            plan.ln2 = ln2;
        }
        _ => unreachable!(),
    }
    plan
}

fn vbar_of(src: &dyn CoeffSource, n: u32, i: u32) -> Rational {
    src.v_val(n, i)
        * Rational::from((
            Integer::from(1),
            Integer::from(4).pow(n - 1) * factorial(2 * n - 1),
        ))
}

fn ubar_of(src: &dyn CoeffSource, n: u32, i: u32) -> Rational {
    src.u_val(n, i) * Rational::from((Integer::from(2), factorial(2 * n)))
}

/// Determinant from the finite closed-form expression for `-log det`.
pub fn det_closed_form(m: Manifold, digits: u32) -> DetResult {
    let neg_log = if m.dim <= EXACT_TABLE_LIMIT {
        let plan = closed_form_plan(m, &CachedSource);
        guarded_sum(digits, |w| plan.summands(w))
    } else {
        let mut rows = RollingRows::new();
        rows.advance_for(m.kind, m.dim);
        let plan = closed_form_plan(m, &RowSource { rows: &rows });
        guarded_sum(digits, |w| plan.summands(w))
    };
    finish(m, neg_log, DetMethod::ClosedForm, digits, None)
}

/// Determinants for every dimension `1..=max_dim` of one family, in
/// dimension order. Deterministic regardless of thread scheduling.
pub fn det_table(kind: ManifoldKind, max_dim: u32, digits: u32) -> Vec<DetResult> {
    if max_dim == 0 {
        return Vec::new();
    }
    if max_dim > EXACT_TABLE_LIMIT {
        return det_table_rolling(kind, max_dim, digits);
    }
    // Fill the zeta'(-k) cache up front so the parallel phase only reads it.
    let warm = digits + 30;
    for k in 0..max_dim {
        let _ = zeta_prime_neg_int(k, warm);
    }
    (1..=max_dim)
        .into_par_iter()
        .map(|d| det_closed_form(Manifold { kind, dim: d }, digits))
        .collect()
}

/// Sequential large-dimension path: one pass of the coefficient recurrences
/// serves every dimension, instead of one pass per dimension.
fn det_table_rolling(kind: ManifoldKind, max_dim: u32, digits: u32) -> Vec<DetResult> {
    let mut rows = RollingRows::new();
    let mut out = Vec::with_capacity(max_dim as usize);
    for d in 1..=max_dim {
        rows.advance_for(kind, d);
        let m = Manifold { kind, dim: d };
        let plan = closed_form_plan(m, &RowSource { rows: &rows });
        let neg_log = guarded_sum(digits, |w| plan.summands(w));
        out.push(finish(m, neg_log, DetMethod::ClosedForm, digits, None));
    }
    out
}

// ---------------------------------------------------------------------------
// Shift assembly.

/// Determinant assembled from the shifted-sequence expansion:
///
/// ```text
/// Z'(0) = Z_sh'(0) + sum_{m=1}^{floor(mu)} FP[Z_sh](m) shift^m / m
///       + sum_{m=2}^{floor(mu)} c_{-m} H_{m-1} shift^m / m!
///       + sum_{m=floor(mu)+1}^{M} Z_sh(m) shift^m / m
/// ```
///
/// The remainder series converges geometrically with ratio
/// `rho = shift / (smallest shifted eigenvalue)`; iteration stops once the
/// first omitted term times `rho/(1-rho)` drops below `10^-(digits+5)`, and
/// fails with [`Error::ConvergenceTooSlow`] if that does not happen within
/// `series_terms` terms.
pub fn det_voros(m: Manifold, digits: u32, series_terms: u64) -> Result<DetResult> {
    let e = explicit_build(m);
    let shift = m.sequence_shift();
    if shift.cmp0() == Ordering::Equal {
        // Unshifted spectrum: the expansion already is the spectral zeta
        // function and no reassembly is needed.
        let neg_log = e.eval_deriv(&Rational::new(), digits + 10)?;
        return Ok(finish(m, neg_log, DetMethod::VorosAssembly, digits, None));
    }
    let smallest = m.first_shifted_eigenvalue();
    let ratio = Rational::from(&shift / &smallest);
    if ratio >= 1 {
        return Err(Error::ShiftTooLarge { shift, smallest });
    }
    let mu_floor = (e.mu.numer() / e.mu.denom()).complete();
    let mu_floor = mu_floor.to_u32().expect("mu stays small");
    if series_terms < u64::from(mu_floor) + 10 {
        return Err(Error::InvalidInput(format!(
            "series_terms = {series_terms} is below floor(mu) + 10 = {}",
            u64::from(mu_floor) + 10
        )));
    }

    // The blocks below carry magnitudes up to shift^floor(mu) while the
    // result is O(1), so pad the working precision by that many digits.
    let pad = (f64::from(mu_floor) * shift.to_f64().log10())
        .max(0.0)
        .ceil() as u32;
    let work = digits + 25 + pad;
    let tol = BigReal::pow10(-(i64::from(digits) + 5), work);

    let mut acc = e.eval_deriv(&Rational::new(), work)?;

    let mut shift_pow = Rational::from(1);
    for mm in 1..=mu_floor {
        shift_pow *= &shift;
        let fp = e.finite_part(mm, work)?;
        acc = acc + fp.mul_rational(&(shift_pow.clone() / Rational::from(mm)));
    }

    // c_{-m} H_{m-1} shift^m / m! = residue(m) H_{m-1} shift^m / m: exact.
    let mut pole_block = Rational::new();
    for (loc, res) in e.poles() {
        if !loc.is_integer() || loc < 2 {
            continue;
        }
        let mm = loc.numer().to_u32().expect("pole locations stay small");
        if mm > mu_floor {
            continue;
        }
        let p = Rational::from(&shift).pow(mm);
        pole_block += res * harmonic(mm - 1) * p / Rational::from(mm);
    }
    acc = acc + BigReal::from_rational(&pole_block, work);

    // Convergent remainder. Term ratios are below rho, so the first omitted
    // term times rho/(1-rho) bounds the tail.
    let rho = BigReal::from_rational(&ratio, work);
    let geometric = &rho / &(BigReal::from_u64(1, work) - &rho);
    let mut shift_pow = Rational::from(&shift).pow(mu_floor);
    let mut tail = BigReal::zero(work);
    let mut converged = false;
    let mut mm = u64::from(mu_floor) + 1;
    while mm <= series_terms {
        shift_pow *= &shift;
        let val = e.eval(&Rational::from(mm), work)?;
        let term = val.mul_rational(&(shift_pow.clone() / Rational::from(mm)));
        acc = acc + &term;
        tail = term.abs() * &geometric;
        if tail < tol {
            converged = true;
            break;
        }
        mm += 1;
    }
    if !converged {
        return Err(Error::ConvergenceTooSlow {
            bound: tail.to_decimal_string(6),
            tolerance: tol.to_decimal_string(6),
            terms: series_terms,
        });
    }
    Ok(finish(
        m,
        acc,
        DetMethod::VorosAssembly,
        digits,
        Some(tail.with_digits(8)),
    ))
}

// ---------------------------------------------------------------------------
// Low-dimensional sphere constants.

/// Sphere determinants in dimensions 2 through 9 from their printed exact
/// constants. Everything else is [`Error::OutOfRange`].
pub fn det_lowdim_constant(dim: u32, digits: u32) -> Result<DetResult> {
    if !(2..=9).contains(&dim) {
        return Err(Error::OutOfRange {
            dim,
            reason: "exact sphere constants cover dimensions 2 through 9",
        });
    }
    let m = Manifold {
        kind: ManifoldKind::Sphere,
        dim,
    };
    let w = digits + 20;
    let pi = constant_pi(w);
    let det = if dim % 2 == 1 {
        // (pi/q) exp(sum_j c_j zeta(2j+1)/pi^2j)
        let (q, coeffs): (i64, &[(i64, i64)]) = match dim {
            3 => (1, &[(1, 2)]),
            5 => (2, &[(23, 24), (-1, 8)]),
            7 => (3, &[(949, 720), (-13, 24), (1, 32)]),
            9 => (4, &[(16399, 10080), (-2087, 1920), (31, 128), (-1, 128)]),
            _ => unreachable!(),
        };
        let mut expo = BigReal::zero(w);
        let mut pi_pow = BigReal::from_u64(1, w);
        for (j, (num, den)) in coeffs.iter().enumerate() {
            pi_pow = pi_pow * (&pi * &pi);
            let z = riemann_zeta(&Rational::from(2 * j as i64 + 3), w)
                .expect("Euler-Maclaurin converges for s > 1");
            expo = expo + (z / &pi_pow).mul_rational(&Rational::from((*num, *den)));
        }
        expo.exp() * pi.mul_rational(&Rational::from((1, q)))
    } else {
        // (1/q) exp(r + sum_k c_k zeta'(-k)) A^p with A the Glaisher constant
        let (q, r, zp_terms, glaisher_pow): (i64, Rational, &[(u32, (i64, i64))], Rational) =
            match dim {
                2 => (1, Rational::from((1, 6)), &[], Rational::from(4)),
                4 => (
                    3,
                    Rational::from((83, 144)),
                    &[(3, (-2, 3))],
                    Rational::from((13, 3)),
                ),
                6 => (
                    5,
                    Rational::from((1381, 2160)),
                    &[(3, (-2, 1)), (5, (-1, 30))],
                    Rational::from((149, 30)),
                ),
                8 => (
                    7,
                    Rational::from((4730849, 7257600)),
                    &[(3, (-1199, 360)), (5, (-71, 360)), (7, (-1, 1260))],
                    Rational::from((383, 70)),
                ),
                _ => unreachable!(),
            };
        let mut expo = BigReal::from_rational(&r, w);
        for (k, (num, den)) in zp_terms {
            expo = expo + zeta_prime_neg_int(*k, w).mul_rational(&Rational::from((*num, *den)));
        }
        let a = constant_glaisher(w);
        let a_pow = a.ln().mul_rational(&glaisher_pow).exp();
        expo.exp() * a_pow.mul_rational(&Rational::from((1, q)))
    };
    let neg_log = -det.ln();
    Ok(DetResult {
        manifold: m,
        log_det_negated: neg_log.with_digits(digits),
        det: det.with_digits(digits),
        method: DetMethod::LowDimConstant,
        digits,
        tail_bound: None,
    })
}

// ---------------------------------------------------------------------------
// Raw eigenvalue series.

/// Multiplicity as an exact polynomial in the term index, ascending
/// coefficients. Degree is `dim - 1`.
fn multiplicity_polynomial(m: Manifold) -> Vec<Rational> {
    let n = i64::from(m.dim);
    if m.dim == 1 {
        let c = match m.kind {
            ManifoldKind::Sphere | ManifoldKind::RealProjective => 2,
            _ => 1,
        };
        return vec![Rational::from(c)];
    }
    let mut p = match m.kind {
        ManifoldKind::Sphere => vec![Rational::from(n - 1), Rational::from(2)],
        ManifoldKind::RealProjective => vec![Rational::from(n - 1), Rational::from(4)],
        _ => vec![Rational::from(1)],
    };
    match m.kind {
        ManifoldKind::Sphere => {
            for j in 1..=(n - 2) {
                p = poly_mul_affine(&p, 1, j);
            }
        }
        ManifoldKind::RealProjective => {
            for j in 1..=(n - 2) {
                p = poly_mul_affine(&p, 2, j);
            }
        }
        ManifoldKind::HemisphereDirichlet => {
            for j in 0..=(n - 2) {
                p = poly_mul_affine(&p, 1, j);
            }
        }
        ManifoldKind::HarmonicOscillator => {
            for j in 1..=(n - 1) {
                p = poly_mul_affine(&p, 1, j);
            }
        }
    }
    let f = Rational::from((Integer::from(1), factorial(m.dim - 1)));
    p.into_iter().map(|c| c * &f).collect()
}

/// `p(x) · (a x + b)`.
fn poly_mul_affine(p: &[Rational], a: i64, b: i64) -> Vec<Rational> {
    let mut out = vec![Rational::new(); p.len() + 1];
    for (i, c) in p.iter().enumerate() {
        out[i + 1] += c * Rational::from(a);
        out[i] += c * Rational::from(b);
    }
    out
}

/// Coefficients `b_j` with `p(x) = sum_j b_j (x + c)^j`, by repeated exact
/// synthetic division.
fn poly_taylor_shift(p: &[Rational], c: &Rational) -> Vec<Rational> {
    let mut rem: Vec<Rational> = p.to_vec();
    let mut out = Vec::with_capacity(p.len());
    while rem.len() > 1 {
        let mut q = vec![Rational::new(); rem.len() - 1];
        let top = rem.len() - 1;
        q[top - 1] = rem[top].clone();
        for j in (1..top).rev() {
            q[j - 1] = &rem[j] - (&q[j] * c).complete();
        }
        out.push(&rem[0] - (&q[0] * c).complete());
        rem = q;
    }
    out.push(rem.pop().unwrap());
    out
}

/// Truncated eigenvalue sum `sum_k mult(k) sigma_k^{-s}` over `terms` terms,
/// completed by a midpoint integral estimate of the discarded tail.
///
/// Requires `s > mu + 1/2` so the decay exponent clears the multiplicity
/// growth with room for the tail analysis, and at least 1000 terms. Errors
/// with [`Error::ConvergenceTooSlow`] when the bound on the tail estimate's
/// own error cannot reach `10^-digits`.
pub fn direct_series_zeta(m: Manifold, s: &Rational, terms: u64, digits: u32) -> Result<BigReal> {
    let mu = match m.kind {
        ManifoldKind::HarmonicOscillator => Rational::from(m.dim),
        _ => Rational::from((m.dim, 2)),
    };
    let least = mu + Rational::from((1, 2));
    if *s <= least {
        return Err(Error::InvalidInput(format!(
            "series requires s > mu + 1/2 = {least}, got s = {s}"
        )));
    }
    if terms < 1000 {
        return Err(Error::InvalidInput(format!(
            "at least 1000 series terms required, got {terms}"
        )));
    }
    let terms: u32 = terms
        .try_into()
        .map_err(|_| Error::InvalidInput("series length must fit in 32 bits".into()))?;

    let work = digits + 18 + (f64::from(terms).log10().ceil() as u32);
    let neg_s = Rational::from(-s.clone());
    let neg_s_real = BigReal::from_rational(&neg_s, work);
    let first_k = match m.kind {
        ManifoldKind::HarmonicOscillator => 0,
        _ => 1,
    };
    let mut acc = BigReal::zero(work);
    for k in first_k..(first_k + terms) {
        let sigma = shifted_eigenvalue(m, k);
        let decay = match rational_pow_exact(&sigma, &neg_s) {
            Some(q) => BigReal::from_rational(&q, work),
            None => BigReal::rational_pow_real(&sigma, &neg_s_real, work),
        };
        let mult = Rational::from(&multiplicity(m, k));
        acc = acc + decay.mul_rational(&mult);
    }
    let last_k = first_k + terms - 1;

    // sigma(x)^{-s} = 2^{-p} (x + c)^{-p} in every family:
    let (c_shift, p_exp, halved) = match m.kind {
        ManifoldKind::Sphere | ManifoldKind::HemisphereDirichlet => (
            Rational::from((i64::from(m.dim) - 1, 2)),
            Rational::from(2 * s.clone()),
            false,
        ),
        ManifoldKind::RealProjective => (
            Rational::from((i64::from(m.dim) - 1, 4)),
            Rational::from(2 * s.clone()),
            true,
        ),
        ManifoldKind::HarmonicOscillator => {
            (Rational::from((i64::from(m.dim), 2)), s.clone(), true)
        }
    };
    let poly = multiplicity_polynomial(m);
    let deg = (poly.len() - 1) as i64;

    // The summand is decreasing from x on when P'/P < p/(x+c); all roots of
    // P lie in [-(dim-1), 0], so deg/x bounds P'/P and the cutoff below
    // suffices.
    let x_mid = Rational::from(last_k) + Rational::from((1, 2));
    let mono_from = Rational::from(deg) * &c_shift / (p_exp.clone() - Rational::from(deg));
    if x_mid <= mono_from {
        return Err(Error::InvalidInput(format!(
            "{terms} terms are too few for dimension {}: the tail estimate needs the summand \
             decreasing past the cutoff",
            m.dim
        )));
    }

    // Exact part of integral_{x_mid}^inf P(x) (x+c)^{-p} dx.
    let shifted = poly_taylor_shift(&poly, &c_shift);
    let xc = (&x_mid + &c_shift).complete();
    let mut body = Rational::new();
    let mut xc_pow = xc.clone();
    for (j, b) in shifted.iter().enumerate() {
        let den = p_exp.clone() - Rational::from(j as i64 + 1);
        body += (b * &xc_pow).complete() / den;
        xc_pow *= &xc;
    }
    let mut tail = BigReal::rational_pow_real(
        &xc,
        &BigReal::from_rational(&Rational::from(-p_exp.clone()), work),
        work,
    )
    .mul_rational(&body);
    if halved {
        tail = tail
            * BigReal::rational_pow_real(
                &Rational::from(2),
                &BigReal::from_rational(&Rational::from(-p_exp.clone()), work),
                work,
            );
    }

    // Midpoint-rule error: |f''|/f <= D(D+1)/x^2 with D = p + deg, so the
    // estimate is off by at most tail · D(D+1)/(24 x_mid^2); doubled for
    // slack, plus the float roundoff floor.
    let dd = p_exp.to_f64() + deg as f64;
    let rel = dd * (dd + 1.0) / (12.0 * x_mid.to_f64() * x_mid.to_f64());
    let err = tail.abs() * BigReal::from_rational(&rational_from_f64(rel), work)
        + BigReal::pow10(-(i64::from(digits) + 8), work);
    let value = acc + tail;
    let tolerance = BigReal::pow10(-i64::from(digits), work)
        * if value.abs() > BigReal::from_u64(1, work) {
            value.abs()
        } else {
            BigReal::from_u64(1, work)
        };
    if err > tolerance {
        return Err(Error::ConvergenceTooSlow {
            bound: err.to_decimal_string(6),
            tolerance: tolerance.to_decimal_string(6),
            terms: u64::from(terms),
        });
    }
    Ok(value.with_digits(digits))
}

fn rational_from_f64(x: f64) -> Rational {
    Rational::from_f64(x).expect("finite by construction")
}
