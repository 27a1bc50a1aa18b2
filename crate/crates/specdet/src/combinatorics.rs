//! Exact integer/rational coefficient families.
//!
//! Everything here is exact: Stirling numbers of the first kind `s(n,k)`,
//! central factorial numbers of the first kind `t(n,k)` together with their
//! even/odd subfamilies `u(n,k) = t(2n,2k)` and `v(n,k) = 4^(n-k) t(2n-1,2k-1)`,
//! the factorially normalized forms `u_bar = 2u/(2n)!` and
//! `v_bar = 4^(1-n) v/(2n-1)!`, plus Bernoulli and harmonic numbers.
//!
//! Tables are built by their defining recursions and memoized under a lock;
//! reads are therefore safe from any thread. The generating-polynomial
//! expansions serve as independent oracles in the test suites, not as the
//! production path.

use once_cell::sync::Lazy;
use rug::ops::Pow;
use rug::{Complete, Integer};
use std::sync::Mutex;

use crate::numeric::Rational;

/// Rows of s(n,k): row n holds k = 0..=n.
static STIRLING: Lazy<Mutex<Vec<Vec<Integer>>>> =
    Lazy::new(|| Mutex::new(vec![vec![Integer::from(1)]]));

/// Rows of t(n,k): row n holds k = 0..=n. Odd rows carry denominators that
/// are powers of four.
static CENTRAL_T: Lazy<Mutex<Vec<Vec<Rational>>>> = Lazy::new(|| {
    Mutex::new(vec![
        vec![Rational::from(1)],
        vec![Rational::from(0), Rational::from(1)],
    ])
});

static BERNOULLI: Lazy<Mutex<Vec<Rational>>> = Lazy::new(|| Mutex::new(vec![Rational::from(1)]));

static HARMONIC: Lazy<Mutex<Vec<Rational>>> = Lazy::new(|| Mutex::new(vec![Rational::from(0)]));

fn ensure_stirling_rows(n: usize) {
    let mut rows = STIRLING.lock().unwrap();
    while rows.len() <= n {
        let m = rows.len(); // building row m from row m-1
        let prev = &rows[m - 1];
        let mut row = Vec::with_capacity(m + 1);
        for k in 0..=m {
            // s(m,k) = s(m-1,k-1) - (m-1) s(m-1,k)
            let mut val = Integer::new();
            if k >= 1 && k - 1 < prev.len() {
                val += &prev[k - 1];
            }
            if k < prev.len() {
                val -= Integer::from(m - 1) * &prev[k];
            }
            row.push(val);
        }
        rows.push(row);
    }
}

fn ensure_central_rows(n: usize) {
    let mut rows = CENTRAL_T.lock().unwrap();
    while rows.len() <= n {
        let m = rows.len(); // building row m from row m-2
        let prev = &rows[m - 2];
        let half_sq = Rational::from(((m - 2) as i64, 2)).square();
        let mut row = Vec::with_capacity(m + 1);
        for k in 0..=m {
            // t(m,k) = t(m-2,k-2) - ((m-2)/2)^2 t(m-2,k)
            let mut val = Rational::new();
            if k >= 2 && k - 2 < prev.len() {
                val += &prev[k - 2];
            }
            if k < prev.len() {
                val -= (&prev[k] * &half_sq).complete();
            }
            row.push(val);
        }
        rows.push(row);
    }
}

/// Signed Stirling number of the first kind: coefficient of `x^k` in
/// `x(x-1)...(x-n+1)`.
pub fn stirling_s1(n: u32, k: u32) -> Rational {
    let (n, k) = (n as usize, k as usize);
    if k > n {
        return Rational::new();
    }
    ensure_stirling_rows(n);
    Rational::from(&STIRLING.lock().unwrap()[n][k])
}

/// Central factorial number of the first kind: coefficient of `x^k` in
/// `x (x + n/2 - 1)(x + n/2 - 2)...(x - n/2 + 1)`.
pub fn central_t(n: u32, k: u32) -> Rational {
    let (n, k) = (n as usize, k as usize);
    if k > n {
        return Rational::new();
    }
    ensure_central_rows(n);
    CENTRAL_T.lock().unwrap()[n][k].clone()
}

/// Even-index family `u(n,k) = t(2n,2k)`; integer-valued.
pub fn u(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::new();
    }
    central_t(2 * n, 2 * k)
}

/// Odd-index family `v(n,k) = 4^(n-k) t(2n-1,2k-1)`; integer-valued.
/// `v(0,0) = 1` and `v(n,0) = 0` close the table at the boundary.
pub fn v(n: u32, k: u32) -> Rational {
    if n == 0 && k == 0 {
        return Rational::from(1);
    }
    if k == 0 || k > n {
        return Rational::new();
    }
    let t = central_t(2 * n - 1, 2 * k - 1);
    t * Rational::from(Integer::from(4).pow((n - k) as u32))
}

/// `u_bar(n,k) = 2 u(n,k) / (2n)!`. The boundary values
/// `u_bar(0,0) = 2` and `u_bar(n,0) = 0` for `n >= 1` follow from the
/// definition and are required by the odd-hemisphere closed form.
pub fn u_bar(n: u32, k: u32) -> Rational {
    u(n, k) * Rational::from((Integer::from(2), factorial(2 * n)))
}

/// `v_bar(n,k) = 4^(1-n) v(n,k) / (2n-1)!` for `n >= 1`; zero at `n = 0`.
pub fn v_bar(n: u32, k: u32) -> Rational {
    if n == 0 {
        return Rational::new();
    }
    v(n, k)
        * Rational::from((Integer::from(1), Integer::from(4).pow(n - 1)))
        * Rational::from((Integer::from(1), factorial(2 * n - 1)))
}

/// Bernoulli number `B_n` in the convention `B_1 = -1/2`, i.e. the one for
/// which `zeta(-n) = (-1)^n B_{n+1} / (n+1)`.
pub fn bernoulli(n: u32) -> Rational {
    let n = n as usize;
    let mut cache = BERNOULLI.lock().unwrap();
    while cache.len() <= n {
        let m = cache.len();
        // sum_{j=0}^{m} C(m+1,j) B_j = 0
        let mut acc = Rational::new();
        for (j, b) in cache.iter().enumerate() {
            acc += (b * &Rational::from(binomial((m + 1) as u32, j as u32))).complete();
        }
        acc /= Rational::from(-((m as i64) + 1));
        cache.push(acc);
    }
    cache[n].clone()
}

/// Harmonic number `H_n = 1 + 1/2 + ... + 1/n`, with `H_0 = 0`.
pub fn harmonic(n: u32) -> Rational {
    let n = n as usize;
    let mut cache = HARMONIC.lock().unwrap();
    while cache.len() <= n {
        let m = cache.len() as i64;
        let next = cache.last().unwrap() + Rational::from((1, m));
        cache.push(next);
    }
    cache[n].clone()
}

/// Exact binomial coefficient.
pub fn binomial(n: u32, k: u32) -> Integer {
    if k > n {
        return Integer::new();
    }
    Integer::from(n).binomial(k)
}

/// Exact factorial.
pub fn factorial(n: u32) -> Integer {
    Integer::factorial(n).complete()
}

/// Which coefficient family a [`CoeffTable`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffKind {
    StirlingS1,
    CentralT,
    U,
    V,
    UBar,
    VBar,
}

impl CoeffKind {
    pub fn name(self) -> &'static str {
        match self {
            CoeffKind::StirlingS1 => "stirling_s1",
            CoeffKind::CentralT => "central_t",
            CoeffKind::U => "u",
            CoeffKind::V => "v",
            CoeffKind::UBar => "u_bar",
            CoeffKind::VBar => "v_bar",
        }
    }
}

/// A dense lower-triangular dump of one coefficient family, row `n` holding
/// `k = 0..=n`.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    pub kind: CoeffKind,
    pub max_n: u32,
    pub rows: Vec<Vec<Rational>>,
}

pub fn coeff_table(kind: CoeffKind, max_n: u32) -> CoeffTable {
    let f = |n: u32, k: u32| match kind {
        CoeffKind::StirlingS1 => stirling_s1(n, k),
        CoeffKind::CentralT => central_t(n, k),
        CoeffKind::U => u(n, k),
        CoeffKind::V => v(n, k),
        CoeffKind::UBar => u_bar(n, k),
        CoeffKind::VBar => v_bar(n, k),
    };
    let rows = (0..=max_n)
        .map(|n| (0..=n).map(|k| f(n, k)).collect())
        .collect();
    CoeffTable { kind, max_n, rows }
}
