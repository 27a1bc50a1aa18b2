//! Whole-library verification suite. Each test pins its tolerance next to
//! the assertion and prints a single [PASS] line on success, so a full run
//! reads as a checklist.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Integer, Rational};
use specdet::combinatorics::{
    bernoulli, binomial, central_t, factorial, stirling_s1, u, u_bar, v, v_bar,
};
use specdet::expansion::{explicit_build, recursive_build};
use specdet::numeric::{constant_euler_gamma, constant_ln2, constant_pi, BigReal};
use specdet::special::{
    hurwitz_zeta, riemann_zeta, riemann_zeta_deriv, zeta_prime_neg_int,
    zeta_prime_neg_int_functional,
};
use specdet::{
    det_closed_form, det_lowdim_constant, det_voros, direct_series_zeta, Manifold, ManifoldKind,
};

const ALL_KINDS: [ManifoldKind; 4] = [
    ManifoldKind::Sphere,
    ManifoldKind::HemisphereDirichlet,
    ManifoldKind::RealProjective,
    ManifoldKind::HarmonicOscillator,
];

const GEOMETRIC_KINDS: [ManifoldKind; 3] = [
    ManifoldKind::Sphere,
    ManifoldKind::HemisphereDirichlet,
    ManifoldKind::RealProjective,
];

fn gap(a: &BigReal, b: &BigReal) -> f64 {
    (a.clone() - b.clone()).abs().to_f64()
}

fn rel_gap(a: &BigReal, b: &BigReal) -> f64 {
    gap(a, b) / b.abs().to_f64().max(1.0)
}

#[test]
fn exact_constant_sphere_determinants() {
    const TOL: f64 = 1e-40;
    const PRINT_TOL: f64 = 0.500_001e-6;
    let printed = [
        (2u32, 3.195_311),
        (3, 3.338_851),
        (4, 1.736_943),
        (5, 1.762_919),
        (6, 1.290_018),
        (7, 1.222_521),
        (8, 1.050_409),
        (9, 0.946_733),
    ];
    for (dim, want) in printed {
        let constant = det_lowdim_constant(dim, 64).unwrap();
        let closed = det_closed_form(Manifold::new(ManifoldKind::Sphere, dim).unwrap(), 64);
        let g = gap(&constant.det, &closed.det);
        assert!(
            g <= TOL,
            "sphere dim {dim}: constant route differs from closed form by {g:.3e}"
        );
        let printed_gap = (closed.det.to_f64() - want).abs();
        assert!(
            printed_gap <= PRINT_TOL,
            "sphere dim {dim}: determinant {} rounds away from {want}",
            closed.det.to_f64()
        );
    }
    println!(
        "[PASS] exact sphere constants (pi, Glaisher, zeta values) match the closed forms \
         to 1e-40 at 64 digits and round to the published 6-decimal table, dims 2..=9"
    );
}

#[test]
fn recursion_agrees_with_explicit_construction() {
    for kind in ALL_KINDS {
        for dim in 1..=40 {
            let m = Manifold::new(kind, dim).unwrap();
            assert_eq!(recursive_build(m), explicit_build(m), "mismatch for {m}");
        }
    }
    println!(
        "[PASS] recursive and explicit shifted expansions are structurally identical \
         (exact coefficients, all four families, dims 1..=40)"
    );
}

#[test]
fn shift_assembly_reproduces_closed_forms() {
    const TOL: f64 = 1e-20;
    for kind in GEOMETRIC_KINDS {
        for dim in 2..=12 {
            let m = Manifold::new(kind, dim).unwrap();
            let closed = det_closed_form(m, 64);
            let assembled = det_voros(m, 64, 1_000_000).unwrap();
            let g = gap(&closed.det, &assembled.det);
            assert!(g <= TOL, "{m}: assembly differs by {g:.3e}");
        }
    }
    println!(
        "[PASS] shift-assembled determinants equal the closed forms to 1e-20 at 64 digits \
         (sphere, hemisphere, projective; dims 2..=12)"
    );
}

#[test]
fn expansions_match_truncated_eigenvalue_sums() {
    const TOL: f64 = 1e-8;
    const TERMS: u64 = 100_000;
    for kind in ALL_KINDS {
        for dim in 1..=12 {
            let m = Manifold::new(kind, dim).unwrap();
            let e = explicit_build(m);
            for extra in [2u32, 3] {
                let s = e.mu.clone() + Rational::from(extra);
                let series = direct_series_zeta(m, &s, TERMS, 20).unwrap();
                let value = e.eval(&s, 30).unwrap();
                let g = gap(&value, &series);
                assert!(g <= TOL, "{m} at s = {s}: gap {g:.3e}");
            }
        }
    }
    println!(
        "[PASS] expansion evaluations match tail-bounded eigenvalue sums (100000 terms) \
         to 1e-8 at s = mu+2 and mu+3, all families, dims 1..=12"
    );
}

#[test]
fn central_factorial_identity_suite() {
    // Triangle recursions and boundary facts for s(n,k) and t(n,k).
    for n in 0..=60u32 {
        assert_eq!(stirling_s1(n, n), 1);
        assert_eq!(central_t(n, n), 1);
        assert_eq!(stirling_s1(n, n + 1), 0);
        assert_eq!(central_t(n, n + 2), 0);
        let dirac = i32::from(n == 0);
        assert_eq!(stirling_s1(n, 0), dirac);
        assert_eq!(central_t(n, 0), dirac);
        for k in 2..=n {
            let t_rhs = central_t(n - 2, k - 2)
                - Rational::from(((i64::from(n) - 2).pow(2), 4)) * central_t(n - 2, k);
            assert_eq!(central_t(n, k), t_rhs, "t({n},{k})");
            let s_rhs = stirling_s1(n - 1, k - 1)
                - Rational::from(i64::from(n) - 1) * stirling_s1(n - 1, k);
            assert_eq!(stirling_s1(n, k), s_rhs, "s({n},{k})");
        }
        for k in 0..=n {
            if (n + k) % 2 == 1 {
                assert_eq!(central_t(n, k), 0, "t({n},{k}) parity");
            }
        }
    }
    // s(n,k) recovered from the t(n,i) row through binomial rescaling.
    for n in 1..=30u32 {
        for k in 1..=n {
            let mut sum = Rational::new();
            for i in k..=n {
                sum += Rational::from(binomial(i - 1, k - 1))
                    * Rational::from((i64::from(n), 2)).pow(i - k)
                    * central_t(n, i);
            }
            if (n + k) % 2 == 1 {
                sum = -sum;
            }
            assert_eq!(stirling_s1(n, k), sum, "s({n},{k}) from t-row");
        }
    }

    // Even-index family: recursions, annihilation, normalization, bridge.
    for n in 2..=60u32 {
        let step = Rational::from((i64::from(n) - 1).pow(2));
        for k in 2..=n {
            assert_eq!(
                u(n, k),
                u(n - 1, k - 1) - step.clone() * u(n - 1, k),
                "u({n},{k})"
            );
        }
        let scale = Rational::from((1, 2 * i64::from(n) * (2 * i64::from(n) - 1)));
        for k in 1..=n {
            let rhs = (u_bar(n - 1, k - 1) - step.clone() * u_bar(n - 1, k)) * scale.clone();
            assert_eq!(u_bar(n, k), rhs, "u_bar({n},{k})");
        }
    }
    for n in 1..=60u32 {
        for j in 0..=n {
            let mut sum = Rational::new();
            for k in 1..=n {
                sum += u_bar(n, k) * Rational::from(Integer::from(j).pow(2 * k));
            }
            let want = i32::from(j == n);
            assert_eq!(sum, want, "sum u_bar({n},k) {j}^2k");
        }
    }
    for n in 1..=40u32 {
        for k in 1..=n {
            let mut lhs = Rational::new();
            for i in k..=n {
                lhs += Rational::from(binomial(2 * i, 2 * k))
                    * Rational::from(Integer::from(n).pow(2 * (i - k)))
                    * u_bar(n, i);
            }
            let rhs = (stirling_s1(2 * n, 2 * k) + stirling_s1(2 * n + 1, 2 * k + 1))
                / Rational::from(factorial(2 * n));
            assert_eq!(lhs, rhs, "even bridge n={n} k={k}");
        }
    }

    // Odd-index family: same program with odd squares.
    for n in 2..=60u32 {
        let step = Rational::from((2 * i64::from(n) - 3).pow(2));
        for k in 2..=n {
            assert_eq!(
                v(n, k),
                v(n - 1, k - 1) - step.clone() * v(n - 1, k),
                "v({n},{k})"
            );
        }
        let scale = Rational::from((1, 4 * (2 * i64::from(n) - 2) * (2 * i64::from(n) - 1)));
        for k in 1..=n {
            let rhs = (v_bar(n - 1, k - 1) - step.clone() * v_bar(n - 1, k)) * scale.clone();
            assert_eq!(v_bar(n, k), rhs, "v_bar({n},{k})");
        }
    }
    for n in 1..=60u32 {
        // j = 0 annihilates only once (2*1-1)^2 = 1 sits among the product
        // roots, which needs n >= 2; at n = 1 the sum is -1.
        let lowest_j = if n == 1 { 1 } else { 0 };
        for j in lowest_j..=n {
            let base = 2 * i64::from(j) - 1;
            let mut sum = Rational::new();
            for k in 1..=n {
                sum += v_bar(n, k) * Rational::from(Integer::from(base).pow(2 * k - 1));
            }
            let want = i32::from(j == n);
            assert_eq!(sum, want, "sum v_bar({n},k) ({base})^(2k-1)");
        }
    }
    for n in 1..=40u32 {
        for k in 1..=n {
            let mut lhs = Rational::new();
            for i in k..=n {
                lhs += Rational::from(binomial(2 * i - 1, 2 * k - 1))
                    * Rational::from(Integer::from(2 * n - 1).pow(2 * (i - k)))
                    * v_bar(n, i);
            }
            let rhs = (stirling_s1(2 * n, 2 * k) + stirling_s1(2 * n - 1, 2 * k - 1))
                * Rational::from((Integer::from(2), Integer::from(2).pow(2 * k)))
                / Rational::from(factorial(2 * n - 1));
            assert_eq!(lhs, rhs, "odd bridge n={n} k={k}");
        }
    }

    // Product forms, probed at random rational points.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    for n in 1..=40u32 {
        for _ in 0..20 {
            let x = Rational::from((rng.gen_range(-999i64..=999), rng.gen_range(1i64..=99)));
            let mut even_sum = Rational::new();
            let mut odd_sum = Rational::new();
            for k in (1..=n).rev() {
                even_sum = (even_sum + u(n, k)) * x.clone();
                odd_sum = (odd_sum + v(n, k)) * x.clone();
            }
            let mut even_prod = Rational::from(1);
            for i in 0..n {
                even_prod *= x.clone() - Rational::from(i64::from(i).pow(2));
            }
            let mut odd_prod = x.clone();
            for i in 1..n {
                odd_prod *= x.clone() - Rational::from((2 * i64::from(i) - 1).pow(2));
            }
            assert_eq!(even_sum, even_prod, "u-polynomial n={n} x={x}");
            assert_eq!(odd_sum, odd_prod, "v-polynomial n={n} x={x}");
        }
    }

    // Published 7x7 triangles, every entry.
    let u_fixture: [&[i64]; 7] = [
        &[1],
        &[0, 1],
        &[0, -1, 1],
        &[0, 4, -5, 1],
        &[0, -36, 49, -14, 1],
        &[0, 576, -820, 273, -30, 1],
        &[0, -14400, 21076, -7645, 1023, -55, 1],
    ];
    let v_fixture: [&[i64]; 7] = [
        &[1],
        &[0, 1],
        &[0, -1, 1],
        &[0, 9, -10, 1],
        &[0, -225, 259, -35, 1],
        &[0, 11025, -12916, 1974, -84, 1],
        &[0, -893025, 1057221, -172810, 8778, -165, 1],
    ];
    for (n, row) in u_fixture.iter().enumerate() {
        for (k, &want) in row.iter().enumerate() {
            assert_eq!(u(n as u32, k as u32), want, "u({n},{k})");
        }
    }
    for (n, row) in v_fixture.iter().enumerate() {
        for (k, &want) in row.iter().enumerate() {
            assert_eq!(v(n as u32, k as u32), want, "v({n},{k})");
        }
    }

    // Log-weighted sum identities, checked numerically.
    const LOG_TOL: f64 = 1e-50;
    let work = 140;
    for n in 1..=20u32 {
        let nn = i64::from(n);
        let weight = |powers: &dyn Fn(u32) -> Rational| {
            let mut w = Rational::new();
            for i in 1..=n {
                w += v_bar(n, i) * powers(i);
            }
            w
        };
        let mut lhs = BigReal::zero(work);
        for j in 1..=(2 * nn - 1) {
            let w = weight(&|i| Rational::from(Integer::from(2 * nn - 2 * j).pow(2 * i - 1)));
            if w.cmp0() != std::cmp::Ordering::Equal {
                lhs = lhs
                    + BigReal::ln_rational(&Rational::from((2 * j - 1, 2)), work).mul_rational(&w);
            }
        }
        for j in 2..=(4 * nn - 2) {
            let w = weight(&|i| Rational::from(Integer::from(2 * nn - j - 1).pow(2 * i - 1)));
            if w.cmp0() != std::cmp::Ordering::Equal {
                lhs = lhs - BigReal::ln_rational(&Rational::from(j), work).mul_rational(&w);
            }
        }
        let rhs = BigReal::ln_rational(&Rational::from(4 * nn - 2), work);
        let g = gap(&lhs, &rhs);
        assert!(g <= LOG_TOL, "first log identity n={n}: gap {g:.3e}");

        let mut lhs2 = BigReal::zero(work);
        for j in 2..nn {
            let w = weight(&|i| Rational::from(Integer::from(2 * j).pow(2 * i - 1)));
            lhs2 = lhs2 + BigReal::ln_rational(&Rational::from(j), work).mul_rational(&w);
        }
        for j in 2..=(2 * nn - 1) {
            let w = weight(&|i| Rational::from(Integer::from(j).pow(2 * i - 1)));
            lhs2 = lhs2 - BigReal::ln_rational(&Rational::from(j), work).mul_rational(&w);
        }
        let mut doubled = Rational::new();
        for j in 1..nn {
            doubled += weight(&|i| Rational::from(Integer::from(2 * j).pow(2 * i - 1)));
        }
        let rhs2 = -constant_ln2(work).mul_rational(&doubled)
            - BigReal::ln_rational(&Rational::from(2 * nn - 1), work);
        let g2 = gap(&lhs2, &rhs2);
        assert!(g2 <= LOG_TOL, "second log identity n={n}: gap {g2:.3e}");
    }

    println!(
        "[PASS] central factorial suite: recursions, parity, annihilation and normalization \
         exact to n=60, Stirling bridges exact to n=40, product forms at 20 random rational \
         points per n<=40, the published 7x7 triangles entry-for-entry, and both log-weighted \
         sum identities to 1e-50 for n<=20"
    );
}

#[test]
fn special_function_identities() {
    let digits = 64;
    const REL_TOL: f64 = 1e-54; // ten digits of slack at 64-digit working precision

    let zp0 = zeta_prime_neg_int(0, digits);
    let want =
        -(constant_ln2(digits) + constant_pi(digits).ln()).mul_rational(&Rational::from((1, 2)));
    assert!(gap(&zp0, &want) <= REL_TOL, "zeta'(0)");

    for n in 0..=40u32 {
        let value = riemann_zeta(&Rational::from(-i64::from(n)), digits).unwrap();
        let mut exact = bernoulli(n + 1) / Rational::from(n + 1);
        if n % 2 == 1 {
            exact = -exact;
        }
        let exact = BigReal::from_rational(&exact, digits);
        assert!(
            rel_gap(&value, &exact) <= REL_TOL,
            "zeta(-{n}) vs Bernoulli"
        );
    }

    let one = BigReal::from_u64(1, digits);
    for s in [
        Rational::from(-3),
        Rational::from((-3, 2)),
        Rational::from((1, 2)),
        Rational::from((3, 2)),
        Rational::from((7, 3)),
        Rational::from(3),
    ] {
        let z = riemann_zeta(&s, digits).unwrap();
        let at_one = hurwitz_zeta(&s, &Rational::from(1), digits).unwrap();
        assert!(
            rel_gap(&z, &at_one) <= REL_TOL,
            "zeta(s) = zeta(s,1) at s={s}"
        );
        let at_half = hurwitz_zeta(&s, &Rational::from((1, 2)), digits).unwrap();
        let two_pow = BigReal::rational_pow_real(
            &Rational::from(2),
            &BigReal::from_rational(&s, digits),
            digits,
        );
        let halved = at_half / (two_pow - one.clone());
        assert!(rel_gap(&z, &halved) <= REL_TOL, "halving at s={s}");
    }

    for s in [
        Rational::from((5, 2)),
        Rational::from((-3, 2)),
        Rational::from(4),
    ] {
        for a in [
            Rational::from((1, 3)),
            Rational::from((1, 2)),
            Rational::from((5, 4)),
        ] {
            for n in [1u32, 4, 9] {
                let lhs = hurwitz_zeta(&s, &a, digits).unwrap();
                let shifted_a = a.clone() + Rational::from(n);
                let mut rhs = hurwitz_zeta(&s, &shifted_a, digits).unwrap();
                let neg_s = BigReal::from_rational(&(-s.clone()), digits);
                for j in 0..n {
                    let base = a.clone() + Rational::from(j);
                    rhs = rhs + BigReal::rational_pow_real(&base, &neg_s, digits);
                }
                assert!(
                    rel_gap(&lhs, &rhs) <= REL_TOL,
                    "shift identity s={s} a={a} n={n}"
                );
            }
        }
    }

    const GAMMA_TOL: f64 = 1e-25;
    let eps = Rational::from((Integer::from(1), Integer::from(10).pow(30)));
    let near = riemann_zeta(&(Rational::from(1) + eps.clone()), 100).unwrap();
    let drift = near - BigReal::from_rational(&(Rational::from(1) / eps), 100);
    assert!(
        gap(&drift, &constant_euler_gamma(100)) <= GAMMA_TOL,
        "zeta(1+eps) - 1/eps misses Euler's constant"
    );

    for k in 0..=40u32 {
        let direct = riemann_zeta_deriv(&Rational::from(-i64::from(k)), digits).unwrap();
        let reflected = zeta_prime_neg_int_functional(k, digits);
        assert!(
            rel_gap(&direct, &reflected) <= REL_TOL,
            "zeta'(-{k}) routes disagree"
        );
    }

    println!(
        "[PASS] special functions: zeta'(0) = -ln(2pi)/2, zeta(-n) vs Bernoulli for n<=40, \
         halving and shift identities, the Euler-constant limit at the pole (1e-25), and \
         Euler-Maclaurin vs reflected zeta'(-k) for k<=40, all within 1e-54 relative at 64 digits"
    );
}

#[test]
fn laurent_coefficients_from_both_formulas() {
    const TOL: f64 = 1e-15;
    let digits = 64;
    let eps = Rational::from((Integer::from(1), Integer::from(10).pow(12)));
    let half = Rational::from((1, 2));
    let mut integer_poles = 0u32;
    let mut half_integer_poles = 0u32;
    for kind in ALL_KINDS {
        for dim in 1..=12 {
            let m = Manifold::new(kind, dim).unwrap();
            let e = explicit_build(m);
            for (loc, res) in e.poles() {
                // the residue itself, re-extracted from nearby evaluations
                let probe = |sgn: i64| {
                    let off = Rational::from(sgn) * eps.clone();
                    let s = (&loc + off.clone()).into();
                    e.eval(&s, digits).unwrap().mul_rational(&off)
                };
                let res_numeric = (probe(1) + probe(-1)).mul_rational(&half);
                let res_exact = BigReal::from_rational(&res, digits);
                let rg = gap(&res_numeric, &res_exact);
                assert!(rg <= TOL, "{m}: residue at {loc} off by {rg:.3e}");

                if !loc.is_integer() {
                    half_integer_poles += 1;
                    continue;
                }
                integer_poles += 1;
                let mm = loc.numer().to_u32().unwrap();
                let ratio = |sgn: i64| {
                    let s: Rational = &loc + Rational::from(sgn) * eps.clone();
                    let z = e.eval(&s, digits).unwrap();
                    let g = BigReal::from_rational(&(Rational::from(1) - s), digits).gamma();
                    z / g
                };
                let mut limit = (ratio(1) + ratio(-1)).mul_rational(&half);
                if mm % 2 == 1 {
                    limit = -limit;
                }
                let coefficient = e.c_coefficient(mm, digits);
                let cg = gap(&limit, &coefficient);
                assert!(cg <= TOL, "{m}: c_(-{mm}) limit route off by {cg:.3e}");
            }
        }
    }
    assert!(integer_poles > 0 && half_integer_poles > 0);
    println!(
        "[PASS] Laurent data at every pole (dims 1..=12, all families): residues re-extracted \
         numerically at {integer_poles} integer and {half_integer_poles} half-integer poles, \
         and the residue-times-factorial coefficients match the gamma-ratio limit to 1e-15 \
         at every integer pole"
    );
}

#[test]
fn oscillator_formulas_match_derivative_oracle() {
    const TOL: f64 = 1e-30;
    let digits = 64;
    let zero = Rational::new();
    let mut dets = Vec::new();
    let mut log_mags = Vec::new();
    for dim in 2..=20u32 {
        let m = Manifold::new(ManifoldKind::HarmonicOscillator, dim).unwrap();
        let closed = det_closed_form(m, digits);
        let oracle = explicit_build(m).eval_deriv(&zero, digits).unwrap();
        let g = gap(&closed.log_det_negated, &oracle);
        assert!(g <= TOL, "{m}: closed form differs from oracle by {g:.3e}");
        dets.push((dim, closed.det.to_f64()));
        log_mags.push((dim, closed.log_det_negated.abs().to_f64()));
    }
    for pair in dets.windows(2) {
        let (d, a) = pair[0];
        let (_, b) = pair[1];
        if d >= 4 && b >= a {
            eprintln!(
                "[WARN] oscillator determinant fails to decrease at dim {d} -> {}: \
                 {a:.9} -> {b:.9} (values oscillate around 1)",
                d + 1
            );
        }
    }
    let log_decay = log_mags.windows(2).all(|p| p[0].0 < 4 || p[1].1 < p[0].1);
    println!(
        "[PASS] oscillator determinant formulas match the derivative-at-zero oracle to 1e-30 \
         (dims 2..=20); warn-only trend: |log det| strictly decreasing beyond dim 4 = {log_decay}"
    );
}
