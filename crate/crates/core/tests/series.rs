//! The series machinery against exact rational arithmetic, plus property
//! tests of the sonic-point algebra.

mod common;

use common::*;
use num_traits::{One, Zero};
use proptest::prelude::*;
use yahil::model::{self, sonic_window, FlowState};
use yahil::sonic::{self, SonicSeed};
use yahil::PolytropicIndex;

fn gm(g: f64) -> PolytropicIndex {
    PolytropicIndex::new(g).unwrap()
}

#[test]
fn power_recurrence_matches_partition_enumeration() {
    let alpha = q(21, 100);
    let r = sample_series();
    let rf: Vec<f64> = r.iter().map(f).collect();
    let p = sonic::power_of_series(&rf, f(&alpha));
    for (n, &pn) in p.iter().enumerate().take(9).skip(1) {
        let exact = partition_coeff(&r, &alpha, n);
        let via_binomial = &binomial_power(
            &r[1..].iter().cloned().fold(vec![Q::zero()], |mut v, c| {
                v.push(c);
                v
            }),
            &alpha,
            n,
        )[n];
        assert_eq!(
            &exact, via_binomial,
            "the two exact oracles disagree at N={n}"
        );
        let e = f(&exact);
        assert!(
            (pn - e).abs() <= 1e-14 * e.abs().max(1e-3),
            "N={n}: {} vs {e}",
            pn
        );
    }
}

/// Residual coefficients through order 3 of the two sonic-form equations
/// for `gamma = 121/100`, `rho0 = 1`, `omega0 = 2/5`, `y* = 11/4`, split as
/// `rational + (4 pi / (4 - 3 gamma)) * rational`.
#[test]
fn order_three_residuals_match_exact_expansion() {
    let g = q(121, 100);
    let (one, two, three) = (q(1, 1), q(2, 1), q(3, 1));
    let ys = q(11, 4);
    let rho = vec![q(1, 1), q(-3, 7), q(1, 5), q(-2, 9)];
    let om = vec![q(2, 5), q(1, 3), q(-1, 8), q(3, 11)];
    let d = 3;
    let x_plus_y = vec![ys.clone(), one.clone()];
    // P = rho^(g-1)
    let u: Vec<Q> = std::iter::once(Q::zero())
        .chain(rho[1..].iter().cloned())
        .collect();
    let p = binomial_power(&u, &(&g - &one), d);
    let w2 = pmul(&om, &om, d);
    let y2 = pmul(&x_plus_y, &x_plus_y, d);
    let mut big_g = padd(&pscale(&p, &g), &pscale(&pmul(&y2, &w2, d), &-one.clone()));
    big_g[0] = Q::zero();
    // h = h_rat - cpi * rho * omega
    let h_rat = padd(
        &padd(&pscale(&w2, &two), &pscale(&om, &(&g - &one))),
        &[(&g - &one) * (&two - &g)],
    );
    let h_pi = pscale(&pmul(&rho, &om, d), &-one.clone());
    let inv_y: Vec<Q> = (0..=d)
        .map(|k| {
            let m = (0..=k).fold(Q::one(), |a, _| a / &ys);
            if k % 2 == 0 {
                m
            } else {
                -m
            }
        })
        .collect();
    // e1 = G rho' - y rho h
    let yr = pmul(&x_plus_y, &rho, d);
    let e1_rat = padd(
        &pmul(&big_g, &pderiv(&rho), d),
        &pscale(&pmul(&yr, &h_rat, d), &-one.clone()),
    );
    let e1_pi = pscale(&pmul(&yr, &h_pi, d), &-one.clone());
    // e2 = G omega' - (4-3g-3omega) G / y + y omega h
    let lin = padd(&[&q(4, 1) - &three * &g], &pscale(&om, &-three.clone()));
    let yw = pmul(&x_plus_y, &om, d);
    let e2_rat = padd(
        &padd(
            &pmul(&big_g, &pderiv(&om), d),
            &pscale(&pmul(&pmul(&lin, &big_g, d), &inv_y, d), &-one.clone()),
        ),
        &pmul(&yw, &h_rat, d),
    );
    let e2_pi = pmul(&yw, &h_pi, d);

    let gamma = gm(1.21);
    let cpi = gamma.c_pi();
    let rf: Vec<f64> = rho.iter().map(f).collect();
    let wf: Vec<f64> = om.iter().map(f).collect();
    for n in 0..=d {
        let (a, b) = sonic::coefficient_residual(&rf, &wf, n, 2.75, gamma);
        let ea = f(&e1_rat[n]) + cpi * f(&e1_pi[n]);
        let eb = f(&e2_rat[n]) + cpi * f(&e2_pi[n]);
        assert!(
            (a - ea).abs() <= 1e-13 * (1.0 + ea.abs()),
            "e1[{n}]: {a} vs {ea}"
        );
        assert!(
            (b - eb).abs() <= 1e-13 * (1.0 + eb.abs()),
            "e2[{n}]: {b} vs {eb}"
        );
    }
}

/// The determinant evaluated exactly; the f64 product difference loses up
/// to five digits to cancellation as gamma approaches 4/3.
fn direct_det(n: usize, s: &SonicSeed, gamma: PolytropicIndex) -> f64 {
    f(&exact_det(
        n,
        s.y_star,
        s.rho0,
        s.omega0,
        s.r1,
        s.w1,
        gamma.value(),
    ))
}

#[test]
fn float_matrix_matches_the_exact_one() {
    let gamma = gm(1.2);
    let w = sonic_window(gamma);
    let seed = SonicSeed::new(w.y_f + 0.4 * w.width(), gamma).unwrap();
    for n in [2, 7, 30] {
        let a = sonic::recursion_matrix(n, &seed, gamma);
        let d = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let e = direct_det(n, &seed, gamma);
        assert!(((d - e) / e).abs() < 1e-13, "N={n}: {d} vs {e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn determinant_quadratic_matches_direct(g in 1.001f64..1.333, frac in 0.0f64..=1.0, n in 2usize..=50) {
        let gamma = gm(g);
        let w = sonic_window(gamma);
        let seed = SonicSeed::new(w.y_f + frac * w.width(), gamma).unwrap();
        let (a0, a1, a2) = sonic::det_quadratic(&seed, gamma);
        let nn = n as f64;
        let quad = seed.y_star * seed.y_star * (a2 * nn * nn + a1 * nn + a0);
        let det = direct_det(n, &seed, gamma);
        prop_assert!((quad - det).abs() <= 1e-12 * det.abs(), "{quad} vs {det}");
        prop_assert!(det > 0.0);
    }

    #[test]
    fn sonic_state_solves_both_constraints(g in 1.001f64..1.333, frac in 0.0f64..=1.0) {
        let gamma = gm(g);
        let w = sonic_window(gamma);
        let y = w.y_f + frac * w.width();
        let (rho, om) = sonic::solve_sonic_state(y, gamma).unwrap();
        let s = FlowState::new(rho, om);
        let c = model::sound_speed_sq(rho, gamma);
        prop_assert!(model::g(y, s, gamma).abs() <= 1e-12 * c);
        let hs = [2.0 * om * om, gamma.c_pi() * rho * om, gamma.gm1() * gamma.two_m()];
        let scale = hs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!(model::h(s, gamma).abs() <= 1e-12 * scale);
        prop_assert!(om >= gamma.omega_friedman() && om <= gamma.omega_far());
    }

    #[test]
    fn lph_branch_solves_the_first_order_system(g in 1.001f64..1.333, frac in 0.0f64..=1.0) {
        let gamma = gm(g);
        let w = sonic_window(gamma);
        let seed = SonicSeed::new(w.y_f + frac * w.width(), gamma).unwrap();
        let [q1, q2] = sonic::first_order_residuals(seed.r1, seed.w1, seed.omega0, gamma);
        prop_assert!(q1.abs() < 1e-11 && q2.abs() < 1e-11, "{q1} {q2}");
        let (r1, r2) = sonic::branches(seed.omega0, gamma).unwrap();
        prop_assert!(r1 < r2 && r1 == seed.r1);
    }

    #[test]
    fn power_series_of_a_power(alpha in -2.0f64..2.0, r0 in 0.1f64..3.0, c1 in -1.0f64..1.0) {
        // (r0 + c1 x)^alpha has coefficients r0^alpha (alpha choose k) (c1/r0)^k.
        let p = sonic::power_of_series(&[r0, c1, 0.0, 0.0, 0.0, 0.0], alpha);
        let mut b = 1.0;
        for (k, pk) in p.iter().enumerate() {
            let want = r0.powf(alpha) * b * (c1 / r0).powi(k as i32);
            prop_assert!((pk - want).abs() <= 1e-12 * (1.0 + want.abs()), "k={k}: {pk} vs {want}");
            b *= (alpha - k as f64) / (k as f64 + 1.0);
        }
    }

    #[test]
    fn omega0_decreases_across_the_window(g in 1.001f64..1.333, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        prop_assume!((a - b).abs() > 1e-6);
        let gamma = gm(g);
        let w = sonic_window(gamma);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (_, w_lo) = sonic::solve_sonic_state(w.y_f + lo * w.width(), gamma).unwrap();
        let (_, w_hi) = sonic::solve_sonic_state(w.y_f + hi * w.width(), gamma).unwrap();
        prop_assert!(w_lo > w_hi);
    }
}

#[test]
fn series_at_the_ends_of_the_window() {
    for g in [1.05, 1.2, 1.3] {
        let gamma = gm(g);
        let w = sonic_window(gamma);
        let far = sonic::build_taylor(&SonicSeed::new(w.y_f, gamma).unwrap(), 40, gamma).unwrap();
        // omega is constant on the far-field solution; scale each
        // coefficient by y_f^k so that round-off growth is measured fairly.
        for (k, c) in far.omega_coeffs.iter().enumerate().skip(1) {
            let scaled = c * w.y_f.powi(k as i32);
            assert!(scaled.abs() < 1e-10, "gamma={g} k={k}: {scaled}");
        }
        let fried =
            sonic::build_taylor(&SonicSeed::new(w.y_big_f, gamma).unwrap(), 40, gamma).unwrap();
        assert!(fried.omega_coeffs[1] > 0.0);
    }
}
