//! Interval arithmetic against exact rationals, and the behaviour of the
//! certificate suite as a whole.

mod common;

use common::{exact, Q};
use proptest::prelude::*;
use yahil::certify::{
    self, bound_extremum, named_box, seed_consistency, window_grid, Interval, Mode, Real,
    SuiteOptions,
};
use yahil::PolytropicIndex;

fn contains_exact(i: Interval, x: &Q) -> bool {
    exact(i.lo) <= *x && *x <= exact(i.hi)
}

fn interval() -> impl Strategy<Value = (Interval, f64)> {
    (-1e3f64..1e3, 0.0f64..10.0, 0.0f64..=1.0).prop_map(|(lo, w, t)| {
        let i = Interval::new(lo, lo + w).unwrap();
        let x = (lo + t * w).clamp(i.lo, i.hi);
        (i, x)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn arithmetic_contains_the_exact_result((a, x) in interval(), (b, y) in interval()) {
        let (ex, ey) = (exact(x), exact(y));
        prop_assert!(contains_exact(a + b, &(&ex + &ey)));
        prop_assert!(contains_exact(a - b, &(&ex - &ey)));
        prop_assert!(contains_exact(a * b, &(&ex * &ey)));
        prop_assert!(contains_exact(-a, &-ex.clone()));
        if let Ok(q) = a.checked_div(b) {
            prop_assert!(contains_exact(q, &(&ex / &ey)));
        }
    }

    #[test]
    fn powers_contain_the_exact_result((a, x) in interval(), n in 0u32..6) {
        let ex = exact(x);
        let p = (0..n).fold(Q::from_integer(1.into()), |acc, _| acc * &ex);
        prop_assert!(contains_exact(a.powi(n), &p));
    }

    #[test]
    fn square_root_brackets_the_true_root(lo in 0.0f64..1e6, w in 0.0f64..1e3, t in 0.0f64..=1.0) {
        let a = Interval::new(lo, lo + w).unwrap();
        let x = (lo + t * w).min(a.hi);
        let r = Real::sqrt(a);
        // lo^2 <= x <= hi^2, exactly.
        prop_assert!(exact(r.lo) * exact(r.lo) <= exact(x) && exact(x) <= exact(r.hi) * exact(r.hi));
    }

    #[test]
    fn ratios_contain_the_fraction(n in -10_000i64..10_000, d in 1i64..10_000) {
        prop_assert!(contains_exact(Interval::ratio(n, d), &common::q(n, d)));
    }
}

fn rosen<T: Real>(v: &[T]) -> T {
    let a = T::int(1) - v[0];
    let b = v[1] - v[0].powi(2);
    a.powi(2) + T::int(100) * b.powi(2)
}

#[test]
fn tighter_tolerance_never_loosens_the_enclosure() {
    let f = yahil::expr!(rosen);
    let d = [
        Interval::new(-2.0, 2.0).unwrap(),
        Interval::new(-1.0, 3.0).unwrap(),
    ];
    let mut prev: Option<Interval> = None;
    for tol in [1e-1, 1e-2, 1e-3, 1e-4] {
        let e = bound_extremum(&f, &d, Mode::Min, tol, 1_000_000);
        assert!(e.enclosure.contains(0.0), "{tol}: {:?}", e.enclosure);
        if let Some(p) = prev {
            assert!(
                e.enclosure.width() <= p.width(),
                "{tol}: {:?} wider than {:?}",
                e.enclosure,
                p
            );
        }
        prev = Some(e.enclosure);
    }
}

#[test]
fn certificate_widths_shrink_with_the_tolerance() {
    for l in certify::manifest()
        .iter()
        .filter(|l| ["q1", "g1", "S"].contains(&l.name))
    {
        let coarse = certify::run_listing(l, &SuiteOptions::default());
        let fine = certify::run_listing(
            l,
            &SuiteOptions {
                tol_scale: 0.1,
                ..Default::default()
            },
        );
        assert!(
            fine.enclosure.width() <= coarse.enclosure.width(),
            "{}",
            l.name
        );
        assert!(fine.enclosure.intersects(coarse.enclosure), "{}", l.name);
    }
}

#[test]
fn suite_output_does_not_depend_on_thread_count() {
    let run = |threads| {
        let r = certify::run_suite(&SuiteOptions {
            threads,
            include_supplementary: false,
            ..Default::default()
        });
        r.certificates
            .into_iter()
            .map(|c| (c.name, c.enclosure, c.verdict, c.boxes))
            .collect::<Vec<_>>()
    };
    let one = run(1);
    assert_eq!(one.len(), 38);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
}

#[test]
fn reversed_claims_are_refuted() {
    let mut l = certify::manifest()
        .into_iter()
        .find(|l| l.name == "q1")
        .unwrap();
    l.claim = match l.claim {
        certify::Claim::MaxBelow(t) => certify::Claim::MinAbove(t),
        certify::Claim::MinAbove(t) => certify::Claim::MaxBelow(t),
    };
    let c = certify::run_listing(&l, &SuiteOptions::default());
    assert_ne!(c.verdict, certify::Verdict::Pass);
}

#[test]
fn named_boxes_are_proper() {
    for name in ["V", "G", "G'", "Vcrit", "Gcrit", "B"] {
        let b = named_box(name).unwrap_or_else(|| panic!("{name}"));
        assert!(b.iter().all(|i| i.is_valid() && i.width() > 0.0), "{name}");
    }
    assert!(named_box("nope").is_none());
}

#[test]
fn seed_inequalities_hold_across_the_window() {
    for g in [1.01, 1.05, 1.1, 1.15, 1.2, 1.25, 1.3, 1.33] {
        let gamma = PolytropicIndex::new(g).unwrap();
        let rep = seed_consistency(gamma, &window_grid(gamma, 101)).unwrap();
        for c in &rep.checks {
            assert!(
                c.holds,
                "gamma={g}: {} fails, margin {:e} at y*={}",
                c.name, c.worst_margin, c.worst_y_star
            );
        }
        assert_eq!(rep.points, 101);
    }
}
