//! The sign certificates behind the construction, as polynomial listings in
//! `v = (omega + gamma, gamma)` (plus a third variable `k` for the `Q_m`
//! family), each with the box it is claimed over.
//!
//! Inside every listing `w = v[0] - v[1]` and `g = v[1]`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::bnb::{bound_extremum, Expr, Mode, Status};
use super::interval::{Interval, Real};
use crate::expr;

fn c<T: Real>(n: i32) -> T {
    T::int(n)
}

fn wg<T: Real>(v: &[T]) -> (T, T) {
    (v[0] - v[1], v[1])
}

// ---- discriminant and R1/W1 bounds ----

fn sg<T: Real>(v: &[T]) -> T {
    let (w, g) = wg(v);
    -c::<T>(8) * (c::<T>(5) + c::<T>(5) * g - c::<T>(15) * g.powi(2) + c::<T>(6) * g.powi(3))
        - (c::<T>(114) - c::<T>(146) * g + c::<T>(36) * g.powi(2)) * w
        - c::<T>(8) * (c::<T>(-15) + c::<T>(6) * g) * w.powi(2)
        - c::<T>(24) * w.powi(3)
}

fn s_wg<T: Real>(w: T, g: T) -> T {
    -c::<T>(4) * (c::<T>(4) - c::<T>(3) * g) * (g + c(1)) * (g - c(1)) * (c::<T>(2) - g)
        + (c::<T>(57) - c::<T>(114) * g + c::<T>(73) * g.powi(2) - c::<T>(12) * g.powi(3)) * w
        - c::<T>(8) * (c::<T>(14) - c::<T>(15) * g + c::<T>(3) * g.powi(2)) * w.powi(2)
        + c::<T>(8) * (c::<T>(5) - c::<T>(3) * g) * w.powi(3)
}

fn s<T: Real>(v: &[T]) -> T {
    let (w, g) = wg(v);
    s_wg(w, g)
}

fn sw<T: Real>(v: &[T]) -> T {
    let (w, g) = wg(v);
    (c::<T>(57) - c::<T>(114) * g + c::<T>(73) * g.powi(2) - c::<T>(12) * g.powi(3))
        - c::<T>(16) * (c::<T>(14) - c::<T>(15) * g + c::<T>(3) * g.powi(2)) * w
        + c::<T>(24) * (c::<T>(5) - c::<T>(3) * g) * w.powi(2)
}

fn q10<T: Real>(v: &[T]) -> T {
    let (w, g) = wg(v);
    c::<T>(3) * (c::<T>(6) * g - c(9)) * w.powi(2)
        + c::<T>(2) * (c::<T>(6) * g.powi(2) - c::<T>(19) * g + c(14)) * w
        + c::<T>(3) * g.powi(3)
        - c::<T>(18) * g.powi(2)
        + c::<T>(36) * g
        - c(24)
}

fn q11<T: Real>(v: &[T]) -> T {
    let (w, g) = wg(v);
    c::<T>(3) * (c::<T>(6) * g.powi(2) + c::<T>(8) * g - c(24)) * w.powi(2)
        + c::<T>(2) * (c::<T>(6) * g.powi(3) - c::<T>(6) * g.powi(2) - c::<T>(28) * g + c(32)) * w
        + c::<T>(3) * g.powi(4)
        - c::<T>(15) * g.powi(3)
        + c::<T>(18) * g.powi(2)
        + c::<T>(12) * g
        - c(24)
}

fn g1<T: Real>(v: &[T]) -> T {
    let g = v[0];
    c::<T>(104) - c::<T>(348) * g + c::<T>(418) * g.powi(2) - c::<T>(183) * g.powi(3)
        + c::<T>(27) * g.powi(4)
}

fn g13_of<T: Real>(g: T) -> T {
    c::<T>(9) * g.powi(4) - c::<T>(60) * g.powi(3) + c::<T>(132) * g.powi(2) - c::<T>(104) * g
        + c(24)
}

fn g13<T: Real>(v: &[T]) -> T {
    g13_of(v[0])
}

fn g2<T: Real>(v: &[T]) -> T {
    let g = v[0];
    c::<T>(12) * g13_of(g)
        + c::<T>(4)
            * (c::<T>(2) - g)
            * (c::<T>(9) * g.powi(3) - c::<T>(42) * g.powi(2) + c::<T>(50) * g - c(14))
}

fn l1<T: Real>(v: &[T]) -> T {
    let (w, g) = wg(v);
    let a = (c::<T>(11) - c::<T>(5) * g) * w - c::<T>(8) * w.powi(2)
        + c::<T>(2) * (g + c(1)) * (c::<T>(2) - g);
    a.powi(2) - w * s_wg(w, g)
}

fn dl1<T: Real>(v: &[T]) -> T {
    let (w, g) = wg(v);
    c::<T>(4)
        * (g + c(1))
        * (c::<T>(24) * w.powi(3)
            + c::<T>(6) * (c::<T>(3) * g - c(8)) * w.powi(2)
            + c::<T>(2) * g * (c::<T>(3) * g - c(7)) * w
            - (c::<T>(2) - g) * (c::<T>(-7) - c::<T>(2) * g + c::<T>(3) * g.powi(2)))
}

// ---- determinant inequalities ----

fn q1<T: Real>(v: &[T]) -> T {
    let (w, g) = wg(v);
    -c::<T>(2) * (c::<T>(3) - g) * w.powi(2) + (g - c(1)) * (c::<T>(5) * g - c(9)) * w
        - (g - c(1)) * (c::<T>(2) - g) * (g + c(1))
}

fn q2<T: Real>(v: &[T]) -> T {
    let (w, g) = wg(v);
    -c::<T>(10) * (c::<T>(3) - g) * w.powi(2)
        + c::<T>(2) * (g - c(1)) * (c::<T>(10) * g - c(19)) * w
        - c::<T>(5) * (g - c(1)) * (c::<T>(2) - g) * (g + c(1))
}

fn q3<T: Real>(v: &[T]) -> T {
    let (w, g) = wg(v);
    c::<T>(10) * (c::<T>(7) - c::<T>(3) * g) * w.powi(2)
        - c::<T>(2) * (c::<T>(15) * g.powi(2) - c::<T>(46) * g + c(33)) * w
        + c::<T>(5) * (g - c(1)) * (c::<T>(2) - g) * (g + c(1))
}

fn q4<T: Real>(v: &[T]) -> T {
    let (w, g) = wg(v);
    -c::<T>(10) * (c::<T>(7) - g) * w.powi(2)
        + c::<T>(4) * (c::<T>(5) * g.powi(2) - c::<T>(17) * g + c(13)) * w
        - c::<T>(5) * (g - c(1)) * (c::<T>(2) - g) * (g + c(1))
}

fn q5<T: Real>(v: &[T]) -> T {
    let (w, g) = wg(v);
    c::<T>(10) * (c::<T>(11) - c::<T>(3) * g) * w.powi(2)
        - c::<T>(2) * (c::<T>(15) * g.powi(2) - c::<T>(51) * g + c(40)) * w
        + c::<T>(5) * (g - c(1)) * (c::<T>(2) - g) * (g + c(1))
}

fn q6<T: Real>(v: &[T]) -> T {
    let (w, g) = wg(v);
    c::<T>(2) * (c::<T>(7) * g - c(19)) * w.powi(2)
        + c::<T>(2) * (g - c(1)) * (c::<T>(10) * g - c(21)) * w
        - c::<T>(2) * (c::<T>(4) + c::<T>(3) * g) * (g - c(1)) * (c::<T>(2) - g)
}

fn q7<T: Real>(v: &[T]) -> T {
    let (w, g) = wg(v);
    -c::<T>(2) * (c::<T>(3) * g.powi(2) - c::<T>(2) * g - c(13)) * w.powi(2)
        - c::<T>(2) * (g - c(1)) * (c::<T>(3) * g.powi(2) - c::<T>(5) * g - c(3)) * w
        + (g - c(1)) * (c::<T>(2) - g) * (c::<T>(3) * g.powi(2) - c::<T>(3) * g + c(10))
}

fn wstar_radicand<T: Real>(g: T) -> T {
    c::<T>(-87) + c::<T>(10) * g + c::<T>(129) * g.powi(2)
        - c::<T>(40) * g.powi(3)
        - c::<T>(8) * g.powi(4)
}

fn wstar_gap<T: Real>(v: &[T]) -> T {
    let g = v[0];
    let wstar =
        (c::<T>(5) - c::<T>(3) * g + wstar_radicand(g).sqrt()) / (c::<T>(4) * (c::<T>(7) + g));
    wstar - (c::<T>(2) - g) / c(3)
}

fn wstar_rad<T: Real>(v: &[T]) -> T {
    wstar_radicand(v[0])
}

fn q8<T: Real>(v: &[T]) -> T {
    let (w, g) = wg(v);
    c::<T>(2) * (c::<T>(5) * g - c(33)) * w.powi(2)
        + c::<T>(2) * (c::<T>(10) * g.powi(2) - c::<T>(34) * g + c(26)) * w
        + c::<T>(2) * (c::<T>(3) * g.powi(3) - c::<T>(7) * g.powi(2) + c(4))
}

fn q9<T: Real>(v: &[T]) -> T {
    let (w, g) = wg(v);
    (c::<T>(-6) * g.powi(2) + c::<T>(8) * g + c(54)) * w.powi(2)
        + (c::<T>(-6) * g.powi(3) + c::<T>(16) * g.powi(2) + c::<T>(2) * g - c(16)) * w
        + c::<T>(3) * (g - c(1)) * (c::<T>(2) - g) * (g.powi(2) - g + c(2))
}

// ---- the Q_m family ----

fn q1plus_coeffs<T: Real>(g: T) -> (T, T, T) {
    let two_m = c::<T>(2) - g;
    let a = (c::<T>(2) * g - c(3)) * (c::<T>(3) * g - c(4)) / two_m.powi(2);
    let b = -((g - c(1)) / two_m) + ((c::<T>(4) - c::<T>(3) * g) * (c::<T>(2) * g - c(3))) / two_m;
    let l = -c::<T>(2) * (g - c(1)) - (g - c(1)) * (c::<T>(4) - c::<T>(3) * g);
    (a, b, l)
}

fn p1<T: Real>(v: &[T]) -> T {
    let (w, g) = wg(v);
    let (a, b, l) = q1plus_coeffs(g);
    a * w.powi(3)
        + b * w.powi(2)
        + l * w
        + (c::<T>(4) - c::<T>(3) * g) * (c::<T>(2) - g) * (g - c(1))
}

/// `d/dw` of the cubic in [`p1`].
fn p2<T: Real>(v: &[T]) -> T {
    let (w, g) = wg(v);
    let (a, b, l) = q1plus_coeffs(g);
    c::<T>(3) * a * w.powi(2) + c::<T>(2) * b * w + l
}

fn dq1min<T: Real>(w: T, g: T) -> T {
    let two_m = c::<T>(2) - g;
    (c::<T>(3) * g - c(6)) - c::<T>(2) * (c::<T>(6) * g - c(7)) * w / two_m
        + c::<T>(9) * (c::<T>(2) * g - c(3)) * w.powi(2) / two_m.powi(2)
}

fn p4<T: Real>(v: &[T]) -> T {
    let (w, g) = wg(v);
    dq1min(w, g)
}

/// `m` in terms of `k` as the listing defines it.
fn m_listing<T: Real>(k: T, g: T) -> T {
    ((g - c(1)) * k + (g - c(1))) / (g + c(1))
}

/// `m = 1 + (gamma-1) k / (gamma+1)`, the parametrisation in the prose.
fn m_text<T: Real>(k: T, g: T) -> T {
    c::<T>(1) + (g - c(1)) * k / (g + c(1))
}

fn wcrit<T: Real>(g: T, n: T) -> T {
    (c::<T>(2) - g) * (c::<T>(5) - c::<T>(4) * g) / (c::<T>(14) - c::<T>(7) * g - c::<T>(4) * n)
}

fn fun_with<T: Real>(h: &[T], m: fn(T, T) -> T) -> T {
    wcrit(h[0], m(h[1], h[0])) - T::ratio(4, 3) - T::ratio(1, 10) + h[0]
}

fn fun2_with<T: Real>(h: &[T], m: fn(T, T) -> T) -> T {
    c::<T>(2) * wcrit(h[0], m(h[1], h[0])) / c(3) - T::ratio(4, 3) + h[0]
}

fn fun3_with<T: Real>(h: &[T], m: fn(T, T) -> T) -> T {
    let (g, n) = (h[0], m(h[1], h[0]));
    c::<T>(26) + c::<T>(9) * g.powi(2) - c::<T>(8) * n + g * (c::<T>(-31) + c::<T>(6) * n)
}

fn fun<T: Real>(h: &[T]) -> T {
    fun_with(h, m_listing)
}
fn fun2<T: Real>(h: &[T]) -> T {
    fun2_with(h, m_listing)
}
fn fun3<T: Real>(h: &[T]) -> T {
    fun3_with(h, m_listing)
}
fn fun_text<T: Real>(h: &[T]) -> T {
    fun_with(h, m_text)
}
fn fun2_text<T: Real>(h: &[T]) -> T {
    fun2_with(h, m_text)
}
fn fun3_text<T: Real>(h: &[T]) -> T {
    fun3_with(h, m_text)
}

fn p6diff<T: Real>(u: &[T]) -> T {
    let (w, g, k) = (u[0] - u[1], u[1], u[2]);
    let two_m = c::<T>(2) - g;
    let q6diffw =
        c::<T>(3) * w.powi(2) * (k / (g + c(1))) * ((g - c(1)) * k + c::<T>(10) * g - c(14))
            / two_m.powi(2)
            + c::<T>(2) * w * (k / (g + c(1))) * (c::<T>(9) - c::<T>(7) * g) / two_m;
    dq1min(w, g) + q6diffw
}

fn g5<T: Real>(v: &[T]) -> T {
    let g = v[0];
    -(c::<T>(21) * g.powi(2) - c::<T>(71) * g + c(42))
}
fn g6<T: Real>(v: &[T]) -> T {
    let g = v[0];
    c::<T>(80) - c::<T>(312) * g + c::<T>(402) * g.powi(2) - c::<T>(183) * g.powi(3)
        + c::<T>(27) * g.powi(4)
}
fn g7<T: Real>(v: &[T]) -> T {
    let g = v[0];
    c::<T>(50) - c::<T>(203) * g + c::<T>(261) * g.powi(2) - c::<T>(120) * g.powi(3)
        + c::<T>(18) * g.powi(4)
}
fn g8<T: Real>(v: &[T]) -> T {
    let g = v[0];
    (c::<T>(6) - c::<T>(10) * g + c::<T>(3) * g.powi(2))
        * (c::<T>(16) - c::<T>(30) * g + c::<T>(9) * g.powi(2))
}
fn g9<T: Real>(v: &[T]) -> T {
    let g = v[0];
    -(c::<T>(3) * g.powi(2) - c::<T>(13) * g + c(6))
}
fn g10<T: Real>(v: &[T]) -> T {
    let g = v[0];
    c::<T>(32) - c::<T>(112) * g + c::<T>(138) * g.powi(2) - c::<T>(61) * g.powi(3)
        + c::<T>(9) * g.powi(4)
}
fn g11<T: Real>(v: &[T]) -> T {
    let g = v[0];
    c::<T>(14) - c::<T>(65) * g + c::<T>(87) * g.powi(2) - c::<T>(40) * g.powi(3)
        + c::<T>(6) * g.powi(4)
}
fn g12<T: Real>(v: &[T]) -> T {
    let g = v[0];
    c::<T>(24) - c::<T>(104) * g + c::<T>(132) * g.powi(2) - c::<T>(60) * g.powi(3)
        + c::<T>(9) * g.powi(4)
}

// ---- boxes ----

/// `[a/b, c/d]`, enclosed outward.
fn side(a: i64, b: i64, c: i64, d: i64) -> Interval {
    Interval {
        lo: Interval::ratio(a, b).lo,
        hi: Interval::ratio(c, d).hi,
    }
}

/// Named boxes. Sides are `omega + gamma`, `gamma` and, for `B`, `k`.
pub fn named_box(name: &str) -> Option<Vec<Interval>> {
    let g = side(1, 1, 4, 3);
    let v1 = side(4, 3, 2, 1);
    let unit = side(0, 1, 1, 1);
    Some(match name {
        "V" => vec![v1, g],
        "G" => vec![g],
        "G'" => vec![side(4, 3, 2, 1)],
        "V2" => vec![v1, side(102, 100, 115, 100)],
        "V3" => vec![side(4, 3, 18, 10), side(1, 1, 102, 100)],
        "V4" => vec![side(18, 10, 2, 1), side(1, 1, 102, 100)],
        "V5" => vec![v1, side(115, 100, 4, 3)],
        "V6" => vec![side(142, 100, 2, 1), g],
        "V7" => vec![side(4, 3, 142, 100), side(1, 1, 11, 10)],
        "V8" => vec![v1, side(11, 10, 4, 3)],
        "V9" => vec![side(4, 3, 18, 10), g],
        "V10" => vec![side(18, 10, 2, 1), g],
        "Vcrit" => vec![side(4, 3, 43, 30), g],
        "Gcrit" => vec![g, unit],
        "B" => vec![v1, g, unit],
        _ => return None,
    })
}

// ---- manifest ----

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Claim {
    /// The maximum is below the threshold.
    MaxBelow(f64),
    /// The minimum is above the threshold.
    MinAbove(f64),
}

impl Claim {
    pub fn mode(self) -> Mode {
        match self {
            Claim::MaxBelow(_) => Mode::Max,
            Claim::MinAbove(_) => Mode::Min,
        }
    }

    /// Rigorous verdict from an enclosure of the extremum.
    pub fn holds(self, e: Interval) -> bool {
        match self {
            Claim::MaxBelow(t) => e.hi < t,
            Claim::MinAbove(t) => e.lo > t,
        }
    }
}

#[derive(Clone, Copy)]
pub struct Listing {
    pub name: &'static str,
    /// The optimiser call as written in the listing.
    pub call: &'static str,
    pub box_name: &'static str,
    pub claim: Claim,
    pub tol: f64,
    pub reported: Option<(f64, f64)>,
    pub expr: Expr,
    /// Extra checks that are not in the listings themselves.
    pub supplementary: bool,
    pub note: &'static str,
}

const TOL: f64 = 1e-3;

macro_rules! listing {
    ($name:expr, $call:expr, $bx:expr, $claim:expr, $tol:expr, $rep:expr, $f:ident) => {
        Listing {
            name: $name,
            call: $call,
            box_name: $bx,
            claim: $claim,
            tol: $tol,
            reported: $rep,
            expr: expr!($f),
            supplementary: false,
            note: "",
        }
    };
}

use Claim::{MaxBelow, MinAbove};

/// Every optimiser call of the listings, in order.
pub fn manifest() -> Vec<Listing> {
    vec![
        listing!(
            "Sg",
            "minimise(Sg,V6,tol=1e-3)",
            "V6",
            MinAbove(0.0),
            1e-3,
            Some((1.06209, 1.26472)),
            sg
        ),
        listing!(
            "S",
            "minimise(S,V7,tol=1e-4)",
            "V7",
            MinAbove(0.0),
            1e-4,
            Some((0.0334093, 0.0431525)),
            s
        ),
        listing!(
            "Sw",
            "minimise(Sw,V8,tol=1e-2)",
            "V8",
            MinAbove(0.0),
            1e-2,
            Some((0.336312, 2.0698)),
            sw
        ),
        listing!(
            "q10",
            "maximise(q10,V,tol=1e-2)",
            "V",
            MaxBelow(0.0),
            1e-2,
            Some((-0.910166, -0.627474)),
            q10
        ),
        listing!(
            "q11",
            "maximise(q11,V,tol=1e-2)",
            "V",
            MaxBelow(0.0),
            1e-2,
            Some((-2.12454, -1.63927)),
            q11
        ),
        listing!(
            "g1",
            "minimise(g1,G)",
            "G",
            MinAbove(0.0),
            TOL,
            Some((17.4556, 18.0143)),
            g1
        ),
        listing!(
            "g13",
            "minimise(g13,G)",
            "G",
            MinAbove(0.0),
            TOL,
            Some((0.827639, 1.00486)),
            g13
        ),
        listing!(
            "g2",
            "minimise(g2,G)",
            "G",
            MinAbove(0.0),
            TOL,
            Some((21.7206, 24.0462)),
            g2
        ),
        listing!(
            "L1",
            "minimise(L1,V9,tol=1e-2)",
            "V9",
            MinAbove(0.0),
            1e-2,
            Some((8.32454, 9.37091)),
            l1
        ),
        listing!(
            "DL1",
            "maximise(DL1,V10)",
            "V10",
            MaxBelow(0.0),
            TOL,
            Some((-33.9807, -33.5971)),
            dl1
        ),
        listing!(
            "q1",
            "maximise(q1,V,tol=1e-3)",
            "V",
            MaxBelow(0.0),
            1e-3,
            Some((-0.445382, -0.442693)),
            q1
        ),
        listing!(
            "q2",
            "maximise(q2,V,tol=1e-3)",
            "V",
            MaxBelow(0.0),
            1e-3,
            Some((-2.22671, -2.21346)),
            q2
        ),
        listing!(
            "q3",
            "minimise(q3,V,tol=1e-3)",
            "V",
            MinAbove(0.0),
            1e-3,
            Some((2.49842, 2.51321)),
            q3
        ),
        listing!(
            "q4",
            "maximise(q4,V,tol=1e-3)",
            "V",
            MaxBelow(0.0),
            1e-3,
            Some((-2.56641, -2.55714)),
            q4
        ),
        listing!(
            "q5",
            "minimise(q5,V,tol=1e-3)",
            "V",
            MinAbove(0.0),
            1e-3,
            Some((2.54864, 2.55882)),
            q5
        ),
        listing!(
            "q6",
            "maximise(q6,V,tol=1e-3)",
            "V",
            MaxBelow(0.0),
            1e-3,
            Some((-2.67263, -2.65602)),
            q6
        ),
        listing!(
            "q7",
            "minimise(q7,V,tol=1e-3)",
            "V",
            MinAbove(0.0),
            1e-3,
            Some((2.34889, 2.35904)),
            q7
        ),
        listing!(
            "wstar",
            "maximise(g->(wstar(g)-(2-g)/3),G,tol=1e-3)",
            "G",
            MaxBelow(0.0),
            1e-3,
            Some((-0.0134389, -0.0127184)),
            wstar_gap
        ),
        listing!(
            "q8",
            "maximise(q8,V,tol=1e-3)",
            "V",
            MaxBelow(0.0),
            1e-3,
            Some((-2.62435, -2.59568)),
            q8
        ),
        listing!(
            "q9",
            "minimise(q9,V,tol=1e-3)",
            "V",
            MinAbove(0.0),
            1e-3,
            Some((1.5754, 1.58222)),
            q9
        ),
        listing!(
            "p1/V2",
            "maximise(p1,V2,tol=1e-4)",
            "V2",
            MaxBelow(0.0),
            1e-4,
            Some((-0.0178999, -0.0177931)),
            p1
        ),
        listing!(
            "p1/V3",
            "maximise(p1,V3,tol=1e-3)",
            "V3",
            MaxBelow(0.0),
            1e-3,
            Some((-0.0638237, -0.0622099)),
            p1
        ),
        listing!(
            "p2/V5",
            "maximise(p2,V5,tol=1e-2)",
            "V5",
            MaxBelow(0.0),
            1e-2,
            Some((-0.321421, -0.231604)),
            p2
        ),
        listing!(
            "p2/V4",
            "minimise(p2,V4,tol=1e-3)",
            "V4",
            MinAbove(0.0),
            1e-3,
            Some((0.178011, 0.190886)),
            p2
        ),
        listing!(
            "p4",
            "maximise(p4,V,tol=1e-3)",
            "V",
            MaxBelow(0.0),
            1e-3,
            Some((-2.003, -1.99999)),
            p4
        ),
        listing!(
            "fun",
            "maximise(fun,Gcrit)",
            "Gcrit",
            MaxBelow(0.0),
            TOL,
            Some((-0.154379, -0.153729)),
            fun
        ),
        listing!(
            "p2/Vcrit",
            "maximise(p2,Vcrit)",
            "Vcrit",
            MaxBelow(-0.29),
            TOL,
            Some((-0.304395, -0.297167)),
            p2
        ),
        listing!(
            "fun2",
            "maximise(fun2,Gcrit)",
            "Gcrit",
            MaxBelow(0.0),
            TOL,
            Some((-0.0363685, -0.0358193)),
            fun2
        ),
        listing!(
            "fun3",
            "minimise(fun3,Gcrit,tol=1e-2)",
            "Gcrit",
            MinAbove(0.0),
            1e-2,
            Some((0.483905, 0.681199)),
            fun3
        ),
        listing!(
            "p6diff",
            "maximise(p6diff,B,tol=1e-2)",
            "B",
            MaxBelow(0.0),
            1e-2,
            Some((-2.03123, -1.99999)),
            p6diff
        ),
        listing!(
            "g5",
            "minimise(g5,G)",
            "G'",
            MinAbove(0.0),
            TOL,
            Some((15.2996, 15.3379)),
            g5
        ),
        listing!(
            "g6",
            "minimise(g6,G)",
            "G'",
            MinAbove(0.0),
            TOL,
            Some((29.4466, 30.2343)),
            g6
        ),
        listing!(
            "g7",
            "minimise(g7,G)",
            "G'",
            MinAbove(0.0),
            TOL,
            Some((14.8603, 15.7849)),
            g7
        ),
        listing!(
            "g8",
            "minimise(g8,G)",
            "G'",
            MinAbove(0.0),
            TOL,
            Some((15.9016, 16.0085)),
            g8
        ),
        listing!(
            "g9",
            "minimise(g9,G)",
            "G'",
            MinAbove(0.0),
            TOL,
            Some((5.99518, 6.00151)),
            g9
        ),
        listing!(
            "g10",
            "minimise(g10,G)",
            "G'",
            MinAbove(0.0),
            TOL,
            Some((11.5885, 11.8567)),
            g10
        ),
        listing!(
            "g11",
            "minimise(g11,G)",
            "G'",
            MinAbove(0.0),
            TOL,
            Some((5.98055, 6.15133)),
            g11
        ),
        listing!(
            "g12",
            "minimise(g12,G)",
            "G'",
            MinAbove(0.0),
            TOL,
            Some((5.96691, 6.22624)),
            g12
        ),
    ]
}

/// Checks the listings rely on without running: the radicand of `wstar`,
/// the `g5..g12` quartics on the range of `gamma` the argument needs
/// (`[1, 4/3]`, where the listing box is `[4/3, 2]`), and the `fun` family
/// with `m` parametrised as in the prose.
pub fn supplementary() -> Vec<Listing> {
    let sup = |name, box_name, claim, f: Expr, note| Listing {
        name,
        call: "",
        box_name,
        claim,
        tol: TOL,
        reported: None,
        expr: f,
        supplementary: true,
        note,
    };
    vec![
        sup(
            "wstar radicand",
            "G",
            MinAbove(0.0),
            expr!(wstar_rad),
            "square root in wstar is real",
        ),
        sup(
            "g5 on [1,4/3]",
            "G",
            MinAbove(0.0),
            expr!(g5),
            "listing box is [4/3,2]",
        ),
        sup(
            "g6 on [1,4/3]",
            "G",
            MinAbove(0.0),
            expr!(g6),
            "listing box is [4/3,2]",
        ),
        sup(
            "g7 on [1,4/3]",
            "G",
            MinAbove(0.0),
            expr!(g7),
            "listing box is [4/3,2]",
        ),
        sup(
            "g8 on [1,4/3]",
            "G",
            MinAbove(0.0),
            expr!(g8),
            "listing box is [4/3,2]",
        ),
        sup(
            "g9 on [1,4/3]",
            "G",
            MinAbove(0.0),
            expr!(g9),
            "listing box is [4/3,2]",
        ),
        sup(
            "g10 on [1,4/3]",
            "G",
            MinAbove(0.0),
            expr!(g10),
            "listing box is [4/3,2]",
        ),
        sup(
            "g11 on [1,4/3]",
            "G",
            MinAbove(0.0),
            expr!(g11),
            "listing box is [4/3,2]",
        ),
        sup(
            "g12 on [1,4/3]",
            "G",
            MinAbove(0.0),
            expr!(g12),
            "listing box is [4/3,2]",
        ),
        sup(
            "fun, m = 1+(g-1)k/(g+1)",
            "Gcrit",
            MaxBelow(0.0),
            expr!(fun_text),
            "listing m is shifted by one",
        ),
        sup(
            "fun2, m = 1+(g-1)k/(g+1)",
            "Gcrit",
            MaxBelow(0.0),
            expr!(fun2_text),
            "listing m is shifted by one",
        ),
        Listing {
            tol: 1e-2,
            ..sup(
                "fun3, m = 1+(g-1)k/(g+1)",
                "Gcrit",
                MinAbove(0.0),
                expr!(fun3_text),
                "listing m is shifted by one",
            )
        },
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub call: String,
    pub box_name: String,
    #[serde(rename = "box")]
    pub domain: Vec<Interval>,
    pub claim: Claim,
    pub tol: f64,
    pub enclosure: Interval,
    pub reported: Option<Interval>,
    /// Whether our enclosure meets the reported one. Informational only.
    pub intersects_reported: Option<bool>,
    pub verdict: Verdict,
    pub boxes: usize,
    pub wall_ms: f64,
    pub supplementary: bool,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub note: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    /// Multiplies every listing tolerance.
    pub tol_scale: f64,
    pub max_boxes: usize,
    pub threads: usize,
    pub include_supplementary: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            tol_scale: 1.0,
            max_boxes: 4_000_000,
            threads: 1,
            include_supplementary: true,
        }
    }
}

pub fn run_listing(l: &Listing, opts: &SuiteOptions) -> Certificate {
    let domain = named_box(l.box_name).expect("manifest boxes are named");
    let tol = l.tol * opts.tol_scale;
    let t0 = Instant::now();
    let ex = bound_extremum(&l.expr, &domain, l.claim.mode(), tol, opts.max_boxes);
    let wall_ms = t0.elapsed().as_secs_f64() * 1e3;
    let verdict = match ex.status {
        Status::Converged if l.claim.holds(ex.enclosure) => Verdict::Pass,
        Status::Converged => Verdict::Fail,
        // A decided sign is still rigorous when the width target was missed.
        Status::Inconclusive if l.claim.holds(ex.enclosure) => Verdict::Pass,
        Status::Inconclusive | Status::Domain => Verdict::Inconclusive,
    };
    let reported = l.reported.map(|(a, b)| Interval { lo: a, hi: b });
    Certificate {
        name: l.name.into(),
        call: l.call.into(),
        box_name: l.box_name.into(),
        domain,
        claim: l.claim,
        tol,
        enclosure: ex.enclosure,
        intersects_reported: reported.map(|r| r.intersects(ex.enclosure)),
        reported,
        verdict,
        boxes: ex.boxes,
        wall_ms,
        supplementary: l.supplementary,
        note: l.note.into(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub certificates: Vec<Certificate>,
    pub listed: usize,
    pub passed: usize,
    pub all_pass: bool,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Certificate> {
        self.certificates
            .iter()
            .filter(|c| c.verdict != Verdict::Pass)
    }
}

/// Run every listing (and the supplementary checks if asked), spreading the
/// work over `opts.threads` threads. Results keep manifest order and do not
/// depend on the thread count.
pub fn run_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut all = manifest();
    let listed = all.len();
    if opts.include_supplementary {
        all.extend(supplementary());
    }
    run_listings(&all, listed, opts)
}

pub fn run_listings(all: &[Listing], listed: usize, opts: &SuiteOptions) -> SuiteReport {
    let threads = opts.threads.max(1).min(all.len().max(1));
    let mut out: Vec<Option<Certificate>> = vec![None; all.len()];
    std::thread::scope(|sc| {
        let chunks: Vec<_> = out.chunks_mut(all.len().div_ceil(threads)).collect();
        let per = all.len().div_ceil(threads);
        for (ci, chunk) in chunks.into_iter().enumerate() {
            sc.spawn(move || {
                for (j, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(run_listing(&all[ci * per + j], opts));
                }
            });
        }
    });
    let certificates: Vec<Certificate> = out
        .into_iter()
        .map(|c| c.expect("every slot filled"))
        .collect();
    let passed = certificates
        .iter()
        .filter(|c| c.verdict == Verdict::Pass)
        .count();
    SuiteReport {
        all_pass: passed == certificates.len(),
        listed,
        passed,
        certificates,
    }
}
