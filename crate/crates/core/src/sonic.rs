//! Local analysis at a sonic point `y*`, where `G` vanishes.
//!
//! A smooth solution through `y*` must satisfy `G = h = 0` there, which pins
//! `(rho0, omega0)`. Its first derivatives solve a quadratic with two roots;
//! the one kept here is the Larson-Penston-Hunter (LPH) branch. All higher
//! Taylor coefficients then follow from a 2x2 linear recursion.

use serde::{Deserialize, Serialize};

use crate::model::{self, f1_prime, f1_unchecked, FlowState, PolytropicIndex};
use crate::sum::{cauchy, CompSum};
use crate::{Error, Result};

/// Discriminant `s(omega0)` of the first-order quadratic.
pub fn s_poly(w: f64, g: f64) -> f64 {
    -4.0 * (4.0 - 3.0 * g) * (g + 1.0) * (g - 1.0) * (2.0 - g)
        + (57.0 - 114.0 * g + 73.0 * g * g - 12.0 * g * g * g) * w
        - 8.0 * (14.0 - 15.0 * g + 3.0 * g * g) * w * w
        + 8.0 * (5.0 - 3.0 * g) * w * w * w
}

/// Which root of the first-order quadratic a seed uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Lph,
    Other,
}

/// A sonic point with its constrained values and first-order data
/// `R1 = y* rho1 / rho0`, `W1 = y* omega1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SonicSeed {
    pub y_star: f64,
    pub rho0: f64,
    pub omega0: f64,
    #[serde(rename = "R1")]
    pub r1: f64,
    #[serde(rename = "W1")]
    pub w1: f64,
    pub branch: Branch,
}

impl SonicSeed {
    /// Solves the sonic constraints at `y_star` and attaches the LPH branch.
    pub fn new(y_star: f64, gamma: PolytropicIndex) -> Result<Self> {
        let (rho0, omega0) = solve_sonic_state(y_star, gamma)?;
        let (r1, w1) = lph_branch(omega0, gamma)?;
        Ok(Self {
            y_star,
            rho0,
            omega0,
            r1,
            w1,
            branch: Branch::Lph,
        })
    }

    /// `rho'(y*)`
    pub fn rho1(&self) -> f64 {
        self.rho0 * self.r1 / self.y_star
    }

    /// `omega'(y*)`
    pub fn omega1(&self) -> f64 {
        self.w1 / self.y_star
    }

    pub fn state(&self) -> FlowState {
        FlowState::new(self.rho0, self.omega0)
    }
}

// log f2 - log f1; same sign as f2 - f1, and far better scaled when
// 1/(gamma-1) is large.
fn sonic_mismatch(w: f64, y_star: f64, gamma: PolytropicIndex) -> f64 {
    let lf2 = (2.0 * (y_star * w).ln() - gamma.value().ln()) / gamma.gm1();
    lf2 - f1_unchecked(w, gamma).ln()
}

fn sonic_mismatch_prime(w: f64, gamma: PolytropicIndex) -> f64 {
    2.0 / (gamma.gm1() * w) - f1_prime(w, gamma) / f1_unchecked(w, gamma)
}

/// Unique `(rho0, omega0)` with `G(y*) = h = 0` and
/// `omega0` in `[(4-3 gamma)/3, 2-gamma]`.
pub fn solve_sonic_state(y_star: f64, gamma: PolytropicIndex) -> Result<(f64, f64)> {
    let win = model::sonic_window(gamma);
    let slack = 1e-12 * win.y_big_f;
    if !(y_star >= win.y_f - slack && y_star <= win.y_big_f + slack) {
        return Err(Error::Domain(format!(
            "y* = {y_star} outside the sonic window [{}, {}]",
            win.y_f, win.y_big_f
        )));
    }
    let (mut lo, mut hi) = (gamma.omega_friedman(), gamma.omega_far());
    if y_star == win.y_f {
        return Ok((f1_unchecked(hi, gamma), hi));
    }
    if y_star == win.y_big_f {
        return Ok((f1_unchecked(lo, gamma), lo));
    }
    let f_lo = sonic_mismatch(lo, y_star, gamma);
    let f_hi = sonic_mismatch(hi, y_star, gamma);
    // Within round-off of an endpoint the analytic bracket signs can flip.
    let near = 1e-9 * win.width();
    if f_lo >= 0.0 {
        if (y_star - win.y_big_f).abs() < near {
            return Ok((f1_unchecked(lo, gamma), lo));
        }
        return Err(Error::Bracket { y_star, f_lo, f_hi });
    }
    if f_hi <= 0.0 {
        if (y_star - win.y_f).abs() < near {
            return Ok((f1_unchecked(hi, gamma), hi));
        }
        return Err(Error::Bracket { y_star, f_lo, f_hi });
    }
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sonic_mismatch(mid, y_star, gamma) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut w = 0.5 * (lo + hi);
    for _ in 0..2 {
        let step = sonic_mismatch(w, y_star, gamma) / sonic_mismatch_prime(w, gamma);
        let next = w - step;
        if next >= lo - 1e-14 && next <= hi + 1e-14 && next.is_finite() {
            w = next;
        }
    }
    Ok((f1_unchecked(w, gamma), w))
}

/// Both roots `(R1, R2)` of the first-order quadratic, `R1 < R2`.
pub fn branches(omega0: f64, gamma: PolytropicIndex) -> Result<(f64, f64)> {
    branches_raw(omega0, gamma.value())
}

pub(crate) fn branches_raw(w: f64, g: f64) -> Result<(f64, f64)> {
    let s = s_poly(w, g);
    if !(s > 0.0) {
        return Err(Error::Discriminant(s));
    }
    let w3 = w * w * w;
    let root = (w3 * s).sqrt();
    let base = (9.0 - 7.0 * g) * w * w - 8.0 * w3;
    let den = 2.0 * w3 * (g + 1.0);
    Ok(((base - root) / den, (base + root) / den))
}

/// LPH first-order data `(R1, W1)`; `W1 = 4 - 3 gamma - 3 omega0 - omega0 R1`.
pub fn lph_branch(omega0: f64, gamma: PolytropicIndex) -> Result<(f64, f64)> {
    let (r1, _) = branches(omega0, gamma)?;
    Ok((r1, w_of_r(r1, omega0, gamma.value())))
}

#[inline]
pub(crate) fn w_of_r(r: f64, w0: f64, g: f64) -> f64 {
    4.0 - 3.0 * g - 3.0 * w0 - w0 * r
}

/// Limits of `(R1, R2)` as `gamma -> 1`.
pub fn branches_gamma_one(w0: f64) -> (f64, f64) {
    let d = (1.0 - 2.0 * w0).abs();
    (
        (1.0 - 4.0 * w0 - d) / (2.0 * w0),
        (1.0 - 4.0 * w0 + d) / (2.0 * w0),
    )
}

/// Residuals of the two first-order quadratics satisfied by `(R, W)`.
pub fn first_order_residuals(r: f64, w: f64, w0: f64, gamma: PolytropicIndex) -> [f64; 2] {
    let g = gamma.value();
    let (gm1, b, a4) = (gamma.gm1(), gamma.two_m(), gamma.four_m());
    let q1 = gm1 * w0 * w0 * r * r - 2.0 * w0 * w * r + gm1 * (w0 + b) * r - 2.0 * w0 * w
        + gm1 * b * w / w0;
    let q2 = 2.0 * w0 * w * w - gm1 * w0 * w0 * r * w
        + w * (-2.0 * (a4 - 3.0 * w0) * w0 + gm1 * b)
        + ((5.0 - 3.0 * g) * w0 * w0 + (5.0 - 3.0 * g) * gm1 * w0 + gm1 * b) * w0 * r
        - 2.0 * (a4 - 3.0 * w0) * w0 * w0;
    [q1, q2]
}

/// Taylor coefficients of `r(x)^alpha` from those of `r`, `r[0] > 0`, by
/// `n r0 q_n = sum_{k=1}^{n} (k (alpha + 1) - n) r_k q_{n-k}`.
pub fn power_of_series(r: &[f64], alpha: f64) -> Vec<f64> {
    let mut q = Vec::with_capacity(r.len());
    if r.is_empty() {
        return q;
    }
    q.push(r[0].powf(alpha));
    for n in 1..r.len() {
        let mut s = CompSum::new();
        for k in 1..=n {
            s.add((k as f64 * (alpha + 1.0) - n as f64) * r[k] * q[n - k]);
        }
        q.push(s.value() / (n as f64 * r[0]));
    }
    q
}

/// Coefficients `P_N` of `rho^(gamma-1)`.
pub fn power_series_coeffs(rho: &[f64], gamma: PolytropicIndex) -> Vec<f64> {
    power_of_series(rho, gamma.gm1())
}

/// The matrix acting on `(rho_N, omega_N)` at order `N`.
pub fn recursion_matrix(n: usize, seed: &SonicSeed, gamma: PolytropicIndex) -> [[f64; 2]; 2] {
    let nn = n as f64;
    let (gm1, b, a4) = (gamma.gm1(), gamma.two_m(), gamma.four_m());
    let (y, r0, w0, r, w) = (seed.y_star, seed.rho0, seed.omega0, seed.r1, seed.w1);
    let a11 = y
        * ((nn + 1.0) * gm1 * w0 * w0 * r - 2.0 * nn * w * w0 - 2.0 * (nn - 1.0) * w0 * w0
            + gm1 * w0
            + gm1 * b);
    let a12 = y * r0 * (-2.0 * r * w0 - 2.0 * w0 + gm1 * b / w0);
    let a21 = (y / r0)
        * (w0 * w0 * gm1 * (w - (a4 - 3.0 * w0)) - w0 * (2.0 * w0 * w0 + gm1 * w0 + gm1 * b));
    let a22 = y
        * (nn * gm1 * w0 * w0 * r - 2.0 * (nn + 1.0) * w * w0 - 2.0 * (nn + 2.0) * w0 * w0
            + 2.0 * a4 * w0
            - gm1 * b);
    [[a11, a12], [a21, a22]]
}

/// Coefficients of `det A_N = y*^2 (A2 N^2 + A1 N + A0)`, returned as
/// `(A0, A1, A2)`.
pub fn det_quadratic(seed: &SonicSeed, gamma: PolytropicIndex) -> (f64, f64, f64) {
    det_quadratic_raw(seed.omega0, seed.r1, seed.w1, gamma.value())
}

pub(crate) fn det_quadratic_raw(w0: f64, r: f64, w: f64, g: f64) -> (f64, f64, f64) {
    // Expanded determinant with the R^2, RW, W^2 terms eliminated through
    // the first-order relations. Shared factor c appears in every piece.
    let c = (g - 2.0) * (g * g - 1.0) + 2.0 * (g - 3.0) * w0 * w0 - 2.0 * (g - 1.0) * w0;
    let k = 5.0 * g - 7.0;
    let w2 = w0 * w0;
    let w3 = w2 * w0;
    let a2 = w2 * r * (c + (g - 1.0) * k * w0) + w0 * w * (c - 2.0 * k * w0)
        - 4.0 * w3 * (3.0 * g + 2.0 * w0 - 4.0);
    let a1 = c * w0 * (w0 * r + w) - 2.0 * w3 * (g + 4.0 * w0 - 1.0);
    let a0 = c * w0 * (w0 * r + w + 3.0 * g + 3.0 * w0 - 4.0);
    (a0, a1, a2)
}

/// Coefficient of `(y - y*)^n` in the two sonic-form equations
///
/// ```text
/// G rho'   - y rho h                                  = 0
/// G omega' - (4-3g-3 omega) G / y + y omega h         = 0
/// ```
///
/// evaluated on the truncated series `rho`, `omega` (missing entries count
/// as zero). `G(y*)` is taken to be exactly zero, so `rho_{n+1}` and
/// `omega_{n+1}` never enter.
pub fn coefficient_residual(
    rho: &[f64],
    omega: &[f64],
    n: usize,
    y_star: f64,
    gamma: PolytropicIndex,
) -> (f64, f64) {
    let len = n + 1;
    let at = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
    let r: Vec<f64> = (0..len).map(|k| at(rho, k)).collect();
    let w: Vec<f64> = (0..len).map(|k| at(omega, k)).collect();
    let gv = gamma.value();
    let (gm1, b, a4, cpi) = (gamma.gm1(), gamma.two_m(), gamma.four_m(), gamma.c_pi());

    let p = power_series_coeffs(&r, gamma);
    let w2: Vec<f64> = (0..len).map(|k| cauchy(&w, &w, k)).collect();
    let bcoef: Vec<f64> = (0..len)
        .map(|j| {
            if j == 0 {
                return 0.0;
            }
            let mut s = CompSum::new();
            s.add(gv * p[j]);
            s.add(-y_star * y_star * w2[j]);
            s.add(-2.0 * y_star * w2[j - 1]);
            if j >= 2 {
                s.add(-w2[j - 2]);
            }
            s.value()
        })
        .collect();
    let rw: Vec<f64> = (0..len).map(|k| cauchy(&r, &w, k)).collect();
    let r2: Vec<f64> = (0..len).map(|k| cauchy(&r, &r, k)).collect();
    let r2w: Vec<f64> = (0..len).map(|k| cauchy(&r2, &w, k)).collect();
    let rw2: Vec<f64> = (0..len).map(|k| cauchy(&r, &w2, k)).collect();
    let w3: Vec<f64> = (0..len).map(|k| cauchy(&w2, &w, k)).collect();
    // coefficient n of y * b(y)
    let yb = |v: &[f64]| y_star * v[n] + if n >= 1 { v[n - 1] } else { 0.0 };

    let mut e1 = CompSum::new();
    let mut e2 = CompSum::new();
    for k in 0..n {
        e1.add((k + 1) as f64 * at(rho, k + 1) * bcoef[n - k]);
        e2.add((k + 1) as f64 * at(omega, k + 1) * bcoef[n - k]);
    }
    e1.add(-gm1 * b * yb(&r));
    e1.add(-gm1 * yb(&rw));
    e1.add(cpi * yb(&r2w));
    e1.add(-2.0 * yb(&rw2));

    // 1/y = sum_k (-1)^k y*^(-k-1) (y - y*)^k
    let inv: Vec<f64> = (0..len)
        .map(|k| {
            let m = y_star.powi(-(k as i32) - 1);
            if k % 2 == 0 {
                m
            } else {
                -m
            }
        })
        .collect();
    let g_over_y: Vec<f64> = (0..len).map(|k| cauchy(&bcoef, &inv, k)).collect();
    e2.add(-a4 * g_over_y[n]);
    e2.add(3.0 * cauchy(&w, &g_over_y, n));
    e2.add(gm1 * b * yb(&w));
    e2.add(gm1 * yb(&w2));
    e2.add(-cpi * yb(&rw2));
    e2.add(2.0 * yb(&w3));
    (e1.value(), e2.value())
}

/// Right-hand side `(F_N, G_N)` of `A_N (rho_N, omega_N) = (F_N, G_N)`,
/// given coefficients `0..N-1`.
pub fn taylor_sources(
    rho: &[f64],
    omega: &[f64],
    n: usize,
    y_star: f64,
    gamma: PolytropicIndex,
) -> (f64, f64) {
    let (e1, e2) = coefficient_residual(&rho[..n], &omega[..n], n, y_star, gamma);
    (-e1, -e2)
}

/// Truncated power series of a sonic-point solution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaylorLocal {
    pub seed: SonicSeed,
    pub order: usize,
    pub rho_coeffs: Vec<f64>,
    pub omega_coeffs: Vec<f64>,
    pub p_coeffs: Vec<f64>,
    /// Estimated radius of convergence, already halved.
    pub radius: f64,
    /// Fitted geometric growth rate of the normalised coefficients.
    pub growth: f64,
    /// Set when the coefficient growth looked unreliable.
    pub degraded: bool,
}

/// Exponent offset in the decay fit `|c_N| <= C^(N - alpha) / N^3`.
pub const DECAY_ALPHA: f64 = 1.5;

/// Build the series up to `n_max`.
pub fn build_taylor(seed: &SonicSeed, n_max: usize, gamma: PolytropicIndex) -> Result<TaylorLocal> {
    if n_max < 2 {
        return Err(Error::Parameter(format!(
            "series order must be >= 2, got {n_max}"
        )));
    }
    let mut rho = vec![seed.rho0, seed.rho1()];
    let mut omega = vec![seed.omega0, seed.omega1()];
    for n in 2..=n_max {
        let (f, g) = taylor_sources(&rho, &omega, n, seed.y_star, gamma);
        let a = recursion_matrix(n, seed, gamma);
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        rho.push((a[1][1] * f - a[0][1] * g) / det);
        omega.push((a[0][0] * g - a[1][0] * f) / det);
    }
    let p = power_series_coeffs(&rho, gamma);
    let (growth, finite) = fit_growth(&rho, &omega);
    let mut radius = 0.5 / growth;
    // The system has a pole at y = 0, so the series cannot reach past it.
    radius = radius.min(0.5 * seed.y_star);
    let degraded = !finite || !radius.is_finite() || radius < 1e-3 * seed.y_star;
    if !radius.is_finite() {
        radius = 1e-3 * seed.y_star;
    }
    Ok(TaylorLocal {
        seed: *seed,
        order: n_max,
        rho_coeffs: rho,
        omega_coeffs: omega,
        p_coeffs: p,
        radius,
        growth,
        degraded,
    })
}

// C-hat = max over the trailing window of (N^3 |c_N / c_0|)^(1/(N - alpha)).
fn fit_growth(rho: &[f64], omega: &[f64]) -> (f64, bool) {
    let n_max = rho.len() - 1;
    let start = (n_max / 2).max(2).max(n_max.saturating_sub(10));
    let mut c: f64 = 0.0;
    let mut finite = true;
    for series in [rho, omega] {
        let scale = series[0].abs().max(f64::MIN_POSITIVE);
        for (n, &v) in series.iter().enumerate().skip(start) {
            if !v.is_finite() {
                finite = false;
                continue;
            }
            let nn = n as f64;
            let t = nn.powi(3) * (v / scale).abs();
            if t > 0.0 {
                c = c.max(t.powf(1.0 / (nn - DECAY_ALPHA)));
            }
        }
    }
    if c == 0.0 {
        // Every tail coefficient vanished (for instance the far-field seed's
        // omega series and a polynomial rho); fall back to the nearest pole.
        c = f64::MIN_POSITIVE;
    }
    (c, finite)
}

impl TaylorLocal {
    /// Value and first derivative at `y`, with `|y - y*| <= radius`.
    pub fn eval(&self, y: f64) -> Result<(FlowState, FlowState)> {
        let x = y - self.seed.y_star;
        if !(x.abs() <= self.radius * (1.0 + 1e-12)) {
            return Err(Error::Domain(format!(
                "y = {y} lies outside the series radius {} around {}",
                self.radius, self.seed.y_star
            )));
        }
        let (r, dr) = horner(&self.rho_coeffs, x);
        let (w, dw) = horner(&self.omega_coeffs, x);
        Ok((FlowState::new(r, w), FlowState::new(dr, dw)))
    }

    /// Residual coefficients of the sonic-form equations for orders `0..=n`.
    pub fn residual_coefficients(&self, n: usize, gamma: PolytropicIndex) -> Vec<(f64, f64)> {
        (0..=n)
            .map(|k| {
                coefficient_residual(
                    &self.rho_coeffs,
                    &self.omega_coeffs,
                    k,
                    self.seed.y_star,
                    gamma,
                )
            })
            .collect()
    }
}

/// Order used by [`residual_slopes`] when none is given. Higher orders push
/// the residual under round-off inside the fit window.
pub const SLOPE_ORDER: usize = 2;

/// Log-log slopes of the two sonic-form residuals of the series cut at
/// `order`, fitted over `y - y*` in `[1e-4, 1e-2]` times the radius. A
/// series correct through `order` gives slopes near `order + 1`.
pub fn residual_slopes(t: &TaylorLocal, order: usize, gamma: PolytropicIndex) -> (f64, f64) {
    let k = order.min(t.order) + 1;
    let (rc, wc) = (&t.rho_coeffs[..k], &t.omega_coeffs[..k]);
    let mut lx = Vec::new();
    let (mut l1, mut l2) = (Vec::new(), Vec::new());
    for i in 0..13 {
        let x = t.radius * 10f64.powf(-4.0 + i as f64 / 6.0);
        let (r, dr) = horner(rc, x);
        let (w, dw) = horner(wc, x);
        let (e1, e2) = ode_residual(
            t.seed.y_star + x,
            FlowState::new(r, w),
            FlowState::new(dr, dw),
            gamma,
        );
        lx.push(x.ln());
        l1.push(e1.abs().max(f64::MIN_POSITIVE).ln());
        l2.push(e2.abs().max(f64::MIN_POSITIVE).ln());
    }
    (
        crate::integrate::linear_slope(&lx, &l1),
        crate::integrate::linear_slope(&lx, &l2),
    )
}

pub fn eval_taylor(t: &TaylorLocal, y: f64) -> Result<(FlowState, FlowState)> {
    t.eval(y)
}

/// Value and derivative of `sum c_k x^k`.
pub fn horner(c: &[f64], x: f64) -> (f64, f64) {
    let mut v = 0.0;
    let mut d = 0.0;
    for &ck in c.iter().rev() {
        d = d * x + v;
        v = v * x + ck;
    }
    (v, d)
}

/// Residuals of the sonic-form equations at `y` for a state and its
/// derivative, scaled by the size of the largest term.
pub fn ode_residual(y: f64, s: FlowState, ds: FlowState, gamma: PolytropicIndex) -> (f64, f64) {
    let gg = model::g(y, s, gamma);
    let hh = model::h(s, gamma);
    let t1 = [gg * ds.rho, -y * s.rho * hh];
    let lin = gamma.four_m() - 3.0 * s.omega;
    let t2 = [gg * ds.omega, -lin * gg / y, y * s.omega * hh];
    (t1.iter().sum(), t2.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::sonic_window;

    fn gm(g: f64) -> PolytropicIndex {
        PolytropicIndex::new(g).unwrap()
    }

    #[test]
    fn endpoints_of_the_window() {
        for g in [1.05, 1.2, 1.3] {
            let gamma = gm(g);
            let w = sonic_window(gamma);
            let (r, o) = solve_sonic_state(w.y_f, gamma).unwrap();
            assert_eq!(o, gamma.omega_far());
            assert!((r - gamma.four_m() / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
            let (r, o) = solve_sonic_state(w.y_big_f, gamma).unwrap();
            assert_eq!(o, gamma.omega_friedman());
            assert!((r - 1.0 / (6.0 * std::f64::consts::PI)).abs() < 1e-15);
        }
    }

    #[test]
    fn outside_window_is_rejected() {
        let gamma = gm(1.2);
        let w = sonic_window(gamma);
        assert!(solve_sonic_state(0.9 * w.y_f, gamma).is_err());
        assert!(solve_sonic_state(1.1 * w.y_big_f, gamma).is_err());
    }

    #[test]
    fn far_field_first_order_data() {
        for g in [1.05, 1.2, 1.3] {
            let gamma = gm(g);
            let (r, w) = lph_branch(gamma.omega_far(), gamma).unwrap();
            assert!((r + 2.0 / gamma.two_m()).abs() < 1e-12, "{r}");
            assert!(w.abs() < 1e-12, "{w}");
        }
    }

    #[test]
    fn both_branches_satisfy_the_quadratics() {
        let gamma = gm(1.2);
        for i in 0..=20 {
            let w0 = gamma.omega_friedman()
                + (gamma.omega_far() - gamma.omega_friedman()) * i as f64 / 20.0;
            let (r1, r2) = branches(w0, gamma).unwrap();
            for r in [r1, r2] {
                let res = first_order_residuals(r, w_of_r(r, w0, gamma.value()), w0, gamma);
                assert!(res[0].abs() < 1e-12 && res[1].abs() < 1e-12, "{res:?}");
            }
        }
    }

    #[test]
    fn power_of_constant_series() {
        let p = power_of_series(&[2.0, 0.0, 0.0, 0.0], 0.3);
        assert!((p[0] - 2f64.powf(0.3)).abs() < 1e-15);
        assert!(p[1..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn p1_and_p2_closed_forms() {
        let gamma = gm(1.2);
        let g = gamma.value();
        let r = [0.7, -0.3, 0.25];
        let p = power_series_coeffs(&r, gamma);
        let p1 = (g - 1.0) * r[0].powf(g - 2.0) * r[1];
        let p2 = r[0].powf(g - 1.0)
            * ((g - 1.0) * r[2] / r[0] + (g - 1.0) * (g - 2.0) * r[1] * r[1] / (2.0 * r[0] * r[0]));
        assert!((p[1] - p1).abs() < 1e-15);
        assert!((p[2] - p2).abs() < 1e-15);
    }

    #[test]
    fn matrix_is_the_linear_part_of_the_residual() {
        let gamma = gm(1.2);
        let w = sonic_window(gamma);
        let seed = SonicSeed::new(0.4 * w.y_f + 0.6 * w.y_big_f, gamma).unwrap();
        let t = build_taylor(&seed, 8, gamma).unwrap();
        for n in 2..=7 {
            let mut r = t.rho_coeffs[..n].to_vec();
            let mut o = t.omega_coeffs[..n].to_vec();
            r.push(0.0);
            o.push(0.0);
            let e0 = coefficient_residual(&r, &o, n, seed.y_star, gamma);
            r[n] = 1.0;
            let e1 = coefficient_residual(&r, &o, n, seed.y_star, gamma);
            r[n] = 0.0;
            o[n] = 1.0;
            let e2 = coefficient_residual(&r, &o, n, seed.y_star, gamma);
            let a = recursion_matrix(n, &seed, gamma);
            let num = [[e1.0 - e0.0, e2.0 - e0.0], [e1.1 - e0.1, e2.1 - e0.1]];
            for i in 0..2 {
                for j in 0..2 {
                    assert!((num[i][j] - a[i][j]).abs() < 1e-10 * a[i][j].abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn far_field_seed_reproduces_the_power_law() {
        for g in [1.05, 1.2, 1.3] {
            let gamma = gm(g);
            let w = sonic_window(gamma);
            let seed = SonicSeed::new(w.y_f, gamma).unwrap();
            let t = build_taylor(&seed, 30, gamma).unwrap();
            // k y^(-a) = rho0 (1 + x / y_f)^(-a)
            let a = -2.0 / gamma.two_m();
            let mut binom = 1.0;
            for n in 0..=30 {
                let expect = seed.rho0 * binom / w.y_f.powi(n as i32);
                assert!(
                    (t.rho_coeffs[n] - expect).abs() <= 1e-11 * expect.abs().max(1e-300) + 1e-300,
                    "n={n}: {} vs {expect}",
                    t.rho_coeffs[n]
                );
                binom *= (a - n as f64) / (n as f64 + 1.0);
                if n >= 1 {
                    assert!(t.omega_coeffs[n].abs() < 1e-12 / w.y_f.powi(n as i32));
                }
            }
        }
    }

    #[test]
    fn horner_matches_direct() {
        let c = [1.0, -2.0, 0.5, 3.0];
        let x = 0.3;
        let (v, d) = horner(&c, x);
        assert!((v - (1.0 - 0.6 + 0.045 + 0.081)).abs() < 1e-15);
        assert!((d - (-2.0 + 0.3 + 0.81)).abs() < 1e-15);
    }

    #[test]
    fn eval_outside_radius_errors() {
        let gamma = gm(1.2);
        let w = sonic_window(gamma);
        let seed = SonicSeed::new(0.5 * (w.y_f + w.y_big_f), gamma).unwrap();
        let t = build_taylor(&seed, 20, gamma).unwrap();
        assert!(t.eval(seed.y_star + 2.0 * t.radius).is_err());
        let (s, ds) = t.eval(seed.y_star).unwrap();
        assert_eq!(s.rho, seed.rho0);
        assert_eq!(ds.omega, seed.omega1());
    }
}
