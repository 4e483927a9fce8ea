//! Shooting for the critical sonic point and assembly of the global profile.
//!
//! A sonic point `y*` belongs to the crossing set when the leftward solution
//! reaches the Friedman velocity `(4-3gamma)/3` before the origin or a second
//! sonic point. The crossing set is an interval ending at `y_F`, and its lower
//! end is the sonic point of the Yahil solution. Bisection approaches it from
//! the crossing side; exactly at the critical point the crossing retreats to
//! `y = 0`.

use serde::{Deserialize, Serialize};

use crate::integrate::{
    self, extend_left, extend_left_on, extend_right, handoff_check, AsymptoticFit, Direction,
    ExtendOptions, Profile, Sample, Terminal, HANDOFF_START,
};
use crate::model::{self, sonic_window, FlowState, PolytropicIndex};
use crate::sonic::{build_taylor, SonicSeed, TaylorLocal};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Class {
    CrossesFriedman,
    SonicFirst,
    OriginFirst,
}

impl Class {
    /// Membership in the crossing set.
    pub fn crosses(self) -> bool {
        self == Class::CrossesFriedman
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootOptions {
    pub n_max: usize,
    /// `y_min = y_min_factor * y*`.
    pub y_min_factor: f64,
    /// `y_max = y_max_factor * y*`.
    pub y_max_factor: f64,
    /// Bracket width relative to `y_F - y_f`.
    pub tol_rel: f64,
    /// Interior points of the initial sweep used to detect a second transition.
    pub sweep: usize,
    pub max_iter: usize,
    /// Allowed `|omega(y_min) - (4-3gamma)/3|`.
    pub origin_tol: f64,
    /// Bracket profiles are trusted to agree down to this `omega` gap.
    pub join_tol: f64,
    /// `|omega(y_max) - (2-gamma)|` may be at most this times `y_max^(-1/(2-gamma))`.
    pub far_rate: f64,
    /// Dead-band for the sampled monotonicity checks, relative.
    pub monotone_slack: f64,
    /// Largest allowed seam or handoff mismatch, relative.
    pub seam_tol: f64,
    pub extend: ExtendOptions,
}

impl Default for ShootOptions {
    fn default() -> Self {
        Self {
            n_max: 60,
            y_min_factor: 1e-4,
            y_max_factor: 1e4,
            tol_rel: 1e-12,
            sweep: 16,
            max_iter: 200,
            origin_tol: 1e-3,
            join_tol: 1e-9,
            far_rate: 100.0,
            monotone_slack: 1e-12,
            seam_tol: 1e-8,
            extend: ExtendOptions::default(),
        }
    }
}

/// Output of [`classify`]: the class together with the data it was read from.
#[derive(Debug, Clone)]
pub struct Classified {
    pub class: Class,
    pub taylor: TaylorLocal,
    pub left: Profile,
}

pub fn classify(y_star: f64, gamma: PolytropicIndex, opts: &ShootOptions) -> Result<Classified> {
    let seed = SonicSeed::new(y_star, gamma)?;
    let taylor = build_taylor(&seed, opts.n_max, gamma)?;
    let left = extend_left(&taylor, opts.y_min_factor * y_star, gamma, &opts.extend)?;
    let class = match left.terminal {
        Terminal::FriedmanCrossing { .. } => Class::CrossesFriedman,
        Terminal::SonicApproach { .. } => Class::SonicFirst,
        Terminal::OriginReached { .. } => Class::OriginFirst,
        Terminal::StepFailure | Terminal::ReachedYmax => {
            return Err(Error::StepFailure {
                y: left.last().y,
                reason: format!("left extension stopped with {:?}", left.terminal),
            })
        }
    };
    Ok(Classified {
        class,
        taylor,
        left,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShootResult {
    pub gamma: PolytropicIndex,
    pub y_star_bar: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    /// `(y*, class)` of the initial sweep.
    pub sweep: Vec<(f64, Class)>,
    /// Number of separate runs of crossing seeds in the sweep.
    pub crossing_runs: usize,
    /// Crossing radius at each new upper end of the bracket.
    pub crossing_trend: Vec<(f64, f64)>,
    pub lo_class: Class,
    /// Left profile from the upper (crossing) end of the bracket.
    pub left_profile: Profile,
    /// Left profile from the lower end of the bracket.
    pub lower_profile: Profile,
    pub right_profile: Profile,
    pub fit: AsymptoticFit,
    #[serde(skip)]
    pub taylor: Option<TaylorLocal>,
}

/// Bisection on the crossing predicate over the sonic window.
pub fn find_critical(gamma: PolytropicIndex, opts: &ShootOptions) -> Result<ShootResult> {
    let win = sonic_window(gamma);
    let tol = opts.tol_rel * win.width();
    if !(opts.tol_rel >= 1e-13) {
        return Err(Error::Parameter(format!(
            "tol_rel = {} is below 1e-13",
            opts.tol_rel
        )));
    }

    let n = opts.sweep.max(1);
    let mut sweep = Vec::with_capacity(n + 2);
    for k in 0..=n + 1 {
        let y = win.y_f + win.width() * k as f64 / (n + 1) as f64;
        let y = if k == n + 1 { win.y_big_f } else { y };
        sweep.push((y, classify(y, gamma, opts)?.class));
    }
    // The critical point is the lower end of the last run of crossing seeds
    // reaching up to y_F. Crossing seeds further down belong to other
    // components of the crossing set and are reported, not followed.
    let last = sweep.len() - 1;
    if sweep[0].1.crosses() || !sweep[last].1.crosses() {
        return Err(Error::ShootAmbiguity(format!(
            "sweep endpoints {:?} / {:?}",
            sweep[0], sweep[last]
        )));
    }
    let i = (1..=last)
        .rev()
        .find(|&i| !sweep[i - 1].1.crosses())
        .expect("endpoint classes differ");
    let (mut lo, mut hi) = (sweep[i - 1].0, sweep[i].0);
    let mut lo_cls = classify(lo, gamma, opts)?;
    let mut hi_cls = classify(hi, gamma, opts)?;

    let mut trend = Vec::new();
    if let Terminal::FriedmanCrossing { y_c } = hi_cls.left.terminal {
        trend.push((hi, y_c));
    }
    let mut iterations = 0;
    while hi - lo > tol {
        if iterations >= opts.max_iter {
            return Err(Error::ShootAmbiguity(format!(
                "no convergence after {iterations} bisections, bracket [{lo}, {hi}]"
            )));
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let c = classify(mid, gamma, opts)?;
        if c.class.crosses() {
            if let Terminal::FriedmanCrossing { y_c } = c.left.terminal {
                trend.push((mid, y_c));
            }
            hi = mid;
            hi_cls = c;
        } else {
            lo = mid;
            lo_cls = c;
        }
    }

    // Rerun both ends on a shared grid so the join search compares equal radii.
    let grid = join_grid(hi, opts.y_min_factor * hi);
    let ymin = |y: f64| opts.y_min_factor * y;
    lo_cls.left = extend_left_on(&lo_cls.taylor, ymin(lo), gamma, &opts.extend, &grid)?;
    hi_cls.left = extend_left_on(&hi_cls.taylor, ymin(hi), gamma, &opts.extend, &grid)?;

    let y_max = opts.y_max_factor * hi;
    let (right, fit) = extend_right(&hi_cls.taylor, y_max, gamma, &opts.extend)?;
    Ok(ShootResult {
        gamma,
        y_star_bar: 0.5 * (lo + hi),
        bracket: (lo, hi),
        iterations,
        crossing_runs: (0..sweep.len())
            .filter(|&i| sweep[i].1.crosses() && (i == 0 || !sweep[i - 1].1.crosses()))
            .count(),
        sweep,
        crossing_trend: trend,
        lo_class: lo_cls.class,
        left_profile: hi_cls.left,
        lower_profile: lo_cls.left,
        right_profile: right,
        fit,
        taylor: Some(hi_cls.taylor),
    })
}

/// Seams of an assembled profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Seams {
    pub left_handoff: f64,
    pub right_handoff: f64,
    /// Radius where the regular origin solution takes over.
    pub y_join: f64,
    /// Central density of the regular origin solution.
    pub rho_center: f64,
    /// Relative `omega` mismatch at `y_join` after matching `rho`.
    pub join_omega: f64,
}

/// Regular solution near the origin to second order in `y`.
pub fn origin_series(y: f64, rho_c: f64, gamma: PolytropicIndex) -> FlowState {
    let wf = gamma.omega_friedman();
    let c0 = FlowState::new(rho_c, wf);
    let hc = model::h(c0, gamma);
    let gc = model::sound_speed_sq(rho_c, gamma);
    let rho2 = rho_c * hc / (2.0 * gc);
    let w2 = -wf * hc / (5.0 * gc);
    FlowState::new(rho_c + rho2 * y * y, wf + w2 * y * y)
}

/// Merge the regular origin solution, the left profile, the series and the
/// right profile into one profile ordered by increasing `y`.
///
/// Below the radius where the two bracket-end left profiles separate, the
/// left solution is dominated by the mode that blows up at the origin. That
/// stretch is replaced by the one-parameter regular solution, integrated
/// outward from `y_min` with its central density tuned to match `rho` at the
/// join.
pub fn assemble_global(res: &ShootResult, opts: &ShootOptions) -> Result<(Profile, Seams)> {
    let gamma = res.gamma;
    let t = res.taylor.clone().map(Ok).unwrap_or_else(|| {
        build_taylor(&SonicSeed::new(res.bracket.1, gamma)?, opts.n_max, gamma)
    })?;
    let ys = t.seed.y_star;
    let y_min = opts.y_min_factor * ys;

    let left_handoff = handoff_check(&t, &res.left_profile)?;
    let right_handoff = handoff_check(&t, &res.right_profile)?;
    if left_handoff > opts.seam_tol || right_handoff > opts.seam_tol {
        return Err(Error::Handoff(left_handoff.max(right_handoff)));
    }

    let y_join = join_radius(&res.left_profile, &res.lower_profile, opts.join_tol, y_min);
    let upper = &res.left_profile;
    let target = interp_log(&upper.samples, y_join)
        .ok_or_else(|| Error::Domain(format!("join radius {y_join} outside the left profile")))?;

    let mut inner: Vec<Sample> = Vec::new();
    let mut rho_c = target.rho;
    let mut join_state = Sample::new(y_join, target, gamma);
    if y_join > y_min * (1.0 + 1e-12) {
        let shoot = |rc: f64| -> Result<(f64, Vec<Sample>)> {
            let s0 = origin_series(y_min, rc, gamma);
            let sm = integrate::integrate_between(y_min, s0, y_join, gamma, &opts.extend)?;
            Ok((sm.last().unwrap().rho / target.rho - 1.0, sm))
        };
        let (mut x0, mut x1) = (rho_c, rho_c * (1.0 + 1e-6));
        let (mut f0, _) = shoot(x0)?;
        let (mut f1, mut s1) = shoot(x1)?;
        for _ in 0..60 {
            if f1.abs() < 1e-15 || f1 == f0 {
                break;
            }
            let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
            let (f2, s2) = shoot(x2)?;
            (x0, f0, x1, f1, s1) = (x1, f1, x2, f2, s2);
        }
        rho_c = x1;
        join_state = s1.pop().unwrap();
        inner = s1;
    }
    let join_omega = (join_state.omega / target.omega - 1.0).abs();
    if join_omega > opts.seam_tol {
        return Err(Error::Handoff(join_omega));
    }

    let mut samples = inner;
    let mut left: Vec<Sample> = upper
        .samples
        .iter()
        .rev()
        .filter(|s| s.y >= y_join)
        .copied()
        .collect();
    if left.first().is_some_and(|s| s.y > y_join) {
        left.insert(0, Sample::new(y_join, target, gamma));
    }
    samples.extend(left);
    let nseries = 32;
    let d = HANDOFF_START * t.radius;
    for k in 1..nseries {
        let y = ys - d + 2.0 * d * k as f64 / nseries as f64;
        let (s, _) = t.eval(y)?;
        samples.push(Sample::new(y, s, gamma));
    }
    samples.extend(res.right_profile.samples.iter().copied());
    samples.dedup_by(|b, a| b.y <= a.y);

    let mut warnings = res.left_profile.warnings.clone();
    warnings.extend(res.right_profile.warnings.iter().cloned());
    Ok((
        Profile {
            samples,
            direction: Direction::Global,
            terminal: Terminal::ReachedYmax,
            warnings,
        },
        Seams {
            left_handoff,
            right_handoff,
            y_join,
            rho_center: rho_c,
            join_omega,
        },
    ))
}

/// Forty points per decade from `y_hi` down to `y_lo`.
fn join_grid(y_hi: f64, y_lo: f64) -> Vec<f64> {
    let n = (40.0 * (y_hi / y_lo).log10()).ceil() as usize;
    (1..=n)
        .map(|k| y_hi * (y_lo / y_hi).powf(k as f64 / n as f64))
        .collect()
}

/// Smallest radius above `floor`, taken from the points the two left profiles
/// share, down to which they agree in `omega` within `tol`.
fn join_radius(a: &Profile, b: &Profile, tol: f64, floor: f64) -> f64 {
    let mut join = a.first().y;
    let mut j = 0;
    for s in &a.samples {
        while j < b.samples.len() && b.samples[j].y > s.y {
            j += 1;
        }
        if j == b.samples.len() {
            break;
        }
        if b.samples[j].y != s.y {
            continue;
        }
        if (s.omega - b.samples[j].omega).abs() > tol * s.omega {
            break;
        }
        join = s.y;
    }
    join.max(floor)
}

/// Linear interpolation in `ln y` over monotone samples (either order).
fn interp_log(samples: &[Sample], y: f64) -> Option<FlowState> {
    let n = samples.len();
    if n == 0 {
        return None;
    }
    let inc = n < 2 || samples[1].y > samples[0].y;
    let key = |s: &Sample| if inc { s.y } else { -s.y };
    let yk = if inc { y } else { -y };
    let i = samples.partition_point(|s| key(s) < yk);
    if i < n && samples[i].y == y {
        return Some(samples[i].state());
    }
    if i == 0 || i == n {
        return None;
    }
    let (a, b) = (&samples[i - 1], &samples[i]);
    let f = (y.ln() - a.y.ln()) / (b.y.ln() - a.y.ln());
    let lr = a.rho.ln() + f * (b.rho.ln() - a.rho.ln());
    Some(FlowState::new(lr.exp(), a.omega + f * (b.omega - a.omega)))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvariantCheck {
    pub name: String,
    pub worst_value: f64,
    pub worst_y: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvariantReport {
    pub checks: Vec<InvariantCheck>,
}

impl InvariantReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&InvariantCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Names of the eight checks, in report order.
pub const INVARIANTS: [&str; 8] = [
    "rho > 0",
    "-2y/3 < u < 0",
    "rho' < 0",
    "omega' > 0",
    "omega(y_min) ~ (4-3g)/3",
    "omega(y_max) ~ 2-g",
    "rho(y_min) > 1/(6 pi)",
    "single sonic point",
];

pub fn verify_invariants(
    p: &Profile,
    gamma: PolytropicIndex,
    opts: &ShootOptions,
) -> InvariantReport {
    let s = &p.samples;
    let mut checks = Vec::with_capacity(8);
    let mut push = |name: &str, worst: (f64, f64), pass: bool| {
        checks.push(InvariantCheck {
            name: name.into(),
            worst_value: worst.0,
            worst_y: worst.1,
            pass,
        });
    };
    let argmin = |it: &mut dyn Iterator<Item = (f64, f64)>| {
        it.fold(
            (f64::INFINITY, f64::NAN),
            |a, b| if b.0 < a.0 { b } else { a },
        )
    };
    let eps = opts.monotone_slack;

    let w = argmin(&mut s.iter().map(|x| (x.rho, x.y)));
    push(INVARIANTS[0], w, w.0 > 0.0);

    // -2y/3 < u < 0 is wF < omega < 2-g.
    let (wf, wff) = (gamma.omega_friedman(), gamma.omega_far());
    let w = argmin(
        &mut s
            .iter()
            .skip(1)
            .map(|x| ((x.omega - wf).min(wff - x.omega), x.y)),
    );
    push(INVARIANTS[1], w, w.0 > 0.0);

    let w = argmin(
        &mut s
            .windows(2)
            .map(|p| (-(p[1].rho - p[0].rho) / p[0].rho, p[1].y)),
    );
    push(INVARIANTS[2], w, w.0 > -eps);
    let w = argmin(
        &mut s
            .windows(2)
            .map(|p| ((p[1].omega - p[0].omega) / p[0].omega, p[1].y)),
    );
    push(INVARIANTS[3], w, w.0 > -eps);

    let (first, last) = (&s[0], &s[s.len() - 1]);
    let d = (first.omega - wf).abs();
    push(INVARIANTS[4], (d, first.y), d <= opts.origin_tol);
    let d = (last.omega - wff).abs();
    let bound = opts.far_rate * last.y.powf(-1.0 / gamma.two_m());
    push(INVARIANTS[5], (d, last.y), last.omega < wff && d <= bound);
    let d = first.rho - 1.0 / (6.0 * std::f64::consts::PI);
    push(
        INVARIANTS[6],
        (d, first.y),
        first.rho.is_finite() && d > 0.0,
    );

    let mut changes = 0;
    let mut prev = 0.0_f64;
    let mut at = f64::NAN;
    for x in s {
        let c2 = model::sound_speed_sq(x.rho, gamma);
        if x.g.abs() <= 1e-12 * c2 {
            continue;
        }
        if prev != 0.0 && prev.signum() != x.g.signum() {
            changes += 1;
            at = x.y;
        }
        prev = x.g;
    }
    push(
        INVARIANTS[7],
        (changes as f64, at),
        changes == 1 && s[0].g > 0.0,
    );
    InvariantReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gm(g: f64) -> PolytropicIndex {
        PolytropicIndex::new(g).unwrap()
    }

    #[test]
    fn origin_series_solves_the_system_to_fourth_order() {
        let gamma = gm(1.2);
        let rc = 0.1;
        for y in [1e-3, 2e-3] {
            let s = origin_series(y, rc, gamma);
            let e = 1e-7;
            let (a, b) = (
                origin_series(y - e, rc, gamma),
                origin_series(y + e, rc, gamma),
            );
            let (dr, dw) = integrate::rhs(y, s, gamma, 0.0).unwrap();
            assert!(((b.rho - a.rho) / (2.0 * e) - dr).abs() < 1e-5 * y);
            assert!(((b.omega - a.omega) / (2.0 * e) - dw).abs() < 1e-5 * y);
        }
    }

    #[test]
    fn endpoints_classify_apart() {
        let gamma = gm(1.2);
        let w = sonic_window(gamma);
        let o = ShootOptions::default();
        assert!(!classify(w.y_f, gamma, &o).unwrap().class.crosses());
        assert!(classify(w.y_big_f, gamma, &o).unwrap().class.crosses());
        let near = w.y_big_f - 1e-9 * w.width();
        assert!(classify(near, gamma, &o).unwrap().class.crosses());
    }
}
