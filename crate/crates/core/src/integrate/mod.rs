//! Continuation of a sonic-point series to the left and to the right.
//!
//! The integrator works in `t = ln y` on the state `(ln rho, omega)`:
//!
//! ```text
//! d ln rho / dt = y^2 h / G
//! d omega  / dt = 4 - 3 gamma - 3 omega - y^2 omega h / G
//! ```
//!
//! which keeps both power-law ends (origin and infinity) well scaled.

pub mod rk;

use serde::{Deserialize, Serialize};

use crate::model::{self, FlowState, PolytropicIndex};
use crate::sonic::TaylorLocal;
use crate::{Error, Result};
use rk::{Control, Finish, State, Step, Tolerances};

/// `(rho', omega')` at `y`, or `None` inside the sonic guard
/// `|G| < guard * gamma rho^(gamma-1)`.
pub fn rhs(y: f64, s: FlowState, gamma: PolytropicIndex, guard: f64) -> Option<(f64, f64)> {
    let c2 = model::sound_speed_sq(s.rho, gamma);
    let gg = model::g(y, s, gamma);
    if !(gg.abs() >= guard * c2) {
        return None;
    }
    let hh = model::h(s, gamma);
    let q = y * hh / gg;
    Some((
        s.rho * q,
        (gamma.four_m() - 3.0 * s.omega) / y - s.omega * q,
    ))
}

fn log_field(gamma: PolytropicIndex, guard: f64) -> impl Fn(f64, &State) -> Option<State> {
    move |t: f64, u: &State| {
        let y = t.exp();
        let rho = u[0].exp();
        let s = FlowState::new(rho, u[1]);
        let c2 = model::sound_speed_sq(rho, gamma);
        let gg = model::g(y, s, gamma);
        if !(gg.abs() >= guard * c2) || !rho.is_finite() {
            return None;
        }
        let q = y * y * model::h(s, gamma) / gg;
        Some([q, gamma.four_m() - 3.0 * u[1] - u[1] * q])
    }
}

/// One point of a solution curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub y: f64,
    pub rho: f64,
    pub omega: f64,
    pub u: f64,
    #[serde(rename = "G")]
    pub g: f64,
    pub h: f64,
}

impl Sample {
    pub fn new(y: f64, s: FlowState, gamma: PolytropicIndex) -> Self {
        Self {
            y,
            rho: s.rho,
            omega: s.omega,
            u: model::velocity(y, s.omega, gamma),
            g: model::g(y, s, gamma),
            h: model::h(s, gamma),
        }
    }

    pub fn state(&self) -> FlowState {
        FlowState::new(self.rho, self.omega)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Left,
    Right,
    /// A merged profile ordered by increasing `y`.
    Global,
}

/// Why an extension stopped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Terminal {
    ReachedYmax,
    FriedmanCrossing { y_c: f64 },
    SonicApproach { s: f64, g_min: f64 },
    OriginReached { y_min: f64 },
    StepFailure,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Profile {
    pub samples: Vec<Sample>,
    pub direction: Direction,
    pub terminal: Terminal,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl Profile {
    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("profile has samples")
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Limits of `y^(1/(2-gamma)) (2-gamma-omega)` and `y^(2/(2-gamma)) rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticFit {
    pub k1_bar: f64,
    pub k2_bar: f64,
    pub fit_window: (f64, f64),
    /// Largest relative RMS deviation of the two fitted constants.
    pub residual: f64,
    /// Least-squares slope of `ln m` against `ln y` on the same window.
    pub mass_slope: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtendOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Relative sonic guard on `|G| / (gamma rho^(gamma-1))`.
    pub sonic_guard: f64,
    pub max_steps: usize,
    /// Monitor violations are errors when set, warnings otherwise.
    pub strict_monitors: bool,
    /// Dead-band for the strict monitor inequalities, relative to the size
    /// of the compared terms.
    pub monitor_slack: f64,
    /// Largest step in `ln y`.
    pub max_log_step: f64,
}

impl Default for ExtendOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-14,
            sonic_guard: 1e-10,
            max_steps: 500_000,
            strict_monitors: true,
            monitor_slack: 1e-9,
            max_log_step: 0.05,
        }
    }
}

impl ExtendOptions {
    fn tol(&self) -> Tolerances {
        Tolerances {
            rtol: self.rtol,
            atol: self.atol,
            h_max: self.max_log_step,
        }
    }

    /// Same options with both tolerances scaled by `f`.
    pub fn tightened(&self, f: f64) -> Self {
        Self {
            rtol: self.rtol * f,
            atol: self.atol * f,
            ..*self
        }
    }
}

/// Fraction of the series radius where the integrator takes over.
pub const HANDOFF_START: f64 = 0.25;
/// Outer end of the overlap used by [`handoff_check`].
pub const HANDOFF_END: f64 = 0.5;

struct Recorder<'a> {
    gamma: PolytropicIndex,
    samples: Vec<Sample>,
    extra: &'a [f64],
    next_extra: usize,
    dir: f64,
}

impl Recorder<'_> {
    fn push_state(&mut self, t: f64, u: &State) -> Sample {
        let s = Sample::new(t.exp(), FlowState::new(u[0].exp(), u[1]), self.gamma);
        self.samples.push(s);
        s
    }

    fn record_step(&mut self, step: &Step) -> Sample {
        while self.next_extra < self.extra.len() {
            let te = self.extra[self.next_extra];
            if (te - step.t1) * self.dir >= 0.0 {
                break;
            }
            if (te - step.t0) * self.dir > 0.0 {
                let u = step.interpolate(te);
                self.push_state(te, &u);
            }
            self.next_extra += 1;
        }
        self.push_state(step.t1, &step.u1)
    }
}

fn overlap_grid(t: &TaylorLocal, side: f64) -> Vec<f64> {
    let ys = t.seed.y_star;
    (1..8)
        .map(|k| {
            let f = HANDOFF_START + (HANDOFF_END - HANDOFF_START) * k as f64 / 8.0;
            (ys + side * f * t.radius).ln()
        })
        .collect()
}

struct Monitor {
    strict: bool,
    warnings: Vec<String>,
    first: Option<Error>,
}

impl Monitor {
    fn check(&mut self, name: &'static str, y: f64, value: f64, slack: f64) -> Result<()> {
        if value > -slack {
            return Ok(());
        }
        if self.strict {
            return Err(Error::Monitor { name, y, value });
        }
        if self.first.is_none() {
            self.first = Some(Error::Monitor { name, y, value });
        }
        if self.warnings.len() < 32 {
            self.warnings
                .push(format!("monitor `{name}` violated at y={y:e}: {value:e}"));
        }
        Ok(())
    }
}

/// Integrate from `y* + nu/4` up to `y_max`, checking the supersonic
/// monotone structure at every accepted step, and fit the far-field constants
/// over the last decade.
pub fn extend_right(
    t: &TaylorLocal,
    y_max: f64,
    gamma: PolytropicIndex,
    opts: &ExtendOptions,
) -> Result<(Profile, AsymptoticFit)> {
    let ys = t.seed.y_star;
    if !(y_max >= 100.0 * ys) {
        return Err(Error::Parameter(format!(
            "y_max = {y_max} must be at least 100 y*"
        )));
    }
    let y0 = ys + HANDOFF_START * t.radius;
    let (s0, _) = t.eval(y0)?;
    let field = log_field(gamma, opts.sonic_guard);
    let extra = overlap_grid(t, 1.0);
    let mut rec = Recorder {
        gamma,
        samples: Vec::new(),
        extra: &extra,
        next_extra: 0,
        dir: 1.0,
    };
    let u0 = [s0.rho.ln(), s0.omega];
    rec.push_state(y0.ln(), &u0);
    let mut mon = Monitor {
        strict: opts.strict_monitors,
        warnings: Vec::new(),
        first: None,
    };
    let mut failure: Option<Error> = None;
    let (wf, wff) = (gamma.omega_friedman(), gamma.omega_far());
    let slope_lo = -4.0 / (gamma.four_m() * gamma.two_m());
    let slope_hi = -1.0 / gamma.two_m();
    let eps = opts.monitor_slack;
    let check = |smp: &Sample, mon: &mut Monitor| -> Result<()> {
        let (y, s) = (smp.y, smp.state());
        let c2 = model::sound_speed_sq(s.rho, gamma);
        let Some((dr, dw)) = rhs(y, s, gamma, 0.0) else {
            return mon.check("G < 0", y, smp.g, 0.0);
        };
        mon.check("omega > (4-3g)/3", y, s.omega - wf, eps)?;
        mon.check("omega < 2-g", y, wff - s.omega, eps)?;
        let mterm = 4.0 * std::f64::consts::PI * y * y * s.rho * s.omega / gamma.four_m();
        let pterm = 2.0 / gamma.two_m() * c2;
        mon.check(
            "4 pi y^2 rho omega/(4-3g) > 2 gamma rho^(g-1)/(2-g)",
            y,
            mterm - pterm,
            eps * pterm,
        )?;
        let sl = dr * y / s.rho;
        mon.check(
            "rho' y / rho > -4/((4-3g)(2-g))",
            y,
            sl - slope_lo,
            eps * slope_lo.abs(),
        )?;
        mon.check(
            "rho' y / rho < -1/(2-g)",
            y,
            slope_hi - sl,
            eps * slope_hi.abs(),
        )?;
        mon.check("G < 0", y, -smp.g, eps * c2)?;
        let lin = (gamma.four_m() - 3.0 * s.omega).abs() / y;
        mon.check("omega' > 0", y, dw, eps * lin)?;
        mon.check("rho' < 0", y, -dr, 0.0)?;
        Ok(())
    };
    check(&rec.samples[0], &mut mon)?;
    let (finish, tend, _) = rk::drive(
        &field,
        y0.ln(),
        u0,
        y_max.ln(),
        1e-3,
        opts.tol(),
        opts.max_steps,
        |step| {
            let n0 = rec.samples.len();
            rec.record_step(step);
            for k in n0..rec.samples.len() {
                if let Err(e) = check(&rec.samples[k], &mut mon) {
                    failure = Some(e);
                    return Control::Stop;
                }
            }
            Control::Continue
        },
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if finish != Finish::End {
        return Err(Error::StepFailure {
            y: tend.exp(),
            reason: format!("right extension ended with {finish:?}"),
        });
    }
    let profile = Profile {
        samples: rec.samples,
        direction: Direction::Right,
        terminal: Terminal::ReachedYmax,
        warnings: mon.warnings,
    };
    let fit = asymptotic_fit(&profile, gamma)?;
    Ok((profile, fit))
}

/// Least-squares constants over the last decade of a right profile.
pub fn asymptotic_fit(p: &Profile, gamma: PolytropicIndex) -> Result<AsymptoticFit> {
    let y_hi = p.last().y;
    let y_lo = y_hi / 10.0;
    let win: Vec<&Sample> = p.samples.iter().filter(|s| s.y >= y_lo).collect();
    if win.len() < 3 {
        return Err(Error::Parameter("too few samples in the fit window".into()));
    }
    let b = gamma.two_m();
    let k1: Vec<f64> = win
        .iter()
        .map(|s| s.y.powf(1.0 / b) * (b - s.omega))
        .collect();
    let k2: Vec<f64> = win.iter().map(|s| s.y.powf(2.0 / b) * s.rho).collect();
    let fit_const = |v: &[f64]| {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64;
        (m, var.sqrt() / m.abs())
    };
    let (k1_bar, r1) = fit_const(&k1);
    let (k2_bar, r2) = fit_const(&k2);
    let xs: Vec<f64> = win.iter().map(|s| s.y.ln()).collect();
    let ys: Vec<f64> = win
        .iter()
        .map(|s| model::local_mass(s.y, s.state(), gamma).ln())
        .collect();
    let mass_slope = linear_slope(&xs, &ys);
    Ok(AsymptoticFit {
        k1_bar,
        k2_bar,
        fit_window: (y_lo, y_hi),
        residual: r1.max(r2),
        mass_slope,
    })
}

pub(crate) fn linear_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Integrate leftward from `y* - nu/4` until the first of: `omega` reaches the
/// Friedman value, the flow approaches a second sonic point, or `y` reaches
/// `y_min_floor`.
pub fn extend_left(
    t: &TaylorLocal,
    y_min_floor: f64,
    gamma: PolytropicIndex,
    opts: &ExtendOptions,
) -> Result<Profile> {
    extend_left_on(t, y_min_floor, gamma, opts, &[])
}

/// [`extend_left`] with extra dense-output samples at the radii in `grid`.
/// Profiles computed with the same grid can be compared point by point.
pub fn extend_left_on(
    t: &TaylorLocal,
    y_min_floor: f64,
    gamma: PolytropicIndex,
    opts: &ExtendOptions,
    grid: &[f64],
) -> Result<Profile> {
    let ys = t.seed.y_star;
    let wf = gamma.omega_friedman();
    let y0 = ys - HANDOFF_START * t.radius;
    if !(y_min_floor > 0.0 && y_min_floor < y0) {
        return Err(Error::Parameter(format!(
            "y_min_floor = {y_min_floor} must lie in (0, {y0})"
        )));
    }

    // The crossing can already happen inside the series disc when y* is
    // close to y_F.
    if let Some(y_c) = series_crossing(t, y0, wf)? {
        let mut samples = Vec::new();
        let n = 16;
        for k in 0..=n {
            let y = ys - (ys - y_c) * k as f64 / n as f64;
            let (s, _) = t.eval(y)?;
            samples.push(Sample::new(y, s, gamma));
        }
        let last = samples.len() - 1;
        samples[last].omega = wf;
        samples[last] = Sample::new(y_c, samples[last].state(), gamma);
        return Ok(Profile {
            samples,
            direction: Direction::Left,
            terminal: Terminal::FriedmanCrossing { y_c },
            warnings: Vec::new(),
        });
    }

    let (s0, _) = t.eval(y0)?;
    let field = log_field(gamma, opts.sonic_guard);
    let mut extra = overlap_grid(t, -1.0);
    extra.extend(grid.iter().filter(|&&y| y > 0.0 && y < y0).map(|y| y.ln()));
    extra.sort_by(|a, b| b.total_cmp(a));
    let mut rec = Recorder {
        gamma,
        samples: Vec::new(),
        extra: &extra,
        next_extra: 0,
        dir: -1.0,
    };
    let u0 = [s0.rho.ln(), s0.omega];
    rec.push_state(y0.ln(), &u0);
    // h < 0 and rho' < 0 are only guaranteed when omega eventually reaches the
    // Friedman value, so violations are collected and judged at the end.
    let mut mon = Monitor {
        strict: false,
        warnings: Vec::new(),
        first: None,
    };
    let mut failure: Option<Error> = None;
    let mut crossing: Option<f64> = None;
    let mut g_min = f64::INFINITY;
    let eps = opts.monitor_slack;
    let (finish, tend, _) = rk::drive(
        &field,
        y0.ln(),
        u0,
        y_min_floor.ln(),
        1e-3,
        opts.tol(),
        opts.max_steps,
        |step| {
            if step.u1[1] <= wf {
                // Polish the crossing with the dense output.
                let (mut a, mut b) = (step.t0, step.t1);
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    if m == a || m == b {
                        break;
                    }
                    if step.interpolate(m)[1] > wf {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                let tc = 0.5 * (a + b);
                while rec.next_extra < rec.extra.len() && rec.extra[rec.next_extra] > tc {
                    let te = rec.extra[rec.next_extra];
                    if te < step.t0 {
                        let u = step.interpolate(te);
                        rec.push_state(te, &u);
                    }
                    rec.next_extra += 1;
                }
                let mut u = step.interpolate(tc);
                u[1] = wf;
                rec.push_state(tc, &u);
                crossing = Some(tc.exp());
                return Control::Stop;
            }
            let n0 = rec.samples.len();
            rec.record_step(step);
            for k in n0..rec.samples.len() {
                let smp = rec.samples[k];
                let c2 = model::sound_speed_sq(smp.rho, gamma);
                g_min = g_min.min(smp.g / c2);
                let res = (|| -> Result<()> {
                    mon.check("G > 0", smp.y, smp.g, 0.0)?;
                    if smp.omega > wf {
                        let scale = gamma.c_pi() * smp.rho * smp.omega;
                        mon.check("h < 0", smp.y, -smp.h, eps * scale)?;
                        if let Some((dr, _)) = rhs(smp.y, smp.state(), gamma, 0.0) {
                            mon.check("rho' < 0", smp.y, -dr, eps * smp.rho / smp.y)?;
                        }
                    }
                    Ok(())
                })();
                if let Err(e) = res {
                    failure = Some(e);
                    return Control::Stop;
                }
            }
            Control::Continue
        },
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let terminal = match (crossing, finish) {
        (Some(y_c), _) => Terminal::FriedmanCrossing { y_c },
        (None, Finish::End) => Terminal::OriginReached { y_min: y_min_floor },
        (None, Finish::Collapsed) => Terminal::SonicApproach {
            s: tend.exp(),
            g_min,
        },
        (None, Finish::Stopped) => Terminal::StepFailure,
        (None, Finish::Budget) => {
            return Err(Error::StepFailure {
                y: tend.exp(),
                reason: "step budget exhausted on the left".into(),
            })
        }
    };
    let warnings = match (terminal, mon.first) {
        (Terminal::FriedmanCrossing { .. }, Some(e)) if opts.strict_monitors => return Err(e),
        (Terminal::FriedmanCrossing { .. }, _) => mon.warnings,
        _ => Vec::new(),
    };
    Ok(Profile {
        samples: rec.samples,
        direction: Direction::Left,
        terminal,
        warnings,
    })
}

fn series_crossing(t: &TaylorLocal, y0: f64, wf: f64) -> Result<Option<f64>> {
    let ys = t.seed.y_star;
    let n = 64;
    let mut prev = ys;
    for k in 1..=n {
        let y = ys - (ys - y0) * k as f64 / n as f64;
        let (s, _) = t.eval(y)?;
        if s.omega <= wf {
            let (mut a, mut b) = (prev, y);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m == a || m == b {
                    break;
                }
                if t.eval(m)?.0.omega > wf {
                    a = m;
                } else {
                    b = m;
                }
            }
            return Ok(Some(0.5 * (a + b)));
        }
        prev = y;
    }
    Ok(None)
}

/// Largest relative discrepancy between series and integrator over the
/// overlap `nu/4 <= |y - y*| <= nu/2`.
pub fn handoff_check(t: &TaylorLocal, p: &Profile) -> Result<f64> {
    let ys = t.seed.y_star;
    let lo = HANDOFF_START * t.radius * (1.0 - 1e-12);
    let hi = HANDOFF_END * t.radius * (1.0 + 1e-12);
    let mut worst: f64 = 0.0;
    let mut seen = 0;
    for smp in &p.samples {
        let d = (smp.y - ys).abs();
        if d < lo || d > hi {
            continue;
        }
        let (s, _) = t.eval(smp.y)?;
        worst = worst
            .max((smp.rho / s.rho - 1.0).abs())
            .max((smp.omega / s.omega - 1.0).abs());
        seen += 1;
    }
    if seen == 0 {
        return Err(Error::Domain(
            "profile does not overlap the series disc".into(),
        ));
    }
    Ok(worst)
}

/// Integrate the ODE between two radii from a given state, returning the
/// samples. Used for the regular solution near the origin.
pub(crate) fn integrate_between(
    y0: f64,
    s0: FlowState,
    y1: f64,
    gamma: PolytropicIndex,
    opts: &ExtendOptions,
) -> Result<Vec<Sample>> {
    let field = log_field(gamma, opts.sonic_guard);
    let mut rec = Recorder {
        gamma,
        samples: Vec::new(),
        extra: &[],
        next_extra: 0,
        dir: (y1 - y0).signum(),
    };
    let u0 = [s0.rho.ln(), s0.omega];
    rec.push_state(y0.ln(), &u0);
    let (finish, tend, _) = rk::drive(
        &field,
        y0.ln(),
        u0,
        y1.ln(),
        1e-3,
        opts.tol(),
        opts.max_steps,
        |step| {
            rec.record_step(step);
            Control::Continue
        },
    );
    if finish != Finish::End {
        return Err(Error::StepFailure {
            y: tend.exp(),
            reason: format!("{finish:?}"),
        });
    }
    Ok(rec.samples)
}
