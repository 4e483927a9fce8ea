//! Dormand-Prince 5(4) with FSAL and the standard quartic dense output.

pub const DIM: usize = 2;
pub type State = [f64; DIM];

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Right-hand side; `None` marks a point where the field cannot be trusted.
pub trait Field {
    fn eval(&self, t: f64, u: &State) -> Option<State>;
}

impl<F: Fn(f64, &State) -> Option<State>> Field for F {
    fn eval(&self, t: f64, u: &State) -> Option<State> {
        self(t, u)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on |h|; keeps the sample spacing useful on smooth stretches.
    pub h_max: f64,
}

/// An accepted step with enough data to interpolate inside it.
#[derive(Debug, Clone, Copy)]
pub struct Step {
    pub t0: f64,
    pub t1: f64,
    pub u0: State,
    pub u1: State,
    pub f1: State,
    rc: [State; 5],
}

impl Step {
    /// State at `t` between `t0` and `t1`.
    pub fn interpolate(&self, t: f64) -> State {
        let h = self.t1 - self.t0;
        let th = if h == 0.0 { 1.0 } else { (t - self.t0) / h };
        let th1 = 1.0 - th;
        let mut out = [0.0; DIM];
        for (i, o) in out.iter_mut().enumerate() {
            let r = &self.rc;
            *o = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
        }
        out
    }
}

pub enum Attempt {
    Accepted(Step, f64),
    Rejected(f64),
    /// A stage landed where the field is undefined.
    Undefined,
}

/// One trial step of size `h` from `(t, u)` with `f0 = f(t, u)`.
pub fn attempt<F: Field>(f: &F, t: f64, u: &State, f0: &State, h: f64, tol: Tolerances) -> Attempt {
    let stage = |coef: &[(f64, &State)]| {
        let mut v = *u;
        for (c, k) in coef {
            for i in 0..DIM {
                v[i] += h * c * k[i];
            }
        }
        v
    };
    let k1 = *f0;
    let Some(k2) = f.eval(t + C2 * h, &stage(&[(A21, &k1)])) else {
        return Attempt::Undefined;
    };
    let Some(k3) = f.eval(t + C3 * h, &stage(&[(A31, &k1), (A32, &k2)])) else {
        return Attempt::Undefined;
    };
    let Some(k4) = f.eval(t + C4 * h, &stage(&[(A41, &k1), (A42, &k2), (A43, &k3)])) else {
        return Attempt::Undefined;
    };
    let Some(k5) = f.eval(
        t + C5 * h,
        &stage(&[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    ) else {
        return Attempt::Undefined;
    };
    let Some(k6) = f.eval(
        t + h,
        &stage(&[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    ) else {
        return Attempt::Undefined;
    };
    let u1 = stage(&[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    let t1 = t + h;
    let Some(k7) = f.eval(t1, &u1) else {
        return Attempt::Undefined;
    };

    let mut err = 0.0;
    for i in 0..DIM {
        let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        let sc = tol.atol + tol.rtol * u[i].abs().max(u1[i].abs());
        err += (e / sc) * (e / sc);
    }
    let err = (err / DIM as f64).sqrt();
    if !err.is_finite() {
        return Attempt::Rejected(0.2);
    }
    let fac = if err == 0.0 {
        10.0
    } else {
        (0.9 * err.powf(-0.2)).clamp(0.2, 10.0)
    };
    if err > 1.0 {
        return Attempt::Rejected(fac.min(1.0));
    }
    let mut rc = [[0.0; DIM]; 5];
    for i in 0..DIM {
        let dy = u1[i] - u[i];
        let bspl = h * k1[i] - dy;
        rc[0][i] = u[i];
        rc[1][i] = dy;
        rc[2][i] = bspl;
        rc[3][i] = dy - h * k7[i] - bspl;
        rc[4][i] =
            h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
    }
    Attempt::Accepted(
        Step {
            t0: t,
            t1,
            u0: *u,
            u1,
            f1: k7,
            rc,
        },
        fac,
    )
}

/// Outcome of [`drive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Finish {
    /// Reached `t_end`.
    End,
    /// The observer asked to stop.
    Stopped,
    /// The step size collapsed, usually because the field became undefined ahead.
    Collapsed,
    /// Step budget exhausted.
    Budget,
}

pub enum Control {
    Continue,
    Stop,
}

/// Integrate from `t0` to `t_end` (either direction), handing every accepted
/// step to `observe`.
#[allow(clippy::too_many_arguments)]
pub fn drive<F, O>(
    f: &F,
    t0: f64,
    u0: State,
    t_end: f64,
    h0: f64,
    tol: Tolerances,
    max_steps: usize,
    mut observe: O,
) -> (Finish, f64, State)
where
    F: Field,
    O: FnMut(&Step) -> Control,
{
    let dir = (t_end - t0).signum();
    let mut t = t0;
    let mut u = u0;
    let Some(mut f0) = f.eval(t, &u) else {
        return (Finish::Collapsed, t, u);
    };
    let mut h = h0.abs().min(tol.h_max).min((t_end - t0).abs()) * dir;
    let h_floor = |t: f64| 1e-13 * t.abs().max(1.0);
    for _ in 0..max_steps {
        if (t_end - t) * dir <= 0.0 {
            return (Finish::End, t, u);
        }
        let last = (t + h - t_end) * dir >= 0.0;
        let hh = if last { t_end - t } else { h };
        match attempt(f, t, &u, &f0, hh, tol) {
            Attempt::Accepted(step, fac) => {
                let step = if last {
                    Step { t1: t_end, ..step }
                } else {
                    step
                };
                t = step.t1;
                u = step.u1;
                f0 = step.f1;
                if let Control::Stop = observe(&step) {
                    return (Finish::Stopped, t, u);
                }
                if last {
                    return (Finish::End, t, u);
                }
                h = (hh * fac).clamp(-tol.h_max, tol.h_max);
            }
            Attempt::Rejected(fac) => {
                h = hh * fac;
            }
            Attempt::Undefined => {
                h = hh * 0.25;
            }
        }
        if h.abs() < h_floor(t) {
            return (Finish::Collapsed, t, u);
        }
    }
    (Finish::Budget, t, u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay(_t: f64, u: &State) -> Option<State> {
        Some([-u[0], u[0] - 2.0 * u[1]])
    }

    fn exact(t: f64) -> State {
        // u0 = e^-t, u1 = e^-t - e^-2t for u(0) = (1, 0)
        [(-t).exp(), (-t).exp() - (-2.0 * t).exp()]
    }

    #[test]
    fn linear_system_to_tight_tolerance() {
        let tol = Tolerances {
            rtol: 1e-12,
            atol: 1e-14,
            h_max: f64::INFINITY,
        };
        let (fin, t, u) = drive(&decay, 0.0, [1.0, 0.0], 3.0, 1e-3, tol, 100_000, |_| {
            Control::Continue
        });
        assert_eq!(fin, Finish::End);
        assert_eq!(t, 3.0);
        let e = exact(3.0);
        assert!((u[0] - e[0]).abs() < 1e-11 && (u[1] - e[1]).abs() < 1e-11);
    }

    #[test]
    fn backwards_integration() {
        let tol = Tolerances {
            rtol: 1e-12,
            atol: 1e-14,
            h_max: f64::INFINITY,
        };
        let start = exact(2.0);
        let (_, _, u) = drive(&decay, 2.0, start, 0.5, 1e-3, tol, 100_000, |_| {
            Control::Continue
        });
        let e = exact(0.5);
        assert!((u[0] - e[0]).abs() < 1e-10 && (u[1] - e[1]).abs() < 1e-10);
    }

    #[test]
    fn dense_output_is_accurate_inside_steps() {
        let tol = Tolerances {
            rtol: 1e-10,
            atol: 1e-12,
            h_max: f64::INFINITY,
        };
        let mut worst: f64 = 0.0;
        drive(&decay, 0.0, [1.0, 0.0], 2.0, 1e-2, tol, 100_000, |s| {
            for k in 1..10 {
                let t = s.t0 + (s.t1 - s.t0) * k as f64 / 10.0;
                let v = s.interpolate(t);
                let e = exact(t);
                worst = worst.max((v[0] - e[0]).abs()).max((v[1] - e[1]).abs());
            }
            Control::Continue
        });
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn undefined_region_collapses_the_step() {
        let wall = |t: f64, u: &State| if t > 1.0 { None } else { Some([u[0], 0.0]) };
        let tol = Tolerances {
            rtol: 1e-10,
            atol: 1e-12,
            h_max: f64::INFINITY,
        };
        let (fin, t, _) = drive(&wall, 0.0, [1.0, 0.0], 2.0, 0.1, tol, 100_000, |_| {
            Control::Continue
        });
        assert_eq!(fin, Finish::Collapsed);
        assert!(t <= 1.0 && t > 1.0 - 1e-9, "{t}");
    }
}
