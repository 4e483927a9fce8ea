//! Physical-space fields from a self-similar profile.
//!
//! With `y = r / (sqrt(kappa) (-t)^(2-gamma))`,
//!
//! ```text
//! rho(t, r) = (-t)^-2 rho(y)
//! u(t, r)   = sqrt(kappa) (-t)^(1-gamma) u(y)
//! m(t, r)   = 4 pi kappa^(3/2) (-t)^(4-3 gamma) y^3 rho omega / (4 - 3 gamma)
//! ```
//!
//! Between samples the profile is interpolated in `ln y` by monotone cubic
//! Hermite splines, `ln rho` and `omega` separately.

use serde::{Deserialize, Serialize};

use crate::integrate::Sample;
use crate::model::{self, FlowState, PolytropicIndex};
use crate::{Error, Result};

/// Monotone piecewise cubic Hermite interpolant (Fritsch-Carlson slopes).
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl MonotoneCubic {
    /// `x` must be strictly increasing with at least two points.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n {
            return Err(Error::Parameter(
                "interpolation needs two or more matched points".into(),
            ));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Parameter(
                "interpolation abscissae must increase".into(),
            ));
        }
        let d: Vec<f64> = (0..n - 1)
            .map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i]))
            .collect();
        let mut m = vec![0.0; n];
        m[0] = d[0];
        m[n - 1] = d[n - 2];
        for i in 1..n - 1 {
            m[i] = if d[i - 1] * d[i] <= 0.0 {
                0.0
            } else {
                0.5 * (d[i - 1] + d[i])
            };
        }
        for i in 0..n - 1 {
            if d[i] == 0.0 {
                m[i] = 0.0;
                m[i + 1] = 0.0;
                continue;
            }
            let (a, b) = (m[i] / d[i], m[i + 1] / d[i]);
            let r = a.hypot(b);
            if r > 3.0 {
                let t = 3.0 / r;
                m[i] = t * a * d[i];
                m[i + 1] = t * b * d[i];
            }
        }
        Ok(Self { x, y, m })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    /// Value at `t`, or `None` outside the data range.
    pub fn eval(&self, t: f64) -> Option<f64> {
        let (lo, hi) = self.range();
        if !(t >= lo && t <= hi) {
            return None;
        }
        let i = match self.x.partition_point(|&v| v <= t) {
            0 => 0,
            k => (k - 1).min(self.x.len() - 2),
        };
        let hh = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / hh;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        Some(
            h00 * self.y[i] + h10 * hh * self.m[i] + h01 * self.y[i + 1] + h11 * hh * self.m[i + 1],
        )
    }
}

/// A profile as a function of `y`.
#[derive(Debug, Clone)]
pub struct ProfileInterp {
    ln_rho: MonotoneCubic,
    omega: MonotoneCubic,
    first: Sample,
    last: Sample,
    gamma: PolytropicIndex,
}

impl ProfileInterp {
    /// `samples` must be sorted by increasing `y` with positive density.
    pub fn new(samples: &[Sample], gamma: PolytropicIndex) -> Result<Self> {
        if samples.iter().any(|s| !(s.y > 0.0 && s.rho > 0.0)) {
            return Err(Error::Domain("profile needs y > 0 and rho > 0".into()));
        }
        let x: Vec<f64> = samples.iter().map(|s| s.y.ln()).collect();
        let ln_rho = MonotoneCubic::new(x.clone(), samples.iter().map(|s| s.rho.ln()).collect())?;
        let omega = MonotoneCubic::new(x, samples.iter().map(|s| s.omega).collect())?;
        Ok(Self {
            ln_rho,
            omega,
            first: samples[0],
            last: samples[samples.len() - 1],
            gamma,
        })
    }

    pub fn y_range(&self) -> (f64, f64) {
        (self.first.y, self.last.y)
    }

    /// State at `y` and whether it was extrapolated. Below the first sample
    /// the first state is held; above the last, `omega` is held and `rho`
    /// follows the far-field law `y^(-2/(2-gamma))`.
    pub fn state(&self, y: f64) -> (FlowState, bool) {
        let t = y.ln();
        match (self.ln_rho.eval(t), self.omega.eval(t)) {
            (Some(r), Some(w)) => (FlowState::new(r.exp(), w), false),
            _ if y < self.first.y => (self.first.state(), true),
            _ => {
                let p = -2.0 / self.gamma.two_m();
                (
                    FlowState::new(self.last.rho * (y / self.last.y).powf(p), self.last.omega),
                    true,
                )
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalRow {
    pub r: f64,
    pub y: f64,
    pub rho_phys: f64,
    pub u_phys: f64,
    pub m_phys: f64,
    pub extrapolated: bool,
}

/// Fields at time `t < 0` on the radii `r`, for pressure constant `kappa`.
pub fn physical_fields(
    interp: &ProfileInterp,
    t: f64,
    kappa: f64,
    r: &[f64],
) -> Result<Vec<PhysicalRow>> {
    if !(t < 0.0) || !(kappa > 0.0) {
        return Err(Error::Parameter(format!(
            "need t < 0 and kappa > 0, got t={t}, kappa={kappa}"
        )));
    }
    let gamma = interp.gamma;
    let g = gamma.value();
    let tau = -t;
    let sk = kappa.sqrt();
    let scale = sk * tau.powf(gamma.two_m());
    r.iter()
        .map(|&ri| {
            if !(ri > 0.0) {
                return Err(Error::Parameter(format!(
                    "radius must be positive, got {ri}"
                )));
            }
            let y = ri / scale;
            let (s, extrapolated) = interp.state(y);
            Ok(PhysicalRow {
                r: ri,
                y,
                rho_phys: s.rho / (tau * tau),
                u_phys: sk * tau.powf(1.0 - g) * model::velocity(y, s.omega, gamma),
                m_phys: 4.0
                    * std::f64::consts::PI
                    * kappa.powf(1.5)
                    * tau.powf(gamma.four_m())
                    * model::local_mass(y, s, gamma),
                extrapolated,
            })
        })
        .collect()
}
