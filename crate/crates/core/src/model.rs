//! Closed-form pieces of the self-similar system.
//!
//! With `y = r / (sqrt(kappa) (-t)^(2-gamma))` the unknowns are the rescaled
//! density `rho(y)` and relative velocity `omega(y)`, and the system reads
//!
//! ```text
//! rho'   = y rho h / G
//! omega' = (4 - 3 gamma - 3 omega) / y - y omega h / G
//! G = gamma rho^(gamma-1) - y^2 omega^2
//! h = 2 omega^2 + (gamma-1) omega - 4 pi rho omega / (4 - 3 gamma) + (gamma-1)(2-gamma)
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// The polytropic index together with the constants every formula reuses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PolytropicIndex {
    g: f64,
}

impl PolytropicIndex {
    /// Accepts `1 < gamma < 4/3` only.
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma < 4.0 / 3.0) {
            return Err(Error::Parameter(format!(
                "gamma must lie in (1, 4/3), got {gamma}"
            )));
        }
        Ok(Self { g: gamma })
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.g
    }

    /// `gamma - 1`
    #[inline]
    pub fn gm1(self) -> f64 {
        self.g - 1.0
    }

    /// `2 - gamma`
    #[inline]
    pub fn two_m(self) -> f64 {
        2.0 - self.g
    }

    /// `4 - 3 gamma`
    #[inline]
    pub fn four_m(self) -> f64 {
        4.0 - 3.0 * self.g
    }

    /// Friedman velocity `(4 - 3 gamma) / 3`.
    #[inline]
    pub fn omega_friedman(self) -> f64 {
        self.four_m() / 3.0
    }

    /// Far-field velocity `2 - gamma`.
    #[inline]
    pub fn omega_far(self) -> f64 {
        self.two_m()
    }

    /// `4 pi / (4 - 3 gamma)`, the coefficient of `rho omega` in `h`.
    #[inline]
    pub fn c_pi(self) -> f64 {
        4.0 * PI / self.four_m()
    }

    /// Prefactor of the far-field density `k y^(-2/(2-gamma))`.
    pub fn far_field_k(self) -> f64 {
        let b = self.two_m();
        (self.g * self.four_m() / (2.0 * PI * b * b)).powf(1.0 / b)
    }
}

impl TryFrom<f64> for PolytropicIndex {
    type Error = Error;
    fn try_from(g: f64) -> Result<Self> {
        Self::new(g)
    }
}

impl From<PolytropicIndex> for f64 {
    fn from(g: PolytropicIndex) -> f64 {
        g.g
    }
}

/// A point `(rho, omega)` of the phase plane. The radius `y` is always passed
/// separately because the system is not autonomous.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub rho: f64,
    pub omega: f64,
}

impl FlowState {
    pub fn new(rho: f64, omega: f64) -> Self {
        Self { rho, omega }
    }
}

/// Sonic points of the far-field (`y_f`) and Friedman (`y_F`) solutions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SonicWindow {
    pub y_f: f64,
    #[serde(rename = "y_F")]
    pub y_big_f: f64,
}

impl SonicWindow {
    pub fn width(&self) -> f64 {
        self.y_big_f - self.y_f
    }

    pub fn contains(&self, y: f64) -> bool {
        y >= self.y_f && y <= self.y_big_f
    }
}

pub fn sonic_window(gamma: PolytropicIndex) -> SonicWindow {
    let g = gamma.value();
    let y_big_f = 3.0 / gamma.four_m() * (g / (6.0 * PI).powf(gamma.gm1())).sqrt();
    let y_f = g.sqrt() / gamma.two_m() * (gamma.four_m() / (2.0 * PI)).powf(0.5 * gamma.gm1());
    SonicWindow { y_f, y_big_f }
}

/// The sonic function `G = gamma rho^(gamma-1) - y^2 omega^2`.
#[inline]
pub fn g(y: f64, s: FlowState, gamma: PolytropicIndex) -> f64 {
    gamma.value() * s.rho.powf(gamma.gm1()) - y * y * s.omega * s.omega
}

/// `gamma rho^(gamma-1)`, the squared local sound speed in self-similar units.
#[inline]
pub fn sound_speed_sq(rho: f64, gamma: PolytropicIndex) -> f64 {
    gamma.value() * rho.powf(gamma.gm1())
}

#[inline]
pub fn h(s: FlowState, gamma: PolytropicIndex) -> f64 {
    let w = s.omega;
    2.0 * w * w + gamma.gm1() * w - gamma.c_pi() * s.rho * w + gamma.gm1() * gamma.two_m()
}

/// The curve `h = 0` written as `rho = f1(omega)`.
pub fn f1(omega: f64, gamma: PolytropicIndex) -> Result<f64> {
    if omega <= 0.0 {
        return Err(Error::Domain(format!("f1 needs omega > 0, got {omega}")));
    }
    Ok(f1_unchecked(omega, gamma))
}

#[inline]
pub(crate) fn f1_unchecked(w: f64, gamma: PolytropicIndex) -> f64 {
    f1_raw(w, gamma.value())
}

/// [`f1`] for a bare `gamma`, which may also be the limit value 1.
pub fn f1_raw(w: f64, g: f64) -> f64 {
    let (gm1, b) = (g - 1.0, 2.0 - g);
    (4.0 - 3.0 * g) / (4.0 * PI * w) * (2.0 * w * w + gm1 * w + gm1 * b)
}

/// `d f1 / d omega`.
pub(crate) fn f1_prime(w: f64, gamma: PolytropicIndex) -> f64 {
    let f = f1_unchecked(w, gamma);
    -f / w + gamma.four_m() / (4.0 * PI * w) * (4.0 * w + gamma.gm1())
}

/// The curve `G = 0` at fixed `y_star`, written as `rho = f2(omega)`.
#[inline]
pub fn f2(omega: f64, y_star: f64, gamma: PolytropicIndex) -> f64 {
    (y_star * y_star * omega * omega / gamma.value()).powf(1.0 / gamma.gm1())
}

/// Minimiser of `f1` on `omega > 0`.
pub fn f1_argmin(gamma: PolytropicIndex) -> f64 {
    (0.5 * gamma.gm1() * gamma.two_m()).sqrt()
}

pub fn friedman_state(gamma: PolytropicIndex) -> FlowState {
    FlowState::new(1.0 / (6.0 * PI), gamma.omega_friedman())
}

pub fn far_field_state(y: f64, gamma: PolytropicIndex) -> FlowState {
    FlowState::new(
        gamma.far_field_k() * y.powf(-2.0 / gamma.two_m()),
        gamma.omega_far(),
    )
}

/// Mass inside radius `y`: `int_0^y z^2 rho dz = y^3 rho omega / (4 - 3 gamma)`.
pub fn local_mass(y: f64, s: FlowState, gamma: PolytropicIndex) -> f64 {
    y * y * y * s.rho * s.omega / gamma.four_m()
}

/// Physical velocity `u = y (omega - (2 - gamma))`.
#[inline]
pub fn velocity(y: f64, omega: f64, gamma: PolytropicIndex) -> f64 {
    y * (omega - gamma.two_m())
}
