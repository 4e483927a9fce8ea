//! Pointwise spot checks of the first-order data and the determinant
//! coefficients across the sonic window, in plain floating point.

use serde::{Deserialize, Serialize};

use crate::model::{sonic_window, PolytropicIndex};
use crate::sonic::{det_quadratic, s_poly, SonicSeed};
use crate::Result;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeedCheck {
    pub name: String,
    /// Smallest margin seen; the check holds when this is positive.
    pub worst_margin: f64,
    pub worst_y_star: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeedReport {
    pub gamma: f64,
    pub points: usize,
    pub checks: Vec<SeedCheck>,
}

impl SeedReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn get(&self, name: &str) -> Option<&SeedCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// `n` evenly spaced sonic points covering `[y_f, y_F]`, endpoints included.
pub fn window_grid(gamma: PolytropicIndex, n: usize) -> Vec<f64> {
    let w = sonic_window(gamma);
    let n = n.max(2);
    (0..n)
        .map(|i| {
            if i == n - 1 {
                w.y_big_f
            } else {
                w.y_f + w.width() * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

struct Tally {
    name: &'static str,
    worst: f64,
    at: f64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            worst: f64::INFINITY,
            at: f64::NAN,
        }
    }
    fn see(&mut self, margin: f64, y: f64) {
        if margin < self.worst || margin.is_nan() {
            self.worst = margin;
            self.at = y;
        }
    }
    fn done(self, tol: f64) -> SeedCheck {
        SeedCheck {
            name: self.name.into(),
            holds: self.worst > -tol,
            worst_margin: self.worst,
            worst_y_star: self.at,
        }
    }
}

/// Evaluate the branch bounds, `W1 >= 0` and the three determinant
/// inequalities at every point of `grid`.
///
/// Margins are strict except for the `gamma >= 10/9` upper bound on `R1`,
/// which is attained at `y_F` when `gamma = 10/9`, and `W1` at `y_f`, where
/// it vanishes.
pub fn seed_consistency(gamma: PolytropicIndex, grid: &[f64]) -> Result<SeedReport> {
    let g = gamma.value();
    let (b, a4) = (gamma.two_m(), gamma.four_m());
    let y_f = sonic_window(gamma).y_f;
    let mut disc = Tally::new("s(omega0) > 0");
    let mut r_lo = Tally::new("R1 > -4/((4-3g)(2-g))");
    let mut r_hi = Tally::new("R1 < -1/(2-g)");
    let mut r_sharp = Tally::new("R1 <= -2g/((2-g)(g+1))");
    let mut w1 = Tally::new("W1 > 0");
    let mut w1_end = Tally::new("W1(y_f) = 0");
    let mut a2 = Tally::new("A2 > 0");
    let mut d20 = Tally::new("4A2 + A1 > 0");
    let mut d0 = Tally::new("4A2 + 2A1 + A0 > 0");
    for &y in grid {
        let seed = SonicSeed::new(y, gamma)?;
        let (r, w) = (seed.r1, seed.w1);
        disc.see(s_poly(seed.omega0, g), y);
        r_lo.see(r + 4.0 / (a4 * b), y);
        r_hi.see(-1.0 / b - r, y);
        if g >= 10.0 / 9.0 {
            r_sharp.see(-2.0 * g / (b * (g + 1.0)) - r, y);
        }
        if y == y_f {
            w1_end.see(-w.abs(), y);
        } else {
            w1.see(w, y);
        }
        let (c0, c1, c2) = det_quadratic(&seed, gamma);
        a2.see(c2, y);
        d20.see(4.0 * c2 + c1, y);
        d0.see(4.0 * c2 + 2.0 * c1 + c0, y);
    }
    let mut checks = vec![disc.done(0.0), r_lo.done(0.0), r_hi.done(0.0)];
    if g >= 10.0 / 9.0 {
        checks.push(r_sharp.done(1e-12));
    }
    if grid.iter().any(|&y| y != y_f) {
        checks.push(w1.done(0.0));
    }
    if grid.contains(&y_f) {
        checks.push(w1_end.done(1e-12));
    }
    checks.extend([a2.done(0.0), d20.done(0.0), d0.done(0.0)]);
    Ok(SeedReport {
        gamma: g,
        points: grid.len(),
        checks,
    })
}
