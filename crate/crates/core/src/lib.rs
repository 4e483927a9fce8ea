//! Self-similar Yahil collapse profiles for the gravitational Euler-Poisson
//! system with polytropic index `1 < gamma < 4/3`.
//!
//! The pipeline runs in four stages:
//!
//! * [`sonic`] solves the sonic-point constraints and builds the local
//!   analytic solution as a power series,
//! * [`integrate`] continues the series to the left and right with an
//!   adaptive Runge-Kutta integrator,
//! * [`shoot`] bisects on the sonic point until the left solution meets the
//!   Friedman state at the origin,
//! * [`certify`] re-checks the polynomial sign conditions the construction
//!   relies on, with outward-rounded interval arithmetic.
//!
//! ```
//! use yahil::{model, sonic, PolytropicIndex};
//!
//! let gamma = PolytropicIndex::new(1.2).unwrap();
//! let win = model::sonic_window(gamma);
//! let seed = sonic::SonicSeed::new(0.5 * (win.y_f + win.y_big_f), gamma).unwrap();
//! let taylor = sonic::build_taylor(&seed, 40, gamma).unwrap();
//! assert!(taylor.radius > 0.0);
//! ```

// Range checks are written as negated comparisons so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
mod error;
pub mod integrate;
pub mod io;
pub mod model;
pub mod physical;
pub mod shoot;
pub mod sonic;
pub mod sum;

pub use error::{Error, Result};
pub use model::{FlowState, PolytropicIndex, SonicWindow};
