//! Validated numerics: outward-rounded intervals, a branch-and-bound
//! extremum search, and the sign certificates the construction rests on.

mod bnb;
mod interval;
mod seed;
pub mod suite;

pub use bnb::{bound_extremum, Expr, Extremum, Mode, Status};
pub use interval::{Interval, Real};
pub use seed::{seed_consistency, window_grid, SeedCheck, SeedReport};
pub use suite::{
    manifest, named_box, run_listing, run_suite, supplementary, Certificate, Claim, Listing,
    SuiteOptions, SuiteReport, Verdict,
};
