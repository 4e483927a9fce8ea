use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("sonic root bracket failed at y*={y_star}: f(lo)={f_lo:e}, f(hi)={f_hi:e}")]
    Bracket { y_star: f64, f_lo: f64, f_hi: f64 },
    #[error("discriminant s(omega0)={0:e} is not positive")]
    Discriminant(f64),
    #[error("monitor `{name}` violated at y={y}: value {value:e}")]
    Monitor {
        name: &'static str,
        y: f64,
        value: f64,
    },
    #[error("integration failed at y={y}: {reason}")]
    StepFailure { y: f64, reason: String },
    #[error("series/integrator handoff mismatch {0:e}")]
    Handoff(f64),
    #[error("shooting predicate is not monotone: {0}")]
    ShootAmbiguity(String),
    #[error("interval domain error: {0}")]
    Interval(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
