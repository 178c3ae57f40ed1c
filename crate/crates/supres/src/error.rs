use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("atoms too close: Gershgorin estimate {bound:.4} exceeds 1")]
    SeparationTooSmall { bound: f64 },
    #[error("interpolation system is singular")]
    SingularSystem,
    #[error("atom Gram matrix U*U is numerically singular (rcond {rcond:.3e})")]
    SingularGram { rcond: f64 },
    #[error("normal equations ill-conditioned (condition {cond:.3e})")]
    IllConditioned { cond: f64 },
    #[error("argument outside domain: {0}")]
    DomainError(String),
    #[error("no real root: Lambert argument {arg:.6e} < -1/e")]
    NoRealRoot { arg: f64 },
    #[error("power iteration did not converge after {iters} iterations (residual {residual:.3e})")]
    NonConvergence { iters: usize, residual: f64, estimate: f64 },
    #[error("zero vector")]
    ZeroVector,
    #[error("dense matrix needs {needed} bytes, cap is {cap}")]
    BudgetExceeded { needed: u64, cap: u64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidMeasure(_) => "InvalidMeasure",
            Error::SeparationTooSmall { .. } => "SeparationTooSmall",
            Error::SingularSystem => "SingularSystem",
            Error::SingularGram { .. } => "SingularGram",
            Error::IllConditioned { .. } => "IllConditioned",
            Error::DomainError(_) => "DomainError",
            Error::NoRealRoot { .. } => "NoRealRoot",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::ZeroVector => "ZeroVector",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::Dimension(_) => "Dimension",
        }
    }
}
