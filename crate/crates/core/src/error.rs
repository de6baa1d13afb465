use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("jet order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("singular jet: zero constant term raised to power {exponent}")]
    SingularJet { exponent: f64 },

    #[error("negative constant term {base} raised to fractional power {exponent}")]
    NegativeBase { base: f64, exponent: f64 },

    #[error("invalid surface form: {0}")]
    InvalidForm(String),

    #[error("parabolic point at ({u}, {v}): |LN-M^2| = {k:e}; use the regularized curvature BDE")]
    ParabolicPoint { u: f64, v: f64, k: f64 },

    #[error("surface is not in the required normal form: {0}")]
    WrongChart(String),

    #[error("no real direction at ({u}, {v}): discriminant {delta:e} < 0")]
    NoRealDirection { u: f64, v: f64, delta: f64 },

    #[error("singular zero set near ({u}, {v}): gradient norm {grad:e}")]
    SingularZeroSet { u: f64, v: f64, grad: f64 },

    #[error("degenerate blow-up portrait: {0}")]
    DegeneratePortrait(String),

    #[error("origin is not a double-direction point: q31 = {q31}")]
    NotADiscriminantPoint { q31: f64 },

    #[error("degenerate umbilic: {0}")]
    DegenerateUmbilic(String),

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
