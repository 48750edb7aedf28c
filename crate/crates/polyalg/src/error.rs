use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PolyError {
    #[error("every input polynomial is zero")]
    AllZero,
    #[error("{0} of the zero polynomial")]
    ZeroInput(&'static str),
    #[error("{0} of a constant polynomial")]
    Constant(&'static str),
    #[error("approximate gcd is ill-conditioned: degree {degree} has singular-value gap {gap:.3e}")]
    IllConditioned { degree: usize, gap: f64 },
    #[error(
        "candidate common root {root} has relative residual {residual:.3e}, between the accept and reject thresholds"
    )]
    AmbiguousRoot { root: String, residual: f64 },
    #[error("root refinement did not converge for the root near {0}")]
    NoConvergence(String),
}
