use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the spectral toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("too few entries: need at least {needed}, got {got}")]
    TooFewEntries { needed: usize, got: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("|rho| = {modulus} exceeds the configured cap {cap}")]
    RhoOverCap { modulus: f64, cap: f64 },
    #[error("grid with {nodes} intervals is too coarse for |rho| = {modulus}")]
    GridTooCoarse { nodes: usize, modulus: f64 },
    #[error("eigenvalue certification failed: {0}")]
    Certification(String),
    #[error("Newton iteration did not converge for eigenvalue index {index}")]
    NewtonNonConvergence { index: usize },
    #[error("degenerate normalization integral (|int phi^2| = {modulus:e}) at rho = {rho}")]
    DegenerateNormalization { rho: Complex64, modulus: f64 },
    #[error("characteristic derivative vanishes at rho = {rho}")]
    MultipleRoot { rho: Complex64 },
    #[error("evaluation point rho = {rho} is too close to an eigenvalue")]
    NearEigenvalue { rho: Complex64 },
    #[error("main equation is singular at x = {x}: I + R(x) is non-invertible (relative pivot {pivot:e} at column {index})")]
    SingularSystem { x: f64, index: usize, pivot: f64 },
    #[error("spectral data carry multiplicity structure; use the contour pipeline")]
    MultiplicityPresent,
    #[error("pole at distance {distance:e} from the contour")]
    PoleNearContour { distance: f64 },
    #[error("data violate the contour splitting condition: {0}")]
    ContourSplit(String),
    #[error("input kind does not match the requested set: {0}")]
    KindMismatch(String),
    #[error("non-finite value encountered in {0}")]
    NonFinite(String),
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Whether the error reflects a numerical breakdown rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Certification(_)
                | Error::NewtonNonConvergence { .. }
                | Error::DegenerateNormalization { .. }
                | Error::MultipleRoot { .. }
                | Error::NearEigenvalue { .. }
                | Error::SingularSystem { .. }
                | Error::PoleNearContour { .. }
                | Error::NonFinite(_)
        )
    }
}
