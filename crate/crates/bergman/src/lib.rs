//! Bergman kernels of three model domains, their curvature and localization
//! matrices, jet-Gram positivity, and the λ-thresholds of the induced
//! homomorphisms.

mod curvature;
mod jet;
mod kernel;
mod thresholds;

pub use curvature::{
    curvature, curvature_closed, curvature_fd, localization, mobius_derivative, nil2_t, CurvatureMethod,
    CurvatureResult, FD_STEP,
};
pub use jet::{jet_gram, verify_jet_gram, JetGram};
pub use kernel::{
    base_kernel, kernel_eval, KernelKind, KernelSpec, SERIES_MARGIN, SERIES_MAX_INDEX, SERIES_TAIL_TOL,
};
pub use thresholds::{a_squared_coefficients, criticals, threshold_check, Critical, ThresholdExample, ThresholdReport};

use matrix_core::{MatrixError, C64};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BergmanError {
    #[error("input error: {0}")]
    Input(String),
    #[error("point {0:?} is outside the evaluation region")]
    OutsideDomain(Vec<C64>),
    #[error("series truncation did not converge, estimated tail {tail:e}")]
    Truncation { tail: f64 },
    #[error("curvature matrix is degenerate (smallest eigenvalue {0:e})")]
    DegenerateMetric(f64),
    #[error("jet-Gram matrix is not positive definite (smallest eigenvalue {0:e})")]
    PositivityViolation(f64),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}
