//! Domains `Ω_A = {z ∈ C^m : ‖z₁A₁ + ⋯ + z_mA_m‖_op < 1}`.
//!
//! Besides the norm itself this crate evaluates the dual norm (a closed form
//! for the `(I₂, E₁₂)` pair and a numeric support-function search for
//! everything else), decides linear equivalence of two tuples, and reduces
//! 2×2 pairs to a canonical representative.

mod canonical;
mod equiv;
mod norm;
mod spec;

use thiserror::Error;

pub use canonical::{canonicalize_2d, degenerate_span, ie12_chart, A1Kind, A2Kind, CanonicalForm2D};
pub use equiv::{linear_equivalent, span_distance, SPAN_RESIDUAL_TOL};
pub use norm::{
    defining_polynomial, domain_norm, dual_norm, dual_norm_i_e12, dual_norm_with, DualMethod, DualOptions,
};
pub use spec::{DomainSpec, INDEPENDENCE_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("the matrices are linearly dependent")]
    Dependent,
    #[error("the closed-form dual norm only applies to domains equivalent to (I2, E12)")]
    UnsupportedDomain,
    #[error(transparent)]
    Matrix(#[from] matrix_core::MatrixError),
}
