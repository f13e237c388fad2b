//! Contractivity of `ρ_V` (through the linear map `L_V`) and the
//! complete-contractivity surrogate `‖Σ A_i ⊗ V_i‖ ≤ 1`.

mod closed;
mod general;
mod vtuple;

pub use closed::{
    complete_closed_diag3, complete_closed_i_e12, contractive_closed_diag3, contractive_closed_i_e12,
    embedding_norm_pair, embedding_norm_row_supported, simultaneously_diagonalizable, CompleteIE12, Diag3Verdict,
    IE12Verdict, BOUNDARY_TOL,
};
pub use general::{
    contractive_general, contractive_general_with, tensor_norm, ContractivityReport, GeneralOptions, Method,
};
pub use vtuple::VTuple;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ContractivityError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error(transparent)]
    Domain(#[from] domains::DomainError),
    #[error(transparent)]
    Matrix(#[from] matrix_core::MatrixError),
}
