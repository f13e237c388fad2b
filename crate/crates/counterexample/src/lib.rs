//! The g-function attached to a diagonal tuple on a two-dimensional domain,
//! the pencil vectors of the B-set, and a constructive search for tuples that
//! are contractive but fail the `P_A` test.

mod bset;
mod gfun;
mod search;

pub use bset::{compute_b_set, BSet, BVector, Pencil};
pub use gfun::{g_eval, g_min, GFunctionSpec, GMin, GTable};
pub use search::{
    certify, search, search_with, SearchOptions, SearchOutcome, SearchResult, TransposeGap,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CounterexampleError {
    #[error("β must be a unit vector, got norm {0}")]
    NonUnit(f64),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("the pair is simultaneously diagonalizable: contractive and completely contractive coincide, no counterexample expected")]
    NoCounterexampleExpected,
    #[error("no certificate for λ in [{lambda_min}, {lambda_max}] ({scanned} values scanned)")]
    Exhausted {
        lambda_min: f64,
        lambda_max: f64,
        scanned: usize,
    },
    #[error(transparent)]
    Contractivity(#[from] contractivity::ContractivityError),
}
