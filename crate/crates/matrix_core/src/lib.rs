//! Dense complex matrices and the handful of factorizations the rest of the
//! workspace needs.
//!
//! Everything here is sized for tiny problems (a few dozen rows at most), and
//! favours robust direct methods over speed. Tolerances are relative to the
//! operator norm of the input with an absolute floor of [`ABS_FLOOR`].

mod cmatrix;
mod error;
mod linalg;
pub mod optim;
pub mod random;

pub use cmatrix::{CMatrix, C64};
pub use error::MatrixError;
pub use linalg::{
    block_upper_norm, hermitian_eig, hermitian_inv_sqrt, hermitian_sqrt, inverse, kron, op_norm,
    schur_complement, schur_psd_check, singular_values, HermitianEig, PsdVerdict,
};

/// Absolute floor used under every relative tolerance.
pub const ABS_FLOOR: f64 = 1e-12;

/// Relative slack of the PSD verdict: `λ_min ≥ -PSD_SLACK·max(1, ‖M‖)`.
pub const PSD_SLACK: f64 = 1e-10;

/// Shorthand for building a complex number.
#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian inner product `⟨x, y⟩ = Σ x_i conj(y_i)`, linear in the first slot.
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

/// Scales a vector to unit length. Returns `None` for the zero vector.
pub fn normalize(v: &[C64]) -> Option<Vec<C64>> {
    let n = vec_norm(v);
    if n <= ABS_FLOOR {
        return None;
    }
    Some(v.iter().map(|z| z / n).collect())
}

/// Multiplies by a global phase so the first entry of modulus above
/// `ABS_FLOOR` is real and nonnegative.
pub fn fix_phase(v: &mut [C64]) {
    if let Some(k) = v.iter().position(|z| z.norm() > 1e-9) {
        let ph = v[k].conj() / v[k].norm();
        for z in v.iter_mut() {
            *z *= ph;
        }
        v[k] = C64::new(v[k].re, 0.0);
    }
}
