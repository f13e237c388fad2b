use nalgebra::DMatrix;

use crate::cmatrix::{CMatrix, C64};
use crate::error::MatrixError;
use crate::{ABS_FLOOR, PSD_SLACK};

/// Spectral decomposition of a Hermitian matrix.
///
/// `eigenvalues` is sorted non-increasing and column `k` of `eigenvectors`
/// is the unit eigenvector for `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl HermitianEig {
    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn min(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.eigenvectors.rows()).map(|i| self.eigenvectors.get(i, k)).collect()
    }

    /// Rebuilds `U f(Λ) U*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let u = self.eigenvectors.as_dmatrix();
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&l| C64::new(f(l), 0.0)),
        ));
        CMatrix::from_dmatrix(u * d * u.adjoint()).expect("finite spectral map")
    }
}

/// Verdict of the semidefiniteness test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdVerdict {
    pub psd: bool,
    pub lambda_min: f64,
}

/// Largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    match m.shape() {
        (1, _) | (_, 1) => m.frobenius(),
        (2, 2) => {
            // Largest eigenvalue of M M* via the stable discriminant form.
            let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
            let p = a.norm_sqr() + b.norm_sqr();
            let q = c.norm_sqr() + d.norm_sqr();
            let r = (a * c.conj() + b * d.conj()).norm();
            ((p + q + (p - q).hypot(2.0 * r)) / 2.0).sqrt()
        }
        _ => singular_values(m)[0],
    }
}

/// Singular values in non-increasing order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.as_dmatrix().clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn check_hermitian(m: &CMatrix) -> Result<(), MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let defect = m.hermitian_defect();
    // Frobenius defect over-estimates the operator defect by at most sqrt(n).
    let scale = m.frobenius().max(ABS_FLOOR);
    if defect > 1e-12 * scale * (m.rows() as f64).sqrt() {
        return Err(MatrixError::NotHermitian { defect });
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn hermitian_eig(m: &CMatrix) -> Result<HermitianEig, MatrixError> {
    check_hermitian(m)?;
    let a = m.as_dmatrix();
    let sym = (a + a.adjoint()).map(|z| z * 0.5);
    let eig = sym.symmetric_eigen();
    let n = m.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = DMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors: CMatrix::from_dmatrix(vecs)?,
    })
}

/// Kronecker product: the `(i, j)` block of the result is `a_ij · B`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    CMatrix::from_dmatrix(a.as_dmatrix().kronecker(b.as_dmatrix())).expect("finite product")
}

/// Operator norm of `[[α₁ I, B], [0, α₂ I]]` from the closed form
///
/// `√((|α₂|² + ‖B‖² + |α₁|² + √((|α₂|² + ‖B‖² − |α₁|²)² + 4‖B‖²|α₁|²)) / 2)`.
pub fn block_upper_norm(alpha1: C64, alpha2: C64, b: &CMatrix) -> f64 {
    let a1 = alpha1.norm_sqr();
    let a2 = alpha2.norm_sqr();
    let bn = op_norm(b).powi(2);
    let inner = ((a2 + bn - a1).powi(2) + 4.0 * bn * a1).sqrt();
    ((a2 + bn + a1 + inner) / 2.0).sqrt()
}

/// Semidefiniteness with slack `PSD_SLACK · max(1, ‖M‖)`.
pub fn schur_psd_check(m: &CMatrix) -> Result<PsdVerdict, MatrixError> {
    let eig = hermitian_eig(m)?;
    let lambda_min = eig.min();
    let scale = eig.max().abs().max(lambda_min.abs()).max(1.0);
    Ok(PsdVerdict {
        psd: lambda_min >= -PSD_SLACK * scale,
        lambda_min,
    })
}

/// Schur complement `A − X C⁻¹ X*` of the trailing block, where `A` is the
/// leading `k x k` block of the Hermitian matrix `M`.
pub fn schur_complement(m: &CMatrix, k: usize) -> Result<CMatrix, MatrixError> {
    check_hermitian(m)?;
    let n = m.rows();
    if k == 0 || k >= n {
        return Err(MatrixError::Dimension(format!("split {k} of a {n}x{n} matrix")));
    }
    let a = m.block(0, 0, k, k);
    let x = m.block(0, k, k, n - k);
    let cinv = inverse(&m.block(k, k, n - k, n - k))?;
    Ok(&a - &(&(&x * &cinv) * &x.adjoint()))
}

/// Inverse of a square matrix.
pub fn inverse(m: &CMatrix) -> Result<CMatrix, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let s = singular_values(m);
    if s[s.len() - 1] <= 1e-14 * s[0].max(ABS_FLOOR) {
        return Err(MatrixError::Singular);
    }
    let inv = m.as_dmatrix().clone().try_inverse().ok_or(MatrixError::Singular)?;
    CMatrix::from_dmatrix(inv)
}

/// Positive square root of a positive semidefinite Hermitian matrix.
pub fn hermitian_sqrt(m: &CMatrix) -> Result<CMatrix, MatrixError> {
    let eig = hermitian_eig(m)?;
    Ok(eig.map(|l| l.max(0.0).sqrt()))
}

/// Inverse positive square root of a positive definite Hermitian matrix.
pub fn hermitian_inv_sqrt(m: &CMatrix) -> Result<CMatrix, MatrixError> {
    let eig = hermitian_eig(m)?;
    if eig.min() <= ABS_FLOOR * eig.max().abs().max(1.0) {
        return Err(MatrixError::Singular);
    }
    Ok(eig.map(|l| 1.0 / l.sqrt()))
}
