use matrix_core::{hermitian_eig, hermitian_inv_sqrt, hermitian_sqrt, inverse, kron, op_norm, CMatrix, C64};
use serde::{Deserialize, Serialize};

use crate::{kernel_eval, BergmanError, KernelKind, KernelSpec};

/// Finite-difference step.
pub const FD_STEP: f64 = 1e-3;

/// The metric coefficient matrix `𝒦(w) = ((∂ᵢ∂̄ⱼ log K^λ)(w, w))`, stored
/// positive definite, and a localization matrix `A0` with
/// `A0ᵗ · conj(A0) = (𝒦ᵗ)⁻¹`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureResult {
    pub k: CMatrix,
    pub a0: CMatrix,
    pub w: Vec<C64>,
    pub method: CurvatureMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurvatureMethod {
    ClosedForm,
    FiniteDifference,
}

fn shifted(w: &[C64], i: usize, h: f64) -> Vec<C64> {
    let mut v = w.to_vec();
    v[i] += h;
    v
}

/// `∂_{zᵢ} ∂̄_{wⱼ} F(z, w)` at `z = w = pt` for `F` holomorphic in z and
/// antiholomorphic in w. Real steps suffice: along a real direction the
/// difference quotient of a holomorphic function is its complex derivative.
/// Index `None` means no derivative in that slot.
pub(crate) fn mixed_derivative(
    f: &impl Fn(&[C64], &[C64]) -> Result<C64, BergmanError>,
    pt: &[C64],
    i: Option<usize>,
    j: Option<usize>,
) -> Result<C64, BergmanError> {
    let stencil = |h: f64| -> Result<C64, BergmanError> {
        let zs: Vec<(Vec<C64>, f64)> = match i {
            Some(i) => vec![(shifted(pt, i, h), 1.0), (shifted(pt, i, -h), -1.0)],
            None => vec![(pt.to_vec(), 1.0)],
        };
        let ws: Vec<(Vec<C64>, f64)> = match j {
            Some(j) => vec![(shifted(pt, j, h), 1.0), (shifted(pt, j, -h), -1.0)],
            None => vec![(pt.to_vec(), 1.0)],
        };
        let mut acc = C64::new(0.0, 0.0);
        for (z, sz) in &zs {
            for (w, sw) in &ws {
                acc += f(z, w)? * (sz * sw);
            }
        }
        let denom = match (i.is_some(), j.is_some()) {
            (true, true) => 4.0 * h * h,
            (false, false) => 1.0,
            _ => 2.0 * h,
        };
        Ok(acc / denom)
    };
    if i.is_none() && j.is_none() {
        return stencil(0.0);
    }
    // one Richardson level on the O(h²) central stencil
    let (d1, d2) = (stencil(FD_STEP)?, stencil(FD_STEP / 2.0)?);
    Ok((4.0 * d2 - d1) / 3.0)
}

/// `𝒦(w)` by finite differences of the polarized `log K^λ`.
pub fn curvature_fd(spec: &KernelSpec, w: &[C64]) -> Result<CMatrix, BergmanError> {
    let logk = |z: &[C64], x: &[C64]| kernel_eval(spec, z, x).map(|k| k.ln());
    let n = spec.dim();
    let mut k = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = mixed_derivative(&logk, w, Some(i), Some(j))?;
            k.set(i, j, v);
            k.set(j, i, v.conj());
        }
    }
    // the diagonal is real; drop the rounding residue
    for i in 0..n {
        let d = k.get(i, i);
        k.set(i, i, C64::new(d.re, 0.0));
    }
    Ok(k)
}

/// nil2 curvature of the base kernel from the `T_ij(w)` display, with
/// `C = (1−|w₁|²)² − |w₂|²` and `D = 3(1−|w₁|²)² + |w₂|²`.
///
/// `log K` depends on `|w₁|²`, `|w₂|²` only, so `∂₁∂̄₂ log K` carries the
/// factor `w̄₁w₂`. The off-diagonal entry is returned in that (stored)
/// convention, which is the conjugate of the displayed `T₁₂ = 6w₁w̄₂(…)`.
pub fn nil2_t(w: &[C64]) -> CMatrix {
    let (x, y) = (w[0].norm_sqr(), w[1].norm_sqr());
    let cc = (1.0 - x).powi(2) - y;
    let dd = 3.0 * (1.0 - x).powi(2) + y;
    let s2 = 1.0 / (cc * cc) + 1.0 / (dd * dd);
    let t11 = 6.0 * (1.0 / cc - 1.0 / dd) + 12.0 * x * y * s2;
    let t12 = w[0].conj() * w[1] * (6.0 * (1.0 - x) * s2);
    let t22 = 3.0 * (1.0 - x).powi(2) * s2;
    CMatrix::from_rows(&[vec![C64::new(t11, 0.0), t12], vec![t12.conj(), C64::new(t22, 0.0)]]).expect("2x2")
}

/// Closed forms: matrix ball at 0 (`λpI`), nil2 anywhere (`λT(w)`), and
/// reinhardt3 at 0 (`diag(3λ, 9λ/2, 3λ)`).
pub fn curvature_closed(spec: &KernelSpec, w: &[C64]) -> Option<CMatrix> {
    let at_zero = w.iter().all(|z| *z == C64::new(0.0, 0.0));
    let l = spec.lambda;
    match spec.kind {
        KernelKind::MatrixBall { r, s } if at_zero => {
            Some(CMatrix::identity(r * s).scale_re(l * (r + s) as f64))
        }
        KernelKind::Nil2 if w.len() == 2 => Some(nil2_t(w).scale_re(l)),
        KernelKind::Reinhardt3 if at_zero => {
            Some(CMatrix::diag(&[C64::new(3.0 * l, 0.0), C64::new(4.5 * l, 0.0), C64::new(3.0 * l, 0.0)]))
        }
        _ => None,
    }
}

/// `A0` with `A0ᵗ · conj(A0) = (𝒦ᵗ)⁻¹`: the conjugate of the Hermitian square
/// root of `(𝒦ᵗ)⁻¹`, which reduces to `diag(1/√𝒦ᵢᵢ)` for diagonal `𝒦`.
pub fn localization(k: &CMatrix) -> Result<CMatrix, BergmanError> {
    let eig = hermitian_eig(k)?;
    if eig.min() <= 1e-12 * eig.max().abs().max(1.0) {
        return Err(BergmanError::DegenerateMetric(eig.min()));
    }
    let m = inverse(&k.transpose())?;
    Ok(hermitian_sqrt(&m)?.conj())
}

/// Curvature from the closed form when one applies, otherwise by finite
/// differences; `A0` is derived either way.
pub fn curvature(spec: &KernelSpec, w: &[C64]) -> Result<CurvatureResult, BergmanError> {
    let (k, method) = match curvature_closed(spec, w) {
        Some(k) => {
            // still validates the point
            kernel_eval(spec, w, w)?;
            (k, CurvatureMethod::ClosedForm)
        }
        None => (curvature_fd(spec, w)?, CurvatureMethod::FiniteDifference),
    };
    let a0 = localization(&k)?;
    Ok(CurvatureResult {
        k,
        a0,
        w: w.to_vec(),
        method,
    })
}

/// `Dφ_W(W) = (I − WW*)^{−1/2} ⊗ ((I − W*W)^{−1/2})ᵗ`, the derivative at W of
/// the automorphism of the r×s ball moving W to 0, acting on row-major
/// vectorized directions `u ↦ (I − WW*)^{−1/2} u (I − W*W)^{−1/2}`.
pub fn mobius_derivative(w: &CMatrix) -> Result<CMatrix, BergmanError> {
    if op_norm(w) >= 1.0 {
        return Err(BergmanError::Input(format!("‖W‖ = {} is not below 1", op_norm(w))));
    }
    let (r, s) = w.shape();
    let left = hermitian_inv_sqrt(&(&CMatrix::identity(r) - &(w * &w.adjoint())))?;
    let right = hermitian_inv_sqrt(&(&CMatrix::identity(s) - &(&w.adjoint() * w)))?;
    Ok(kron(&left, &right.transpose()))
}
