use matrix_core::{schur_psd_check, CMatrix, C64, PsdVerdict};
use serde::{Deserialize, Serialize};

use crate::curvature::mixed_derivative;
use crate::{kernel_eval, BergmanError, KernelSpec};

/// `M_ij = (∂_j ∂̄_i K^λ)(w, w)` for `i, j = 0..=m`, index 0 meaning no
/// derivative: the Gram matrix of `K_w`, `∂̄₁K_w, …, ∂̄_mK_w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JetGram {
    pub matrix: CMatrix,
    pub lambda_min: f64,
}

/// Jet-Gram matrix of `K^λ` at `w`; a matrix that is not strictly positive
/// definite is reported as an error, never returned.
pub fn jet_gram(spec: &KernelSpec, w: &[C64]) -> Result<JetGram, BergmanError> {
    let m = spec.dim();
    let f = |z: &[C64], x: &[C64]| kernel_eval(spec, z, x);
    let idx = |k: usize| if k == 0 { None } else { Some(k - 1) };
    let mut g = CMatrix::zeros(m + 1, m + 1);
    for i in 0..=m {
        for j in i..=m {
            let v = mixed_derivative(&f, w, idx(j), idx(i))?;
            g.set(i, j, v);
            g.set(j, i, v.conj());
        }
        let d = g.get(i, i);
        g.set(i, i, C64::new(d.re, 0.0));
    }
    let verdict = verify_jet_gram(&g)?;
    Ok(JetGram {
        matrix: g,
        lambda_min: verdict.lambda_min,
    })
}

/// Strict positivity check used on every jet-Gram matrix.
pub fn verify_jet_gram(g: &CMatrix) -> Result<PsdVerdict, BergmanError> {
    let v = schur_psd_check(g)?;
    if v.lambda_min <= 0.0 {
        return Err(BergmanError::PositivityViolation(v.lambda_min));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::KernelKind;
    use matrix_core::c;

    #[test]
    fn disc_jet_gram_at_origin() {
        // (1 − z w̄)^{−2λ}: K = 1, ∂∂̄K = 2λ, mixed first derivatives vanish
        let spec = KernelSpec::new(KernelKind::MatrixBall { r: 1, s: 1 }, 0.3).unwrap();
        let g = jet_gram(&spec, &[c(0.0, 0.0)]).unwrap();
        assert!((g.matrix.get(0, 0).re - 1.0).abs() < 1e-14);
        assert!((g.matrix.get(1, 1).re - 0.6).abs() < 1e-8);
        assert!(g.matrix.get(0, 1).norm() < 1e-10);
        assert!(g.lambda_min > 0.0);
    }

    #[test]
    fn nil2_small_lambda_off_origin() {
        let spec = KernelSpec::new(KernelKind::Nil2, 0.1).unwrap();
        let g = jet_gram(&spec, &[c(0.2, 0.0), c(0.1, 0.0)]).unwrap();
        assert!(g.lambda_min > 0.0);
    }

    #[test]
    fn upper_left_entry_is_the_kernel() {
        for kind in [KernelKind::MatrixBall { r: 2, s: 1 }, KernelKind::Nil2, KernelKind::Reinhardt3] {
            let spec = KernelSpec::new(kind, 1.0).unwrap();
            let z = vec![c(0.0, 0.0); spec.dim()];
            let g = jet_gram(&spec, &z).unwrap();
            assert!(g.matrix.get(0, 0).re > 0.0);
        }
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let bad = CMatrix::from_real(&[&[1.0, 2.0], &[2.0, 1.0]]);
        assert!(matches!(verify_jet_gram(&bad), Err(BergmanError::PositivityViolation(_))));
    }
}
