use matrix_core::{singular_values, CMatrix, C64};
use nalgebra::DMatrix;

use crate::spec::stack;
use crate::DomainSpec;

/// Residual allowed when expressing one tuple in the span of the other.
pub const SPAN_RESIDUAL_TOL: f64 = 1e-8;

/// Finds the invertible `R` with `Ã_i = Σ_j R_ji A_j`, so that
/// `‖w‖_Ã = ‖R w‖_A` and `R` maps `Ω_Ã` onto `Ω_A`.
///
/// Returns `None` when some `Ã_i` leaves the span of the `A_j` or the
/// induced map is singular.
pub fn linear_equivalent(d1: &DomainSpec, d2: &DomainSpec) -> Option<CMatrix> {
    if d1.m() != d2.m() || d1.n() != d2.n() {
        return None;
    }
    let m = d1.m();
    // Columns are the coordinates of A_j.
    let x = stack(d1.mats()).transpose().into_dmatrix();
    let svd = x.clone().svd(true, true);
    let pinv = svd.pseudo_inverse(1e-12).ok()?;
    let mut r = DMatrix::<C64>::zeros(m, m);
    for (i, target) in d2.mats().iter().enumerate() {
        let t = nalgebra::DVector::from_vec(target.entries());
        let coef = &pinv * &t;
        let resid = (&x * &coef - &t).norm();
        if resid > SPAN_RESIDUAL_TOL * t.norm().max(1.0) {
            return None;
        }
        r.set_column(i, &coef);
    }
    let r = CMatrix::from_dmatrix(r).ok()?;
    let s = singular_values(&r);
    if s[m - 1] <= 1e-10 * s[0] {
        return None;
    }
    Some(r)
}

fn orthonormal_basis(mats: &[CMatrix]) -> DMatrix<C64> {
    let x = stack(mats).transpose().into_dmatrix();
    let svd = x.svd(true, false);
    let u = svd.u.expect("requested");
    let smax = svd.singular_values.max();
    let rank = svd.singular_values.iter().filter(|&&s| s > 1e-10 * smax).count();
    u.columns(0, rank).into_owned()
}

/// Operator-norm distance between the orthogonal projections onto the
/// spans of two families of equally sized matrices.
pub fn span_distance(a: &[CMatrix], b: &[CMatrix]) -> f64 {
    let qa = orthonormal_basis(a);
    let qb = orthonormal_basis(b);
    let pa = &qa * qa.adjoint();
    let pb = &qb * qb.adjoint();
    let diff = CMatrix::from_dmatrix(pa - pb).expect("finite projections");
    matrix_core::op_norm(&diff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use matrix_core::c;

    #[test]
    fn identity_for_equal_tuples() {
        let d = DomainSpec::i_e12();
        let r = linear_equivalent(&d, &d).unwrap();
        assert!(r.approx_eq(&CMatrix::identity(2), 1e-12));
    }

    #[test]
    fn bidisc_mixing_matrix() {
        let (a, b, cc, d) = (c(2.0, 0.0), c(0.5, 1.0), c(-1.0, 0.0), c(0.3, 0.0));
        let target = DomainSpec::new(vec![CMatrix::diag(&[a, b]), CMatrix::diag(&[cc, d])]).unwrap();
        let r = linear_equivalent(&DomainSpec::bidisc_pair(), &target).unwrap();
        let expect = CMatrix::from_rows(&[vec![a, cc], vec![b, d]]).unwrap();
        assert!(r.approx_eq(&expect, 1e-12));
    }

    #[test]
    fn different_spans_are_not_equivalent() {
        assert!(linear_equivalent(&DomainSpec::euclidean_pair(), &DomainSpec::bidisc_pair()).is_none());
        let d = span_distance(DomainSpec::euclidean_pair().mats(), DomainSpec::bidisc_pair().mats());
        assert!(d > 0.5);
    }
}
