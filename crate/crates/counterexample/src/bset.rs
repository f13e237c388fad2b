use matrix_core::{fix_phase, inner, normalize, CMatrix, C64};
use serde::{Deserialize, Serialize};

/// Which pencil a B-set vector annihilates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pencil {
    /// `(A₂* − μA₁*)β = 0`
    Mu,
    /// `(A₁* − νA₂*)β = 0`
    Nu,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BVector {
    pub beta: [C64; 2],
    pub pencil: Pencil,
    pub param: C64,
    /// 2 for a double root of the determinant.
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BSet {
    pub vectors: Vec<BVector>,
    /// Every root found, with its pencil, before deduplication of vectors.
    pub eigen_params: Vec<(Pencil, C64)>,
    /// Some pencil determinant vanishes identically.
    pub degenerate: bool,
}

const ROOT_TOL: f64 = 1e-12;

/// Roots of `a₂x² + a₁x + a₀` with multiplicities; `None` when the
/// polynomial vanishes identically.
fn quadratic_roots(a2: C64, a1: C64, a0: C64) -> Option<Vec<(C64, usize)>> {
    let scale = a2.norm().max(a1.norm()).max(a0.norm());
    if scale <= ROOT_TOL {
        return None;
    }
    let tol = ROOT_TOL * scale;
    if a2.norm() <= tol {
        if a1.norm() <= tol {
            return Some(vec![]);
        }
        return Some(vec![(-a0 / a1, 1)]);
    }
    let disc = a1 * a1 - 4.0 * a2 * a0;
    if disc.norm() <= tol * scale {
        return Some(vec![(-a1 / (2.0 * a2), 2)]);
    }
    let sq = disc.sqrt();
    // pick the sign that avoids cancellation
    let q = if (a1.conj() * sq).re >= 0.0 { -(a1 + sq) / 2.0 } else { -(a1 - sq) / 2.0 };
    Some(vec![(q / a2, 1), (a0 / q, 1)])
}

/// `det(X − xY)` as coefficients `(a₂, a₁, a₀)` in x.
fn pencil_det(x: &CMatrix, y: &CMatrix) -> (C64, C64, C64) {
    let (x11, x12, x21, x22) = (x.get(0, 0), x.get(0, 1), x.get(1, 0), x.get(1, 1));
    let (y11, y12, y21, y22) = (y.get(0, 0), y.get(0, 1), y.get(1, 0), y.get(1, 1));
    let a2 = y11 * y22 - y12 * y21;
    let a1 = -(x11 * y22 + x22 * y11 - x12 * y21 - x21 * y12);
    let a0 = x11 * x22 - x12 * x21;
    (a2, a1, a0)
}

/// Unit kernel vector of a rank-one 2×2 matrix, phase fixed.
fn kernel(m: &CMatrix) -> Option<[C64; 2]> {
    let r0 = m.get(0, 0).norm_sqr() + m.get(0, 1).norm_sqr();
    let r1 = m.get(1, 0).norm_sqr() + m.get(1, 1).norm_sqr();
    let i = if r0 >= r1 { 0 } else { 1 };
    let mut k = normalize(&[m.get(i, 1), -m.get(i, 0)])?;
    fix_phase(&mut k);
    Some([k[0], k[1]])
}

/// Unit vectors annihilated by `A₂* − μA₁*` or `A₁* − νA₂*`, found from the
/// quadratic determinant equations.
pub fn compute_b_set(a1: &CMatrix, a2: &CMatrix) -> BSet {
    let (s1, s2) = (a1.adjoint(), a2.adjoint());
    let mut vectors: Vec<BVector> = Vec::new();
    let mut eigen_params = Vec::new();
    let mut degenerate = false;
    for (pencil, x, y) in [(Pencil::Mu, &s2, &s1), (Pencil::Nu, &s1, &s2)] {
        let (a2c, a1c, a0c) = pencil_det(x, y);
        let Some(roots) = quadratic_roots(a2c, a1c, a0c) else {
            degenerate = true;
            continue;
        };
        for (param, multiplicity) in roots {
            eigen_params.push((pencil, param));
            let m = x - &y.scale(param);
            if m.max_abs() <= ROOT_TOL * x.max_abs().max(y.max_abs()) {
                continue;
            }
            let Some(beta) = kernel(&m) else { continue };
            let duplicate = vectors.iter().any(|b| inner(&b.beta, &beta).norm() >= 1.0 - 1e-9);
            if !duplicate {
                vectors.push(BVector {
                    beta,
                    pencil,
                    param,
                    multiplicity,
                });
            }
        }
    }
    BSet {
        vectors,
        eigen_params,
        degenerate,
    }
}

impl BVector {
    /// `‖(pencil) β‖`.
    pub fn residual(&self, a1: &CMatrix, a2: &CMatrix) -> f64 {
        let (s1, s2) = (a1.adjoint(), a2.adjoint());
        let m = match self.pencil {
            Pencil::Mu => &s2 - &s1.scale(self.param),
            Pencil::Nu => &s1 - &s2.scale(self.param),
        };
        matrix_core::vec_norm(&m.apply(&self.beta))
    }
}
