//! Closed forms for the special domains `(I₂, E₁₂)` and `(E₁₁, E₁₂, E₂₂)`,
//! and the two embedding norms `‖P_A^{(k)}(V)‖`, `‖P_{Aᵗ}^{(k)}(V)‖`.

use domains::DomainSpec;
use matrix_core::{inner, kron, op_norm, vec_norm, CMatrix, C64};
use serde::{Deserialize, Serialize};

use crate::ContractivityError;

/// Slack of every closed-form verdict.
pub const BOUNDARY_TOL: f64 = 1e-8;

/// Contractivity of `L_V` on `(I₂, E₁₂)` for the rows `𝐯₁, 𝐯₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IE12Verdict {
    /// Exact verdict `‖L_V‖ ≤ 1`.
    pub contractive: bool,
    pub linear_map_norm: f64,
    /// `1 − ‖L_V‖²`
    pub attained_infimum: f64,
    /// `(a + b + √((a−b)² + c²))²`
    pub lhs: f64,
    /// `4√((a−b)² + c²)`
    pub rhs: f64,
    /// Verdict `lhs ≤ rhs` of the quadratic-root criterion.
    pub criterion_contractive: bool,
}

/// With `a = ‖𝐯₁‖²`, `b = ‖𝐯₂‖²/4`, `c = |⟨𝐯₁,𝐯₂⟩|` the dual unit sphere of
/// `(I₂, E₁₂)` reduces to a quarter circle and
/// `‖L_V‖² = max_θ a cos²θ + b(1 + sin θ)² + c cos θ (1 + sin θ)`.
///
/// The criterion `lhs ≤ rhs` is reported too. It is exact on the
/// boundary examples but is not equivalent to `‖L_V‖ ≤ 1` in general, so the
/// verdict comes from the quarter-circle maximum.
pub fn contractive_closed_i_e12(v1: [C64; 2], v2: [C64; 2]) -> IE12Verdict {
    let a = vec_norm(&v1).powi(2);
    let b = vec_norm(&v2).powi(2) / 4.0;
    let c = inner(&v1, &v2).norm();
    let f = |t: f64| {
        let (s, co) = t.sin_cos();
        a * co * co + b * (1.0 + s).powi(2) + c * co * (1.0 + s)
    };
    let norm_sq = maximize_on(f, 0.0, std::f64::consts::FRAC_PI_2);
    let root = ((a - b).powi(2) + c * c).sqrt();
    let lhs = (a + b + root).powi(2);
    let rhs = 4.0 * root;
    IE12Verdict {
        contractive: 1.0 - norm_sq >= -BOUNDARY_TOL,
        linear_map_norm: norm_sq.sqrt(),
        attained_infimum: 1.0 - norm_sq,
        lhs,
        rhs,
        criterion_contractive: lhs <= rhs + BOUNDARY_TOL,
    }
}

/// Maximizes a smooth function on `[lo, hi]`: dense scan, then golden section
/// on the bracket around the best sample.
fn maximize_on(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    const N: usize = 2048;
    let h = (hi - lo) / N as f64;
    let (mut k_best, mut best) = (0, f(lo));
    for k in 1..=N {
        let v = f(lo + k as f64 * h);
        if v > best {
            (k_best, best) = (k, v);
        }
    }
    let (mut x0, mut x1) = (
        lo + k_best.saturating_sub(1) as f64 * h,
        lo + (k_best + 1).min(N) as f64 * h,
    );
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let (l, r) = (x1 - g * (x1 - x0), x0 + g * (x1 - x0));
        if f(l) >= f(r) {
            x1 = r;
        } else {
            x0 = l;
        }
    }
    best.max(f(0.5 * (x0 + x1)))
}

/// Complete-contractivity test on `(I₂, E₁₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompleteIE12 {
    /// `2‖𝐯₁‖² + ‖𝐯₂‖² + √(‖𝐯₂‖⁴ − 4|⟨𝐯₁,𝐯₂⟩|²)`, absent when the radicand is negative.
    pub minus_sign_value: Option<f64>,
    pub radicand_negative: bool,
    /// `2‖𝐯₁‖² + ‖𝐯₂‖² + √(‖𝐯₂‖⁴ + 4|⟨𝐯₁,𝐯₂⟩|²)`, which equals `2·tensor_norm²`.
    pub plus_sign_value: f64,
    pub tensor_norm: f64,
    /// Ground-truth verdict `tensor_norm ≤ 1`.
    pub completely_contractive: bool,
    /// The minus-sign value gives a different verdict (or none).
    pub discrepancy: bool,
}

/// `‖I₂⊗𝐯₁ + E₁₂⊗𝐯₂‖²` is the top eigenvalue of the 2×2 Gram matrix
/// `[[‖𝐯₁‖² + ‖𝐯₂‖², ⟨𝐯₂,𝐯₁⟩], [⟨𝐯₁,𝐯₂⟩, ‖𝐯₁‖²]]`, whose discriminant carries a
/// plus sign. Both signs are reported; the verdict uses the assembled σ_max.
pub fn complete_closed_i_e12(v1: [C64; 2], v2: [C64; 2]) -> CompleteIE12 {
    let n1 = vec_norm(&v1).powi(2);
    let n2 = vec_norm(&v2).powi(2);
    let c2 = inner(&v1, &v2).norm_sqr();
    let radicand = n2 * n2 - 4.0 * c2;
    let minus_sign_value = (radicand >= 0.0).then(|| 2.0 * n1 + n2 + radicand.sqrt());
    let plus_sign_value = 2.0 * n1 + n2 + (n2 * n2 + 4.0 * c2).sqrt();
    let m = &kron(&CMatrix::identity(2), &CMatrix::row(&v1)) + &kron(&CMatrix::unit(2, 2, 0, 1), &CMatrix::row(&v2));
    let tn = op_norm(&m);
    let completely_contractive = tn <= 1.0 + BOUNDARY_TOL;
    let discrepancy = match minus_sign_value {
        Some(v) => (v <= 2.0 + 2.0 * BOUNDARY_TOL) != completely_contractive,
        None => true,
    };
    CompleteIE12 {
        minus_sign_value,
        radicand_negative: radicand < 0.0,
        plus_sign_value,
        tensor_norm: tn,
        completely_contractive,
        discrepancy,
    }
}

/// Contractivity on `(E₁₁, E₁₂, E₂₂)` for the diagonal tuple `𝐯_k = v_kk e_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diag3Verdict {
    /// Exact verdict: `max_k |v_kk| ≤ 1`.
    pub contractive: bool,
    /// `|v₁₁|²(1 − |v₃₃|²)`
    pub lhs: f64,
    /// `|v₂₂|² − |v₃₃|²`
    pub rhs: f64,
    /// Verdict `lhs ≥ rhs` of the displayed inequality.
    pub criterion_contractive: bool,
}

/// `L_V` is diagonal here, and the coordinate functionals `z ↦ z_k` all have
/// norm one on the upper-triangular ball, so `‖L_V‖ = max_k |v_kk|`. The
/// inequality `|v₁₁|²(1−|v₃₃|²) ≥ |v₂₂|²−|v₃₃|²` is reported alongside; it is
/// sufficient but not necessary.
pub fn contractive_closed_diag3(v11: C64, v22: C64, v33: C64) -> Diag3Verdict {
    let (a, b, c) = (v11.norm_sqr(), v22.norm_sqr(), v33.norm_sqr());
    let lhs = a * (1.0 - c);
    let rhs = b - c;
    Diag3Verdict {
        contractive: a.max(b).max(c) <= 1.0 + BOUNDARY_TOL,
        lhs,
        rhs,
        criterion_contractive: lhs >= rhs - BOUNDARY_TOL,
    }
}

/// `max(|v₁₁|² + |v₂₂|², |v₃₃|²) ≤ 1`, i.e. `‖Σ A_k ⊗ 𝐯_k‖ ≤ 1`.
pub fn complete_closed_diag3(v11: C64, v22: C64, v33: C64) -> (bool, f64) {
    let value = (v11.norm_sqr() + v22.norm_sqr()).max(v33.norm_sqr());
    (value <= 1.0 + BOUNDARY_TOL, value)
}

/// `‖A₁⊗V₁ + A₂⊗V₂‖`, or with `A_iᵗ` in place of `A_i` when `transposed`.
pub fn embedding_norm_pair(
    d: &DomainSpec,
    v1: &CMatrix,
    v2: &CMatrix,
    transposed: bool,
) -> Result<f64, ContractivityError> {
    if d.m() != 2 || d.n() != 2 {
        return Err(ContractivityError::Shape(format!("need a 2x2 pair, got m = {}, n = {}", d.m(), d.n())));
    }
    if !v1.is_square() || v1.shape() != v2.shape() {
        return Err(ContractivityError::Shape(format!(
            "V1 is {:?}, V2 is {:?}; need equal square shapes",
            v1.shape(),
            v2.shape()
        )));
    }
    let (a1, a2) = if transposed {
        (d.mat(0).transpose(), d.mat(1).transpose())
    } else {
        (d.mat(0).clone(), d.mat(1).clone())
    };
    Ok(op_norm(&(&kron(&a1, v1) + &kron(&a2, v2))))
}

/// Closed form for `A₁ = diag(1, d₂)`, `A₂ = [[1, b], [c, 0]]` and V supported
/// on its first row (`𝐯₁`, `𝐯₂` being those rows). The block matrix has two
/// nonzero rows `(𝐯₁+𝐯₂, b𝐯₂)` and `(c𝐯₂, d₂𝐯₁)`, and the norm is the square
/// root of the top eigenvalue `x = (p + √(p² − 4q))/2` of their Gram matrix.
/// Transposing swaps `b` and `c`.
pub fn embedding_norm_row_supported(d2: C64, b: C64, c: C64, v1: &[C64], v2: &[C64], transposed: bool) -> f64 {
    let (b, c) = if transposed { (c, b) } else { (b, c) };
    let v3: Vec<C64> = v1.iter().zip(v2).map(|(x, y)| x + y).collect();
    let (n1, n2, n3) = (vec_norm(v1).powi(2), vec_norm(v2).powi(2), vec_norm(&v3).powi(2));
    let g11 = n3 + b.norm_sqr() * n2;
    let g22 = c.norm_sqr() * n2 + d2.norm_sqr() * n1;
    let g12 = c.conj() * inner(&v3, v2) + b * d2.conj() * inner(v2, v1);
    let p = g11 + g22;
    let q = g11 * g22 - g12.norm_sqr();
    let x = (p + (p * p - 4.0 * q).max(0.0).sqrt()) / 2.0;
    x.sqrt()
}

/// True when the `A_i` can be diagonalized by one pair of unitaries, i.e.
/// the products `A_i A_j*` commute pairwise and so do the `A_i* A_j`.
pub fn simultaneously_diagonalizable(d: &DomainSpec) -> bool {
    let scale = d.mats().iter().map(|a| a.frobenius()).fold(0.0, f64::max).max(1.0);
    let tol = 1e-9 * scale.powi(4);
    let commute = |prods: &[CMatrix]| {
        prods.iter().enumerate().all(|(i, x)| {
            prods[i + 1..].iter().all(|y| (&(x * y) - &(y * x)).max_abs() <= tol)
        })
    };
    let mut left = Vec::new();
    let mut right = Vec::new();
    for a in d.mats() {
        for b in d.mats() {
            left.push(a * &b.adjoint());
            right.push(&a.adjoint() * b);
        }
    }
    commute(&left) && commute(&right)
}
