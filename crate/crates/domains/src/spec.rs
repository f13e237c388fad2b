use matrix_core::{singular_values, CMatrix, C64};
use serde::{Deserialize, Serialize};

use crate::DomainError;

/// Linear-independence threshold on the singular values of the stacked
/// coordinates, relative to the largest one.
pub const INDEPENDENCE_TOL: f64 = 1e-10;

/// An m-tuple `(A₁, …, A_m)` of n×n matrices; its unit ball is
/// `{z : ‖Σ z_i A_i‖_op < 1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDomainSpec", into = "RawDomainSpec")]
pub struct DomainSpec {
    m: usize,
    n: usize,
    mats: Vec<CMatrix>,
}

#[derive(Serialize, Deserialize)]
struct RawDomainSpec {
    m: usize,
    n: usize,
    mats: Vec<CMatrix>,
}

impl TryFrom<RawDomainSpec> for DomainSpec {
    type Error = DomainError;

    fn try_from(raw: RawDomainSpec) -> Result<Self, DomainError> {
        if raw.mats.len() != raw.m {
            return Err(DomainError::Shape(format!(
                "m = {} but {} matrices were given",
                raw.m,
                raw.mats.len()
            )));
        }
        let d = DomainSpec::new(raw.mats)?;
        if d.n != raw.n {
            return Err(DomainError::Shape(format!("n = {} but the matrices are {}x{}", raw.n, d.n, d.n)));
        }
        Ok(d)
    }
}

impl From<DomainSpec> for RawDomainSpec {
    fn from(d: DomainSpec) -> Self {
        RawDomainSpec {
            m: d.m,
            n: d.n,
            mats: d.mats,
        }
    }
}

impl DomainSpec {
    /// Validates shapes and linear independence.
    pub fn new(mats: Vec<CMatrix>) -> Result<Self, DomainError> {
        let m = mats.len();
        if m == 0 {
            return Err(DomainError::Shape("at least one matrix is required".into()));
        }
        let n = mats[0].rows();
        for (i, a) in mats.iter().enumerate() {
            if a.shape() != (n, n) {
                let (r, c) = a.shape();
                return Err(DomainError::Shape(format!("matrix {i} is {r}x{c}, expected {n}x{n}")));
            }
        }
        let stacked = stack(&mats);
        let s = singular_values(&stacked);
        let smin = if m <= n * n { s[m - 1] } else { 0.0 };
        if s[0] <= matrix_core::ABS_FLOOR || smin <= INDEPENDENCE_TOL * s[0] {
            return Err(DomainError::Dependent);
        }
        Ok(DomainSpec { m, n, mats })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mats(&self) -> &[CMatrix] {
        &self.mats
    }

    pub fn mat(&self, i: usize) -> &CMatrix {
        &self.mats[i]
    }

    /// `(I₂, E₁₂)`, whose ball is `{|z₂| < 1 − |z₁|²}`.
    pub fn i_e12() -> Self {
        Self::new(vec![CMatrix::identity(2), CMatrix::unit(2, 2, 0, 1)]).expect("independent")
    }

    /// `(E₁₁, E₁₂)`, the Euclidean ball of C².
    pub fn euclidean_pair() -> Self {
        Self::new(vec![CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 0, 1)]).expect("independent")
    }

    /// `(E₁₁, E₂₂)`, the bidisc.
    pub fn bidisc_pair() -> Self {
        Self::new(vec![CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 1, 1)]).expect("independent")
    }

    /// `(E₁₁, E₁₂, E₂₂)` in C³.
    pub fn upper_triangular3() -> Self {
        Self::new(vec![
            CMatrix::unit(2, 2, 0, 0),
            CMatrix::unit(2, 2, 0, 1),
            CMatrix::unit(2, 2, 1, 1),
        ])
        .expect("independent")
    }

    /// The r×s matrix ball, coordinates `z_(ij)` in row-major order. Each
    /// `E_ij` is padded into a square matrix of size `max(r, s)`, which does
    /// not change any operator norm.
    pub fn matrix_ball(r: usize, s: usize) -> Result<Self, DomainError> {
        if r == 0 || s == 0 {
            return Err(DomainError::Shape("matrix ball needs r, s >= 1".into()));
        }
        let n = r.max(s);
        let mats = (0..r)
            .flat_map(|i| (0..s).map(move |j| CMatrix::unit(n, n, i, j)))
            .collect();
        Self::new(mats)
    }

    /// Replaces every `A_i` by `U A_i W`.
    pub fn conjugated(&self, u: &CMatrix, w: &CMatrix) -> Result<Self, DomainError> {
        Self::new(self.mats.iter().map(|a| &(u * a) * w).collect())
    }

    /// The transposed tuple `(A₁ᵗ, …, A_mᵗ)`.
    pub fn transposed(&self) -> Self {
        DomainSpec {
            m: self.m,
            n: self.n,
            mats: self.mats.iter().map(|a| a.transpose()).collect(),
        }
    }
}

/// Stacks the row-major coordinates of each matrix as a row.
pub(crate) fn stack(mats: &[CMatrix]) -> CMatrix {
    let rows: Vec<Vec<C64>> = mats.iter().map(|a| a.entries()).collect();
    CMatrix::from_rows(&rows).expect("equal sizes")
}
