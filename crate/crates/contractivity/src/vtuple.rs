use matrix_core::{CMatrix, C64};
use serde::{Deserialize, Serialize};

use crate::ContractivityError;

/// An m-tuple `(V₁, …, V_m)` of p×q matrices. With `p = 1` the `V_i` are
/// the row vectors `𝐯_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawVTuple", into = "RawVTuple")]
pub struct VTuple {
    m: usize,
    p: usize,
    q: usize,
    vs: Vec<CMatrix>,
}

#[derive(Serialize, Deserialize)]
struct RawVTuple {
    m: usize,
    p: usize,
    q: usize,
    vs: Vec<CMatrix>,
}

impl TryFrom<RawVTuple> for VTuple {
    type Error = ContractivityError;

    fn try_from(raw: RawVTuple) -> Result<Self, ContractivityError> {
        if raw.vs.len() != raw.m {
            return Err(ContractivityError::Shape(format!(
                "m = {} but {} matrices were given",
                raw.m,
                raw.vs.len()
            )));
        }
        let v = VTuple::new(raw.vs)?;
        if (v.p, v.q) != (raw.p, raw.q) {
            return Err(ContractivityError::Shape(format!(
                "declared {}x{} but the matrices are {}x{}",
                raw.p, raw.q, v.p, v.q
            )));
        }
        Ok(v)
    }
}

impl From<VTuple> for RawVTuple {
    fn from(v: VTuple) -> Self {
        RawVTuple {
            m: v.m,
            p: v.p,
            q: v.q,
            vs: v.vs,
        }
    }
}

impl VTuple {
    pub fn new(vs: Vec<CMatrix>) -> Result<Self, ContractivityError> {
        let Some(first) = vs.first() else {
            return Err(ContractivityError::Shape("at least one matrix is required".into()));
        };
        let (p, q) = first.shape();
        if let Some((i, v)) = vs.iter().enumerate().find(|(_, v)| v.shape() != (p, q)) {
            let (r, c) = v.shape();
            return Err(ContractivityError::Shape(format!("matrix {i} is {r}x{c}, expected {p}x{q}")));
        }
        Ok(VTuple { m: vs.len(), p, q, vs })
    }

    /// Tuple of row vectors `𝐯_i` (so `p = 1`).
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self, ContractivityError> {
        Self::new(rows.iter().map(|r| CMatrix::row(r)).collect())
    }

    /// `𝐯_i = v_i e_i`, the diagonal tuple used by the two-parameter families.
    pub fn diagonal(v: &[C64]) -> Self {
        let m = v.len();
        let rows: Vec<Vec<C64>> = (0..m)
            .map(|i| (0..m).map(|j| if i == j { v[i] } else { C64::new(0.0, 0.0) }).collect())
            .collect();
        Self::from_rows(&rows).expect("square diagonal")
    }

    pub fn zeros(m: usize, p: usize, q: usize) -> Self {
        Self::new(vec![CMatrix::zeros(p, q); m]).expect("uniform shape")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn vs(&self) -> &[CMatrix] {
        &self.vs
    }

    /// Row `i` when `p = 1`.
    pub fn row(&self, i: usize) -> Vec<C64> {
        self.vs[i].entries()
    }
}
