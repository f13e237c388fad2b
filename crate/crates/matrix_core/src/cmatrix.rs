use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::MatrixError;

/// Double precision complex scalar.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix with at least one row and one column and only
/// finite entries.
///
/// The JSON form is a list of rows, each a list of `[re, im]` pairs.
#[derive(Clone, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

impl CMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty);
        }
        if entries.len() != rows * cols {
            return Err(MatrixError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Self::from_dmatrix(DMatrix::from_row_slice(rows, cols, &entries))
    }

    /// Wraps a nalgebra matrix after checking shape and finiteness.
    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self, MatrixError> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(MatrixError::Empty);
        }
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(MatrixError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(CMatrix(m))
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        let mut entries = Vec::with_capacity(r * c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(MatrixError::Ragged {
                    row: i,
                    expected: c,
                    got: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(r, c, entries)
    }

    /// Convenience constructor for real matrices given as nested slices.
    ///
    /// Panics on ragged or empty input; intended for literals.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let nested: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&nested).expect("well-formed real literal")
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        CMatrix(DMatrix::from_fn(rows, cols, f))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        CMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "empty matrix");
        CMatrix(DMatrix::identity(n, n))
    }

    /// Matrix unit `E_ij` (zero-based indices) of the given shape.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m.0[(i, j)] = C64::new(1.0, 0.0);
        m
    }

    pub fn diag(d: &[C64]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { d[i] } else { C64::new(0.0, 0.0) })
    }

    /// Column vector.
    pub fn column(v: &[C64]) -> Self {
        Self::from_fn(v.len(), 1, |i, _| v[i])
    }

    /// Row vector.
    pub fn row(v: &[C64]) -> Self {
        Self::from_fn(1, v.len(), |_, j| v[j])
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.0[(i, j)] = z;
    }

    /// Row-major copy of the entries.
    pub fn entries(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        CMatrix(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        CMatrix(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        CMatrix(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix(self.0.map(|z| z * s))
    }

    pub fn scale_re(&self, s: f64) -> Self {
        CMatrix(self.0.map(|z| z * s))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn frobenius(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols(), "vector length");
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> C64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if self.rows() == 2 {
            let m = &self.0;
            return m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        }
        self.0.clone().determinant()
    }

    /// Hermitian defect `‖M - M*‖_F`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.0 - self.0.adjoint())
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Copies the `rows x cols` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        CMatrix(self.0.view((r0, c0), (rows, cols)).into_owned())
    }

    /// Assembles a block matrix from a grid of blocks. Blocks in a row share
    /// their row count and blocks in a column share their column count.
    pub fn from_blocks(grid: &[Vec<CMatrix>]) -> Result<Self, MatrixError> {
        let heights: Vec<usize> = grid.iter().map(|r| r[0].rows()).collect();
        let widths: Vec<usize> = grid[0].iter().map(|b| b.cols()).collect();
        for (bi, row) in grid.iter().enumerate() {
            if row.len() != widths.len() {
                return Err(MatrixError::Dimension(format!("block row {bi} has {} blocks", row.len())));
            }
            for (bj, b) in row.iter().enumerate() {
                if b.rows() != heights[bi] || b.cols() != widths[bj] {
                    return Err(MatrixError::Dimension(format!(
                        "block ({bi},{bj}) is {}x{}, expected {}x{}",
                        b.rows(),
                        b.cols(),
                        heights[bi],
                        widths[bj]
                    )));
                }
            }
        }
        let mut out = DMatrix::zeros(heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                out.view_mut((r0, c0), (heights[bi], widths[bj])).copy_from(&b.0);
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        Ok(CMatrix(out))
    }

    /// Is every entry within `tol` of the corresponding entry of `other`?
    pub fn approx_eq(&self, other: &CMatrix, tol: f64) -> bool {
        self.shape() == other.shape() && (self - other).max_abs() <= tol
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "  ")?;
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<&CMatrix> for &CMatrix {
            type Output = CMatrix;
            fn $m(self, rhs: &CMatrix) -> CMatrix {
                CMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $tr<CMatrix> for CMatrix {
            type Output = CMatrix;
            fn $m(self, rhs: CMatrix) -> CMatrix {
                CMatrix(self.0 $op rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix(-&self.0)
    }
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let nested: Vec<Vec<[f64; 2]>> = (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| [self.0[(i, j)].re, self.0[(i, j)].im]).collect())
            .collect();
        nested.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let nested: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let rows: Vec<Vec<C64>> = nested
            .into_iter()
            .map(|r| r.into_iter().map(|[re, im]| C64::new(re, im)).collect())
            .collect();
        CMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}
