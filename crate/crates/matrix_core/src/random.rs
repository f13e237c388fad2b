//! Seeded random matrices for tests and multistart sampling.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::cmatrix::{CMatrix, C64};

/// Standard complex Gaussian scalar (real and imaginary parts each N(0, 1/2)).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix of independent standard complex Gaussian entries.
pub fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        entries.push(complex_normal(rng));
    }
    CMatrix::new(rows, cols, entries).expect("finite gaussian draw")
}

/// Haar-distributed unitary: QR of a complex Gaussian with the phases of
/// the diagonal of R moved into Q.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = complex_gaussian(n, n, rng).into_dmatrix();
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let phases = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            let d = r[(i, i)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                C64::new(1.0, 0.0)
            }
        } else {
            C64::new(0.0, 0.0)
        }
    });
    CMatrix::from_dmatrix(q * phases).expect("finite unitary")
}

/// Uniform point on the unit sphere of C^n.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n).map(|_| complex_normal(rng)).collect();
        if let Some(u) = crate::normalize(&v) {
            return u;
        }
    }
}
