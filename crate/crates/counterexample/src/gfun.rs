use matrix_core::optim::{bloch_vector, nelder_mead, NmOptions};
use matrix_core::{fix_phase, vec_norm, CMatrix, C64};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};

use crate::CounterexampleError;

/// `g_{(v,w)}` for the pair `(A₁, A₂)`: the determinant of `I − G(β)` where
/// `G` is the Gram matrix of `v̄A₁*β` and `w̄A₂*β`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GFunctionSpec {
    pub a1: CMatrix,
    pub a2: CMatrix,
    pub v: C64,
    pub w: C64,
}

impl GFunctionSpec {
    pub fn new(a1: CMatrix, a2: CMatrix, v: C64, w: C64) -> Result<Self, CounterexampleError> {
        if a1.shape() != (2, 2) || a2.shape() != (2, 2) {
            return Err(CounterexampleError::Shape(format!(
                "A1 is {:?}, A2 is {:?}; both must be 2x2",
                a1.shape(),
                a2.shape()
            )));
        }
        Ok(GFunctionSpec { a1, a2, v, w })
    }
}

/// Adjoint of a 2×2 matrix kept as plain entries for the inner loops.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Adj2([[C64; 2]; 2]);

impl Adj2 {
    pub(crate) fn of(a: &CMatrix) -> Self {
        let s = a.adjoint();
        Adj2([[s.get(0, 0), s.get(0, 1)], [s.get(1, 0), s.get(1, 1)]])
    }

    fn apply(&self, b: &[C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [m[0][0] * b[0] + m[0][1] * b[1], m[1][0] * b[0] + m[1][1] * b[1]]
    }
}

/// `(‖A₁*β‖², ‖A₂*β‖², |⟨A₂*β, A₁*β⟩|²)`
pub(crate) fn xyz(s1: &Adj2, s2: &Adj2, b: &[C64; 2]) -> [f64; 3] {
    let p = s1.apply(b);
    let q = s2.apply(b);
    let x = p[0].norm_sqr() + p[1].norm_sqr();
    let y = q[0].norm_sqr() + q[1].norm_sqr();
    let z = (q[0] * p[0].conj() + q[1] * p[1].conj()).norm_sqr();
    [x, y, z]
}

#[inline]
pub(crate) fn g_from(s: f64, t: f64, [x, y, z]: [f64; 3]) -> f64 {
    1.0 - s * x - t * y + s * t * (x * y - z)
}

/// `1 − |v|²‖A₁*β‖² − |w|²‖A₂*β‖² + |vw|²(‖A₁*β‖²‖A₂*β‖² − |⟨A₁A₂*β, β⟩|²)`.
pub fn g_eval(spec: &GFunctionSpec, beta: &[C64]) -> Result<f64, CounterexampleError> {
    let n = vec_norm(beta);
    if beta.len() != 2 || (n - 1.0).abs() > 1e-12 {
        return Err(CounterexampleError::NonUnit(n));
    }
    let b = [beta[0], beta[1]];
    let v = xyz(&Adj2::of(&spec.a1), &Adj2::of(&spec.a2), &b);
    Ok(g_from(spec.v.norm_sqr(), spec.w.norm_sqr(), v))
}

/// Global minimum of g and a minimizing unit vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GMin {
    pub value: f64,
    pub beta: [C64; 2],
    /// Bloch coordinates of `beta`, `β = (cos t, e^{iθ} sin t)`.
    pub t: f64,
    pub theta: f64,
    pub converged: bool,
}

/// `‖A₁*β‖²`, `‖A₂*β‖²` and the mixed term on a `t × θ` grid, so that g can be
/// scanned for any `(|v|², |w|²)` without redoing the matrix products.
#[derive(Debug, Clone)]
pub struct GTable {
    s1: Adj2,
    s2: Adj2,
    nt: usize,
    nth: usize,
    cells: Vec<[f64; 3]>,
}

impl GTable {
    pub const DEFAULT_SIZE: usize = 512;

    pub fn new(a1: &CMatrix, a2: &CMatrix) -> Self {
        Self::with_size(a1, a2, Self::DEFAULT_SIZE, Self::DEFAULT_SIZE)
    }

    /// `nt` values of `t` spanning `[0, π/2]` inclusive and `nth` values of `θ`
    /// in `[0, 2π)`.
    pub fn with_size(a1: &CMatrix, a2: &CMatrix, nt: usize, nth: usize) -> Self {
        let (s1, s2) = (Adj2::of(a1), Adj2::of(a2));
        let mut cells = Vec::with_capacity(nt * nth);
        for i in 0..nt {
            for j in 0..nth {
                let (t, th) = Self::coords(nt, nth, i, j);
                cells.push(xyz(&s1, &s2, &bloch_vector(t, th)));
            }
        }
        GTable { s1, s2, nt, nth, cells }
    }

    fn coords(nt: usize, nth: usize, i: usize, j: usize) -> (f64, f64) {
        (FRAC_PI_2 * i as f64 / (nt - 1) as f64, TAU * j as f64 / nth as f64)
    }

    /// g at a unit β for the given `|v|²`, `|w|²`.
    pub fn eval(&self, s: f64, t: f64, beta: &[C64; 2]) -> f64 {
        g_from(s, t, xyz(&self.s1, &self.s2, beta))
    }

    /// Minimum of g over the grid only.
    pub fn grid_min(&self, s: f64, t: f64) -> f64 {
        self.cells.iter().map(|c| g_from(s, t, *c)).fold(f64::INFINITY, f64::min)
    }

    /// Grid scan followed by Nelder–Mead from the lowest grid-local minima.
    pub fn min(&self, s: f64, t: f64) -> GMin {
        let vals: Vec<f64> = self.cells.iter().map(|c| g_from(s, t, *c)).collect();
        let (nt, nth) = (self.nt, self.nth);
        let at = |i: usize, j: usize| vals[i * nth + j];
        let mut minima: Vec<(f64, usize, usize)> = Vec::new();
        for i in 0..nt {
            for j in 0..nth {
                let v = at(i, j);
                let left = at(i, (j + nth - 1) % nth);
                let right = at(i, (j + 1) % nth);
                let up = if i > 0 { at(i - 1, j) } else { f64::INFINITY };
                let down = if i + 1 < nt { at(i + 1, j) } else { f64::INFINITY };
                if v <= left && v <= right && v <= up && v <= down {
                    minima.push((v, i, j));
                }
            }
        }
        minima.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
        // flat directions (t = 0 or π/2) produce whole rows of ties
        minima.dedup_by(|a, b| (a.0 - b.0).abs() <= 1e-12 && a.1 == b.1);
        let f = |x: &[f64]| self.eval(s, t, &bloch_vector(x[0], x[1]));
        let opts = NmOptions {
            step: FRAC_PI_2 / (nt - 1) as f64,
            ..NmOptions::default()
        };
        let (v0, i0, j0) = minima[0];
        let (t0, th0) = Self::coords(nt, nth, i0, j0);
        let mut best = (v0, t0, th0, true);
        for &(_, i, j) in minima.iter().take(4) {
            let (ti, thi) = Self::coords(nt, nth, i, j);
            let r = nelder_mead(&f, &[ti, thi], &opts);
            if r.value < best.0 {
                best = (r.value, r.x[0], r.x[1], r.converged);
            }
        }
        let (value, tb, thb, converged) = best;
        let mut beta = bloch_vector(tb, thb);
        fix_phase(&mut beta);
        // report canonical coordinates for the phase-fixed vector
        let t_can = beta[1].norm().atan2(beta[0].norm());
        let th_can = if beta[1].norm() > 0.0 { beta[1].arg().rem_euclid(TAU) } else { 0.0 };
        GMin {
            value,
            beta,
            t: t_can,
            theta: th_can,
            converged,
        }
    }
}

/// Global minimum of g over the unit sphere: 512×512 grid plus refinement.
pub fn g_min(spec: &GFunctionSpec) -> GMin {
    GTable::new(&spec.a1, &spec.a2).min(spec.v.norm_sqr(), spec.w.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use matrix_core::c;

    fn i_e12(v2: f64, w2: f64) -> GFunctionSpec {
        GFunctionSpec::new(
            CMatrix::identity(2),
            CMatrix::unit(2, 2, 0, 1),
            c(v2.sqrt(), 0.0),
            c(w2.sqrt(), 0.0),
        )
        .unwrap()
    }

    #[test]
    fn zero_weights_give_one() {
        let s = i_e12(0.0, 0.0);
        assert_eq!(g_eval(&s, &[c(0.6, 0.0), c(0.0, 0.8)]).unwrap(), 1.0);
        let m = g_min(&s);
        assert!((m.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn i_e12_reduces_to_quartic_in_beta1() {
        let s = i_e12(0.3, 0.5);
        let beta = [c(0.6, 0.0), c(0.0, 0.8)];
        let b1 = 0.36;
        let expect = 1.0 - 0.3 - 0.5 * b1 + 0.15 * b1 * b1;
        assert!((g_eval(&s, &beta).unwrap() - expect).abs() < 1e-15);
        let s = i_e12(0.75, 0.75);
        assert!((g_eval(&s, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap() - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn root_family_has_zero_minimum() {
        let m = g_min(&i_e12(0.75, 0.75));
        // 1-D oracle over |β₁|² = x: 1/4 − 3x/4 + 9x²/16
        let brute = (0..=100_000)
            .map(|k| {
                let x = k as f64 / 100_000.0;
                0.25 - 0.75 * x + 0.5625 * x * x
            })
            .fold(f64::INFINITY, f64::min);
        assert!(brute.abs() < 1e-9);
        assert!(m.value.abs() < 1e-10, "{}", m.value);
        assert!((m.beta[0].norm_sqr() - 2.0 / 3.0).abs() < 1e-5);
    }

    #[test]
    fn non_unit_beta_rejected() {
        assert!(g_eval(&i_e12(0.1, 0.1), &[c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(GFunctionSpec::new(CMatrix::identity(3), CMatrix::identity(2), c(0.0, 0.0), c(0.0, 0.0)).is_err());
    }
}
