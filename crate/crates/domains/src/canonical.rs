//! Canonical representatives of two-dimensional domains.
//!
//! Every independent pair of 2×2 matrices can be moved, by left and right
//! unitaries and an invertible change of coordinates, to
//! `Ã₁ ∈ {diag(1, d₂), diag(d₁, 1)}` and
//! `Ã₂ ∈ {antidiag(b, c), [[1, b], [c, 0]], [[0, b], [c, 1]]}` with one of
//! `b, c` real and nonnegative.

use matrix_core::optim::{nelder_mead, NmOptions};
use matrix_core::{inverse, op_norm, CMatrix, C64};
use serde::{Deserialize, Serialize};

use crate::equiv::linear_equivalent;
use crate::{DomainError, DomainSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum A1Kind {
    /// `diag(1, d₂)`
    Diag1D2,
    /// `diag(d₁, 1)`
    DiagD1One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum A2Kind {
    /// `[[0, b], [c, 0]]`
    Antidiag,
    /// `[[1, b], [c, 0]]`
    UpperUnit,
    /// `[[0, b], [c, 1]]`
    LowerUnit,
}

/// Canonical pair plus the data that carries the input onto it:
/// `Ã_i = Σ_j R_ji · U A_j V`, hence `‖w‖_Ã = ‖R w‖_A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalForm2D {
    pub a1_kind: A1Kind,
    pub a2_kind: A2Kind,
    /// The free diagonal entry (`d₂` or `d₁` depending on `a1_kind`).
    pub d: C64,
    pub b: C64,
    pub c: C64,
    /// `R`
    pub transform: CMatrix,
    /// `(U, V)`
    pub unitaries: (CMatrix, CMatrix),
    /// The span contains no invertible matrix (`det(z₁A₁ + z₂A₂) ≡ 0`).
    pub degenerate_span: bool,
}

impl CanonicalForm2D {
    /// Rebuilds `(Ã₁, Ã₂)` from the parameters.
    pub fn matrices(&self) -> [CMatrix; 2] {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let a1 = match self.a1_kind {
            A1Kind::Diag1D2 => CMatrix::diag(&[one, self.d]),
            A1Kind::DiagD1One => CMatrix::diag(&[self.d, one]),
        };
        let (p, q) = match self.a2_kind {
            A2Kind::Antidiag => (zero, zero),
            A2Kind::UpperUnit => (one, zero),
            A2Kind::LowerUnit => (zero, one),
        };
        let a2 = CMatrix::from_rows(&[vec![p, self.b], vec![self.c, q]]).expect("2x2");
        [a1, a2]
    }

    /// The canonical pair as a domain.
    pub fn domain(&self) -> Result<DomainSpec, DomainError> {
        DomainSpec::new(self.matrices().to_vec())
    }

    /// Undoes the transform: returns `A_j = Σ_i (R⁻¹)_ij U* Ã_i V*`.
    pub fn pull_back(&self) -> Result<Vec<CMatrix>, DomainError> {
        let rinv = inverse(&self.transform).map_err(DomainError::Matrix)?;
        let [t1, t2] = self.matrices();
        let (u, v) = &self.unitaries;
        let raw = [&(&u.adjoint() * &t1) * &v.adjoint(), &(&u.adjoint() * &t2) * &v.adjoint()];
        Ok((0..2)
            .map(|j| &raw[0].scale(rinv.get(0, j)) + &raw[1].scale(rinv.get(1, j)))
            .collect())
    }
}

fn is_small(z: C64, scale: f64) -> bool {
    z.norm() <= 1e-12 * scale.max(1e-300)
}

/// Does `det(z₁A₁ + z₂A₂)` vanish identically?
pub fn degenerate_span(a1: &CMatrix, a2: &CMatrix) -> bool {
    let scale = op_norm(a1).max(op_norm(a2)).powi(2);
    let d1 = a1.det();
    let d2 = a2.det();
    let mixed = (a1 + a2).det() - d1 - d2;
    [d1, d2, mixed].iter().all(|&z| z.norm() <= 1e-10 * scale)
}

/// Reduces a 2×2 pair to canonical form.
///
/// `A₁` is diagonalized by its singular value decomposition and scaled so
/// the larger singular value becomes 1; `A₂` is then replaced by a suitable
/// combination. A final diagonal unitary makes `c` (or `b` when `c = 0`)
/// real and nonnegative.
pub fn canonicalize_2d(d: &DomainSpec) -> Result<CanonicalForm2D, DomainError> {
    if d.m() != 2 || d.n() != 2 {
        return Err(DomainError::Shape(format!(
            "canonical form needs m = n = 2, got m = {}, n = {}",
            d.m(),
            d.n()
        )));
    }
    let (a1, a2) = (d.mat(0), d.mat(1));
    let degenerate = degenerate_span(a1, a2);

    let svd = a1.as_dmatrix().clone().svd(true, true);
    let mut u = svd.u.expect("requested");
    let mut vt = svd.v_t.expect("requested");
    let mut sv = [svd.singular_values[0], svd.singular_values[1]];
    if sv[0] < sv[1] {
        u.swap_columns(0, 1);
        vt.swap_rows(0, 1);
        sv.swap(0, 1);
    }
    let ustar = CMatrix::from_dmatrix(u.adjoint()).map_err(DomainError::Matrix)?;
    let w = CMatrix::from_dmatrix(vt.adjoint()).map_err(DomainError::Matrix)?;
    let m2 = &(&ustar * a2) * &w;
    let sigma1 = sv[0];
    let d2 = sv[1] / sigma1;
    let (a, b, c, dd) = (m2.get(0, 0), m2.get(0, 1), m2.get(1, 0), m2.get(1, 1));
    let scale = op_norm(&m2);
    let one = C64::new(1.0, 0.0);

    // Ã₂ = r·Ã₁ + s·M₂ with Ã₁ = diag(1, d₂).
    let (r, s, kind) = if d2 > 1e-12 {
        let lead = a * d2 - dd;
        if is_small(lead, scale) {
            (-dd / d2, one, A2Kind::Antidiag)
        } else {
            let s = C64::new(d2, 0.0) / lead;
            (-s * dd / d2, s, A2Kind::UpperUnit)
        }
    } else if !is_small(dd, scale) {
        let s = one / dd;
        (-s * a, s, A2Kind::LowerUnit)
    } else {
        (-a, one, A2Kind::Antidiag)
    };
    let mut bt = s * b;
    let mut ct = s * c;

    // Conjugation by diag(1, e^{iφ}) sends b ↦ b e^{-iφ}, c ↦ c e^{iφ}.
    let phi = if ct.norm() > 1e-14 * scale.max(1.0) {
        -ct.arg()
    } else if bt.norm() > 0.0 {
        bt.arg()
    } else {
        0.0
    };
    let ph = C64::from_polar(1.0, phi);
    bt *= ph.conj();
    ct *= ph;
    if ct.norm() > 1e-14 * scale.max(1.0) {
        ct = C64::new(ct.norm(), 0.0);
    } else if bt.norm() > 0.0 {
        bt = C64::new(bt.norm(), 0.0);
    }
    let p = CMatrix::diag(&[one, ph]);
    let u_tot = &p * &ustar;
    let v_tot = &w * &p.adjoint();

    let transform = CMatrix::from_rows(&[vec![C64::new(1.0 / sigma1, 0.0), r / sigma1], vec![C64::new(0.0, 0.0), s]])
        .map_err(DomainError::Matrix)?;
    Ok(CanonicalForm2D {
        a1_kind: A1Kind::Diag1D2,
        a2_kind: kind,
        d: C64::new(d2, 0.0),
        b: bt,
        c: ct,
        transform,
        unitaries: (u_tot, v_tot),
        degenerate_span: degenerate,
    })
}

/// Linear chart onto the `(I₂, E₁₂)` domain: returns `T` with
/// `‖z‖_D = ‖T z‖_{(I₂,E₁₂)}` when `D` is equivalent to that pair.
///
/// Two routes are tried: an exact change of coordinates, and a search of
/// the span for a multiple of a unitary `W` followed by the canonical form
/// of `(W, ·)`, which must be `(I, τI + N)` with `N` nilpotent.
pub fn ie12_chart(d: &DomainSpec) -> Option<CMatrix> {
    if d.m() != 2 || d.n() != 2 {
        return None;
    }
    if let Some(r) = linear_equivalent(&DomainSpec::i_e12(), d) {
        return Some(r);
    }
    let (a1, a2) = (d.mat(0), d.mat(1));
    // L maps probe coordinates to the original ones.
    let mut candidates = vec![(a1.clone(), a2.clone(), CMatrix::identity(2))];
    candidates.push((a2.clone(), a1.clone(), CMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]])));
    if let Some(t) = unitary_direction(a1, a2) {
        let w = a1 + &a2.scale(t);
        let l = CMatrix::from_rows(&[vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)], vec![t, C64::new(1.0, 0.0)]])
            .ok()?;
        candidates.push((w, a2.clone(), l));
    }
    for (p1, p2, l) in candidates {
        let Ok(probe) = DomainSpec::new(vec![p1, p2]) else { continue };
        let Some(tp) = chart_from_canonical(&probe) else { continue };
        return Some(&tp * &inverse(&l).ok()?);
    }
    None
}

/// `T` for pairs whose first member is a multiple of a unitary.
fn chart_from_canonical(d: &DomainSpec) -> Option<CMatrix> {
    let cf = canonicalize_2d(d).ok()?;
    if (cf.d.norm() - 1.0).abs() > 1e-7 {
        return None;
    }
    // Ã₁ = I: the pair is (I, τI + N) and must have N nilpotent and nonzero.
    let [_, t2] = cf.matrices();
    let tau = t2.trace() / 2.0;
    let nil = &t2 - &CMatrix::identity(2).scale(tau);
    let nn = op_norm(&nil);
    if nn <= 1e-10 || op_norm(&(&nil * &nil)) > 1e-7 * nn * nn {
        return None;
    }
    let s = CMatrix::from_rows(&[vec![C64::new(1.0, 0.0), tau], vec![C64::new(0.0, 0.0), C64::new(nn, 0.0)]]).ok()?;
    Some(&s * &inverse(&cf.transform).ok()?)
}

/// Searches for `t` with `A₁ + tA₂` a multiple of a unitary by minimizing
/// the singular value gap `(σ₁ − σ₂)/(σ₁ + σ₂)`.
fn unitary_direction(a1: &CMatrix, a2: &CMatrix) -> Option<C64> {
    let gap = |x: &[f64]| {
        let m = a1 + &a2.scale(C64::new(x[0], x[1]));
        let s = matrix_core::singular_values(&m);
        if s[0] <= 1e-300 {
            return 1.0;
        }
        (s[0] - s[1]) / (s[0] + s[1])
    };
    let opts = NmOptions {
        step: 0.25,
        ..NmOptions::default()
    };
    let mut best: Option<(f64, Vec<f64>)> = None;
    for &re in &[-2.0, -0.5, 0.0, 0.5, 2.0] {
        for &im in &[-2.0, -0.5, 0.0, 0.5, 2.0] {
            let r = nelder_mead(&gap, &[re, im], &opts);
            if best.as_ref().is_none_or(|(v, _)| r.value < *v) {
                best = Some((r.value, r.x));
            }
        }
    }
    let (v, x) = best?;
    (v <= 1e-9).then(|| C64::new(x[0], x[1]))
}
