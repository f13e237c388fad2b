use matrix_core::optim::{nelder_mead, unit_from_reals, NmOptions};
use matrix_core::random::complex_normal;
use matrix_core::{op_norm, CMatrix, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::canonical::ie12_chart;
use crate::{DomainError, DomainSpec};

/// How to evaluate the dual norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualMethod {
    /// Piecewise closed form, only for domains linearly equivalent to `(I₂, E₁₂)`.
    ClosedX,
    /// Boundary sampling plus simplex refinement; any domain.
    Numeric,
}

/// Sampling budget of the numeric dual norm.
#[derive(Debug, Clone, Copy)]
pub struct DualOptions {
    pub samples: usize,
    pub refine: usize,
    pub seed: u64,
}

impl Default for DualOptions {
    fn default() -> Self {
        DualOptions {
            samples: 20_000,
            refine: 10,
            seed: 0x5eed,
        }
    }
}

fn check_len(d: &DomainSpec, z: &[C64]) -> Result<(), DomainError> {
    if z.len() != d.m() {
        return Err(DomainError::Shape(format!("point has length {}, expected {}", z.len(), d.m())));
    }
    if z.iter().any(|w| !(w.re.is_finite() && w.im.is_finite())) {
        return Err(DomainError::Shape("point has non-finite coordinates".into()));
    }
    Ok(())
}

/// `P_A(z) = z₁A₁ + ⋯ + z_mA_m`.
pub fn defining_polynomial(d: &DomainSpec, z: &[C64]) -> Result<CMatrix, DomainError> {
    check_len(d, z)?;
    Ok(combine(d.mats(), z))
}

pub(crate) fn combine(mats: &[CMatrix], z: &[C64]) -> CMatrix {
    let (r, c) = mats[0].shape();
    let mut out = CMatrix::zeros(r, c);
    for (a, &zi) in mats.iter().zip(z) {
        out = &out + &a.scale(zi);
    }
    out
}

/// `‖z‖_A = ‖Σ z_i A_i‖_op`.
pub fn domain_norm(d: &DomainSpec, z: &[C64]) -> Result<f64, DomainError> {
    Ok(op_norm(&defining_polynomial(d, z)?))
}

/// Closed form of the dual norm of `(I₂, E₁₂)` at `w = (α, β)`.
pub fn dual_norm_i_e12(alpha: C64, beta: C64) -> f64 {
    let (a, b) = (alpha.norm(), beta.norm());
    if b <= a / 2.0 {
        a
    } else {
        (a * a + 4.0 * b * b) / (4.0 * b)
    }
}

/// `sup { |Σ w_i z_i| : ‖z‖_A ≤ 1 }`.
pub fn dual_norm(d: &DomainSpec, w: &[C64], method: DualMethod) -> Result<f64, DomainError> {
    dual_norm_with(d, w, method, &DualOptions::default())
}

pub fn dual_norm_with(
    d: &DomainSpec,
    w: &[C64],
    method: DualMethod,
    opts: &DualOptions,
) -> Result<f64, DomainError> {
    check_len(d, w)?;
    match method {
        DualMethod::ClosedX => {
            let t = ie12_chart(d).ok_or(DomainError::UnsupportedDomain)?;
            // ‖z‖_D = ‖T z‖ in (I₂, E₁₂) coordinates, so the dual pulls back
            // through the inverse transpose.
            let tinv = matrix_core::inverse(&t).map_err(|_| DomainError::UnsupportedDomain)?;
            let pulled = tinv.transpose().apply(w);
            Ok(dual_norm_i_e12(pulled[0], pulled[1]))
        }
        DualMethod::Numeric => Ok(dual_norm_numeric(d, w, opts)),
    }
}

fn ratio(d: &DomainSpec, w: &[C64], x: &[f64]) -> f64 {
    match unit_from_reals(x) {
        Some(z) => {
            let nz = op_norm(&combine(d.mats(), &z));
            if nz <= matrix_core::ABS_FLOOR {
                return 0.0;
            }
            w.iter().zip(&z).map(|(a, b)| a * b).sum::<C64>().norm() / nz
        }
        None => 0.0,
    }
}

fn dual_norm_numeric(d: &DomainSpec, w: &[C64], opts: &DualOptions) -> f64 {
    if w.iter().all(|z| z.norm() == 0.0) {
        return 0.0;
    }
    let m = d.m();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut scored: Vec<(f64, Vec<f64>)> = Vec::with_capacity(opts.samples + 1);
    // The conjugate direction is the maximizer for the Euclidean pairing and a
    // good seed in general.
    let conj: Vec<f64> = w.iter().flat_map(|z| [z.re, -z.im]).collect();
    scored.push((ratio(d, w, &conj), conj));
    for _ in 0..opts.samples {
        let x: Vec<f64> = (0..m).flat_map(|_| {
            let z = complex_normal(&mut rng);
            [z.re, z.im]
        })
        .collect();
        scored.push((ratio(d, w, &x), x));
    }
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let neg = |x: &[f64]| -ratio(d, w, x);
    let nm = NmOptions {
        step: 0.1,
        ..NmOptions::default()
    };
    let mut best = scored[0].0;
    for (_, x0) in scored.iter().take(opts.refine) {
        let r = nelder_mead(&neg, x0, &nm);
        best = best.max(-r.value);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use matrix_core::c;

    #[test]
    fn norm_examples() {
        let e = DomainSpec::euclidean_pair();
        assert!((domain_norm(&e, &[c(3.0, 0.0), c(4.0, 0.0)]).unwrap() - 5.0).abs() < 1e-12);
        let b = DomainSpec::bidisc_pair();
        assert!((domain_norm(&b, &[c(0.3, 0.4), c(-0.2, 0.1)]).unwrap() - 0.5).abs() < 1e-12);
        let x = DomainSpec::i_e12();
        for &(p, q) in &[(0.3, 0.9), (-1.2, 0.4), (0.0, 2.0), (0.7, -0.1)] {
            let expect = (f64::abs(q) + (q * q + 4.0 * p * p).sqrt()) / 2.0;
            let got = domain_norm(&x, &[c(p, 0.0), c(q, 0.0)]).unwrap();
            assert!((got - expect).abs() < 1e-12);
        }
        assert!(domain_norm(&x, &[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn defining_polynomial_examples() {
        let x = DomainSpec::i_e12();
        let zero = defining_polynomial(&x, &[c(0.0, 0.0); 2]).unwrap();
        assert_eq!(zero, CMatrix::zeros(2, 2));
        let p = defining_polynomial(&x, &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(p, CMatrix::from_real(&[&[1.0, 1.0], &[0.0, 1.0]]));
    }

    #[test]
    fn dual_examples() {
        let x = DomainSpec::i_e12();
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        for (w, expect) in [([one, zero], 1.0), ([zero, one], 1.0), ([one, one], 1.25)] {
            let closed = dual_norm(&x, &w, DualMethod::ClosedX).unwrap();
            assert!((closed - expect).abs() < 1e-9);
            let numeric = dual_norm(&x, &w, DualMethod::Numeric).unwrap();
            assert!((numeric - expect).abs() < 1e-6, "{numeric} vs {expect}");
        }
    }

    #[test]
    fn closed_form_rejects_other_domains() {
        let e = DomainSpec::euclidean_pair();
        let w = [c(1.0, 0.0), c(0.0, 0.0)];
        assert_eq!(dual_norm(&e, &w, DualMethod::ClosedX), Err(DomainError::UnsupportedDomain));
    }

    #[test]
    fn euclidean_dual_is_euclidean() {
        let e = DomainSpec::euclidean_pair();
        let w = [c(0.6, 0.2), c(-0.3, 0.5)];
        let expect = matrix_core::vec_norm(&w);
        assert!((dual_norm(&e, &w, DualMethod::Numeric).unwrap() - expect).abs() < 1e-8);
    }
}
