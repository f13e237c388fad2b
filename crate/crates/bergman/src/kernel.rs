use matrix_core::{op_norm, CMatrix, C64};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use crate::BergmanError;

/// The domains with an implemented Bergman kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelKind {
    /// Unit ball of r×s matrices; points are flattened row-major.
    MatrixBall { r: usize, s: usize },
    /// `{|z₂| < 1 − |z₁|²}` in C².
    Nil2,
    /// `{|z₂|² < (1 − |z₁|²)(1 − |z₃|²)}` in C³.
    Reinhardt3,
}

/// A kernel together with the exponent λ of `K^λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    #[serde(flatten)]
    pub kind: KernelKind,
    pub lambda: f64,
}

impl KernelSpec {
    pub fn new(kind: KernelKind, lambda: f64) -> Result<Self, BergmanError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(BergmanError::Input(format!("λ must be positive, got {lambda}")));
        }
        if let KernelKind::MatrixBall { r, s } = kind {
            if r == 0 || s == 0 {
                return Err(BergmanError::Input("matrix ball needs r, s ≥ 1".into()));
            }
        }
        Ok(KernelSpec { kind, lambda })
    }

    /// Number of complex coordinates.
    pub fn dim(&self) -> usize {
        match self.kind {
            KernelKind::MatrixBall { r, s } => r * s,
            KernelKind::Nil2 => 2,
            KernelKind::Reinhardt3 => 3,
        }
    }

    /// `p = r + s` for the matrix ball.
    pub fn genus(&self) -> Option<usize> {
        match self.kind {
            KernelKind::MatrixBall { r, s } => Some(r + s),
            _ => None,
        }
    }
}

/// Largest index per variable in the reinhardt3 series.
pub const SERIES_MAX_INDEX: usize = 60;
/// Relative size of the estimated series tail that is still accepted.
pub const SERIES_TAIL_TOL: f64 = 1e-12;
/// Evaluation region of the series: `|z₁|, |z₃| ≤ 0.8` and the domain inequality
/// holding with this margin.
pub const SERIES_MARGIN: f64 = 0.05;

fn check_point(spec: &KernelSpec, z: &[C64]) -> Result<(), BergmanError> {
    if z.len() != spec.dim() {
        return Err(BergmanError::Input(format!("point has {} coordinates, expected {}", z.len(), spec.dim())));
    }
    let inside = match spec.kind {
        KernelKind::MatrixBall { r, s } => {
            let m = CMatrix::new(r, s, z.to_vec())?;
            op_norm(&m) < 1.0
        }
        KernelKind::Nil2 => z[1].norm() < 1.0 - z[0].norm_sqr(),
        KernelKind::Reinhardt3 => {
            let (a, b, c) = (z[0].norm_sqr(), z[1].norm_sqr(), z[2].norm_sqr());
            a.sqrt() <= 0.8 && c.sqrt() <= 0.8 && (1.0 - a) * (1.0 - c) - b >= SERIES_MARGIN
        }
    };
    if !inside {
        return Err(BergmanError::OutsideDomain(z.to_vec()));
    }
    Ok(())
}

/// The base kernel `𝑩(z, w)` (λ = 1), normalized so that `𝑩(0, 0) = 1` for
/// the matrix ball and reinhardt3. For nil2 the displayed form gives `𝑩(0,0) = 3`.
pub fn base_kernel(spec: &KernelSpec, z: &[C64], w: &[C64]) -> Result<C64, BergmanError> {
    check_point(spec, z)?;
    check_point(spec, w)?;
    let one = C64::new(1.0, 0.0);
    Ok(match spec.kind {
        KernelKind::MatrixBall { r, s } => {
            let zm = CMatrix::new(r, s, z.to_vec())?;
            let wm = CMatrix::new(r, s, w.to_vec())?;
            let d = (&CMatrix::identity(r) - &(&zm * &wm.adjoint())).det();
            d.powi(-((r + s) as i32))
        }
        KernelKind::Nil2 => {
            let x = one - z[0] * w[0].conj();
            let y = z[1] * w[1].conj();
            (3.0 * x * x + y) / (x * x - y).powi(3)
        }
        KernelKind::Reinhardt3 => reinhardt3_series(z, w)?,
    })
}

/// `𝑩(z, w)^λ` on the principal branch.
pub fn kernel_eval(spec: &KernelSpec, z: &[C64], w: &[C64]) -> Result<C64, BergmanError> {
    let k = base_kernel(spec, z, w)?;
    Ok(if spec.lambda == 1.0 { k } else { (spec.lambda * k.ln()).exp() })
}

/// `(m + 1) / (4 β(n+1, m+2) β(p+1, m+2))`, with `1/β(k+1, m+2) = (m+2)·C(k+m+2, k)`.
fn coefficients() -> &'static Vec<f64> {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let nmax = SERIES_MAX_INDEX;
        // inv_beta[m][k] = 1/β(k+1, m+2)
        let inv_beta: Vec<Vec<f64>> = (0..=nmax)
            .map(|m| {
                let mut row = Vec::with_capacity(nmax + 1);
                let mut binom = 1.0;
                for k in 0..=nmax {
                    if k > 0 {
                        binom *= (k + m + 2) as f64 / k as f64;
                    }
                    row.push((m + 2) as f64 * binom);
                }
                row
            })
            .collect();
        let mut t = Vec::with_capacity((nmax + 1).pow(3));
        for n in 0..=nmax {
            for m in 0..=nmax {
                for p in 0..=nmax {
                    t.push((m + 1) as f64 / 4.0 * inv_beta[m][n] * inv_beta[m][p]);
                }
            }
        }
        t
    })
}

fn powers(x: C64) -> Vec<C64> {
    let mut out = Vec::with_capacity(SERIES_MAX_INDEX + 1);
    let mut acc = C64::new(1.0, 0.0);
    for _ in 0..=SERIES_MAX_INDEX {
        out.push(acc);
        acc *= x;
    }
    out
}

/// Truncated series `Σ c(n,m,p) (z₁w̄₁)ⁿ (z₂w̄₂)^m (z₃w̄₃)^p`, summed in fixed
/// index order. The tail is estimated from the last two index shells.
fn reinhardt3_series(z: &[C64], w: &[C64]) -> Result<C64, BergmanError> {
    let nmax = SERIES_MAX_INDEX;
    let c = coefficients();
    let (p1, p2, p3) = (powers(z[0] * w[0].conj()), powers(z[1] * w[1].conj()), powers(z[2] * w[2].conj()));
    let mut sum = C64::new(0.0, 0.0);
    let (mut last, mut before) = (0.0, 0.0);
    let mut idx = 0;
    for n in 0..=nmax {
        for m in 0..=nmax {
            let a = p1[n] * p2[m];
            for p in 0..=nmax {
                let term = c[idx] * a * p3[p];
                idx += 1;
                sum += term;
                let shell = n.max(m).max(p);
                if shell == nmax {
                    last += term.norm();
                } else if shell == nmax - 1 {
                    before += term.norm();
                }
            }
        }
    }
    let tail = if last == 0.0 {
        0.0
    } else {
        let q = last / before;
        if q >= 1.0 {
            f64::INFINITY
        } else {
            last * q / (1.0 - q)
        }
    };
    if tail > SERIES_TAIL_TOL * sum.norm() {
        return Err(BergmanError::Truncation { tail });
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use matrix_core::c;

    fn zero(n: usize) -> Vec<C64> {
        vec![c(0.0, 0.0); n]
    }

    #[test]
    fn values_at_origin() {
        let mb = KernelSpec::new(KernelKind::MatrixBall { r: 1, s: 1 }, 1.0).unwrap();
        assert_eq!(kernel_eval(&mb, &zero(1), &zero(1)).unwrap(), c(1.0, 0.0));
        let n2 = KernelSpec::new(KernelKind::Nil2, 1.0).unwrap();
        assert_eq!(kernel_eval(&n2, &zero(2), &zero(2)).unwrap(), c(3.0, 0.0));
        let r3 = KernelSpec::new(KernelKind::Reinhardt3, 1.0).unwrap();
        assert!((kernel_eval(&r3, &zero(3), &zero(3)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }

    /// Summing the Beta series in closed form: with `xₖ = zₖw̄ₖ`,
    /// `P = (1 − x₁)(1 − x₃)` and `u = x₂/P`, the kernel is `(2 + u)/(2(1 − u)⁴P³)`.
    fn reinhardt3_closed(z: &[C64], w: &[C64]) -> C64 {
        let one = c(1.0, 0.0);
        let x: Vec<C64> = z.iter().zip(w).map(|(a, b)| a * b.conj()).collect();
        let p = (one - x[0]) * (one - x[2]);
        let u = x[1] / p;
        (2.0 + u) / (2.0 * (one - u).powi(4) * p.powi(3))
    }

    #[test]
    fn reinhardt3_series_matches_summed_form() {
        let r3 = KernelSpec::new(KernelKind::Reinhardt3, 1.0).unwrap();
        let pts = [
            vec![c(0.2, 0.1), c(0.1, -0.2), c(-0.3, 0.05)],
            vec![c(0.0, 0.3), c(0.25, 0.0), c(0.1, 0.1)],
        ];
        for z in &pts {
            for w in &pts {
                let s = kernel_eval(&r3, z, w).unwrap();
                let cf = reinhardt3_closed(z, w);
                assert!((s - cf).norm() < 1e-10 * cf.norm(), "{s} vs {cf}");
            }
        }
    }

    #[test]
    fn series_near_the_boundary_reports_tail() {
        let r3 = KernelSpec::new(KernelKind::Reinhardt3, 1.0).unwrap();
        let z = vec![c(0.5, 0.0), c(0.6, 0.0), c(0.5, 0.0)];
        match kernel_eval(&r3, &z, &z) {
            Err(BergmanError::Truncation { tail }) => assert!(tail > 0.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn outside_points_rejected() {
        let n2 = KernelSpec::new(KernelKind::Nil2, 1.0).unwrap();
        let z = vec![c(0.8, 0.0), c(0.5, 0.0)];
        assert!(matches!(kernel_eval(&n2, &z, &z), Err(BergmanError::OutsideDomain(_))));
        assert!(KernelSpec::new(KernelKind::Nil2, 0.0).is_err());
        assert!(KernelSpec::new(KernelKind::MatrixBall { r: 0, s: 1 }, 1.0).is_err());
    }

    #[test]
    fn power_of_the_kernel() {
        let mb = KernelSpec::new(KernelKind::MatrixBall { r: 1, s: 1 }, 0.3).unwrap();
        let z = vec![c(0.5, 0.0)];
        let k = kernel_eval(&mb, &z, &z).unwrap();
        assert!((k.re - 0.75f64.powf(-0.6)).abs() < 1e-14);
    }
}
