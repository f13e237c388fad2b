//! λ-thresholds for the homomorphisms induced by the localization at 0.
//!
//! With `A(0)ᵗ` diagonal, the tuple is `𝐯_k = a_kk e_k` and every `a_kk²` has
//! the form `c_k/λ`, so each criterion reduces to a rational inequality in
//! `x = 1/λ`.

use contractivity::{
    complete_closed_diag3, complete_closed_i_e12, contractive_closed_diag3, contractive_closed_i_e12,
};
use matrix_core::C64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::BergmanError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "example", rename_all = "snake_case")]
pub enum ThresholdExample {
    MatrixBall { r: usize, s: usize },
    Nil2,
    Reinhardt3,
}

impl std::str::FromStr for ThresholdExample {
    type Err = BergmanError;

    /// `nil2`, `reinhardt3`, or `matrix_ball:R:S`.
    fn from_str(s: &str) -> Result<Self, BergmanError> {
        match s {
            "nil2" => Ok(ThresholdExample::Nil2),
            "reinhardt3" => Ok(ThresholdExample::Reinhardt3),
            _ => {
                let parts: Vec<&str> = s.split(':').collect();
                match parts.as_slice() {
                    ["matrix_ball", r, s] => {
                        let r: usize = r.parse().map_err(|_| BergmanError::Input(format!("bad r in {s}")))?;
                        let s: usize = s.parse().map_err(|_| BergmanError::Input(format!("bad s in {s}")))?;
                        if r == 0 || s == 0 {
                            return Err(BergmanError::Input("matrix ball needs r, s ≥ 1".into()));
                        }
                        Ok(ThresholdExample::MatrixBall { r, s })
                    }
                    _ => Err(BergmanError::Input(format!("unknown example {s:?}"))),
                }
            }
        }
    }
}

impl std::fmt::Display for ThresholdExample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ThresholdExample::MatrixBall { r, s } => write!(f, "matrix_ball:{r}:{s}"),
            ThresholdExample::Nil2 => write!(f, "nil2"),
            ThresholdExample::Reinhardt3 => write!(f, "reinhardt3"),
        }
    }
}

/// A critical λ, computed exactly, beside the value stated in the source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Critical {
    pub test: String,
    pub computed: String,
    pub computed_value: f64,
    pub stated: Option<String>,
    pub stated_value: Option<f64>,
    pub agree: Option<bool>,
    pub note: String,
}

fn critical(test: &str, computed: Rational64, stated: Option<Rational64>, note: &str) -> Critical {
    Critical {
        test: test.into(),
        computed: computed.to_string(),
        computed_value: to_f64(computed),
        stated: stated.map(|s| s.to_string()),
        stated_value: stated.map(to_f64),
        agree: stated.map(|s| s == computed),
        note: note.into(),
    }
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Verdicts at one λ plus the exact criticals of the example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub example: ThresholdExample,
    pub lambda: f64,
    /// `|a_kk|²` at this λ.
    pub a_squared: Vec<f64>,
    /// Exact contractivity of `ρ_V`.
    pub contractive: bool,
    /// The source's displayed contractivity criterion, where it differs from the exact test.
    pub criterion_contractive: Option<bool>,
    /// `‖Σ A_k ⊗ 𝐯_k‖ ≤ 1`.
    pub pa_contractive: bool,
    pub criticals: Vec<Critical>,
}

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// nil2 curvature at 0 from the `T_ij` display: `C(0) = 1`, `D(0) = 3`.
fn nil2_t0() -> (Rational64, Rational64) {
    let (c0, d0) = (r(1, 1), r(3, 1));
    let t11 = r(6, 1) * (c0.recip() - d0.recip());
    let t22 = r(3, 1) * (c0.recip() / c0 + d0.recip() / d0);
    (t11, t22)
}

/// The `c_k` in `a_kk² = c_k/λ`.
pub fn a_squared_coefficients(example: ThresholdExample) -> Vec<Rational64> {
    match example {
        ThresholdExample::MatrixBall { r: rr, s } => vec![r(1, (rr + s) as i64); rr * s],
        ThresholdExample::Nil2 => {
            let (t11, t22) = nil2_t0();
            vec![t11.recip(), t22.recip()]
        }
        ThresholdExample::Reinhardt3 => vec![r(1, 3), r(2, 9), r(1, 3)],
    }
}

/// Exact critical values.
pub fn criticals(example: ThresholdExample) -> Vec<Critical> {
    let c = a_squared_coefficients(example);
    match example {
        ThresholdExample::MatrixBall { r: rr, s } => {
            let p = (rr + s) as i64;
            vec![
                critical("contractive", r(1, p), Some(r(1, p)), "ν = λp ≥ 1"),
                critical("pa_contractive", r(s as i64, p), Some(r(s as i64, p)), "ν = λp ≥ s"),
            ]
        }
        ThresholdExample::Nil2 => {
            // (2α/λ − 1)² ≤ 1 − γ/λ  ⟺  λ ≥ 4α²/(4α − γ)
            let (alpha, gamma) = (c[0], c[1]);
            let derived = r(4, 1) * alpha * alpha / (r(4, 1) * alpha - gamma);
            // the printed a₂₂ = 3/√(10λ) means γ = 9/10
            let gamma_lit = r(9, 10);
            let literal = r(4, 1) * alpha * alpha / (r(4, 1) * alpha - gamma_lit);
            vec![
                critical(
                    "contractive",
                    derived,
                    Some(r(5, 16)),
                    "(2a11²−1)² ≤ 1−a22² with a11² = 1/(4λ), a22² = 3/(10λ)",
                ),
                critical(
                    "contractive_printed_a22",
                    literal,
                    Some(r(5, 16)),
                    "same criterion with the printed a22 = 3/√(10λ)",
                ),
                critical("pa_contractive", alpha + gamma, Some(r(11, 20)), "a11² + a22² ≤ 1"),
            ]
        }
        ThresholdExample::Reinhardt3 => {
            let (c1, c2, c3) = (c[0], c[1], c[2]);
            let stated = r(1, 4);
            let criterion = c1 * c3 / (c1 - c2 + c3);
            let exact = c1.max(c2).max(c3);
            vec![
                critical("contractive_criterion", criterion, Some(stated), "a11²(1−a33²) ≥ a22² − a33²"),
                critical("contractive", exact, Some(stated), "exact: max a_kk² ≤ 1"),
                critical("pa_contractive", (c1 + c2).max(c3), Some(r(5, 9)), "max(a11²+a22², a33²) ≤ 1"),
            ]
        }
    }
}

/// Verdicts at `lambda` from the closed forms, and the criticals.
pub fn threshold_check(example: ThresholdExample, lambda: f64) -> Result<ThresholdReport, BergmanError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(BergmanError::Input(format!("λ must be positive, got {lambda}")));
    }
    let a2: Vec<f64> = a_squared_coefficients(example).into_iter().map(|c| to_f64(c) / lambda).collect();
    let re = |x: f64| C64::new(x.sqrt(), 0.0);
    let z = C64::new(0.0, 0.0);
    let (contractive, criterion_contractive, pa_contractive) = match example {
        ThresholdExample::MatrixBall { s, .. } => {
            // ‖L_V‖² = max a² over the trace-norm unit ball; row sums for P_A
            let a = a2[0];
            (a <= 1.0, None, s as f64 * a <= 1.0)
        }
        ThresholdExample::Nil2 => {
            let v = contractive_closed_i_e12([re(a2[0]), z], [z, re(a2[1])]);
            let t = complete_closed_i_e12([re(a2[0]), z], [z, re(a2[1])]);
            (v.contractive, Some(v.criterion_contractive), t.completely_contractive)
        }
        ThresholdExample::Reinhardt3 => {
            let v = contractive_closed_diag3(re(a2[0]), re(a2[1]), re(a2[2]));
            let (cc, _) = complete_closed_diag3(re(a2[0]), re(a2[1]), re(a2[2]));
            (v.contractive, Some(v.criterion_contractive), cc)
        }
    };
    Ok(ThresholdReport {
        example,
        lambda,
        a_squared: a2,
        contractive,
        criterion_contractive,
        pa_contractive,
        criticals: criticals(example),
    })
}
