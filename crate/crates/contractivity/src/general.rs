use domains::DomainSpec;
use matrix_core::optim::{bloch_vector, fibonacci_bloch, nelder_mead, reals_from_complex, unit_from_reals, NmOptions};
use matrix_core::random::random_unit_vector;
use matrix_core::{kron, op_norm, CMatrix, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{ContractivityError, VTuple};

/// Which evaluation produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Numeric,
}

/// Verdicts and witness data for one `(D, V)` query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractivityReport {
    pub contractive: bool,
    pub completely_contractive_on_pa: bool,
    /// `‖L_V‖`
    pub linear_map_norm: f64,
    /// `‖Σ A_i ⊗ V_i‖`
    pub tensor_norm: f64,
    /// Minimizing unit vector: `β` for row tuples, `u` otherwise.
    pub witness_beta: Vec<C64>,
    /// The paired unit vector `v` for general p×q tuples.
    pub witness_dual: Option<Vec<C64>>,
    /// Minimum of the criterion, `1 − ‖L_V‖²`.
    pub attained_infimum: f64,
    pub method: Method,
    /// False when a local refinement hit its iteration cap.
    pub converged: bool,
    pub tolerance: f64,
}

/// Search budget of [`contractive_general_with`].
#[derive(Debug, Clone, Copy)]
pub struct GeneralOptions {
    /// Verdict slack: contractive means infimum `≥ −tol`.
    pub tol: f64,
    /// Number of lattice (or sampled) starting points.
    pub lattice: usize,
    /// Number of best lattice points refined by Nelder–Mead.
    pub starts: usize,
    /// Seed for the sampled sphere when the lattice is not available.
    pub seed: u64,
}

impl Default for GeneralOptions {
    fn default() -> Self {
        GeneralOptions {
            tol: 1e-8,
            lattice: 4096,
            starts: 8,
            seed: 0x5eed,
        }
    }
}

pub(crate) fn check_dims(d: &DomainSpec, v: &VTuple) -> Result<(), ContractivityError> {
    if d.m() != v.m() {
        return Err(ContractivityError::Shape(format!(
            "domain has {} matrices but the tuple has {}",
            d.m(),
            v.m()
        )));
    }
    Ok(())
}

/// `‖A₁⊗V₁ + ⋯ + A_m⊗V_m‖_op`.
pub fn tensor_norm(d: &DomainSpec, v: &VTuple) -> Result<f64, ContractivityError> {
    check_dims(d, v)?;
    Ok(op_norm(&tensor_sum(d.mats(), v.vs())))
}

pub(crate) fn tensor_sum(a: &[CMatrix], v: &[CMatrix]) -> CMatrix {
    let mut acc = kron(&a[0], &v[0]);
    for (ai, vi) in a.iter().zip(v).skip(1) {
        acc = &acc + &kron(ai, vi);
    }
    acc
}

/// Deterministic minimization over a sphere parametrization.
struct SphereSearch<'a, F: Fn(&[f64]) -> f64 + Sync> {
    objective: &'a F,
    starts: Vec<Vec<f64>>,
}

impl<F: Fn(&[f64]) -> f64 + Sync> SphereSearch<'_, F> {
    fn run(&self, keep: usize) -> (f64, Vec<f64>, bool) {
        let mut scored: Vec<(f64, usize)> = self
            .starts
            .par_iter()
            .enumerate()
            .map(|(k, x)| ((self.objective)(x), k))
            .collect();
        // ties resolved by the lowest index
        scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let opts = NmOptions {
            step: 0.05,
            ..NmOptions::default()
        };
        let refined: Vec<_> = scored
            .iter()
            .take(keep)
            .collect::<Vec<_>>()
            .par_iter()
            .map(|(_, k)| nelder_mead(self.objective, &self.starts[*k], &opts))
            .collect();
        let converged = refined.iter().all(|r| r.converged);
        let mut best = (scored[0].0, self.starts[scored[0].1].clone());
        for r in refined {
            if r.value < best.0 {
                best = (r.value, r.x);
            }
        }
        (best.0, best.1, converged)
    }
}

/// Decides contractivity of `L_V` (equivalently of `ρ_V`) numerically.
pub fn contractive_general(d: &DomainSpec, v: &VTuple) -> Result<ContractivityReport, ContractivityError> {
    contractive_general_with(d, v, &GeneralOptions::default())
}

/// For row tuples, `B_j = Σ_i v_ij A_i` and the criterion is the minimum over
/// unit `β` of `λ_min(I − G(β))`, `G_ij = ⟨B_j*β, B_i*β⟩`. For general p×q
/// tuples the criterion is `1 − ‖Σ_i ⟨V_i u, v⟩ A_i‖²` minimized over unit
/// `u ∈ C^q`, `v ∈ C^p`. Both equal `1 − ‖L_V‖²`.
pub fn contractive_general_with(
    d: &DomainSpec,
    v: &VTuple,
    opts: &GeneralOptions,
) -> Result<ContractivityReport, ContractivityError> {
    check_dims(d, v)?;
    let tn = op_norm(&tensor_sum(d.mats(), v.vs()));
    let n = d.n();
    let (infimum, witness, dual, converged) = if v.p() == 1 {
        let q = v.q();
        let b_adj: Vec<CMatrix> = (0..q)
            .map(|j| {
                let mut bj = CMatrix::zeros(n, n);
                for (ai, vi) in d.mats().iter().zip(v.vs()) {
                    bj = &bj + &ai.scale(vi.get(0, j));
                }
                bj.adjoint()
            })
            .collect();
        let criterion = |beta: &[C64]| {
            let cols: Vec<Vec<C64>> = b_adj.iter().map(|b| b.apply(beta)).collect();
            let y = CMatrix::from_fn(n, q, |i, j| cols[j][i]);
            1.0 - op_norm(&y).powi(2)
        };
        if n == 2 {
            let f = |x: &[f64]| criterion(&bloch_vector(x[0], x[1]));
            let starts = fibonacci_bloch(opts.lattice).into_iter().map(|(t, th)| vec![t, th]).collect();
            let (val, x, conv) = SphereSearch { objective: &f, starts }.run(opts.starts);
            let mut beta = bloch_vector(x[0], x[1]).to_vec();
            matrix_core::fix_phase(&mut beta);
            (val, beta, None, conv)
        } else {
            let f = |x: &[f64]| unit_from_reals(x).map(|b| criterion(&b)).unwrap_or(1.0);
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let starts = (0..opts.lattice)
                .map(|_| reals_from_complex(&random_unit_vector(n, &mut rng)))
                .collect();
            let (val, x, conv) = SphereSearch { objective: &f, starts }.run(opts.starts);
            let mut beta = unit_from_reals(&x).expect("nonzero refinement");
            matrix_core::fix_phase(&mut beta);
            (val, beta, None, conv)
        }
    } else {
        let (p, q) = (v.p(), v.q());
        let criterion = |u: &[C64], w: &[C64]| {
            let coef: Vec<C64> = v.vs().iter().map(|vi| matrix_core::inner(&vi.apply(u), w)).collect();
            let mut m = CMatrix::zeros(n, n);
            for (ai, ci) in d.mats().iter().zip(&coef) {
                m = &m + &ai.scale(*ci);
            }
            1.0 - op_norm(&m).powi(2)
        };
        let f = |x: &[f64]| match (unit_from_reals(&x[..2 * q]), unit_from_reals(&x[2 * q..])) {
            (Some(u), Some(w)) => criterion(&u, &w),
            _ => 1.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let starts = (0..opts.lattice)
            .map(|_| {
                let mut x = reals_from_complex(&random_unit_vector(q, &mut rng));
                x.extend(reals_from_complex(&random_unit_vector(p, &mut rng)));
                x
            })
            .collect();
        let (val, x, conv) = SphereSearch { objective: &f, starts }.run(opts.starts);
        let mut u = unit_from_reals(&x[..2 * q]).expect("nonzero refinement");
        let mut w = unit_from_reals(&x[2 * q..]).expect("nonzero refinement");
        matrix_core::fix_phase(&mut u);
        matrix_core::fix_phase(&mut w);
        (val, u, Some(w), conv)
    };
    Ok(ContractivityReport {
        contractive: infimum >= -opts.tol,
        completely_contractive_on_pa: tn <= 1.0 + opts.tol,
        linear_map_norm: (1.0 - infimum).max(0.0).sqrt(),
        tensor_norm: tn,
        witness_beta: witness,
        witness_dual: dual,
        attained_infimum: infimum,
        method: Method::Numeric,
        converged,
        tolerance: opts.tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use matrix_core::c;

    fn rows(r: &[[f64; 2]]) -> VTuple {
        VTuple::from_rows(&r.iter().map(|x| vec![c(x[0], 0.0), c(x[1], 0.0)]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn zero_tuple_is_contractive_with_unit_infimum() {
        let d = DomainSpec::i_e12();
        let r = contractive_general(&d, &VTuple::zeros(2, 1, 2)).unwrap();
        assert!(r.contractive);
        assert!((r.attained_infimum - 1.0).abs() < 1e-12);
        assert_eq!(r.tensor_norm, 0.0);
    }

    #[test]
    fn boundary_example_has_zero_infimum() {
        let d = DomainSpec::i_e12();
        let v = rows(&[[std::f64::consts::FRAC_1_SQRT_2, 0.0], [0.0, 1.0]]);
        let r = contractive_general(&d, &v).unwrap();
        assert!(r.contractive && r.converged);
        assert!(r.attained_infimum.abs() < 1e-7, "{}", r.attained_infimum);
        // attained at β = (1, 0)
        assert!((r.witness_beta[0].norm() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn non_contractive_example() {
        let d = DomainSpec::i_e12();
        let r = contractive_general(&d, &rows(&[[0.9, 0.0], [0.0, 1.0]])).unwrap();
        assert!(!r.contractive);
        assert!(r.attained_infimum < -0.1);
    }

    #[test]
    fn tensor_norm_examples() {
        let e = DomainSpec::euclidean_pair();
        let v = rows(&[[std::f64::consts::FRAC_1_SQRT_2, 0.0], [0.0, 1.0]]);
        assert!((tensor_norm(&e, &v).unwrap() - 1.5f64.sqrt()).abs() < 1e-12);
        let v = rows(&[[0.3, -0.2], [0.5, 0.7]]);
        let expect = (0.09f64 + 0.04 + 0.25 + 0.49).sqrt();
        assert!((tensor_norm(&e, &v).unwrap() - expect).abs() < 1e-12);
        assert!(tensor_norm(&e, &VTuple::zeros(3, 1, 2)).is_err());
    }

    #[test]
    fn general_shape_uses_both_spheres() {
        // V_i = A_i on a diagonal domain: ‖L_V‖ = 1 exactly.
        let d = DomainSpec::bidisc_pair();
        let v = VTuple::new(d.mats().to_vec()).unwrap();
        let r = contractive_general(&d, &v).unwrap();
        assert!(r.witness_dual.is_some());
        assert!(r.attained_infimum.abs() < 1e-8 && r.contractive);
        assert!(r.tensor_norm >= r.linear_map_norm - 1e-8);
    }
}
