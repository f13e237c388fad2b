use contractivity::{embedding_norm_pair, simultaneously_diagonalizable, tensor_norm, VTuple};
use domains::DomainSpec;
use matrix_core::{c, hermitian_eig, op_norm, CMatrix, C64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

use crate::{compute_b_set, BSet, CounterexampleError, GTable};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// λ runs over `10^(k/per_decade)` for `k` in `k_min..=k_max`.
    pub k_min: i32,
    pub k_max: i32,
    pub per_decade: u32,
    /// Every B-set vector must exceed the minimum of g by this much.
    pub separation: f64,
    /// The complete test must fall below `−tol`.
    pub tol: f64,
    /// Bisection stops once the bracket on `|v|` is this narrow.
    pub v_tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            k_min: -60,
            k_max: 60,
            per_decade: 20,
            separation: 1e-3,
            tol: 1e-8,
            v_tol: 1e-10,
        }
    }
}

/// A candidate `(v₀, λ₀)` with the evidence for and against it. The tuple is
/// `𝐯₁ = (v₀, 0)`, `𝐯₂ = (0, λ₀v₀)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub v0: C64,
    pub lambda0: f64,
    pub beta0: [C64; 2],
    pub g_min: f64,
    pub g_converged: bool,
    /// `min_β 1 − |v₀|²‖A₁*β‖² − |λ₀v₀|²‖A₂*β‖²`.
    pub complete_test: f64,
    pub tensor_norm: f64,
    /// g at each B-set vector.
    pub b_set_g: Vec<f64>,
    pub separated: bool,
    /// A counterexample: g_min ≈ 0, complete test negative with the tensor norm
    /// above `1 + tol`, B-set separated.
    pub verdict: bool,
}

impl SearchResult {
    pub fn tuple(&self) -> VTuple {
        let z = c(0.0, 0.0);
        VTuple::from_rows(&[vec![self.v0, z], vec![z, self.v0 * self.lambda0]]).expect("2x2 rows")
    }
}

/// Row-supported `V` separating `‖P_A^{(2)}(V)‖` from `‖P_{Aᵗ}^{(2)}(V)‖`,
/// used when the pencils degenerate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransposeGap {
    pub v1_row: [C64; 2],
    pub v2_row: [C64; 2],
    pub norm_pa: f64,
    pub norm_pa_transposed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchOutcome {
    Certificate(SearchResult),
    TransposeGap(TransposeGap),
}

fn check_pair(d: &DomainSpec) -> Result<(), CounterexampleError> {
    if d.m() != 2 || d.n() != 2 {
        return Err(CounterexampleError::Shape(format!(
            "the search needs two 2x2 matrices, got m = {}, n = {}",
            d.m(),
            d.n()
        )));
    }
    Ok(())
}

/// Evaluates the certificate conditions at `(v₀, λ₀)`.
pub fn certify(
    d: &DomainSpec,
    table: &GTable,
    bset: &BSet,
    v0: f64,
    lambda0: f64,
    opts: &SearchOptions,
) -> Result<SearchResult, CounterexampleError> {
    check_pair(d)?;
    let (a1, a2) = (d.mat(0), d.mat(1));
    let s = v0 * v0;
    let t = lambda0 * lambda0 * s;
    let gm = table.min(s, t);
    let q = &(a1 * &a1.adjoint()).scale_re(s) + &(a2 * &a2.adjoint()).scale_re(t);
    let complete_test = 1.0 - hermitian_eig(&q).map_err(contractivity::ContractivityError::from)?.max();
    let b_set_g: Vec<f64> = bset.vectors.iter().map(|b| table.eval(s, t, &b.beta)).collect();
    let separated = b_set_g.iter().all(|g| *g >= gm.value + opts.separation);
    let mut res = SearchResult {
        v0: c(v0, 0.0),
        lambda0,
        beta0: gm.beta,
        g_min: gm.value,
        g_converged: gm.converged,
        complete_test,
        tensor_norm: 0.0,
        b_set_g,
        separated,
        verdict: false,
    };
    res.tensor_norm = tensor_norm(d, &res.tuple())?;
    // the tensor-norm margin matches the P_A verdict of the contractivity check
    res.verdict = gm.value.abs() <= 1e-6 && complete_test < -opts.tol && res.tensor_norm > 1.0 + opts.tol && separated;
    Ok(res)
}

/// Runs [`search_with`] with the default λ grid.
pub fn search(d: &DomainSpec) -> Result<SearchOutcome, CounterexampleError> {
    search_with(d, &SearchOptions::default())
}

/// For each λ on the grid, bisects `|v|` up to the admissibility bound
/// `min(1/‖A₁‖, 1/(λ‖A₂‖))` for the root of `min_β g_{(v,λv)}(β) = 0` (the
/// minimum is non-increasing in `|v|`), then checks the certificate there.
/// The smallest certifying λ wins.
pub fn search_with(d: &DomainSpec, opts: &SearchOptions) -> Result<SearchOutcome, CounterexampleError> {
    check_pair(d)?;
    if simultaneously_diagonalizable(d) {
        return Err(CounterexampleError::NoCounterexampleExpected);
    }
    let (a1, a2) = (d.mat(0), d.mat(1));
    let bset = compute_b_set(a1, a2);
    if bset.degenerate {
        return transpose_gap(d).map(SearchOutcome::TransposeGap);
    }
    let table = GTable::new(a1, a2);
    let (n1, n2) = (op_norm(a1), op_norm(a2));
    let lambda_at = |k: i32| 10f64.powf(k as f64 / opts.per_decade as f64);
    let ks: Vec<i32> = (opts.k_min..=opts.k_max).collect();
    const CHUNK: usize = 8;
    for chunk in ks.chunks(CHUNK) {
        let found: Vec<Option<SearchResult>> = chunk
            .par_iter()
            .map(|&k| {
                let lambda = lambda_at(k);
                let v0 = root_in_v(&table, lambda, (1.0 / n1).min(1.0 / (lambda * n2)), opts.v_tol);
                certify(d, &table, &bset, v0, lambda, opts).ok().filter(|r| r.verdict)
            })
            .collect();
        if let Some(r) = found.into_iter().flatten().next() {
            return Ok(SearchOutcome::Certificate(r));
        }
    }
    Err(CounterexampleError::Exhausted {
        lambda_min: lambda_at(opts.k_min),
        lambda_max: lambda_at(opts.k_max),
        scanned: ks.len(),
    })
}

/// Largest sampled `|v| ≤ vmax` with `g_min ≥ 0`, to within `v_tol`.
fn root_in_v(table: &GTable, lambda: f64, vmax: f64, v_tol: f64) -> f64 {
    let g = |v: f64| table.min(v * v, lambda * lambda * v * v).value;
    if g(vmax) >= 0.0 {
        return vmax;
    }
    let (mut lo, mut hi) = (0.0, vmax);
    while hi - lo > v_tol {
        let mid = 0.5 * (lo + hi);
        if g(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Scans a fixed set of row-supported tuples for the largest difference
/// between the two embedding norms.
fn transpose_gap(d: &DomainSpec) -> Result<TransposeGap, CounterexampleError> {
    let z = c(0.0, 0.0);
    let h = c(FRAC_1_SQRT_2, 0.0);
    let dirs = [
        [c(1.0, 0.0), z],
        [z, c(1.0, 0.0)],
        [h, h],
        [h, c(0.0, FRAC_1_SQRT_2)],
        [h, -h],
    ];
    let pad = |v: &[C64; 2]| CMatrix::from_rows(&[v.to_vec(), vec![z, z]]).expect("2x2");
    let mut best: Option<(f64, TransposeGap)> = None;
    for v1 in &dirs {
        for v2 in &dirs {
            let v1s = [v1[0] * FRAC_1_SQRT_2, v1[1] * FRAC_1_SQRT_2];
            let a = embedding_norm_pair(d, &pad(&v1s), &pad(v2), false)?;
            let b = embedding_norm_pair(d, &pad(&v1s), &pad(v2), true)?;
            if best.as_ref().is_none_or(|(g, _)| (a - b).abs() > *g + 1e-12) {
                best = Some((
                    (a - b).abs(),
                    TransposeGap {
                        v1_row: v1s,
                        v2_row: *v2,
                        norm_pa: a,
                        norm_pa_transposed: b,
                    },
                ));
            }
        }
    }
    Ok(best.expect("nonempty scan").1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_e12_certificate_lies_on_the_boundary_family() {
        let SearchOutcome::Certificate(r) = search(&DomainSpec::i_e12()).unwrap() else {
            panic!("expected a certificate")
        };
        assert!(r.verdict && r.g_min.abs() <= 1e-6 && r.complete_test < -1e-8);
        // min over x = |β₁|² of 1 − s − λ²s x + λ²s² x² vanishes iff s = 1 − λ²/4
        let s = r.v0.norm_sqr();
        assert!((s - (1.0 - r.lambda0 * r.lambda0 / 4.0)).abs() < 1e-8, "{s} {}", r.lambda0);
        assert!(r.tensor_norm > 1.0 + 1e-8);
    }

    #[test]
    fn three_quarters_at_lambda_one_certifies() {
        let d = DomainSpec::i_e12();
        let table = GTable::new(d.mat(0), d.mat(1));
        let bset = compute_b_set(d.mat(0), d.mat(1));
        let r = certify(&d, &table, &bset, 0.75f64.sqrt(), 1.0, &SearchOptions::default()).unwrap();
        assert!(r.verdict);
        assert!((r.complete_test + 0.5).abs() < 1e-12);
        assert!(r.g_min.abs() < 1e-10);
        assert!((r.b_set_g[0] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn diagonal_pair_has_no_counterexample() {
        let d = DomainSpec::new(vec![
            CMatrix::diag(&[c(1.0, 0.0), c(2.0, 0.0)]),
            CMatrix::diag(&[c(3.0, 0.0), c(1.0, 0.0)]),
        ])
        .unwrap();
        assert!(matches!(search(&d), Err(CounterexampleError::NoCounterexampleExpected)));
    }

    #[test]
    fn euclidean_pair_takes_the_transpose_route() {
        let SearchOutcome::TransposeGap(g) = search(&DomainSpec::euclidean_pair()).unwrap() else {
            panic!("expected the transpose comparison")
        };
        assert!((g.norm_pa - g.norm_pa_transposed).abs() > 1e-3);
    }

    #[test]
    fn exhausted_scan_reports_the_interval() {
        let opts = SearchOptions {
            k_min: -60,
            k_max: -58,
            ..SearchOptions::default()
        };
        match search_with(&DomainSpec::i_e12(), &opts) {
            Err(CounterexampleError::Exhausted { lambda_min, scanned, .. }) => {
                assert!((lambda_min - 1e-3).abs() < 1e-15);
                assert_eq!(scanned, 3);
            }
            other => panic!("{other:?}"),
        }
    }
}
