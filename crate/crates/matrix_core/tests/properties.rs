use matrix_core::random::{complex_gaussian, random_unitary};
use matrix_core::{block_upper_norm, hermitian_eig, kron, op_norm, CMatrix, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn op_norm_is_unitarily_invariant(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let m = complex_gaussian(n, n, &mut r);
        let u = random_unitary(n, &mut r);
        let v = random_unitary(n, &mut r);
        let moved = &(&u * &m) * &v;
        prop_assert!((op_norm(&moved) - op_norm(&m)).abs() <= 1e-10 * op_norm(&m).max(1.0));
    }

    #[test]
    fn op_norm_is_multiplicative_on_kron(seed in any::<u64>(), p in 1usize..4, q in 1usize..4) {
        let mut r = rng(seed);
        let a = complex_gaussian(p, q, &mut r);
        let b = complex_gaussian(q, p, &mut r);
        let lhs = op_norm(&kron(&a, &b));
        let rhs = op_norm(&a) * op_norm(&b);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0));
    }
}

#[test]
fn block_norm_matches_assembled_matrix() {
    let mut r = rng(42);
    for trial in 0..1000 {
        let rows = 1 + trial % 4;
        let cols = 1 + (trial / 4) % 4;
        let a1 = matrix_core::random::complex_normal(&mut r);
        let a2 = matrix_core::random::complex_normal(&mut r);
        let b = complex_gaussian(rows, cols, &mut r);
        let full = CMatrix::from_blocks(&[
            vec![CMatrix::identity(rows).scale(a1), b.clone()],
            vec![CMatrix::zeros(cols, rows), CMatrix::identity(cols).scale(a2)],
        ])
        .unwrap();
        let closed = block_upper_norm(a1, a2, &b);
        assert!((closed - op_norm(&full)).abs() <= 1e-9, "trial {trial}");
    }
}

fn char_poly_roots_2(m: &CMatrix) -> Vec<f64> {
    let tr = m.trace().re;
    let det = m.det().re;
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    vec![(tr + disc) / 2.0, (tr - disc) / 2.0]
}

/// Roots of the characteristic polynomial of a 3x3 Hermitian matrix by the
/// trigonometric form of the cubic formula.
fn char_poly_roots_3(m: &CMatrix) -> Vec<f64> {
    let tr = m.trace().re;
    let sq = &(m * m);
    let c2 = 0.5 * (tr * tr - sq.trace().re);
    let c3 = m.det().re;
    // λ³ − tr λ² + c2 λ − c3 = 0, shift λ = x + tr/3.
    let sh = tr / 3.0;
    let p = c2 - tr * tr / 3.0;
    let q = -2.0 * sh.powi(3) + c2 * sh - c3;
    let r = (-p / 3.0).max(0.0).sqrt();
    let arg = if r > 0.0 { (3.0 * q / (2.0 * p * r)).clamp(-1.0, 1.0) } else { 0.0 };
    let phi = arg.acos() / 3.0;
    let mut roots: Vec<f64> = (0..3)
        .map(|k| 2.0 * r * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + sh)
        .collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    roots
}

#[test]
fn eigenvalues_match_characteristic_roots() {
    let mut r = rng(9);
    for _ in 0..200 {
        for n in [2usize, 3] {
            let x = complex_gaussian(n, n, &mut r);
            let h = &x + &x.adjoint();
            let e = hermitian_eig(&h).unwrap().eigenvalues;
            let roots = if n == 2 { char_poly_roots_2(&h) } else { char_poly_roots_3(&h) };
            for (a, b) in e.iter().zip(&roots) {
                assert!((a - b).abs() < 1e-10, "{e:?} vs {roots:?}");
            }
        }
    }
}

#[test]
fn cubic_helper_sanity() {
    let d = CMatrix::diag(&[C64::new(3.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.5, 0.0)]);
    let roots = char_poly_roots_3(&d);
    assert!((roots[0] - 3.0).abs() < 1e-12 && (roots[1] - 0.5).abs() < 1e-12 && (roots[2] + 1.0).abs() < 1e-12);
}
