use contractivity::contractive_general;
use counterexample::{compute_b_set, g_eval, g_min, search, GFunctionSpec, GTable, SearchOutcome};
use domains::DomainSpec;
use matrix_core::random::{complex_gaussian, complex_normal, random_unit_vector};
use matrix_core::{c, op_norm, CMatrix, C64};
use proptest::prelude::*;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_spec(r: &mut ChaCha8Rng) -> GFunctionSpec {
    let a1 = complex_gaussian(2, 2, r);
    let a2 = complex_gaussian(2, 2, r);
    let vmax = 1.0 / op_norm(&a1);
    let wmax = 1.0 / op_norm(&a2);
    let v = complex_normal(r);
    let w = complex_normal(r);
    let v = v * (vmax * r.random::<f64>() / v.norm());
    let w = w * (wmax * r.random::<f64>() / w.norm());
    GFunctionSpec::new(a1, a2, v, w).unwrap()
}

fn unit(r: &mut ChaCha8Rng) -> Vec<C64> {
    random_unit_vector(2, r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn g_is_phase_invariant(seed in any::<u64>(), gamma in 0.0f64..std::f64::consts::TAU) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let s = random_spec(&mut r);
        let b = unit(&mut r);
        let phase = C64::from_polar(1.0, gamma);
        let rotated: Vec<C64> = b.iter().map(|x| x * phase).collect();
        let (g0, g1) = (g_eval(&s, &b).unwrap(), g_eval(&s, &rotated).unwrap());
        prop_assert!((g0 - g1).abs() <= 1e-14, "{} vs {}", g0, g1);
    }
}

#[test]
fn g_min_is_a_lower_bound() {
    let mut r = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let s = random_spec(&mut r);
        let m = g_min(&s);
        assert!((g_eval(&s, &m.beta).unwrap() - m.value).abs() < 1e-12);
        for _ in 0..1000 {
            let b = unit(&mut r);
            assert!(m.value <= g_eval(&s, &b).unwrap() + 1e-15);
        }
    }
}

#[test]
fn g_min_minimizer_is_stationary_or_on_the_boundary() {
    let mut r = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..10 {
        let s = random_spec(&mut r);
        let m = g_min(&s);
        let table = GTable::new(&s.a1, &s.a2);
        let f = |t: f64, th: f64| table.eval(s.v.norm_sqr(), s.w.norm_sqr(), &matrix_core::optim::bloch_vector(t, th));
        let h = 1e-5;
        let on_boundary = m.t < 1e-4 || m.t > std::f64::consts::FRAC_PI_2 - 1e-4;
        let dt = (f(m.t + h, m.theta) - f(m.t - h, m.theta)) / (2.0 * h);
        let dth = (f(m.t, m.theta + h) - f(m.t, m.theta - h)) / (2.0 * h);
        assert!(on_boundary || (dt.abs() <= 1e-6 && dth.abs() <= 1e-6), "{dt} {dth}");
    }
}

#[test]
fn g_min_is_monotone_in_v() {
    let mut r = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..3 {
        let s = random_spec(&mut r);
        let table = GTable::new(&s.a1, &s.a2);
        let lambda = 0.2 + r.random::<f64>();
        let vmax = (1.0 / op_norm(&s.a1)).min(1.0 / (lambda * op_norm(&s.a2)));
        let values: Vec<f64> = (0..64)
            .map(|k| {
                let v = vmax * k as f64 / 63.0;
                table.min(v * v, lambda * lambda * v * v).value
            })
            .collect();
        for w in values.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "{values:?}");
        }
    }
}

#[test]
fn b_set_vectors_annihilate_their_pencils() {
    let mut r = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..1000 {
        let a1 = complex_gaussian(2, 2, &mut r);
        let a2 = complex_gaussian(2, 2, &mut r);
        let b = compute_b_set(&a1, &a2);
        assert!(!b.degenerate);
        assert!(!b.vectors.is_empty());
        for v in &b.vectors {
            assert!(v.residual(&a1, &a2) <= 1e-9);
        }
    }
}

fn canonical_pair(r: &mut ChaCha8Rng) -> DomainSpec {
    let d2 = complex_normal(r);
    let d2 = d2 * (0.9 * r.random::<f64>() / d2.norm());
    let b = c(0.1 + r.random::<f64>(), 0.0);
    let mut cc = complex_normal(r);
    if (cc.norm() - b.re).abs() < 0.05 {
        cc *= 2.0;
    }
    DomainSpec::new(vec![
        CMatrix::diag(&[c(1.0, 0.0), d2]),
        CMatrix::from_rows(&[vec![c(1.0, 0.0), b], vec![cc, c(0.0, 0.0)]]).unwrap(),
    ])
    .unwrap()
}

#[test]
fn certificates_round_trip_through_the_general_check() {
    let mut r = ChaCha8Rng::seed_from_u64(25);
    for k in 0..5 {
        let d = canonical_pair(&mut r);
        let SearchOutcome::Certificate(cert) = search(&d).unwrap() else {
            panic!("pair {k}: expected a certificate")
        };
        assert!(cert.verdict);
        let rep = contractive_general(&d, &cert.tuple()).unwrap();
        assert!(rep.contractive, "pair {k}: infimum {}", rep.attained_infimum);
        assert!(rep.attained_infimum.abs() <= 1e-6);
        assert!(!rep.completely_contractive_on_pa && rep.tensor_norm > 1.0 + 1e-8);
        assert!((rep.tensor_norm - cert.tensor_norm).abs() < 1e-12);
    }
}

#[test]
fn spec_json_round_trip() {
    let mut r = ChaCha8Rng::seed_from_u64(26);
    let s = random_spec(&mut r);
    let j = serde_json::to_string(&s).unwrap();
    assert_eq!(serde_json::from_str::<GFunctionSpec>(&j).unwrap(), s);
}
