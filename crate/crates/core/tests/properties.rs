use boson_witness::basis::build_gellmann;
use boson_witness::linalg::{dense_top_singular_value, lanczos_top_singular_value, top_singular_value};
use boson_witness::oracle::{
    product_overlap_search, pure_entanglement_oracle, random_entangled, random_product,
    random_unit_vector,
};
use boson_witness::states::{from_coefficients, szsz_state, PureBipartiteState};
use boson_witness::witness::{
    bloch_vector, correlation_tensor, correlation_tensor_in, epsilon, t_max, tensor_norm,
    CriterionReport, Side,
};
use boson_witness::{CMatrix, Complex64};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rand::Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_unitary(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let a = CMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    a.qr().q()
}

fn purity_a(state: &PureBipartiteState) -> f64 {
    let c = state.coeff();
    let rho = c * c.adjoint();
    (&rho * &rho).trace().re
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generators_expand_traceless_hermitians(d in 2usize..=8, seed in any::<u64>()) {
        let basis = build_gellmann(d).unwrap();
        let mut r = rng(seed);
        let a = CMatrix::from_fn(d, d, |_, _| Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal)));
        let h = (&a + a.adjoint()) * Complex64::from(0.5);
        let mut traceless = h.clone();
        let shift = h.trace() / Complex64::from(d as f64);
        for i in 0..d {
            traceless[(i, i)] -= shift;
        }
        let mut rebuilt = CMatrix::zeros(d, d);
        for i in 1..basis.len() {
            let m = basis.dense(i);
            let c = (&h * &m).trace() * Complex64::from(0.5);
            rebuilt += m * c;
        }
        let err = (&rebuilt - &traceless).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12, "d={} err={}", d, err);
    }

    #[test]
    fn identifiers_do_not_depend_on_generator_order(n in 1usize..=5, seed in any::<u64>()) {
        let mut r = rng(seed);
        let state = random_entangled(n, &mut r);
        let basis = build_gellmann(n + 1).unwrap();
        let mut perm: Vec<usize> = (0..basis.len() - 1).collect();
        perm.shuffle(&mut r);
        let shuffled = basis.permuted(&perm).unwrap();
        let a = correlation_tensor_in(&state, &basis).unwrap();
        let b = correlation_tensor_in(&state, &shuffled).unwrap();
        prop_assert!((tensor_norm(&a) - tensor_norm(&b)).abs() < 1e-12);
        prop_assert!((t_max(&a).unwrap() - t_max(&b).unwrap()).abs() < 1e-12);
        prop_assert!((bloch_vector(&a, Side::A).1 - bloch_vector(&b, Side::A).1).abs() < 1e-12);
    }

    #[test]
    fn local_unitaries_preserve_identifiers(n in 1usize..=5, seed in any::<u64>()) {
        let mut r = rng(seed);
        let state = random_entangled(n, &mut r);
        let d = n + 1;
        let (u, v) = (random_unitary(d, &mut r), random_unitary(d, &mut r));
        let rotated = from_coefficients(n, &u * state.coeff() * v.transpose()).unwrap();
        let a = epsilon(&correlation_tensor(&state).unwrap()).unwrap();
        let b = epsilon(&correlation_tensor(&rotated).unwrap()).unwrap();
        prop_assert!((a.t_norm - b.t_norm).abs() < 1e-10);
        prop_assert!((a.t_max - b.t_max).abs() < 1e-10);
    }

    #[test]
    fn product_states_sit_on_the_boundary(n in 1usize..=7, seed in any::<u64>()) {
        let state = random_product(n, &mut rng(seed));
        let r = CriterionReport::evaluate(&state).unwrap();
        prop_assert!((r.epsilon - 1.0).abs() < 1e-9, "eps={}", r.epsilon);
        prop_assert!((r.t_norm - 1.0).abs() < 1e-9);
        prop_assert!((r.t_max - 1.0).abs() < 1e-9);
        prop_assert!((r.bloch_len_a - 1.0).abs() < 1e-9);
        prop_assert!(!r.entangled_by_eps && !r.entangled_by_norm);
        prop_assert!(!pure_entanglement_oracle(&state));
    }

    #[test]
    fn entangled_states_are_detected(n in 1usize..=6, seed in any::<u64>()) {
        let state = random_entangled(n, &mut rng(seed));
        let r = CriterionReport::evaluate(&state).unwrap();
        prop_assert!(r.bloch_len_a < 1.0 - 1e-6);
        prop_assert!(r.entangled_by_eps);
        prop_assert!(pure_entanglement_oracle(&state));
    }

    #[test]
    fn report_invariants(n in 1usize..=6, seed in any::<u64>(), product in any::<bool>()) {
        let mut rg = rng(seed);
        let state = if product { random_product(n, &mut rg) } else { random_entangled(n, &mut rg) };
        let t = correlation_tensor(&state).unwrap();
        prop_assert!(t.t.iter().all(|x| x.abs() <= 1.0 + 1e-9));
        let r = CriterionReport::evaluate(&state).unwrap();
        let d = (n + 1) as f64;
        prop_assert!((r.epsilon * r.t_max - r.t_norm).abs() < 1e-9);
        prop_assert!(!r.entangled_by_norm || r.entangled_by_eps);
        prop_assert!(!r.entangled_by_eps || pure_entanglement_oracle(&state));
        prop_assert!(r.entropy >= -1e-12 && r.entropy <= d.log2() + 1e-12);
        prop_assert!(r.t_max <= 1.0 + 1e-9);
        let want = (d * purity_a(&state) - 1.0) / (d - 1.0);
        prop_assert!((r.bloch_len_a - want).abs() < 1e-10);
        prop_assert!((r.bloch_len_a - r.bloch_len_b).abs() < 1e-10);
    }

    #[test]
    fn overlap_search_never_exceeds_t_max(n in 1usize..=4, seed in any::<u64>()) {
        let state = random_entangled(n, &mut rng(seed));
        let t = correlation_tensor(&state).unwrap();
        let s = product_overlap_search(&t, 40, seed).unwrap();
        prop_assert!(s.best <= s.t_max + 1e-8);
        prop_assert!(s.best > 0.0);
    }

    #[test]
    fn szsz_is_periodic(n in 1usize..=6, tau in 0.0f64..1.5) {
        let a = CriterionReport::evaluate(&szsz_state(n, tau).unwrap()).unwrap();
        let b = CriterionReport::evaluate(&szsz_state(n, tau + std::f64::consts::FRAC_PI_2).unwrap()).unwrap();
        prop_assert!((a.epsilon - b.epsilon).abs() < 1e-9);
        prop_assert!((a.entropy - b.entropy).abs() < 1e-9);
    }
}

#[test]
fn two_hundred_products_have_unit_identifier() {
    let mut r = rng(2024);
    for i in 0..200 {
        let n = 1 + i % 8;
        let u = random_unit_vector(n + 1, &mut r);
        let v = random_unit_vector(n + 1, &mut r);
        let state = boson_witness::states::product_state(&u, &v).unwrap();
        let c = epsilon(&correlation_tensor(&state).unwrap()).unwrap();
        assert!((c.epsilon - 1.0).abs() < 1e-9, "n={n}: {}", c.epsilon);
    }
}

#[test]
fn lanczos_agrees_with_dense_svd_on_large_tensors() {
    for n in [10usize, 15, 16, 18, 20] {
        let t = correlation_tensor(&szsz_state(n, 0.3).unwrap()).unwrap();
        let dense = dense_top_singular_value(&t.t);
        let lanczos = lanczos_top_singular_value(&t.t);
        assert!((dense - lanczos).abs() < 1e-10, "n={n}: {dense} vs {lanczos}");
        assert!((top_singular_value(&t.t) - dense).abs() < 1e-10);
    }
}
