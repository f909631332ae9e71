use polyreal::io::{parse_poly, parse_system, poly_to_text, system_to_json};
use polyreal::matrixcore::{block_assemble, kron, operator_norm, ComplexMatrix};
use polyreal::polynomial::{eval_scalar, eval_tuple, torus_sup, MultiPoly, OperatorTuple};
use polyreal::sample::{random_commuting_tuple, random_dissipative_system, random_matrix, random_unitary};
use polyreal::scattering::{gblock, zeta_g};
use polyreal::{SearchOptions, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn poly(n: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0u32..3, n), complex()), 0..6)
        .prop_map(move |terms| MultiPoly::from_terms(n, terms).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_unitarily_invariant(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6) {
        let mut r = rng(seed);
        let m = random_matrix(&mut r, rows, cols);
        let u = random_unitary(&mut r, rows);
        let v = random_unitary(&mut r, cols);
        let a = operator_norm(&m).unwrap();
        let b = operator_norm(&(&(&u * &m) * &v)).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0));
    }

    #[test]
    fn kron_norm_is_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, 3, 3);
        let b = random_matrix(&mut r, 3, 3);
        let lhs = operator_norm(&kron(&a, &b).unwrap()).unwrap();
        let rhs = operator_norm(&a).unwrap() * operator_norm(&b).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0));
    }

    #[test]
    fn gblock_round_trips(seed in any::<u64>(), x in 0usize..4, u in 1usize..3, y in 1usize..3) {
        let mut r = rng(seed);
        let s = random_dissipative_system(&mut r, 2, (x, u, y), 0.9);
        for k in 0..2 {
            let g = gblock(&s, k).unwrap();
            let [a, b, c, d] = s.split_g(&g);
            prop_assert_eq!(&a, &s.a()[k]);
            prop_assert_eq!(&b, &s.b()[k]);
            prop_assert_eq!(&c, &s.c()[k]);
            prop_assert_eq!(&d, &s.d()[k]);
            let again = block_assemble(&[vec![a, b], vec![c, d]]).unwrap();
            prop_assert_eq!(again, g);
        }
    }

    #[test]
    fn zeta_g_is_linear(seed in any::<u64>(), z in prop::collection::vec(complex(), 3), w in prop::collection::vec(complex(), 3)) {
        let mut r = rng(seed);
        let s = random_dissipative_system(&mut r, 3, (2, 1, 1), 0.9);
        let sum: Vec<C64> = z.iter().zip(&w).map(|(a, b)| a + b).collect();
        let lhs = zeta_g(&s, &sum).unwrap();
        let rhs = zeta_g(&s, &z).unwrap() + zeta_g(&s, &w).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-13);
    }

    #[test]
    fn scalar_tuple_matches_scalar_eval(p in poly(3), z in prop::collection::vec(complex(), 3)) {
        let via_tuple = eval_tuple(&p, &OperatorTuple::scalar(&z)).unwrap()[(0, 0)];
        let direct = eval_scalar(&p, &z).unwrap();
        prop_assert!((via_tuple - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
    }

    #[test]
    fn eval_tuple_is_linear_in_p(p in poly(3), q in poly(3), seed in any::<u64>()) {
        let t = random_commuting_tuple(&mut rng(seed), 3, 3, 1.0);
        let sum = eval_tuple(&p.add(&q).unwrap(), &t).unwrap();
        let parts = eval_tuple(&p, &t).unwrap() + eval_tuple(&q, &t).unwrap();
        prop_assert!(sum.max_abs_diff(&parts) < 1e-12);
    }

    #[test]
    fn torus_sup_interval_is_ordered(p in poly(2)) {
        let s = torus_sup(&p, SearchOptions::new(8, 20)).unwrap();
        prop_assert!(s.lower <= s.upper + 1e-12);
        let w = eval_scalar(&p, &s.witness).unwrap().norm();
        prop_assert!((w - s.lower).abs() < 1e-12);
    }

    #[test]
    fn nested_grids_do_not_lower_the_grid_maximum(p in poly(2)) {
        let coarse = torus_sup(&p, SearchOptions::new(8, 0)).unwrap();
        let fine = torus_sup(&p, SearchOptions::new(16, 0)).unwrap();
        prop_assert!(fine.lower >= coarse.lower);
    }

    #[test]
    fn poly_text_round_trips(p in poly(3)) {
        prop_assume!(!p.is_empty());
        prop_assert_eq!(parse_poly(&poly_to_text(&p)).unwrap(), p);
    }

    #[test]
    fn system_json_round_trips(seed in any::<u64>(), x in 0usize..3) {
        let s = random_dissipative_system(&mut rng(seed), 2, (x, 1, 2), 0.9);
        prop_assert_eq!(parse_system(&system_to_json(&s)).unwrap(), s);
    }
}

#[test]
fn complex_matrix_serializes_as_pairs() {
    let m = ComplexMatrix::from_rows(&[vec![C64::new(1.0, -2.0)]]).unwrap();
    assert_eq!(serde_json::to_string(&m).unwrap(), "[[[1.0,-2.0]]]");
}
