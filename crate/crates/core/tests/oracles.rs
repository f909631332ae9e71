//! Independent oracles for the operations: truncated series, brute-force
//! word enumeration, random sampling and hand computations.

use polyreal::kv::{self, build_kv, kv_polynomial};
use polyreal::lft::{lft, poly_at_tuple_via_lft, verify_lft_equals_eval};
use polyreal::matrixcore::{is_psd, operator_norm, resolvent_apply, ComplexMatrix};
use polyreal::polynomial::{eval_scalar, eval_tuple, torus_sup, MultiPoly, OperatorTuple};
use polyreal::sample::{
    random_commuting_tuple, random_dissipative_system, random_matrix, random_nilpotent_system,
    random_with_norm,
};
use polyreal::scattering::{check_dissipative, check_realizes, transfer_eval, transfer_taylor};
use polyreal::{ScatteringSystem, SearchOptions, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_polydisk_point(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<C64> {
    (0..n)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            C64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
        })
        .collect()
}

/// `sum_{m <= terms} w^m rhs`.
fn neumann(w: &ComplexMatrix, rhs: &ComplexMatrix, terms: usize) -> ComplexMatrix {
    let mut acc = rhs.clone();
    let mut term = rhs.clone();
    for _ in 0..terms {
        term = w * &term;
        acc += &term;
    }
    acc
}

#[test]
fn resolvent_matches_neumann_series() {
    let mut rng = rng(11);
    for _ in 0..50 {
        let w = random_with_norm(&mut rng, 4, 4, 0.9);
        let rhs = random_matrix(&mut rng, 4, 2);
        let got = resolvent_apply(&w, &rhs).unwrap();
        // the 60-term truncation is only as good as ||w^61||/(1 - ||w||);
        // assert against that bound
        let tail = operator_norm(&w.pow(61)).unwrap() / (1.0 - 0.9) * operator_norm(&rhs).unwrap();
        let oracle = neumann(&w, &rhs, 60);
        let diff = operator_norm(&(&got - &oracle)).unwrap();
        assert!(diff <= tail.max(1e-8), "diff {diff:e}, tail bound {tail:e}");
    }
}

#[test]
fn resolvent_residual_bound() {
    let mut rng = rng(12);
    for i in 0..100 {
        let dim = 1 + i % 6;
        let norm = 0.95 * rng.random::<f64>();
        let w = random_with_norm(&mut rng, dim, dim, norm.max(1e-3));
        let rhs = random_matrix(&mut rng, dim, 3);
        let x = resolvent_apply(&w, &rhs).unwrap();
        let lhs = &(&ComplexMatrix::identity(dim) - &w) * &x;
        let residual = (&lhs - &rhs).frobenius_norm();
        assert!(residual <= 1e-10 * rhs.frobenius_norm());
    }
}

#[test]
fn psd_agrees_with_quadratic_form_sampling() {
    let mut rng = rng(13);
    for case in 0..20 {
        let g = random_matrix(&mut rng, 4, 4);
        let shift = if case % 2 == 0 { 0.0 } else { 1.5 };
        let m = &(&g.adjoint() * &g) - &ComplexMatrix::identity(4).scale_real(shift);
        let tol = 1e-9;
        let cert = is_psd(&m, tol).unwrap();
        // brute force: x* m x >= -tol |x|^2 over random x
        let mut brute_ok = true;
        for _ in 0..1000 {
            let x = random_matrix(&mut rng, 4, 1);
            let q = (&(&x.adjoint() * &m) * &x)[(0, 0)].re;
            let n2 = x.frobenius_norm().powi(2);
            if q < -tol * n2 {
                brute_ok = false;
            }
        }
        if brute_ok {
            // sampling can miss thin negative directions but never the reverse
            assert!(cert.is_pass() || cert.margin() > -0.5, "case {case}");
        } else {
            assert!(!cert.is_pass(), "case {case}");
        }
        // the witness realizes the margin exactly
        if let Some(polyreal::Witness::Vector(v)) = cert.witness() {
            let x = ComplexMatrix::column(v);
            let q = (&(&x.adjoint() * &m) * &x)[(0, 0)].re;
            assert!((q - cert.margin()).abs() < 1e-12);
        }
    }
}

/// Brute-force Taylor coefficients: enumerate every word explicitly.
fn words_oracle(s: &ScatteringSystem, max_degree: u32) -> MultiPoly {
    let n = s.n();
    let mut p = MultiPoly::zero(n);
    for k in 0..n {
        let mut alpha = vec![0; n];
        alpha[k] = 1;
        p.add_term(alpha, s.d()[k][(0, 0)]).unwrap();
    }
    for degree in 2..=max_degree as usize {
        let count = n.pow(degree as u32);
        for mut code in 0..count {
            let mut word = Vec::with_capacity(degree);
            for _ in 0..degree {
                word.push(code % n);
                code /= n;
            }
            let mut prod = s.c()[word[0]].clone();
            for &k in &word[1..degree - 1] {
                prod = &prod * &s.a()[k];
            }
            prod = &prod * &s.b()[word[degree - 1]];
            let mut alpha = vec![0u32; n];
            for &k in &word {
                alpha[k] += 1;
            }
            p.add_term(alpha, prod[(0, 0)]).unwrap();
        }
    }
    p
}

#[test]
fn taylor_matches_word_enumeration() {
    let mut rng = rng(14);
    for _ in 0..5 {
        let s = random_dissipative_system(&mut rng, 3, (2, 1, 1), 0.9);
        let series = transfer_taylor(&s, 5).unwrap();
        let fast = series.scalar().unwrap();
        let slow = words_oracle(&s, 5);
        for (alpha, c) in slow.terms() {
            assert!((fast.coeff(alpha) - c).norm() < 1e-14, "{alpha:?}");
        }
        for (alpha, c) in fast.terms() {
            assert!((slow.coeff(alpha) - c).norm() < 1e-14, "{alpha:?}");
        }
    }
}

#[test]
fn taylor_degree_twelve_inside_half_polydisk() {
    // degree-d terms are bounded by (radius * level)^d, so with level 0.5 and
    // radius 0.5 the degree-12 tail is below 0.25^13 / 0.75 < 1e-8
    let mut rng = rng(15);
    for _ in 0..20 {
        let s = random_dissipative_system(&mut rng, 3, (2, 1, 1), 0.5);
        let series = transfer_taylor(&s, 12).unwrap();
        for _ in 0..10 {
            let z = random_polydisk_point(&mut rng, 3, 0.5);
            let direct = transfer_eval(&s, &z).unwrap();
            let approx = series.eval(&z).unwrap();
            assert!(direct.max_abs_diff(&approx) < 1e-8);
        }
    }
}

#[test]
fn transfer_is_contractive_for_dissipative_systems() {
    let mut rng = rng(16);
    for _ in 0..5 {
        let s = random_dissipative_system(&mut rng, 3, (3, 2, 2), 1.0);
        let cert = check_dissipative(&s, SearchOptions::new(24, 50), 1e-9).unwrap();
        assert!(cert.is_pass());
        for _ in 0..200 {
            let z = random_polydisk_point(&mut rng, 3, 0.999);
            let theta = transfer_eval(&s, &z).unwrap();
            assert!(operator_norm(&theta).unwrap() <= 1.0 + 1e-8);
        }
        assert_eq!(transfer_eval(&s, &[C64::new(0.0, 0.0); 3]).unwrap().max_abs(), 0.0);
    }
}

#[test]
fn lft_contraction_fact() {
    let mut rng = rng(17);
    for i in 0..300 {
        let (state, other) = (1 + i % 4, 1 + i % 3);
        let f = random_with_norm(&mut rng, state + other, state + other, 0.999);
        let v = lft(&f, (state, state)).unwrap();
        assert!(operator_norm(&v).unwrap() <= 1.0 + 1e-10);
    }
}

#[test]
fn scalar_tuple_degeneration() {
    let mut rng = rng(18);
    let s = random_dissipative_system(&mut rng, 3, (3, 1, 1), 0.95);
    for _ in 0..100 {
        let z = random_polydisk_point(&mut rng, 3, 0.95);
        let via = poly_at_tuple_via_lft(&OperatorTuple::scalar(&z), &s, 1.0).unwrap();
        let direct = transfer_eval(&s, &z).unwrap();
        assert!(via.max_abs_diff(&direct) < 1e-12);
    }
}

fn polynomial_of(s: &ScatteringSystem) -> MultiPoly {
    transfer_taylor(s, s.state_dim() as u32 + 1)
        .unwrap()
        .scalar()
        .unwrap()
        .clone()
}

#[test]
fn lft_identity_on_nilpotent_systems() {
    let mut rng = rng(19);
    for _ in 0..20 {
        let s = random_nilpotent_system(&mut rng, 3, (3, 1, 1), 0.9);
        let p = polynomial_of(&s);
        assert!(check_realizes(&s, &p, 1e-12).unwrap().is_pass());
        let t = random_commuting_tuple(&mut rng, 3, 3, 1.0);
        let cert = verify_lft_equals_eval(&t, &s, &p, 0.9, 1e-8).unwrap();
        assert!(cert.is_pass(), "{cert}");
    }
}

#[test]
fn lft_norm_converges_as_r_increases() {
    let mut rng = rng(20);
    for _ in 0..5 {
        let s = random_nilpotent_system(&mut rng, 3, (3, 1, 1), 0.9);
        let p = polynomial_of(&s);
        let t = random_commuting_tuple(&mut rng, 3, 3, 1.0);
        let limit = operator_norm(&eval_tuple(&p, &t).unwrap()).unwrap();
        let gaps: Vec<f64> = [0.9, 0.99, 0.999]
            .iter()
            .map(|&r| {
                let v = operator_norm(&poly_at_tuple_via_lft(&t, &s, r).unwrap()).unwrap();
                (v - limit).abs() / (1.0 - r)
            })
            .collect();
        // difference is O(1 - r) with a constant bounded by the degree times
        // the coefficient mass
        let bound = (p.degree() as f64) * p.coefficient_l1() + 1e-9;
        assert!(gaps.iter().all(|&g| g <= bound), "{gaps:?} vs {bound}");
    }
}

#[test]
fn kv_polynomial_bounded_on_torus_samples() {
    let p = kv_polynomial();
    let mut rng = rng(21);
    for _ in 0..100_000 {
        let z: Vec<C64> = (0..3)
            .map(|_| C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)))
            .collect();
        assert!(eval_scalar(&p, &z).unwrap().norm() <= 1.0 + 1e-12);
    }
}

#[test]
fn kv_triple_products_vanish() {
    // brute-force matrix products: T_j T_k T_l = 0 for every word
    let kv = build_kv();
    for j in 0..3 {
        for k in 0..3 {
            for l in 0..3 {
                let m = &(&kv.t.mats()[j] * &kv.t.mats()[k]) * &kv.t.mats()[l];
                assert!(m.max_abs() < 1e-16);
            }
        }
    }
    let p = MultiPoly::monomial(vec![1, 1, 1], C64::new(1.0, 0.0));
    assert_eq!(operator_norm(&eval_tuple(&p, &kv.t).unwrap()).unwrap(), 0.0);
}

#[test]
fn kv_squares_and_norms() {
    let kv = build_kv();
    let e51 = ComplexMatrix::outer(
        &[0.0, 0.0, 0.0, 0.0, 1.0].map(|x| C64::new(x, 0.0)),
        &[1.0, 0.0, 0.0, 0.0, 0.0].map(|x| C64::new(x, 0.0)),
    )
    .scale_real(-1.0 / 3f64.sqrt());
    for t in kv.t.mats() {
        assert!(t.pow(2).max_abs_diff(&e51) < 1e-14);
        assert!((operator_norm(t).unwrap() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn kv_sup_witness_is_sign_point() {
    let s = torus_sup(&kv_polynomial(), SearchOptions::new(64, 100)).unwrap();
    assert!(s.lower >= 1.0 - 1e-6);
    // maximizers are e^{it} times a permutation of (1, -1, -1)
    let dist = |w: [f64; 3]| {
        let inner: C64 = s.witness.iter().zip(w).map(|(z, x)| z.conj() * x).sum();
        (3.0 + 3.0 - 2.0 * inner.norm()).max(0.0).sqrt()
    };
    let best = [[1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]
        .into_iter()
        .map(dist)
        .fold(f64::INFINITY, f64::min);
    assert!(best < 1e-4, "{:?}", s.witness);
}

#[test]
fn tensor_contractivity_on_admissible_triples() {
    let kv = build_kv();
    let opts = SearchOptions::new(24, 60);
    let mut rng = rng(22);
    for i in 0..20 {
        let d = 1 + i % 3;
        let x = polyreal::sample::admissible_triple(&mut rng, d, d, opts).unwrap();
        let cert = kv::tensor_contractivity(&kv, &x, opts).unwrap();
        assert!(cert.is_pass(), "{cert}");
        assert!(kv::column_condition(&x).unwrap().is_pass());
        assert!(kv::block_norm_identity(&kv, &x).unwrap().is_pass());
    }
}
