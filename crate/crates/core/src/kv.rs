//! The Kaijser–Varopoulos tuple and polynomial, with the structural checks
//! showing the tuple maps admissible operator triples to contractions.
//!
//! With `e_1..e_5` the standard basis of `C^5` and
//!
//! ```text
//! v_1 = (-e_2 + e_3 + e_4)/√3,  v_2 = (e_2 - e_3 + e_4)/√3,  v_3 = (e_2 + e_3 - e_4)/√3,
//! T_j = e_{j+1} e_1* + e_5 v_j*,
//! p(z) = (z_1² + z_2² + z_3² - 2 z_1 z_2 - 2 z_1 z_3 - 2 z_2 z_3) / 5,
//! ```
//!
//! the tuple commutes, `sup_{T^3} |p| = 1` and `||p(T)|| = 3√3/5 > 1`.
//!
//! Rank-one operators use the convention `a ⊗ b := a b*`, i.e.
//! `(a ⊗ b) x = <x, b> a`, so that `T_j e_1 = e_{j+1}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::certificate::{Certificate, Detail, MarginSense, Witness};
use crate::error::{Error, Result};
use crate::matrixcore::{is_psd, kron, operator_norm, top_singular_triplet, ComplexMatrix};
use crate::polynomial::{eval_tuple, row_symbol_argmax, MultiPoly, OperatorTuple};
use crate::scattering::ScatteringSystem;
use crate::torus::SearchOptions;
use crate::C64;

/// Entrywise tolerance for the block pattern of `sum T_k ⊗ X_k`.
pub const STRUCTURE_TOL: f64 = 1e-12;
/// Tolerance for the max(column, row) norm identity.
pub const NORM_IDENTITY_TOL: f64 = 1e-10;
/// Tolerance on the sampled row symbol supremum.
pub const ROW_SUP_TOL: f64 = 1e-8;
/// Tolerance on the eight sign combinations `||±X_1 ± X_2 ± X_3||`.
pub const SIGN_TOL: f64 = 1e-10;
/// Tolerance on `||sum T_k ⊗ X_k|| <= 1`.
pub const TENSOR_TOL: f64 = 1e-8;
/// PSD tolerance for `I - sum X_k* X_k`.
pub const COLUMN_TOL: f64 = 1e-9;
/// Torus samples used to report the averaging identity.
pub const AVERAGING_SAMPLES: usize = 4096;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn basis(k: usize) -> Vec<C64> {
    (0..5).map(|i| c(if i == k { 1.0 } else { 0.0 })).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KvData {
    pub t: OperatorTuple,
    pub p: MultiPoly,
    pub v: [Vec<C64>; 3],
}

/// The vectors `v_1, v_2, v_3` in `C^5`.
pub fn kv_vectors() -> [Vec<C64>; 3] {
    let s = 1.0 / 3f64.sqrt();
    [
        vec![c(0.0), c(-s), c(s), c(s), c(0.0)],
        vec![c(0.0), c(s), c(-s), c(s), c(0.0)],
        vec![c(0.0), c(s), c(s), c(-s), c(0.0)],
    ]
}

/// `(z_1² + z_2² + z_3² - 2z_1z_2 - 2z_1z_3 - 2z_2z_3) / 5`.
pub fn kv_polynomial() -> MultiPoly {
    MultiPoly::from_terms(
        3,
        [
            (vec![2, 0, 0], c(0.2)),
            (vec![0, 2, 0], c(0.2)),
            (vec![0, 0, 2], c(0.2)),
            (vec![1, 1, 0], c(-0.4)),
            (vec![1, 0, 1], c(-0.4)),
            (vec![0, 1, 1], c(-0.4)),
        ],
    )
    .expect("three-variable terms")
}

/// `T_j = e_{j+1} e_1* + e_5 v_j*` for the given vectors. The tuple is not
/// checked for commutativity here so that corrupted inputs can be reported.
pub fn kv_tuple(v: &[Vec<C64>; 3]) -> Result<OperatorTuple> {
    let mats = (0..3)
        .map(|j| {
            if v[j].len() != 5 {
                return Err(Error::dim(format!("v_{} must have 5 entries", j + 1)));
            }
            Ok(ComplexMatrix::outer(&basis(j + 1), &basis(0))
                + ComplexMatrix::outer(&basis(4), &v[j]))
        })
        .collect::<Result<Vec<_>>>()?;
    OperatorTuple::new_unchecked(mats)
}

pub fn build_kv() -> KvData {
    KvData::with_vectors(kv_vectors()).expect("standard vectors are well formed")
}

impl KvData {
    pub fn with_vectors(v: [Vec<C64>; 3]) -> Result<Self> {
        Ok(Self {
            t: kv_tuple(&v)?,
            p: kv_polynomial(),
            v,
        })
    }
}

/// `||p(T)||`; equals `3√3/5` for the genuine data.
pub fn violation_norm(kv: &KvData) -> Result<f64> {
    operator_norm(&eval_tuple(&kv.p, &kv.t)?)
}

/// Largest pairwise commutator norm of the tuple.
pub fn commutativity(kv: &KvData, tol: f64) -> Certificate {
    let (defect, (j, k)) = kv.t.commutator_defect();
    Certificate::new(
        "T_j T_k = T_k T_j",
        MarginSense::Excess,
        defect,
        tol,
        Witness::Block { row: j, col: k },
    )
}

/// Each `v_j` has unit norm and each `T_j` is a contraction of norm one.
pub fn unit_norms(kv: &KvData, tol: f64) -> Result<Certificate> {
    let mut worst = (0.0f64, 0usize);
    for (j, (v, t)) in kv.v.iter().zip(kv.t.mats()).enumerate() {
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let dev = (vn - 1.0).abs().max((operator_norm(t)? - 1.0).abs());
        if dev > worst.0 {
            worst = (dev, j);
        }
    }
    Ok(Certificate::new(
        "|v_j| = ||T_j|| = 1",
        MarginSense::Excess,
        worst.0,
        tol,
        Witness::Values(vec![Detail::new("j", (worst.1 + 1) as f64)]),
    ))
}

fn check_triple(x: &[ComplexMatrix]) -> Result<(usize, usize)> {
    if x.len() != 3 {
        return Err(Error::dim(format!("expected 3 operators, got {}", x.len())));
    }
    let shape = x[0].shape();
    if x.iter().any(|m| m.shape() != shape) {
        return Err(Error::dim("X_1, X_2, X_3 must share dimensions"));
    }
    if x[0].is_empty() {
        return Err(Error::dim("X_k must be nonempty"));
    }
    Ok(shape)
}

/// `sum_k T_k ⊗ X_k`.
pub fn tensor_sum(kv: &KvData, x: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let (r, cdim) = check_triple(x)?;
    let mut out = ComplexMatrix::zeros(5 * r, 5 * cdim);
    for (t, xk) in kv.t.mats().iter().zip(x) {
        out += &kron(t, xk)?;
    }
    Ok(out)
}

/// `Y_1 = (-X_1+X_2+X_3)/√3`, `Y_2 = (X_1-X_2+X_3)/√3`, `Y_3 = (X_1+X_2-X_3)/√3`.
pub fn y_blocks(x: &[ComplexMatrix]) -> Result<[ComplexMatrix; 3]> {
    check_triple(x)?;
    let s = 1.0 / 3f64.sqrt();
    let sum = &(&x[0] + &x[1]) + &x[2];
    Ok([0, 1, 2].map(|j| (&sum - &x[j].scale_real(2.0)).scale_real(s)))
}

/// Checks that `sum T_k ⊗ X_k`, viewed as a 5x5 grid of blocks, is zero
/// except for `X_1, X_2, X_3` in rows 2-4 of the first block column and
/// `Y_1, Y_2, Y_3` in columns 2-4 of the last block row.
pub fn verify_structure(kv: &KvData, x: &[ComplexMatrix]) -> Result<Certificate> {
    let (r, cdim) = check_triple(x)?;
    let m = tensor_sum(kv, x)?;
    let y = y_blocks(x)?;
    let zero = ComplexMatrix::zeros(r, cdim);
    let mut worst = (0.0f64, (0, 0));
    for bi in 0..5 {
        for bj in 0..5 {
            let expected = match (bi, bj) {
                (1..=3, 0) => &x[bi - 1],
                (4, 1..=3) => &y[bj - 1],
                _ => &zero,
            };
            let dev = m.block(bi * r, bj * cdim, r, cdim).max_abs_diff(expected);
            if dev > worst.0 {
                worst = (dev, (bi, bj));
            }
        }
    }
    Ok(Certificate::new(
        "block pattern of sum T_k ⊗ X_k",
        MarginSense::Excess,
        worst.0,
        STRUCTURE_TOL,
        Witness::Block {
            row: worst.1 .0,
            col: worst.1 .1,
        },
    ))
}

/// Column norm `sqrt||sum X_k* X_k||` and row norm `sqrt||sum Y_k Y_k*||`.
pub fn column_and_row_norms(x: &[ComplexMatrix]) -> Result<(f64, f64)> {
    let (_, cdim) = check_triple(x)?;
    let (r, _) = x[0].shape();
    let mut col = ComplexMatrix::zeros(cdim, cdim);
    for xk in x {
        col += &(&xk.adjoint() * xk);
    }
    let mut row = ComplexMatrix::zeros(r, r);
    for yk in y_blocks(x)? {
        row += &(&yk * &yk.adjoint());
    }
    Ok((operator_norm(&col)?.sqrt(), operator_norm(&row)?.sqrt()))
}

/// `||sum T_k ⊗ X_k|| = max(column norm, row norm)`.
pub fn block_norm_identity(kv: &KvData, x: &[ComplexMatrix]) -> Result<Certificate> {
    let norm = operator_norm(&tensor_sum(kv, x)?)?;
    let (col, row) = column_and_row_norms(x)?;
    Ok(Certificate::new(
        "||sum T_k ⊗ X_k|| = max(column norm, row norm)",
        MarginSense::Excess,
        (norm - col.max(row)).abs(),
        NORM_IDENTITY_TOL,
        Witness::Values(vec![
            Detail::new("norm", norm),
            Detail::new("column_norm", col),
            Detail::new("row_norm", row),
        ]),
    )
    .with_detail("norm", norm)
    .with_detail("column_norm", col)
    .with_detail("row_norm", row))
}

/// `||sum zeta_k X_k|| <= 1` on the torus (sampled) and exactly at the
/// sign points `zeta in {±1}^n`.
pub fn row_condition(x: &[ComplexMatrix], opts: SearchOptions) -> Result<Certificate> {
    let sup = row_symbol_argmax(x, opts)?;
    let n = x.len();
    let mut worst = (f64::NEG_INFINITY, vec![c(1.0); n]);
    for mask in 0..(1u32 << n) {
        let signs: Vec<C64> = (0..n)
            .map(|k| c(if mask >> k & 1 == 1 { -1.0 } else { 1.0 }))
            .collect();
        let mut sum = x[0].scale(signs[0]);
        for (xk, &sk) in x[1..].iter().zip(&signs[1..]) {
            sum += &xk.scale(sk);
        }
        let v = operator_norm(&sum)?;
        if v > worst.0 {
            worst = (v, signs);
        }
    }
    let torus = Certificate::new(
        "sup over torus of ||sum zeta_k X_k|| <= 1",
        MarginSense::Excess,
        sup.value - 1.0,
        ROW_SUP_TOL,
        Witness::Point(sup.point()),
    )
    .sampled()
    .with_detail("row_symbol_sup", sup.value);
    let signs = Certificate::new(
        "||±X_1 ± X_2 ± X_3|| <= 1",
        MarginSense::Excess,
        worst.0 - 1.0,
        SIGN_TOL,
        Witness::Point(worst.1),
    )
    .with_detail("max_sign_norm", worst.0);
    Ok(Certificate::all("row condition", vec![torus, signs]))
}

/// `I - sum X_k* X_k >= 0`, with the averaging identity reported.
pub fn column_condition(x: &[ComplexMatrix]) -> Result<Certificate> {
    column_condition_with(x, AVERAGING_SAMPLES, 0)
}

/// As [`column_condition`], averaging `I - (sum zeta_i X_i)*(sum zeta_j X_j)`
/// over `samples` seeded uniform torus points. The distance of that mean to
/// `I - sum X_k* X_k` is reported as the detail `averaging_error`; it
/// decays like `samples^{-1/2}` and does not affect the verdict.
pub fn column_condition_with(
    x: &[ComplexMatrix],
    samples: usize,
    seed: u64,
) -> Result<Certificate> {
    let (_, cdim) = check_triple(x)?;
    let mut target = ComplexMatrix::identity(cdim);
    for xk in x {
        target = target - &(&xk.adjoint() * xk);
    }
    let cert = is_psd(&target, COLUMN_TOL)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mean = ComplexMatrix::zeros(cdim, cdim);
    for _ in 0..samples {
        let mut s = ComplexMatrix::zeros(x[0].rows(), cdim);
        for xk in x {
            s += &xk.scale(C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)));
        }
        mean += &(ComplexMatrix::identity(cdim) - &(&s.adjoint() * &s));
    }
    let averaging_error = if samples > 0 {
        operator_norm(&(&mean.scale_real(1.0 / samples as f64) - &target))?
    } else {
        f64::NAN
    };
    let lambda = cert.margin();
    let witness = cert.witness().cloned().expect("psd certificate carries a witness");
    Ok(Certificate::new(
        "I - sum X_k* X_k >= 0",
        MarginSense::Slack,
        lambda,
        COLUMN_TOL,
        witness,
    )
    .with_detail("averaging_error", averaging_error)
    .with_detail("averaging_samples", samples as f64))
}

/// `||sum T_k ⊗ X_k|| <= 1` for an admissible triple.
///
/// Fails with an input error when the row condition does not hold, since
/// the claim is only made for admissible triples.
pub fn tensor_contractivity(
    kv: &KvData,
    x: &[ComplexMatrix],
    opts: SearchOptions,
) -> Result<Certificate> {
    let row = row_condition(x, opts)?;
    if !row.is_pass() {
        return Err(Error::input(format!(
            "triple is not admissible (row condition margin {:.3e}); check row_condition first",
            row.margin()
        )));
    }
    let (norm, _, right) = top_singular_triplet(&tensor_sum(kv, x)?)?;
    Ok(Certificate::new(
        "||sum T_k ⊗ X_k|| <= 1",
        MarginSense::Excess,
        norm - 1.0,
        TENSOR_TOL,
        Witness::Vector(right),
    )
    .with_detail("tensor_norm", norm)
    .with_detail("row_symbol_sup", row.detail("row_symbol_sup").unwrap_or(f64::NAN)))
}

/// A hand-built scalar realization of the KV polynomial with `A = 0`.
///
/// State space `C^3`, `C_k = balance · e_k*`, `B_k = M e_k / balance` where
/// `M` is the symmetric coefficient matrix of `p` (`1/5` on the diagonal,
/// `-1/5` off it), so that `C_i B_j = M_ij` and the transfer function is
/// exactly `p`. Every `balance > 0` gives such a realization.
pub fn kv_candidate(balance: f64) -> ScatteringSystem {
    let m = |i: usize, j: usize| if i == j { 0.2 } else { -0.2 };
    let a = vec![ComplexMatrix::zeros(3, 3); 3];
    let b = (0..3)
        .map(|k| ComplexMatrix::from_fn(3, 1, |i, _| c(m(i, k) / balance)))
        .collect();
    let cm = (0..3)
        .map(|k| ComplexMatrix::from_fn(1, 3, |_, j| c(if j == k { balance } else { 0.0 })))
        .collect();
    let d = vec![ComplexMatrix::zeros(1, 1); 3];
    ScatteringSystem::new(3, 1, 1, a, b, cm, d).expect("consistent dimensions")
}

/// [`kv_candidate`] with a fourth state fed by nonzero nilpotent `A_k`
/// (`A_k` maps `e_k` to `weight · e_4`). `C` never reads the extra state,
/// so the transfer function is unchanged.
pub fn kv_candidate_padded(balance: f64, weight: f64) -> ScatteringSystem {
    let base = kv_candidate(balance);
    let pad = |m: &ComplexMatrix, rows: usize, cols: usize| {
        ComplexMatrix::from_fn(rows, cols, |i, j| {
            if i < m.rows() && j < m.cols() {
                m[(i, j)]
            } else {
                c(0.0)
            }
        })
    };
    let a = (0..3)
        .map(|k| ComplexMatrix::from_fn(4, 4, |i, j| c(if i == 3 && j == k { weight } else { 0.0 })))
        .collect();
    let b = base.b().iter().map(|m| pad(m, 4, 1)).collect();
    let cm = base.c().iter().map(|m| pad(m, 1, 4)).collect();
    ScatteringSystem::new(4, 1, 1, a, b, cm, base.d().to_vec()).expect("consistent dimensions")
}
