//! Seeded random generators for test fixtures, benchmarks and the CLI's
//! randomized checks.

use rand::Rng;

use crate::error::Result;
use crate::matrixcore::{operator_norm, ComplexMatrix};
use crate::polynomial::{row_symbol_sup, OperatorTuple};
use crate::scattering::ScatteringSystem;
use crate::torus::SearchOptions;
use crate::C64;

/// Safety offset used when normalizing triples by their row symbol supremum.
pub const ADMISSIBLE_SLACK: f64 = 1e-6;

/// Entries with independent real and imaginary parts uniform in `[-1, 1]`.
pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let q = random_matrix(rng, n, n).into_dmatrix().qr().q();
    ComplexMatrix::from_dmatrix(q)
}

/// Random matrix rescaled to operator norm `norm`.
pub fn random_with_norm<R: Rng>(rng: &mut R, rows: usize, cols: usize, norm: f64) -> ComplexMatrix {
    let m = random_matrix(rng, rows, cols);
    let current = operator_norm(&m).expect("nonempty");
    m.scale_real(norm / current)
}

/// `n` commuting matrices, each a random quadratic polynomial in one random
/// matrix, rescaled to operator norm `norm`.
pub fn random_commuting_tuple<R: Rng>(
    rng: &mut R,
    n: usize,
    dim: usize,
    norm: f64,
) -> OperatorTuple {
    let base = random_with_norm(rng, dim, dim, 1.0);
    let base2 = &base * &base;
    let mats = (0..n)
        .map(|_| {
            let [c0, c1, c2] = [(); 3].map(|_| {
                C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let m = ComplexMatrix::identity(dim).scale(c0) + base.scale(c1) + base2.scale(c2);
            let current = operator_norm(&m).expect("nonempty");
            m.scale_real(norm / current)
        })
        .collect();
    OperatorTuple::new(mats).expect("polynomials in one matrix commute")
}

fn random_system<R: Rng>(
    rng: &mut R,
    n: usize,
    dims: (usize, usize, usize),
    level: f64,
    nilpotent: bool,
) -> ScatteringSystem {
    let (x, u, y) = dims;
    let a = (0..n)
        .map(|_| {
            let mut m = random_matrix(rng, x, x);
            if nilpotent {
                for i in 0..x {
                    for j in i..x {
                        m[(i, j)] = C64::new(0.0, 0.0);
                    }
                }
            }
            m
        })
        .collect();
    let b = (0..n).map(|_| random_matrix(rng, x, u)).collect();
    let c = (0..n).map(|_| random_matrix(rng, y, x)).collect();
    let d = (0..n).map(|_| random_matrix(rng, y, u)).collect();
    let s = ScatteringSystem::new(x, u, y, a, b, c, d).expect("consistent dimensions");
    // sum_k ||G_k|| <= level forces ||zeta G|| <= level on the torus
    let total: f64 = s
        .gblocks()
        .iter()
        .map(|g| operator_norm(g).expect("nonempty"))
        .sum();
    s.scaled(level / total)
}

/// Random system with `sum_k ||G_k|| = level`, hence dissipative for `level <= 1`.
pub fn random_dissipative_system<R: Rng>(
    rng: &mut R,
    n: usize,
    dims: (usize, usize, usize),
    level: f64,
) -> ScatteringSystem {
    random_system(rng, n, dims, level, false)
}

/// As [`random_dissipative_system`] with strictly lower triangular `A_k`,
/// so every word of `state_dim` letters in the `A_k` vanishes and the
/// transfer function is a polynomial of degree at most `state_dim + 1`.
pub fn random_nilpotent_system<R: Rng>(
    rng: &mut R,
    n: usize,
    dims: (usize, usize, usize),
    level: f64,
) -> ScatteringSystem {
    random_system(rng, n, dims, level, true)
}

/// Random triple `X` normalized so that the estimated
/// `sup_T ||sum zeta_k X_k||` is `1 / (1 + ADMISSIBLE_SLACK)`.
pub fn admissible_triple<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    opts: SearchOptions,
) -> Result<Vec<ComplexMatrix>> {
    let x: Vec<ComplexMatrix> = (0..3).map(|_| random_matrix(rng, rows, cols)).collect();
    let sup = row_symbol_sup(&x, opts)?;
    let scale = 1.0 / (sup * (1.0 + ADMISSIBLE_SLACK));
    Ok(x.iter().map(|m| m.scale_real(scale)).collect())
}
