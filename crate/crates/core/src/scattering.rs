//! Dissipative nD scattering systems and their transfer functions.
//!
//! A system carries `n`-tuples of operators `A_k: X -> X`, `B_k: U -> X`,
//! `C_k: X -> Y`, `D_k: U -> Y`, all finite complex matrices. Its transfer
//! function is
//!
//! ```text
//! theta(z) = zD + zC (I - zA)^{-1} zB,   zA = sum_k z_k A_k, ...
//! ```
//!
//! Dissipativity (`||sum_k zeta_k G_k|| <= 1` on the torus, with
//! `G_k = [[A_k, B_k], [C_k, D_k]]`) is not enforced by the type: candidate
//! realizations under refutation are allowed to violate it, and
//! [`check_dissipative`] reports the outcome.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::certificate::{Certificate, MarginSense, Witness};
use crate::error::{Error, Result};
use crate::matrixcore::{block_assemble, resolvent_apply, ComplexMatrix};
use crate::polynomial::{self, MultiPoly};
use crate::torus::SearchOptions;
use crate::C64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatteringSystem {
    n: usize,
    state_dim: usize,
    in_dim: usize,
    out_dim: usize,
    a: Vec<ComplexMatrix>,
    b: Vec<ComplexMatrix>,
    c: Vec<ComplexMatrix>,
    d: Vec<ComplexMatrix>,
}

fn check_shapes(
    name: &str,
    mats: &[ComplexMatrix],
    n: usize,
    shape: (usize, usize),
) -> Result<()> {
    if mats.len() != n {
        return Err(Error::dim(format!("{name} has {} matrices, expected {n}", mats.len())));
    }
    for (k, m) in mats.iter().enumerate() {
        if m.shape() != shape {
            return Err(Error::dim(format!(
                "{name}[{k}] is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                shape.0,
                shape.1
            )));
        }
        if !m.is_finite() {
            return Err(Error::input(format!("{name}[{k}] has non-finite entries")));
        }
    }
    Ok(())
}

impl ScatteringSystem {
    pub fn new(
        state_dim: usize,
        in_dim: usize,
        out_dim: usize,
        a: Vec<ComplexMatrix>,
        b: Vec<ComplexMatrix>,
        c: Vec<ComplexMatrix>,
        d: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        let n = a.len();
        if n == 0 {
            return Err(Error::input("a scattering system needs n >= 1"));
        }
        if in_dim == 0 || out_dim == 0 {
            return Err(Error::dim("input and output spaces must be nonzero"));
        }
        check_shapes("A", &a, n, (state_dim, state_dim))?;
        check_shapes("B", &b, n, (state_dim, in_dim))?;
        check_shapes("C", &c, n, (out_dim, state_dim))?;
        check_shapes("D", &d, n, (out_dim, in_dim))?;
        Ok(Self {
            n,
            state_dim,
            in_dim,
            out_dim,
            a,
            b,
            c,
            d,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn a(&self) -> &[ComplexMatrix] {
        &self.a
    }

    pub fn b(&self) -> &[ComplexMatrix] {
        &self.b
    }

    pub fn c(&self) -> &[ComplexMatrix] {
        &self.c
    }

    pub fn d(&self) -> &[ComplexMatrix] {
        &self.d
    }

    /// Multiplies every `G_k` by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let s = |v: &[ComplexMatrix]| v.iter().map(|m| m.scale_real(factor)).collect();
        Self {
            a: s(&self.a),
            b: s(&self.b),
            c: s(&self.c),
            d: s(&self.d),
            ..self.clone()
        }
    }

    /// All `G_k`, zero based.
    pub fn gblocks(&self) -> Vec<ComplexMatrix> {
        (0..self.n).map(|k| gblock_unchecked(self, k)).collect()
    }

    /// Splits `G` back into `(A, B, C, D)` blocks using this system's dimensions.
    pub fn split_g(&self, g: &ComplexMatrix) -> [ComplexMatrix; 4] {
        let (x, u, y) = (self.state_dim, self.in_dim, self.out_dim);
        [
            g.block(0, 0, x, x),
            g.block(0, x, x, u),
            g.block(x, 0, y, x),
            g.block(x, x, y, u),
        ]
    }
}

fn gblock_unchecked(s: &ScatteringSystem, k: usize) -> ComplexMatrix {
    block_assemble(&[
        vec![s.a[k].clone(), s.b[k].clone()],
        vec![s.c[k].clone(), s.d[k].clone()],
    ])
    .expect("dimensions validated at construction")
}

/// `G_k = [[A_k, B_k], [C_k, D_k]]` for zero-based `k`.
pub fn gblock(s: &ScatteringSystem, k: usize) -> Result<ComplexMatrix> {
    if k >= s.n {
        return Err(Error::IndexOutOfRange { index: k, n: s.n });
    }
    Ok(gblock_unchecked(s, k))
}

fn weighted_sum(mats: &[ComplexMatrix], z: &[C64]) -> ComplexMatrix {
    let (r, c) = mats[0].shape();
    let mut out = ComplexMatrix::zeros(r, c);
    for (m, &zk) in mats.iter().zip(z) {
        out += &m.scale(zk);
    }
    out
}

fn check_len(s: &ScatteringSystem, z: &[C64]) -> Result<()> {
    if z.len() != s.n {
        return Err(Error::input(format!(
            "point has {} coordinates, system has n = {}",
            z.len(),
            s.n
        )));
    }
    Ok(())
}

/// `zeta G = sum_k zeta_k G_k`.
pub fn zeta_g(s: &ScatteringSystem, zeta: &[C64]) -> Result<ComplexMatrix> {
    check_len(s, zeta)?;
    Ok(weighted_sum(&s.gblocks(), zeta))
}

/// Sampled check of `||zeta G|| <= 1 + tol` over the torus.
///
/// A failing certificate is rigorous (the witness point exhibits the
/// violation); a passing one is evidence up to the search resolution.
/// The margin is `max ||zeta G|| - 1`.
pub fn check_dissipative(
    s: &ScatteringSystem,
    opts: SearchOptions,
    tol: f64,
) -> Result<Certificate> {
    let found = polynomial::row_symbol_argmax(&s.gblocks(), opts)?;
    Ok(Certificate::new(
        "dissipative: sup over torus of ||zeta G|| <= 1",
        MarginSense::Excess,
        found.value - 1.0,
        tol,
        Witness::Point(found.point()),
    )
    .sampled()
    .with_detail("sup_norm_zeta_g", found.value))
}

/// `theta(z) = zD + zC (I - zA)^{-1} zB` for `z` in the open polydisk.
pub fn transfer_eval(s: &ScatteringSystem, z: &[C64]) -> Result<ComplexMatrix> {
    check_len(s, z)?;
    if let Some(k) = z.iter().position(|zk| zk.norm().is_nan() || zk.norm() >= 1.0) {
        return Err(Error::input(format!(
            "z_{} = {} lies outside the open unit polydisk",
            k + 1,
            z[k]
        )));
    }
    let zd = weighted_sum(&s.d, z);
    if s.state_dim == 0 {
        return Ok(zd);
    }
    let za = weighted_sum(&s.a, z);
    let zb = weighted_sum(&s.b, z);
    let zc = weighted_sum(&s.c, z);
    let inner = resolvent_apply(&za, &zb)?;
    Ok(zd + &zc * &inner)
}

/// Power series of a (matrix-valued) transfer function, one polynomial per
/// output-input entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaylorSeries {
    n: usize,
    out_dim: usize,
    in_dim: usize,
    max_degree: u32,
    entries: Vec<MultiPoly>,
}

impl TaylorSeries {
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn entry(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.in_dim + j]
    }

    /// The single entry of a scalar (1x1) series.
    pub fn scalar(&self) -> Option<&MultiPoly> {
        (self.out_dim == 1 && self.in_dim == 1).then(|| &self.entries[0])
    }

    pub fn eval(&self, z: &[C64]) -> Result<ComplexMatrix> {
        let mut out = ComplexMatrix::zeros(self.out_dim, self.in_dim);
        for i in 0..self.out_dim {
            for j in 0..self.in_dim {
                out[(i, j)] = polynomial::eval_scalar(self.entry(i, j), z)?;
            }
        }
        Ok(out)
    }

    fn add_matrix(&mut self, alpha: &[u32], m: &ComplexMatrix) {
        for i in 0..self.out_dim {
            for j in 0..self.in_dim {
                let idx = i * self.in_dim + j;
                self.entries[idx]
                    .add_term(alpha.to_vec(), m[(i, j)])
                    .expect("multi-index length matches n");
            }
        }
    }
}

fn bump(alpha: &[u32], k: usize) -> Vec<u32> {
    let mut out = alpha.to_vec();
    out[k] += 1;
    out
}

/// Taylor coefficients of `theta` up to total degree `max_degree`.
///
/// The degree-one part is `sum_k z_k D_k`; a word `k_0 k_1 ... k_{m+1}`
/// contributes `C_{k_0} A_{k_1} ... A_{k_m} B_{k_{m+1}}` to the monomial
/// `z_{k_0} ... z_{k_{m+1}}`. Words are expanded letter by letter, with the
/// partial products `C_{k_0} A_{k_1} ... A_{k_m}` summed per monomial as
/// they grow, which keeps the work polynomial in the degree.
pub fn transfer_taylor(s: &ScatteringSystem, max_degree: u32) -> Result<TaylorSeries> {
    if max_degree < 1 {
        return Err(Error::input("max_degree must be at least 1"));
    }
    let n = s.n;
    let mut series = TaylorSeries {
        n,
        out_dim: s.out_dim,
        in_dim: s.in_dim,
        max_degree,
        entries: vec![MultiPoly::zero(n); s.out_dim * s.in_dim],
    };
    let zero = vec![0u32; n];
    for k in 0..n {
        series.add_matrix(&bump(&zero, k), &s.d[k]);
    }

    let mut prefixes: BTreeMap<Vec<u32>, ComplexMatrix> =
        (0..n).map(|k| (bump(&zero, k), s.c[k].clone())).collect();
    for degree in 2..=max_degree {
        for (alpha, p) in &prefixes {
            for k in 0..n {
                series.add_matrix(&bump(alpha, k), &(p * &s.b[k]));
            }
        }
        if degree == max_degree {
            break;
        }
        let mut next: BTreeMap<Vec<u32>, ComplexMatrix> = BTreeMap::new();
        for (alpha, p) in &prefixes {
            for k in 0..n {
                let term = p * &s.a[k];
                match next.get_mut(&bump(alpha, k)) {
                    Some(acc) => *acc += &term,
                    None => {
                        next.insert(bump(alpha, k), term);
                    }
                }
            }
        }
        prefixes = next;
    }
    debug_assert_eq!(series.n, n);
    Ok(series)
}

/// Checks that the scalar transfer function of `s` has the Taylor
/// coefficients of `p` up to degree `deg(p) + 2`.
///
/// The margin is the largest coefficient discrepancy and the witness the
/// monomial where it occurs.
pub fn check_realizes(s: &ScatteringSystem, p: &MultiPoly, tol: f64) -> Result<Certificate> {
    if p.constant_term() != C64::new(0.0, 0.0) {
        return Err(Error::input(
            "polynomial has a nonzero constant term; transfer functions vanish at the origin",
        ));
    }
    if s.in_dim != 1 || s.out_dim != 1 {
        return Err(Error::input(format!(
            "realization check needs a scalar system, got in_dim = {}, out_dim = {}",
            s.in_dim, s.out_dim
        )));
    }
    let description = "transfer function realizes p";
    if s.n != p.n() {
        return Ok(Certificate::new(
            description,
            MarginSense::Excess,
            f64::INFINITY,
            tol,
            Witness::Values(vec![
                crate::Detail::new("system_n", s.n as f64),
                crate::Detail::new("polynomial_n", p.n() as f64),
            ]),
        ));
    }
    let degree = p.degree() + 2;
    let series = transfer_taylor(s, degree)?;
    let theta = series.scalar().expect("scalar system");
    let mut worst = (0.0, vec![0u32; s.n]);
    let monomials = theta.terms().map(|(a, _)| a).chain(p.terms().map(|(a, _)| a));
    for alpha in monomials {
        let diff = (theta.coeff(alpha) - p.coeff(alpha)).norm();
        if diff > worst.0 {
            worst = (diff, alpha.clone());
        }
    }
    Ok(Certificate::new(
        description,
        MarginSense::Excess,
        worst.0,
        tol,
        Witness::Monomial(worst.1),
    )
    .with_detail("checked_degree", f64::from(degree)))
}
