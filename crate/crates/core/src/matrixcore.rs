//! Dense complex linear algebra: spectral norms, Kronecker products, block
//! assembly, resolvent solves and positive-semidefiniteness certificates.
//!
//! [`ComplexMatrix`] wraps a `nalgebra` dense matrix of `Complex64`. The
//! heavy lifting (SVD, LU, Hermitian eigendecomposition) is delegated to
//! `nalgebra`; this module fixes the contracts the rest of the crate relies
//! on: finiteness of entries, dimension errors instead of panics, and
//! residual-checked solves.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::certificate::{Certificate, MarginSense, Witness};
use crate::error::{Error, Result};
use crate::C64;

/// Condition number of `I - W` above which a resolvent is refused.
pub const SINGULAR_CONDITION: f64 = 1e12;

/// Relative residual every resolvent solve must meet.
pub const RESOLVENT_RESIDUAL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from rows of entries, rejecting ragged or non-finite input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::dim(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|z| !z.is_finite()) {
                return Err(Error::input(format!("non-finite entry at ({i}, {j})")));
            }
        }
        Ok(Self::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
    }

    /// Real matrix given row by row.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { C64::new(0.0, 0.0) })
    }

    /// Scalar as a 1x1 matrix.
    pub fn scalar(z: C64) -> Self {
        Self::from_fn(1, 1, |_, _| z)
    }

    /// Rank-one operator `a b*`, mapping `x` to `<x, b> a`.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        Self::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
    }

    /// Column vector.
    pub fn column(v: &[C64]) -> Self {
        Self::from_fn(v.len(), 1, |i, _| v[i])
    }

    pub fn from_dmatrix(m: DMatrix<C64>) -> Self {
        Self(m)
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.0.is_square()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, z: C64) -> Self {
        Self(&self.0 * z)
    }

    pub fn scale_real(&self, r: f64) -> Self {
        Self(self.0.map(|z| z * r))
    }

    /// Copy of the `nrows x ncols` sub-block starting at `(row, col)`.
    pub fn block(&self, row: usize, col: usize, nrows: usize, ncols: usize) -> Self {
        Self(self.0.view((row, col), (nrows, ncols)).into_owned())
    }

    /// Column `j` as a vector of entries.
    pub fn column_vec(&self, j: usize) -> Vec<C64> {
        self.0.column(j).iter().copied().collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in max_abs_diff");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Entries in row-major order.
    pub fn entries_row_major(&self) -> Vec<C64> {
        (0..self.rows())
            .flat_map(|i| (0..self.cols()).map(move |j| (i, j)))
            .map(|(i, j)| self.0[(i, j)])
            .collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    /// `self^k` by repeated squaring. `self` must be square.
    pub fn pow(&self, mut k: u32) -> Self {
        assert!(self.is_square(), "pow of non-square matrix");
        let mut result = Self::identity(self.rows());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut C64 {
        &mut self.0[idx]
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $trait<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0 $op rhs.0)
            }
        }
        impl $trait<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0 $op &rhs.0)
            }
        }
    };
}

impl_binop!(Add, add, +);
impl_binop!(Sub, sub, -);
impl_binop!(Mul, mul, *);

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        self.0 += &rhs.0;
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-self.0)
    }
}

impl Mul<C64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, z: C64) -> ComplexMatrix {
        self.scale(z)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, r: f64) -> ComplexMatrix {
        self.scale_real(r)
    }
}

/// Serialized as an array of rows, each entry a `[re, im]` pair.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows()))?;
        for row in self.to_rows() {
            let pairs: Vec<[f64; 2]> = row.iter().map(|z| [z.re, z.im]).collect();
            seq.serialize_element(&pairs)?;
        }
        seq.end()
    }
}

/// Spectral norm: the largest singular value, from a full SVD.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    if m.is_empty() {
        return Err(Error::dim(format!(
            "operator norm of empty {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m.0.clone().singular_values().max())
}

/// Largest singular value with its left and right singular vectors.
pub fn top_singular_triplet(m: &ComplexMatrix) -> Result<(f64, Vec<C64>, Vec<C64>)> {
    if m.is_empty() {
        return Err(Error::dim("singular triplet of empty matrix"));
    }
    let svd = m.0.clone().svd(true, true);
    let (idx, sigma) = svd
        .singular_values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, s)| if s > acc.1 { (i, s) } else { acc });
    let u = svd.u.as_ref().expect("requested u");
    let v_t = svd.v_t.as_ref().expect("requested v_t");
    let left = u.column(idx).iter().copied().collect();
    let right = v_t.row(idx).iter().map(|z| z.conj()).collect();
    Ok((sigma, left, right))
}

/// Kronecker product `a ⊗ b`: block `(i, j)` is `a[i, j] * b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::dim(format!(
            "kron of empty operand ({}x{} ⊗ {}x{})",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(ComplexMatrix(a.0.kronecker(&b.0)))
}

/// Concatenates a rectangular grid of blocks.
///
/// Blocks in a grid row must share their row count and blocks in a grid
/// column their column count; zero-sized blocks are allowed.
pub fn block_assemble(blocks: &[Vec<ComplexMatrix>]) -> Result<ComplexMatrix> {
    let grid_rows = blocks.len();
    let grid_cols = blocks.first().map_or(0, Vec::len);
    if grid_rows == 0 || grid_cols == 0 {
        return Err(Error::dim("empty block grid"));
    }
    if let Some(i) = blocks.iter().position(|r| r.len() != grid_cols) {
        return Err(Error::dim(format!(
            "block grid row {i} has {} blocks, expected {grid_cols}",
            blocks[i].len()
        )));
    }
    let heights: Vec<usize> = blocks.iter().map(|r| r[0].rows()).collect();
    let widths: Vec<usize> = blocks[0].iter().map(ComplexMatrix::cols).collect();
    for (i, row) in blocks.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            if b.shape() != (heights[i], widths[j]) {
                return Err(Error::BlockShape {
                    row: i,
                    col: j,
                    expected: (heights[i], widths[j]),
                    found: b.shape(),
                });
            }
        }
    }
    let total_rows = heights.iter().sum();
    let total_cols = widths.iter().sum();
    let mut out = DMatrix::zeros(total_rows, total_cols);
    let mut r0 = 0;
    for (i, row) in blocks.iter().enumerate() {
        let mut c0 = 0;
        for (j, b) in row.iter().enumerate() {
            out.view_mut((r0, c0), (heights[i], widths[j])).copy_from(&b.0);
            c0 += widths[j];
        }
        r0 += heights[i];
    }
    Ok(ComplexMatrix(out))
}

/// `(I - w)^{-1} rhs` by LU with partial pivoting.
///
/// Refuses the solve when `I - w` has condition number above
/// [`SINGULAR_CONDITION`] or the residual misses [`RESOLVENT_RESIDUAL`].
pub fn resolvent_apply(w: &ComplexMatrix, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !w.is_square() {
        return Err(Error::dim(format!(
            "resolvent of non-square {}x{} matrix",
            w.rows(),
            w.cols()
        )));
    }
    if rhs.rows() != w.rows() {
        return Err(Error::dim(format!(
            "resolvent rhs has {} rows, operator is {}x{}",
            rhs.rows(),
            w.rows(),
            w.cols()
        )));
    }
    if w.rows() == 0 {
        return Ok(rhs.clone());
    }
    let lhs = DMatrix::<C64>::identity(w.rows(), w.rows()) - &w.0;
    let w_norm = || operator_norm(w).unwrap_or(f64::NAN);

    let sv = lhs.clone().singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition.is_nan() || condition > SINGULAR_CONDITION {
        return Err(Error::Singular {
            w_norm: w_norm(),
            condition,
        });
    }
    let lu = lhs.clone().lu();
    let sol = lu.solve(&rhs.0).ok_or_else(|| Error::Singular {
        w_norm: w_norm(),
        condition,
    })?;
    let residual = (&lhs * &sol - &rhs.0).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let rhs_norm = rhs.frobenius_norm();
    if residual > RESOLVENT_RESIDUAL * rhs_norm.max(f64::MIN_POSITIVE) && residual > 0.0 {
        return Err(Error::Singular {
            w_norm: w_norm(),
            condition,
        });
    }
    Ok(ComplexMatrix(sol))
}

/// Positive-semidefiniteness certificate for a Hermitian matrix.
///
/// The matrix is symmetrized as `(m + m*)/2` before the eigendecomposition.
/// The margin is the smallest eigenvalue (slack convention) and the witness
/// the corresponding unit eigenvector.
pub fn is_psd(m: &ComplexMatrix, tol: f64) -> Result<Certificate> {
    if !m.is_square() || m.is_empty() {
        return Err(Error::dim(format!(
            "PSD test needs a nonempty square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let defect = operator_norm(&(m - &m.adjoint()))?;
    if defect > tol {
        return Err(Error::NotHermitian { defect, tol });
    }
    let sym = (&m.0 + m.0.adjoint()) * C64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let (idx, lambda_min) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, l)| if l < acc.1 { (i, l) } else { acc });
    let witness: Vec<C64> = eig.eigenvectors.column(idx).iter().copied().collect();
    Ok(Certificate::new(
        "positive semidefinite",
        MarginSense::Slack,
        lambda_min,
        tol,
        Witness::Vector(witness),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn basis(n: usize, k: usize) -> Vec<C64> {
        (0..n).map(|i| c(if i == k { 1.0 } else { 0.0 })).collect()
    }

    #[test]
    fn norm_of_identity_and_rank_one() {
        assert!((operator_norm(&ComplexMatrix::identity(5)).unwrap() - 1.0).abs() < 1e-15);
        let e51 = ComplexMatrix::outer(&basis(5, 4), &basis(5, 0));
        assert!((operator_norm(&e51).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn norm_of_empty_is_error() {
        assert!(matches!(
            operator_norm(&ComplexMatrix::zeros(0, 3)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn kron_identities() {
        let k = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3)).unwrap();
        assert_eq!(k, ComplexMatrix::identity(6));
    }

    #[test]
    fn kron_places_block() {
        let e21 = ComplexMatrix::outer(&basis(5, 1), &basis(5, 0));
        let x = ComplexMatrix::from_rows(&[
            vec![c(1.0), C64::new(0.0, 2.0)],
            vec![c(-3.0), c(4.0)],
        ])
        .unwrap();
        let k = kron(&e21, &x).unwrap();
        assert_eq!(k.shape(), (10, 10));
        for bi in 0..5 {
            for bj in 0..5 {
                let blk = k.block(2 * bi, 2 * bj, 2, 2);
                if (bi, bj) == (1, 0) {
                    assert_eq!(blk, x);
                } else {
                    assert_eq!(blk.max_abs(), 0.0);
                }
            }
        }
    }

    #[test]
    fn block_assemble_small_cases() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        assert_eq!(block_assemble(&[vec![a.clone()]]).unwrap(), a);

        let z = ComplexMatrix::zeros(1, 1);
        let x = ComplexMatrix::scalar(c(7.0));
        let m = block_assemble(&[vec![z.clone(), z.clone()], vec![x, z]]).unwrap();
        assert_eq!(m, ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[7.0, 0.0]]).unwrap());
    }

    #[test]
    fn block_assemble_reports_offending_block() {
        let err = block_assemble(&[
            vec![ComplexMatrix::zeros(2, 2), ComplexMatrix::zeros(2, 1)],
            vec![ComplexMatrix::zeros(1, 2), ComplexMatrix::zeros(2, 1)],
        ])
        .unwrap_err();
        assert_eq!(
            err,
            Error::BlockShape {
                row: 1,
                col: 1,
                expected: (1, 1),
                found: (2, 1)
            }
        );
    }

    #[test]
    fn resolvent_scalar_cases() {
        let rhs = ComplexMatrix::identity(2);
        assert_eq!(resolvent_apply(&ComplexMatrix::zeros(2, 2), &rhs).unwrap(), rhs);
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        let r = resolvent_apply(&half, &rhs).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::identity(2).scale_real(2.0)) < 1e-15);
    }

    #[test]
    fn resolvent_singular() {
        let err = resolvent_apply(&ComplexMatrix::identity(3), &ComplexMatrix::identity(3));
        match err {
            Err(Error::Singular { w_norm, .. }) => assert!((w_norm - 1.0).abs() < 1e-12),
            other => panic!("expected singular error, got {other:?}"),
        }
    }

    #[test]
    fn psd_examples() {
        let cert = is_psd(&ComplexMatrix::identity(3), 1e-10).unwrap();
        assert!(cert.is_pass());
        assert!((cert.margin() - 1.0).abs() < 1e-15);

        let m = ComplexMatrix::diagonal(&[c(1.0), c(-0.1)]);
        let cert = is_psd(&m, 1e-10).unwrap();
        assert!(!cert.is_pass());
        assert!((cert.margin() + 0.1).abs() < 1e-15);
        match cert.witness() {
            Some(Witness::Vector(v)) => {
                assert!(v[0].norm() < 1e-15);
                assert!((v[1].norm() - 1.0).abs() < 1e-15);
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn psd_boundary_column_contraction() {
        let x = ComplexMatrix::identity(2).scale_real(1.0 / 3f64.sqrt());
        let mut m = ComplexMatrix::identity(2);
        for _ in 0..3 {
            m = m - &(&x.adjoint() * &x);
        }
        let cert = is_psd(&m, 1e-10).unwrap();
        assert!(cert.is_pass());
        assert!(cert.margin().abs() < 1e-15);
    }

    #[test]
    fn psd_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(is_psd(&m, 1e-10), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn pow_by_squaring() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        let p = m.pow(5);
        assert_eq!(p, ComplexMatrix::from_real_rows(&[&[1.0, 5.0], &[0.0, 1.0]]).unwrap());
        assert_eq!(m.pow(0), ComplexMatrix::identity(2));
    }

    #[test]
    fn from_rows_rejects_ragged_and_nan() {
        assert!(ComplexMatrix::from_rows(&[vec![c(1.0)], vec![c(1.0), c(2.0)]]).is_err());
        assert!(ComplexMatrix::from_rows(&[vec![c(f64::NAN)]]).is_err());
    }
}
