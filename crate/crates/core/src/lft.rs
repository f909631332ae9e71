//! Linear fractional transformations and the tensor substitution `rT · G`.
//!
//! For a commuting tuple `T` and a system with blocks `A, B, C, D`, the
//! block operator
//!
//! ```text
//! rT·G = [[ sum r T_k ⊗ A_k, sum r T_k ⊗ B_k ],
//!         [ sum r T_k ⊗ C_k, sum r T_k ⊗ D_k ]]
//! ```
//!
//! has linear fractional transform equal to `theta(rT)`. When the transfer
//! function is a polynomial `p`, that is `p(rT)`.

use crate::certificate::{Certificate, MarginSense, Witness};
use crate::error::{Error, Result};
use crate::matrixcore::{block_assemble, kron, operator_norm, resolvent_apply, ComplexMatrix};
use crate::polynomial::{eval_tuple, MultiPoly, OperatorTuple};
use crate::scattering::ScatteringSystem;

/// `Z + Y (I - W)^{-1} X` for `f = [[W, X], [Y, Z]]` with `W` of size
/// `split.0 x split.1` (which must be square).
pub fn lft(f: &ComplexMatrix, split: (usize, usize)) -> Result<ComplexMatrix> {
    let (sr, sc) = split;
    if sr != sc {
        return Err(Error::dim(format!("W block must be square, got {sr}x{sc}")));
    }
    if sr > f.rows() || sc > f.cols() {
        return Err(Error::dim(format!(
            "split ({sr}, {sc}) exceeds {}x{} matrix",
            f.rows(),
            f.cols()
        )));
    }
    let (rr, rc) = (f.rows() - sr, f.cols() - sc);
    let w = f.block(0, 0, sr, sc);
    let x = f.block(0, sc, sr, rc);
    let y = f.block(sr, 0, rr, sc);
    let z = f.block(sr, sc, rr, rc);
    let inner = resolvent_apply(&w, &x)?;
    Ok(z + &(&y * &inner))
}

fn check_r(r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::input(format!("radius r = {r} must lie in [0, 1]")));
    }
    Ok(())
}

fn tensor_sum(t: &OperatorTuple, mats: &[ComplexMatrix], r: f64) -> Result<ComplexMatrix> {
    let dim = t.dim();
    let (rows, cols) = mats[0].shape();
    let mut out = ComplexMatrix::zeros(dim * rows, dim * cols);
    if rows == 0 || cols == 0 {
        return Ok(out);
    }
    for (tk, mk) in t.mats().iter().zip(mats) {
        out += &kron(tk, mk)?;
    }
    Ok(out.scale_real(r))
}

/// The four tensor blocks `(rT·A, rT·B, rT·C, rT·D)`.
fn tensor_blocks(
    t: &OperatorTuple,
    s: &ScatteringSystem,
    r: f64,
) -> Result<[ComplexMatrix; 4]> {
    if t.n() != s.n() {
        return Err(Error::input(format!(
            "tuple has {} operators, system has n = {}",
            t.n(),
            s.n()
        )));
    }
    check_r(r)?;
    Ok([
        tensor_sum(t, s.a(), r)?,
        tensor_sum(t, s.b(), r)?,
        tensor_sum(t, s.c(), r)?,
        tensor_sum(t, s.d(), r)?,
    ])
}

/// Assembled block operator `rT·G`.
pub fn tensor_system(t: &OperatorTuple, s: &ScatteringSystem, r: f64) -> Result<ComplexMatrix> {
    let [a, b, c, d] = tensor_blocks(t, s, r)?;
    block_assemble(&[vec![a, b], vec![c, d]])
}

/// `rT·D + rT·C (I - rT·A)^{-1} rT·B`, the transfer function at `rT`.
pub fn poly_at_tuple_via_lft(
    t: &OperatorTuple,
    s: &ScatteringSystem,
    r: f64,
) -> Result<ComplexMatrix> {
    let f = tensor_system(t, s, r)?;
    let state = t.dim() * s.state_dim();
    lft(&f, (state, state))
}

/// Certifies `||LFT(rT·G) - p(rT)|| <= tol`.
///
/// The caller is expected to have established that `s` realizes `p`
/// (for instance with [`crate::scattering::check_realizes`]).
pub fn verify_lft_equals_eval(
    t: &OperatorTuple,
    s: &ScatteringSystem,
    p: &MultiPoly,
    r: f64,
    tol: f64,
) -> Result<Certificate> {
    let via_lft = poly_at_tuple_via_lft(t, s, r)?;
    let direct = eval_tuple(p, &t.scaled(r))?;
    if via_lft.shape() != direct.shape() {
        return Err(Error::dim(format!(
            "LFT side is {}x{}, polynomial side is {}x{}",
            via_lft.rows(),
            via_lft.cols(),
            direct.rows(),
            direct.cols()
        )));
    }
    let discrepancy = operator_norm(&(&via_lft - &direct))?;
    let lft_norm = operator_norm(&via_lft)?;
    let direct_norm = operator_norm(&direct)?;
    Ok(Certificate::new(
        "LFT of rT·G equals p(rT)",
        MarginSense::Excess,
        discrepancy,
        tol,
        Witness::Values(vec![
            crate::Detail::new("norm_lft", lft_norm),
            crate::Detail::new("norm_p_rT", direct_norm),
        ]),
    )
    .with_detail("r", r)
    .with_detail("norm_lft", lft_norm)
    .with_detail("norm_p_rT", direct_norm))
}
