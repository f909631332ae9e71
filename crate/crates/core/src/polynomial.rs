//! Multivariate polynomials in commuting variables and their evaluation at
//! scalar points, at commuting matrix tuples and on the torus.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrixcore::{operator_norm, ComplexMatrix};
use crate::torus::{self, SearchOptions, TorusMax};
use crate::C64;

/// Operator-norm tolerance on pairwise commutators.
pub const COMMUTATIVITY_TOL: f64 = 1e-10;

/// Polynomial `sum_a c_a z^a` keyed by exponent multi-index.
///
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, C64>,
}

impl MultiPoly {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: C64) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; n], c).expect("well-formed constant");
        p
    }

    /// Single monomial `c z^exponents`.
    pub fn monomial(exponents: Vec<u32>, c: C64) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, c).expect("well-formed monomial");
        p
    }

    /// Sums the given terms; repeated multi-indices accumulate.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Vec<u32>, C64)>) -> Result<Self> {
        let mut p = Self::zero(n);
        for (alpha, c) in terms {
            p.add_term(alpha, c)?;
        }
        Ok(p)
    }

    pub fn add_term(&mut self, alpha: Vec<u32>, c: C64) -> Result<()> {
        if alpha.len() != self.n {
            return Err(Error::input(format!(
                "multi-index {alpha:?} has length {}, expected {}",
                alpha.len(),
                self.n
            )));
        }
        if !c.is_finite() {
            return Err(Error::input(format!("non-finite coefficient for {alpha:?}")));
        }
        let sum = self.coeff(&alpha) + c;
        if sum == C64::new(0.0, 0.0) {
            self.terms.remove(&alpha);
        } else {
            self.terms.insert(alpha, sum);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: &[u32]) -> C64 {
        self.terms.get(alpha).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn constant_term(&self) -> C64 {
        self.coeff(&vec![0; self.n])
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|a| a.iter().sum()).max().unwrap_or(0)
    }

    /// `sum_a |c_a|`, an upper bound for `|p|` on the closed polydisk.
    pub fn coefficient_l1(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    pub fn scale(&self, z: C64) -> Self {
        Self::from_terms(self.n, self.terms.iter().map(|(a, c)| (a.clone(), c * z)))
            .expect("same shape")
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::input(format!(
                "cannot add polynomials in {} and {} variables",
                self.n, other.n
            )));
        }
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), *c)?;
        }
        Ok(out)
    }
}

/// `n` commuting square matrices acting on a common space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorTuple {
    mats: Vec<ComplexMatrix>,
}

impl OperatorTuple {
    /// Validates shapes and commutativity within [`COMMUTATIVITY_TOL`].
    pub fn new(mats: Vec<ComplexMatrix>) -> Result<Self> {
        let t = Self::new_unchecked(mats)?;
        t.check_commuting(COMMUTATIVITY_TOL)?;
        Ok(t)
    }

    /// Validates shapes only. Used for tuples under test whose
    /// commutativity is itself a reported check.
    pub fn new_unchecked(mats: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = mats.first().map_or(0, ComplexMatrix::rows);
        for (k, m) in mats.iter().enumerate() {
            if m.shape() != (dim, dim) {
                return Err(Error::dim(format!(
                    "tuple entry {} is {}x{}, expected {dim}x{dim}",
                    k + 1,
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_finite() {
                return Err(Error::input(format!("tuple entry {} has non-finite entries", k + 1)));
            }
        }
        if dim == 0 && !mats.is_empty() {
            return Err(Error::dim("tuple matrices must be nonempty"));
        }
        Ok(Self { mats })
    }

    /// 1x1 tuple `(z_1, ..., z_n)`.
    pub fn scalar(z: &[C64]) -> Self {
        Self {
            mats: z.iter().map(|&zk| ComplexMatrix::scalar(zk)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.mats.len()
    }

    pub fn dim(&self) -> usize {
        self.mats.first().map_or(0, ComplexMatrix::rows)
    }

    pub fn mats(&self) -> &[ComplexMatrix] {
        &self.mats
    }

    pub fn scaled(&self, r: f64) -> Self {
        Self {
            mats: self.mats.iter().map(|m| m.scale_real(r)).collect(),
        }
    }

    /// Largest commutator norm and the (zero-based) pair attaining it.
    pub fn commutator_defect(&self) -> (f64, (usize, usize)) {
        let mut worst = (0.0, (0, 0));
        for j in 0..self.n() {
            for k in j + 1..self.n() {
                let c = &(&self.mats[j] * &self.mats[k]) - &(&self.mats[k] * &self.mats[j]);
                let d = operator_norm(&c).unwrap_or(0.0);
                if d > worst.0 {
                    worst = (d, (j, k));
                }
            }
        }
        worst
    }

    pub fn check_commuting(&self, tol: f64) -> Result<()> {
        let (defect, pair) = self.commutator_defect();
        if defect > tol {
            return Err(Error::NonCommuting { pair, defect, tol });
        }
        Ok(())
    }

    pub fn max_norm(&self) -> f64 {
        self.mats
            .iter()
            .map(|m| operator_norm(m).unwrap_or(0.0))
            .fold(0.0, f64::max)
    }
}

fn monomial_value(alpha: &[u32], z: &[C64]) -> C64 {
    alpha
        .iter()
        .zip(z)
        .fold(C64::new(1.0, 0.0), |acc, (&a, &zk)| acc * zk.powu(a))
}

pub fn eval_scalar(p: &MultiPoly, z: &[C64]) -> Result<C64> {
    if z.len() != p.n() {
        return Err(Error::input(format!(
            "point has {} coordinates, polynomial has {} variables",
            z.len(),
            p.n()
        )));
    }
    Ok(p.terms().map(|(a, c)| c * monomial_value(a, z)).sum())
}

/// `p(T) = sum_a c_a T_1^{a_1} ... T_n^{a_n}`, powers by repeated squaring.
pub fn eval_tuple(p: &MultiPoly, t: &OperatorTuple) -> Result<ComplexMatrix> {
    if t.n() != p.n() {
        return Err(Error::input(format!(
            "tuple has {} operators, polynomial has {} variables",
            t.n(),
            p.n()
        )));
    }
    t.check_commuting(COMMUTATIVITY_TOL)?;
    let dim = t.dim().max(1);
    let mut out = ComplexMatrix::zeros(dim, dim);
    if t.n() == 0 {
        return Ok(ComplexMatrix::identity(1).scale(p.constant_term()));
    }
    // cache powers per variable
    let mut powers: Vec<BTreeMap<u32, ComplexMatrix>> = vec![BTreeMap::new(); t.n()];
    for (alpha, c) in p.terms() {
        let mut term = ComplexMatrix::identity(dim);
        for (k, &a) in alpha.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let pk = powers[k]
                .entry(a)
                .or_insert_with(|| t.mats()[k].pow(a))
                .clone();
            term = &term * &pk;
        }
        out += &term.scale(*c);
    }
    Ok(out)
}

/// Certified interval for `sup_{zeta in T^n} |p(zeta)|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupInterval {
    /// Value attained at `witness`, hence a rigorous lower bound.
    pub lower: f64,
    /// Coefficient-sum bound, a rigorous upper bound.
    pub upper: f64,
    pub witness: Vec<C64>,
}

pub fn torus_sup(p: &MultiPoly, opts: SearchOptions) -> Result<SupInterval> {
    let found = torus::maximize(p.n(), opts, |phases| {
        let z = torus::phases_to_point(phases);
        eval_scalar(p, &z).map_or(f64::NAN, |v| v.norm())
    })?;
    let witness = found.point();
    Ok(SupInterval {
        lower: found.value,
        upper: p.coefficient_l1(),
        witness,
    })
}

/// Largest value of `||sum_k zeta_k X_k||` found on the torus, with the
/// point attaining it.
///
/// The norm is invariant under a common phase, so `zeta_1` is fixed to 1
/// and the search runs over the remaining `n - 1` phases. By the maximum
/// principle the supremum over the torus equals the one over the closed
/// polydisk.
pub fn row_symbol_argmax(x: &[ComplexMatrix], opts: SearchOptions) -> Result<TorusMax> {
    let first = x
        .first()
        .ok_or_else(|| Error::input("row symbol of an empty operator list"))?;
    if let Some(k) = x.iter().position(|m| m.shape() != first.shape()) {
        return Err(Error::dim(format!(
            "X_{} is {}x{}, X_1 is {}x{}",
            k + 1,
            x[k].rows(),
            x[k].cols(),
            first.rows(),
            first.cols()
        )));
    }
    if first.is_empty() {
        return Err(Error::dim("row symbol of empty matrices"));
    }
    let found = torus::maximize(x.len() - 1, opts, |phases| {
        let mut sum = first.clone();
        for (m, &t) in x[1..].iter().zip(phases) {
            sum += &m.scale(C64::from_polar(1.0, t));
        }
        operator_norm(&sum).unwrap_or(f64::NAN)
    })?;
    let mut phases = vec![0.0];
    phases.extend(found.phases);
    Ok(TorusMax {
        value: found.value,
        phases,
    })
}

/// Estimated `sup_{zeta in T^n} ||sum_k zeta_k X_k||` (lower-bound flavour).
pub fn row_symbol_sup(x: &[ComplexMatrix], opts: SearchOptions) -> Result<f64> {
    row_symbol_argmax(x, opts).map(|m| m.value)
}
