//! Dissipative multidimensional scattering systems over the polydisk.
//!
//! The crate evaluates transfer functions of nD scattering systems, checks
//! dissipativity on the torus, evaluates polynomials at commuting operator
//! tuples, and packages the Kaijser–Varopoulos tuple together with the
//! structural checks showing it satisfies the tensor-contractivity condition.
//! Combining the two yields an executable refutation: a polynomial whose
//! norm at that tuple exceeds one cannot be the transfer function of a
//! dissipative 3D system.
//!
//! Every check returns a [`Certificate`] carrying the verdict, a signed
//! margin, the tolerance used and a witness.

pub mod certificate;
pub mod error;
pub mod io;
pub mod kv;
pub mod lft;
pub mod matrixcore;
pub mod polynomial;
pub mod sample;
pub mod scattering;
pub mod torus;

pub use certificate::{Certificate, Detail, MarginSense, Verdict, Witness};
pub use error::{Error, Result};
pub use kv::KvData;
pub use matrixcore::ComplexMatrix;
pub use num_complex::Complex64 as C64;
pub use polynomial::{MultiPoly, OperatorTuple, SupInterval};
pub use scattering::{ScatteringSystem, TaylorSeries};
pub use torus::{SearchOptions, TorusMax};

/// Default tolerance for certificates unless a caller overrides it.
pub const DEFAULT_TOL: f64 = 1e-9;
