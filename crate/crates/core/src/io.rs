//! File formats: scattering system and operator tuple documents (JSON) and
//! the line-oriented polynomial text format.
//!
//! Matrices are arrays of rows and every entry is a `[re, im]` pair:
//!
//! ```json
//! { "n": 1, "state_dim": 1, "in_dim": 1, "out_dim": 1,
//!   "A": [[[[0, 0]]]], "B": [[[[1, 0]]]], "C": [[[[1, 0]]]], "D": [[[[0, 0]]]] }
//! ```
//!
//! Tuples use `{ "n": .., "dim": .., "mats": [...] }`. Polynomials are one
//! term per line, `coeff_re coeff_im : a1 a2 ... an`, with `#` comments;
//! the name `kv` selects the built-in Kaijser–Varopoulos polynomial.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kv;
use crate::matrixcore::ComplexMatrix;
use crate::polynomial::{MultiPoly, OperatorTuple};
use crate::scattering::ScatteringSystem;
use crate::C64;

type RawMatrix = Vec<Vec<Vec<f64>>>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    n: usize,
    state_dim: usize,
    in_dim: usize,
    out_dim: usize,
    #[serde(rename = "A")]
    a: Vec<RawMatrix>,
    #[serde(rename = "B")]
    b: Vec<RawMatrix>,
    #[serde(rename = "C")]
    c: Vec<RawMatrix>,
    #[serde(rename = "D")]
    d: Vec<RawMatrix>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTuple {
    n: usize,
    dim: usize,
    mats: Vec<RawMatrix>,
}

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

fn json_err(e: serde_json::Error) -> Error {
    parse_err(format!("line {}, column {}", e.line(), e.column()), e.to_string())
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn decode_matrix(raw: &RawMatrix, at: &str, shape: (usize, usize)) -> Result<ComplexMatrix> {
    if raw.len() != shape.0 {
        return Err(parse_err(
            at,
            format!("expected {} rows, found {}", shape.0, raw.len()),
        ));
    }
    let mut rows = Vec::with_capacity(raw.len());
    for (i, row) in raw.iter().enumerate() {
        if row.len() != shape.1 {
            return Err(parse_err(
                format!("{at} row {i}"),
                format!("expected {} entries, found {}", shape.1, row.len()),
            ));
        }
        let mut out = Vec::with_capacity(row.len());
        for (j, pair) in row.iter().enumerate() {
            let z = match pair.as_slice() {
                [re, im] => C64::new(*re, *im),
                other => {
                    return Err(parse_err(
                        format!("{at}[{i}][{j}]"),
                        format!("expected a [re, im] pair, found {} values", other.len()),
                    ))
                }
            };
            if !z.is_finite() {
                return Err(parse_err(format!("{at}[{i}][{j}]"), "non-finite entry"));
            }
            out.push(z);
        }
        rows.push(out);
    }
    if shape.0 == 0 {
        return Ok(ComplexMatrix::zeros(0, shape.1));
    }
    let m = ComplexMatrix::from_rows(&rows)?;
    if m.shape() != shape {
        // only reachable for zero-width rows
        return Ok(ComplexMatrix::zeros(shape.0, shape.1));
    }
    Ok(m)
}

fn encode_matrix(m: &ComplexMatrix) -> RawMatrix {
    m.to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|z| vec![z.re, z.im]).collect())
        .collect()
}

fn decode_list(
    raw: &[RawMatrix],
    name: &str,
    n: usize,
    shape: (usize, usize),
) -> Result<Vec<ComplexMatrix>> {
    if raw.len() != n {
        return Err(parse_err(
            name,
            format!("expected {n} matrices, found {}", raw.len()),
        ));
    }
    raw.iter()
        .enumerate()
        .map(|(k, m)| decode_matrix(m, &format!("{name}[{k}]"), shape))
        .collect()
}

/// Parses and validates a system document.
pub fn parse_system(text: &str) -> Result<ScatteringSystem> {
    let raw: RawSystem = serde_json::from_str(text).map_err(json_err)?;
    let (x, u, y) = (raw.state_dim, raw.in_dim, raw.out_dim);
    let a = decode_list(&raw.a, "A", raw.n, (x, x))?;
    let b = decode_list(&raw.b, "B", raw.n, (x, u))?;
    let c = decode_list(&raw.c, "C", raw.n, (y, x))?;
    let d = decode_list(&raw.d, "D", raw.n, (y, u))?;
    ScatteringSystem::new(x, u, y, a, b, c, d)
}

pub fn load_system(path: impl AsRef<Path>) -> Result<ScatteringSystem> {
    parse_system(&read_file(path.as_ref())?)
}

pub fn system_to_json(s: &ScatteringSystem) -> String {
    let enc = |v: &[ComplexMatrix]| v.iter().map(encode_matrix).collect();
    let raw = RawSystem {
        n: s.n(),
        state_dim: s.state_dim(),
        in_dim: s.in_dim(),
        out_dim: s.out_dim(),
        a: enc(s.a()),
        b: enc(s.b()),
        c: enc(s.c()),
        d: enc(s.d()),
    };
    serde_json::to_string_pretty(&raw).expect("plain data serializes")
}

/// Parses a tuple document. Commutativity is checked.
pub fn parse_tuple(text: &str) -> Result<OperatorTuple> {
    let raw: RawTuple = serde_json::from_str(text).map_err(json_err)?;
    if raw.dim == 0 {
        return Err(parse_err("dim", "tuple dimension must be positive"));
    }
    let mats = decode_list(&raw.mats, "mats", raw.n, (raw.dim, raw.dim))?;
    OperatorTuple::new(mats)
}

pub fn tuple_to_json(t: &OperatorTuple) -> String {
    let raw = RawTuple {
        n: t.n(),
        dim: t.dim(),
        mats: t.mats().iter().map(encode_matrix).collect(),
    };
    serde_json::to_string_pretty(&raw).expect("plain data serializes")
}

/// `kv` or a path to a tuple document.
pub fn load_tuple_spec(spec: &str) -> Result<OperatorTuple> {
    if spec == "kv" {
        let kv = kv::build_kv();
        kv.t.check_commuting(crate::polynomial::COMMUTATIVITY_TOL)?;
        return Ok(kv.t);
    }
    parse_tuple(&read_file(Path::new(spec))?)
}

/// Parses the polynomial text format.
pub fn parse_poly(text: &str) -> Result<MultiPoly> {
    let mut poly: Option<MultiPoly> = None;
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = || format!("line {}", lineno + 1);
        let (coeff, exps) = line
            .split_once(':')
            .ok_or_else(|| parse_err(at(), "expected `re im : a1 ... an`"))?;
        let coeff: Vec<f64> = coeff
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(at(), format!("bad coefficient: {e}")))?;
        let [re, im] = coeff[..] else {
            return Err(parse_err(
                at(),
                format!("expected two coefficient components, found {}", coeff.len()),
            ));
        };
        let alpha: Vec<u32> = exps
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(at(), format!("bad exponent: {e}")))?;
        let p = poly.get_or_insert_with(|| MultiPoly::zero(alpha.len()));
        if alpha.len() != p.n() {
            return Err(parse_err(
                at(),
                format!("expected {} exponents, found {}", p.n(), alpha.len()),
            ));
        }
        if alpha.is_empty() {
            return Err(parse_err(at(), "a term needs at least one exponent"));
        }
        p.add_term(alpha, C64::new(re, im))
            .map_err(|e| parse_err(at(), e.to_string()))?;
    }
    poly.ok_or_else(|| parse_err("end of input", "no terms found"))
}

pub fn poly_to_text(p: &MultiPoly) -> String {
    let mut out = String::new();
    for (alpha, c) in p.terms() {
        let exps: Vec<String> = alpha.iter().map(u32::to_string).collect();
        writeln!(out, "{:e} {:e} : {}", c.re, c.im, exps.join(" ")).expect("string write");
    }
    out
}

/// `kv` or a path to a polynomial text file.
pub fn load_poly_spec(spec: &str) -> Result<MultiPoly> {
    if spec == "kv" {
        return Ok(kv::kv_polynomial());
    }
    parse_poly(&read_file(Path::new(spec))?)
}

/// Parses `"re,im;re,im;..."` into a point of `C^n`.
pub fn parse_point(text: &str) -> Result<Vec<C64>> {
    text.split(';')
        .enumerate()
        .map(|(k, part)| {
            let nums: Vec<f64> = part
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| parse_err(format!("coordinate {}", k + 1), e.to_string()))?;
            match nums[..] {
                [re] => Ok(C64::new(re, 0.0)),
                [re, im] => Ok(C64::new(re, im)),
                _ => Err(parse_err(
                    format!("coordinate {}", k + 1),
                    "expected `re` or `re,im`",
                )),
            }
        })
        .collect()
}
