//! Structured verdicts returned by every check.

use std::fmt;

use serde::Serialize;

use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("PASS"),
            Verdict::Fail => f.write_str("FAIL"),
        }
    }
}

/// How the margin of a certificate is read against its tolerance.
///
/// `Slack` margins measure room left before a threshold (a smallest
/// eigenvalue, say): the check passes iff `margin >= -tolerance`.
/// `Excess` margins measure how far a quantity overshoots its bound
/// (`||zeta G|| - 1`, a coefficient discrepancy): the check passes iff
/// `margin <= tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MarginSense {
    Slack,
    Excess,
}

impl MarginSense {
    fn passes(self, margin: f64, tolerance: f64) -> bool {
        match self {
            MarginSense::Slack => margin >= -tolerance,
            MarginSense::Excess => margin <= tolerance,
        }
    }

    /// Signed slack in the `Slack` convention; positive means room to spare.
    fn slack(self, margin: f64, tolerance: f64) -> f64 {
        match self {
            MarginSense::Slack => margin + tolerance,
            MarginSense::Excess => tolerance - margin,
        }
    }
}

/// The object exhibiting the extreme value a certificate reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// A point of the torus or polydisk.
    Point(Vec<C64>),
    /// A vector, e.g. an eigenvector or singular vector.
    Vector(Vec<C64>),
    /// An exponent multi-index.
    Monomial(Vec<u32>),
    /// A (block-row, block-column) position, zero based.
    Block { row: usize, col: usize },
    /// Named raw values.
    Values(Vec<Detail>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Detail {
    pub name: String,
    pub value: f64,
}

impl Detail {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            value,
        }
    }
}

/// Verdict of a check together with the numbers behind it.
///
/// The verdict is never set directly; it is derived from `margin`,
/// `tolerance` and `sense`, so the two can not disagree. A failing
/// certificate always carries a witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    description: String,
    verdict: Verdict,
    margin: f64,
    tolerance: f64,
    sense: MarginSense,
    witness: Option<Witness>,
    /// `true` when the check samples a continuum (grid search), so that a
    /// pass is evidence up to resolution while a fail is rigorous.
    sampled: bool,
    details: Vec<Detail>,
}

impl Certificate {
    pub fn new(
        description: impl Into<String>,
        sense: MarginSense,
        margin: f64,
        tolerance: f64,
        witness: Witness,
    ) -> Self {
        let verdict = if sense.passes(margin, tolerance) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            description: description.into(),
            verdict,
            margin,
            tolerance,
            sense,
            witness: Some(witness),
            sampled: false,
            details: Vec::new(),
        }
    }

    /// Conjunction of several checks. The margin, tolerance and witness are
    /// taken from the first failing part, or from the part with the least
    /// slack when all pass.
    pub fn all(description: impl Into<String>, parts: Vec<Certificate>) -> Self {
        assert!(!parts.is_empty(), "conjunction of zero certificates");
        let deciding = parts
            .iter()
            .find(|c| !c.is_pass())
            .or_else(|| {
                parts.iter().min_by(|a, b| {
                    a.slack()
                        .partial_cmp(&b.slack())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
            })
            .expect("nonempty");
        let mut out = Certificate {
            description: description.into(),
            verdict: if parts.iter().all(Certificate::is_pass) {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            margin: deciding.margin,
            tolerance: deciding.tolerance,
            sense: deciding.sense,
            witness: deciding.witness.clone(),
            sampled: parts.iter().any(|c| c.sampled),
            details: Vec::new(),
        };
        for part in &parts {
            out.details
                .push(Detail::new(format!("{} (margin)", part.description), part.margin));
            out.details.extend(part.details.iter().cloned());
        }
        out
    }

    pub fn sampled(mut self) -> Self {
        self.sampled = true;
        self
    }

    pub fn with_detail(mut self, name: impl Into<String>, value: f64) -> Self {
        self.details.push(Detail::new(name, value));
        self
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    pub fn is_pass(&self) -> bool {
        self.verdict.is_pass()
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn sense(&self) -> MarginSense {
        self.sense
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }

    pub fn is_sampled(&self) -> bool {
        self.sampled
    }

    pub fn details(&self) -> &[Detail] {
        &self.details
    }

    pub fn detail(&self, name: &str) -> Option<f64> {
        self.details.iter().find(|d| d.name == name).map(|d| d.value)
    }

    fn slack(&self) -> f64 {
        self.sense.slack(self.margin, self.tolerance)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: margin = {:.6e} (tol {:.1e}{})",
            self.verdict,
            self.description,
            self.margin,
            self.tolerance,
            if self.sampled { ", sampled" } else { "" }
        )?;
        if let Some(w) = &self.witness {
            if !self.is_pass() {
                write!(f, "; witness {}", format_witness(w))?;
            }
        }
        Ok(())
    }
}

pub fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{:.10}", z.re)
    } else {
        format!("{:.10}{:+.10}i", z.re, z.im)
    }
}

pub fn format_witness(w: &Witness) -> String {
    let join = |v: &[C64]| {
        v.iter()
            .map(|z| format_complex(*z))
            .collect::<Vec<_>>()
            .join(", ")
    };
    match w {
        Witness::Point(z) => format!("zeta = ({})", join(z)),
        Witness::Vector(v) => format!("vector ({})", join(v)),
        Witness::Monomial(a) => format!("monomial z^{a:?}"),
        Witness::Block { row, col } => format!("block ({}, {})", row + 1, col + 1),
        Witness::Values(d) => d
            .iter()
            .map(|d| format!("{} = {:.12}", d.name, d.value))
            .collect::<Vec<_>>()
            .join(", "),
    }
}
