use std::path::Path;

use anyhow::Context;
use polyreal::certificate::format_witness;
use polyreal::kv::{self, KvData};
use polyreal::lft::poly_at_tuple_via_lft;
use polyreal::matrixcore::operator_norm;
use polyreal::polynomial::{eval_scalar, eval_tuple, torus_sup};
use polyreal::sample::{admissible_triple, random_matrix};
use polyreal::scattering::{self, check_realizes, transfer_eval};
use polyreal::{io, Certificate, Error, MarginSense, SearchOptions, Witness, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{Outcome, Report};
use crate::SearchArgs;

/// `3√3/5`.
pub fn kv_target() -> f64 {
    3.0 * 3f64.sqrt() / 5.0
}

/// Largest `|p|` over `samples` seeded uniform torus points.
fn sampled_torus_max(p: &polyreal::MultiPoly, samples: usize, seed: u64) -> anyhow::Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    for _ in 0..samples {
        let z: Vec<C64> = (0..p.n())
            .map(|_| C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)))
            .collect();
        best = best.max(eval_scalar(p, &z)?.norm());
    }
    Ok(best)
}

fn faulty_kv() -> KvData {
    let mut v = kv::kv_vectors();
    v[0][1] = -v[0][1];
    KvData::with_vectors(v).expect("five-entry vectors")
}

fn error_certificate(description: &str, err: &Error) -> Certificate {
    Certificate::new(
        format!("{description} ({err})"),
        MarginSense::Excess,
        f64::INFINITY,
        0.0,
        Witness::Values(vec![]),
    )
}

pub fn counterexample(seed: u64, triples: usize, inject_fault: bool) -> anyhow::Result<Report> {
    let mut report = Report::new("counterexample");
    let kv = if inject_fault {
        report.note("self-test: v_1 corrupted, a failing certificate is expected");
        faulty_kv()
    } else {
        kv::build_kv()
    };
    let mut ok = true;

    ok &= report.check(kv::unit_norms(&kv, 1e-14)?);
    ok &= report.check(kv::commutativity(&kv, 1e-15));

    let violation = match kv::violation_norm(&kv) {
        Ok(v) => v,
        Err(e) => {
            report.check(error_certificate("||p(T)||", &e));
            f64::NAN
        }
    };
    report.value("violation_norm", violation);
    report.value("three_sqrt3_over_5", kv_target());
    ok &= report.check(Certificate::new(
        "||p(T)|| = 3√3/5",
        MarginSense::Excess,
        (violation - kv_target()).abs(),
        1e-12,
        Witness::Values(vec![polyreal::Detail::new("violation_norm", violation)]),
    ));

    // structural identities for random operator triples
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut structure = Vec::new();
    let mut norms = Vec::new();
    for i in 0..triples {
        let d = 1 + i % 4;
        let x: Vec<_> = (0..3).map(|_| random_matrix(&mut rng, d, d)).collect();
        structure.push(kv::verify_structure(&kv, &x)?);
        norms.push(kv::block_norm_identity(&kv, &x)?);
    }
    if triples > 0 {
        ok &= report.check(Certificate::all(
            format!("block pattern of sum T_k ⊗ X_k ({triples} random triples)"),
            structure,
        ));
        ok &= report.check(Certificate::all(
            format!("norm = max(column, row) ({triples} random triples)"),
            norms,
        ));
    }

    // tensor contractivity for admissible triples
    let opts = SearchOptions::new(24, 60);
    let mut tensor = Vec::new();
    let mut columns = Vec::new();
    for i in 0..triples {
        let d = 1 + i % 3;
        let x = admissible_triple(&mut rng, d, d, opts)?;
        match kv::tensor_contractivity(&kv, &x, opts) {
            Ok(c) => tensor.push(c),
            Err(e) => tensor.push(error_certificate("admissible triple", &e)),
        }
        columns.push(kv::column_condition(&x)?);
    }
    if triples > 0 {
        ok &= report.check(Certificate::all(
            format!("||sum T_k ⊗ X_k|| <= 1 for admissible X ({triples} triples)"),
            tensor,
        ));
        ok &= report.check(Certificate::all(
            format!("I - sum X_k* X_k >= 0 for admissible X ({triples} triples)"),
            columns,
        ));
    }

    let sup = torus_sup(&kv.p, SearchOptions::default())?;
    report.value("sup_torus_lower", sup.lower);
    report.value("sup_torus_upper", sup.upper);
    report.point("sup_torus_witness", &sup.witness);
    let sampled = sampled_torus_max(&kv.p, 100_000, seed)?;
    report.value("sup_torus_sampled_max", sampled);
    ok &= report.check(Certificate::new(
        "sup over torus of |p| reaches 1",
        MarginSense::Slack,
        sup.lower - 1.0,
        1e-6,
        Witness::Point(sup.witness.clone()),
    ));
    ok &= report.check(Certificate::new(
        "|p| <= 1 at 100000 random torus points",
        MarginSense::Excess,
        sampled - 1.0,
        1e-12,
        Witness::Values(vec![polyreal::Detail::new("sampled_max", sampled)]),
    ));

    if ok && violation > 1.0 {
        report.finish(
            Outcome::Consistent,
            format!(
                "counterexample confirmed: sup over T^3 of |p| = 1 (evidence) while \
                 ||p(T)|| = {violation} > 1 for a tuple T mapping admissible triples to \
                 contractions; p has no dissipative 3D scattering realization"
            ),
        );
    } else {
        let failing = report.failures().join("; ");
        report.finish(
            Outcome::Violation,
            format!("counterexample NOT confirmed; failing checks: {failing}"),
        );
    }
    Ok(report)
}

pub fn refute(
    system: &Path,
    poly: &str,
    search: SearchArgs,
    realize_tol: f64,
    radius: f64,
) -> anyhow::Result<Report> {
    let s = io::load_system(system).with_context(|| format!("loading {}", system.display()))?;
    let p = io::load_poly_spec(poly).with_context(|| format!("loading polynomial {poly}"))?;
    let mut report = Report::new("refute");

    let realizes = check_realizes(&s, &p, realize_tol)?;
    let realized = report.check(realizes.clone());
    if !realized {
        report.finish(
            Outcome::Violation,
            format!(
                "not a realization of p: {}",
                realizes.witness().map(format_witness).unwrap_or_default()
            ),
        );
        return Ok(report);
    }

    let diss = scattering::check_dissipative(&s, search.options(), search.tol)?;
    let dissipative = report.check(diss.clone());
    if !dissipative {
        let witness = diss.witness().map(format_witness).unwrap_or_default();
        if let Some(Witness::Point(z)) = diss.witness() {
            report.point("dissipativity_witness", z);
        }
        report.value("dissipativity_margin", diss.margin());
        report.finish(
            Outcome::Violation,
            format!(
                "realization but not dissipative: {witness}, ||zeta G|| - 1 = {:.6e}",
                diss.margin()
            ),
        );
        return Ok(report);
    }

    if s.n() != 3 {
        report.finish(
            Outcome::Consistent,
            "valid dissipative realization (dissipativity sampled on the torus)",
        );
        return Ok(report);
    }

    // escalate with the Kaijser–Varopoulos tuple
    let kv = kv::build_kv();
    let direct = operator_norm(&eval_tuple(&p, &kv.t.scaled(radius))?)?;
    report.value("radius", radius);
    report.value("norm_p_rT", direct);
    match poly_at_tuple_via_lft(&kv.t, &s, radius) {
        Err(e @ Error::Singular { .. }) => {
            report.note(format!("tensor resolvent failed: {e}"));
            report.finish(
                Outcome::Violation,
                "I - rT·A is singular, which cannot happen for a dissipative system; \
                 dissipativity must fail between grid points",
            );
        }
        Err(e) => return Err(e.into()),
        Ok(v) => {
            let norm = operator_norm(&v)?;
            report.value("norm_lft_rTG", norm);
            let cert = Certificate::new(
                "||LFT(rT·G)|| <= 1 for the Kaijser–Varopoulos tuple",
                MarginSense::Excess,
                norm - 1.0,
                search.tol,
                Witness::Values(vec![
                    polyreal::Detail::new("r", radius),
                    polyreal::Detail::new("norm", norm),
                ]),
            );
            if !report.check(cert) {
                report.finish(
                    Outcome::Violation,
                    format!(
                        "contradiction certificate: ||p(rT)|| = {norm} > 1 at r = {radius} for a \
                         tuple that maps admissible triples to contractions; dissipativity must \
                         fail between grid points"
                    ),
                );
            } else if direct > 1.0 + search.tol {
                report.finish(
                    Outcome::Error,
                    format!(
                        "numerical-tolerance escalation: ||p(rT)|| = {direct} > 1 directly but the \
                         realization gives {norm}; increase grid or tighten tolerances"
                    ),
                );
            } else {
                report.finish(
                    Outcome::Consistent,
                    "valid dissipative realization (sampled) with no contradiction at the \
                     Kaijser–Varopoulos tuple",
                );
            }
        }
    }
    Ok(report)
}

pub fn check_dissipative(system: &Path, search: SearchArgs) -> anyhow::Result<Report> {
    let s = io::load_system(system).with_context(|| format!("loading {}", system.display()))?;
    let mut report = Report::new("check-dissipative");
    let cert = scattering::check_dissipative(&s, search.options(), search.tol)?;
    if let Some(Witness::Point(z)) = cert.witness() {
        report.point("witness", z);
    }
    report.value("margin", cert.margin());
    if report.check(cert) {
        report.finish(Outcome::Consistent, "dissipative at the searched resolution");
    } else {
        report.finish(Outcome::Violation, "not dissipative");
    }
    Ok(report)
}

pub fn transfer(system: &Path, z: &str) -> anyhow::Result<Report> {
    let s = io::load_system(system).with_context(|| format!("loading {}", system.display()))?;
    let z = io::parse_point(z)?;
    let theta = transfer_eval(&s, &z)?;
    let mut report = Report::new("transfer");
    report.point("z", &z);
    report.matrix("theta", &theta);
    report.finish(Outcome::Consistent, "evaluated");
    Ok(report)
}

pub fn vn_test(
    poly: &str,
    tuple: &str,
    search: SearchArgs,
    samples: usize,
    seed: u64,
) -> anyhow::Result<Report> {
    let p = io::load_poly_spec(poly).with_context(|| format!("loading polynomial {poly}"))?;
    let t = io::load_tuple_spec(tuple).with_context(|| format!("loading tuple {tuple}"))?;
    if p.n() != t.n() {
        anyhow::bail!(
            "polynomial has {} variables but the tuple has {} operators",
            p.n(),
            t.n()
        );
    }
    let mut report = Report::new("vn-test");
    let norm = operator_norm(&eval_tuple(&p, &t)?)?;
    let sup = torus_sup(&p, search.options())?;
    let sampled = sampled_torus_max(&p, samples, seed)?;
    let evidence = sup.lower.max(sampled);
    report.value("norm_p_T", norm);
    report.value("sup_torus_lower", sup.lower);
    report.value("sup_torus_upper", sup.upper);
    report.value("sup_torus_sampled_max", sampled);
    report.point("sup_torus_witness", &sup.witness);
    let tuple_norm = t.max_norm();
    report.value("max_norm_T", tuple_norm);

    if tuple_norm > 1.0 + search.tol {
        report.finish(
            Outcome::Consistent,
            "tuple is not a contraction; von Neumann's inequality does not apply",
        );
        return Ok(report);
    }
    let cert = Certificate::new(
        "||p(T)|| <= sup over torus of |p|",
        MarginSense::Excess,
        norm - evidence,
        search.tol,
        Witness::Point(sup.witness.clone()),
    )
    .sampled();
    if report.check(cert) {
        report.finish(
            Outcome::Consistent,
            format!("||p(T)|| = {norm} <= sup evidence {evidence}"),
        );
    } else {
        report.finish(
            Outcome::Violation,
            format!("||p(T)|| = {norm} > sup evidence {evidence} → VIOLATION"),
        );
    }
    Ok(report)
}
