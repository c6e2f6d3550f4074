//! One line per acceptance criterion: `criterion N: PASS|FAIL ...`.
//! Run with `cargo test -p plancherel-cli --test acceptance -- --nocapture`.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use plancherel_cli::run;
use plancherel_core::exactalg::{parse_factored, FactoredExpr, HalfInt, RatFunc};
use plancherel_core::groupdata::{gamma_factor, LeviShape};
use plancherel_core::invariants::FundamentalInvariants;
use plancherel_core::plancherel::{density, integrate, select_component, torus_average};
use plancherel_core::verify::{self, SuiteReport};

struct Outcome {
    ok: bool,
    detail: String,
}

fn from_suites(reports: &[SuiteReport]) -> Outcome {
    let checks: usize = reports.iter().map(|r| r.checks).sum();
    let failed: Vec<String> = reports
        .iter()
        .flat_map(|r| r.failures.iter().map(move |f| format!("{}: {f}", r.name)))
        .take(3)
        .collect();
    Outcome {
        ok: reports.iter().all(SuiteReport::passed),
        detail: if failed.is_empty() {
            format!("{checks} checks")
        } else {
            format!("{checks} checks, failures: {}", failed.join("; "))
        },
    }
}

fn criterion(
    n: u32,
    budget: Option<Duration>,
    results: &mut Vec<(u32, bool)>,
    f: impl FnOnce() -> Outcome,
) {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let in_time = budget.is_none_or(|b| took <= b);
    let ok = out.ok && in_time;
    let budget_note = match budget {
        Some(b) if !in_time => format!(", over budget {:.1?}", b),
        Some(b) => format!(", budget {:.0?}", b),
        None => String::new(),
    };
    println!(
        "criterion {n}: {} ({}; {:.2?}{budget_note})",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        took
    );
    results.push((n, ok));
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn gl3_example() -> Outcome {
    let out = run(["plancherel", "density", &data("gl3_trivial.json"), "--component", "2+1"]);
    if out.code != 0 {
        return Outcome { ok: false, detail: format!("exit {}: {}", out.code, out.stderr) };
    }
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).expect("JSON");
    let mu = parse_factored(doc["mu"].as_str().unwrap_or("")).expect("parsable μ");
    let gamma = (&RatFunc::q_pow_int(2) + &(&RatFunc::q() + &RatFunc::one())) / RatFunc::q_pow_int(2);
    let gamma_ok = gamma == gamma_factor(&LeviShape::new(vec![2, 1]).unwrap());
    let expected = FactoredExpr::abs_sq(0, 1, HalfInt::from_doubled(-1), 1)
        .mul(&FactoredExpr::abs_sq(0, 1, HalfInt::from_doubled(-3), -1))
        .scale(&(&gamma.pow(2) * &RatFunc::q()));
    Outcome {
        ok: gamma_ok && mu.exact_eq(&expected),
        detail: format!("μ = {}", doc["mu"].as_str().unwrap_or("")),
    }
}

/// `∫_T |1-z|²/|1-z/q|²` from Fourier coefficients: `|1-z|² = 2 - z - z̄`
/// and `1/|1-z/q|² = Σ_n q^{-|n|}/(1-q^{-2}) z^n`.
fn fourier_oracle(q: f64) -> f64 {
    let c = |n: i32| q.powi(-n.abs()) / (1.0 - q.powi(-2));
    2.0 * c(0) - c(1) - c(-1)
}

fn quadrature() -> Outcome {
    let inv = FundamentalInvariants::iwahori(2, 2);
    let principal = density(&select_component(&inv, "1+1").unwrap()).unwrap();
    let circle = density(&select_component(&inv, "2").unwrap()).unwrap();
    let mut notes = Vec::new();
    let mut ok = true;
    for q in [2.0, 3.0, 4.0, 5.0] {
        let mass = integrate(&principal, q, 256).unwrap();
        let circle_mass = integrate(&circle, q, 256).unwrap();
        let avg = torus_average(&principal.factors, 2, q, 256);
        let oracle = fourier_oracle(q);
        let closed = 2.0 * q / (q + 1.0);
        let good = (mass - 1.0).abs() <= 1e-6
            && (circle_mass - (q - 1.0)).abs() <= 1e-12 * q
            && (oracle - closed).abs() <= 1e-9
            && (avg - oracle).abs() <= 1e-9;
        ok &= good;
        notes.push(format!("q={q}: mass {mass:.9}, circle {circle_mass:.9}"));
    }
    Outcome { ok, detail: notes.join(", ") }
}

#[test]
fn acceptance() {
    let mut results = Vec::new();
    let secs = Duration::from_secs;
    criterion(1, Some(secs(1)), &mut results, || from_suites(&[verify::poincare(12)]));
    criterion(2, Some(secs(5)), &mut results, || from_suites(&[verify::gamma(8)]));
    criterion(3, Some(secs(1)), &mut results, || from_suites(&[verify::overlap(12)]));
    criterion(4, None, &mut results, gl3_example);
    criterion(5, Some(secs(30)), &mut results, || {
        from_suites(&[verify::formal_degrees_with(plancherel_core::degrees::fd_ratio)])
    });
    criterion(6, None, &mut results, || from_suites(&[verify::hecke(6)]));
    criterion(7, None, &mut results, || from_suites(&[verify::closure(4)]));
    criterion(8, Some(secs(10)), &mut results, quadrature);
    criterion(9, None, &mut results, || from_suites(&[verify::lambda(4, 4)]));
    criterion(10, None, &mut results, || from_suites(&[verify::transfer(5)]));
    criterion(11, None, &mut results, || from_suites(&[verify::macdonald(6)]));
    let identity_web = results.iter().all(|&(_, ok)| ok);
    criterion(12, None, &mut results, || Outcome {
        ok: identity_web,
        detail: "no p-adic group oracle; covered by the cross-derivations of criteria 1-11".into(),
    });
    let failed: Vec<u32> = results.iter().filter(|r| !r.1).map(|r| r.0).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
