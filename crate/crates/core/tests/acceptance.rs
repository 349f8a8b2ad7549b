//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::Instant;

use laguerre_core::verify::{run_suite, Suite, SuiteConfig, SuiteReport};

struct Criterion {
    id: u32,
    title: &'static str,
    suites: &'static [(Suite, Option<usize>)],
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, title: "Laguerre polynomials: semigroup route vs Rodrigues route", suites: &[(Suite::Laguerre, None)] },
    Criterion { id: 2, title: "group law of exp(aΔθ), 200 random polynomials", suites: &[(Suite::Semigroup, Some(200))] },
    Criterion { id: 3, title: "integral route vs closed form at Q = 80", suites: &[(Suite::Integral, None)] },
    Criterion {
        id: 4,
        title: "zero preservation, 1000 trials per operator family",
        suites: &[(Suite::Preservation, Some(1000)), (Suite::PhiPreservation, Some(1000))],
    },
    Criterion { id: 5, title: "operator norm bound, 500 random cases", suites: &[(Suite::Bound, Some(500))] },
    Criterion { id: 6, title: "norm identity for z^n/n!", suites: &[(Suite::NormIdentity, None)] },
    Criterion { id: 7, title: "sandwich inequality, 50 Laguerre forms", suites: &[(Suite::Sandwich, Some(50))] },
    Criterion { id: 8, title: "Vandermonde-type identity", suites: &[(Suite::Vandermonde, Some(200))] },
    Criterion { id: 9, title: "evolution equation residual, five initial data", suites: &[(Suite::Pde, None)] },
    Criterion { id: 10, title: "stabilization of e^(-z), θ = 1, R = 1", suites: &[(Suite::Stabilization, None)] },
    Criterion { id: 11, title: "quadrature moments, Q in {16, 80}", suites: &[(Suite::Quadrature, None)] },
];

fn describe(r: &SuiteReport) -> String {
    format!(
        "{}: {} cases, {} failed, max error {:.3e} (tolerance {:.1e})",
        r.suite, r.trials, r.failures, r.max_error, r.tolerance
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut failed = 0;
    for c in CRITERIA {
        let reports: Vec<SuiteReport> = c
            .suites
            .iter()
            .map(|&(suite, trials)| run_suite(suite, &SuiteConfig { trials, ..Default::default() }))
            .collect();
        let pass = reports.iter().all(SuiteReport::passed);
        if !pass {
            failed += 1;
        }
        let detail: Vec<String> = reports.iter().map(describe).collect();
        println!(
            "criterion {:>2} {}: {} [{}]",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.title,
            detail.join("; ")
        );
        for r in reports.iter().filter(|r| !r.passed()) {
            for note in &r.notes {
                println!("    {}: {note}", r.suite);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1}s",
        CRITERIA.len() - failed,
        CRITERIA.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
