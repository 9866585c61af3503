//! Acceptance criteria 1–10, one pass/fail line each. Every equality is exact
//! over the rationals; a criterion also fails when it overruns its budget.

use std::time::{Duration, Instant};

use brane_core::suites::{checks, run_checks, run_suite, CheckRecord, Suite, SuiteConfig};

struct Criterion {
    number: usize,
    title: &'static str,
    budget: Duration,
    records: Vec<CheckRecord>,
    elapsed: Duration,
}

impl Criterion {
    fn passed(&self) -> bool {
        !self.records.is_empty() && self.records.iter().all(CheckRecord::passed) && self.elapsed <= self.budget
    }

    fn line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        format!(
            "criterion {:>2} {verdict}: {} ({} checks, {:.1}s of {}s)",
            self.number,
            self.title,
            self.records.len(),
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        )
    }
}

/// Runs the checks of `suite` whose id satisfies `keep`.
fn run(number: usize, title: &'static str, budget_s: u64, suite: Suite, keep: impl Fn(&str) -> bool) -> Criterion {
    let cfg = SuiteConfig::default();
    let t = Instant::now();
    let selected: Vec<_> = checks(suite, &cfg).unwrap().into_iter().filter(|c| keep(&c.id)).collect();
    let records = run_checks(&selected, false);
    Criterion { number, title, budget: Duration::from_secs(budget_s), records, elapsed: t.elapsed() }
}

fn report_json(cfg: &SuiteConfig) -> String {
    let records: Vec<CheckRecord> = [Suite::Division, Suite::Spinor, Suite::Linfty, Suite::Integration, Suite::Super]
        .into_iter()
        .flat_map(|s| run_suite(s, cfg).unwrap())
        .collect();
    serde_json::to_string_pretty(&records).unwrap()
}

fn determinism() -> Criterion {
    let cfg = SuiteConfig { ks: vec![1, 2], grassmann: vec![2], samples: Some(8), seed: 11, timings: false };
    let t = Instant::now();
    let (a, b) = (report_json(&cfg), report_json(&cfg));
    let other = report_json(&SuiteConfig { seed: 12, ..cfg.clone() });
    let record = CheckRecord {
        id: "determinism".into(),
        anchor: "reproducible reports".into(),
        status: if a == b && a != other { brane_core::suites::Status::Pass } else { brane_core::suites::Status::Fail },
        witness: format!("{} bytes, identical: {}, seed-sensitive: {}", a.len(), a == b, a != other),
        wall_ms: None,
    };
    Criterion { number: 10, title: "identical seeds give byte-identical reports", budget: Duration::from_secs(300), records: vec![record], elapsed: t.elapsed() }
}

#[test]
fn acceptance() {
    let criteria = vec![
        run(1, "division algebra identities", 10, Suite::Division, |_| true),
        run(2, "3-ψ and 4-Ψ rules", 30, Suite::Spinor, |_| true),
        run(3, "α and β closed and not exact", 120, Suite::Cohomology, |id| id.contains(".closed.") || id.contains(".not_exact.")),
        run(4, "extension by zero and d² = 0", 300, Suite::Cohomology, |id| id.contains("extension") || id.contains("d_squared")),
        run(5, "L∞ Jacobi identities and perturbed control", 300, Suite::Linfty, |_| true),
        run(6, "integration coefficients and displayed partials", 5, Suite::Integration, |id| id.contains(".p2.") || id.contains(".p3.")),
        run(7, "Heisenberg 2-group and differentiation", 30, Suite::Integration, |id| id.contains("heisenberg") || id.contains("chain_map")),
        run(8, "supergroup pentagon and pentagonator", 600, Suite::Super, |id| !id.contains("naturality")),
        run(9, "naturality of super-integration", 300, Suite::Super, |id| id.contains("naturality")),
        determinism(),
    ];
    for c in &criteria {
        println!("{}", c.line());
        for r in c.records.iter().filter(|r| !r.passed()) {
            println!("    {} failed: {}", r.id, r.witness);
        }
    }
    let failed: Vec<usize> = criteria.iter().filter(|c| !c.passed()).map(|c| c.number).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
