//! Report documents and their JSON and Markdown renderings.

use brane_core::suites::{CheckRecord, SuiteConfig};
use serde::Serialize;

pub const TOOL: &str = "brane";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Md,
}

#[derive(Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub suites: Vec<String>,
    pub seed: u64,
    pub config: SuiteConfig,
    pub summary: Summary,
    pub records: Vec<CheckRecord>,
}

impl VerifyReport {
    pub fn new(suites: Vec<String>, config: SuiteConfig, mut records: Vec<CheckRecord>) -> Self {
        records.sort_by(|a, b| a.id.cmp(&b.id));
        let passed = records.iter().filter(|r| r.passed()).count();
        VerifyReport {
            tool: TOOL,
            version: VERSION,
            command: "verify",
            suites,
            seed: config.seed,
            config,
            summary: Summary { checks: records.len(), passed, failed: records.len() - passed },
            records,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn markdown(&self) -> String {
        let mut s = format!(
            "# {} {} verify\n\nSuites: {}. Seed: {}. {} of {} checks passed.\n\n",
            self.tool,
            self.version,
            self.suites.join(", "),
            self.seed,
            self.summary.passed,
            self.summary.checks
        );
        let timed = self.records.iter().any(|r| r.wall_ms.is_some());
        s.push_str(if timed { "| check | result | status | witness | ms |\n|---|---|---|---|---|\n" } else { "| check | result | status | witness |\n|---|---|---|---|\n" });
        for r in &self.records {
            let status = if r.passed() { "pass" } else { "**FAIL**" };
            s.push_str(&format!("| `{}` | {} | {} | {} |", r.id, cell(&r.anchor), status, cell(&r.witness)));
            if let Some(ms) = r.wall_ms {
                s.push_str(&format!(" {ms} |"));
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Serialize)]
pub struct ClassWitness {
    /// Canonical monomial labels and coefficient, one entry per term.
    pub terms: Vec<(Vec<String>, String)>,
}

#[derive(Serialize)]
pub struct ExactnessCheck {
    pub cochain: String,
    pub closed: bool,
    /// `None` when the cochain is not closed.
    pub exact: Option<bool>,
    pub bigrade: Option<(usize, usize)>,
    pub witness: String,
}

#[derive(Serialize)]
pub struct CohomologyReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub algebra: String,
    pub algebra_dim: usize,
    pub level: usize,
    pub dimension: usize,
    pub classes: Vec<ClassWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<ExactnessCheck>,
}

impl CohomologyReport {
    pub fn markdown(&self) -> String {
        let mut s = format!(
            "# {} {} cohomology\n\nH^{}({}) has dimension {}.\n",
            self.tool, self.version, self.level, self.algebra, self.dimension
        );
        for (i, c) in self.classes.iter().enumerate() {
            let terms: Vec<String> = c.terms.iter().map(|(l, v)| format!("{v}·({})", l.join(","))).collect();
            s.push_str(&format!("\n{}. {}", i + 1, terms.join(" + ")));
        }
        if !self.classes.is_empty() {
            s.push('\n');
        }
        if let Some(c) = &self.check {
            let verdict = match c.exact {
                None => "not closed",
                Some(true) => "exact",
                Some(false) => "closed and not exact",
            };
            s.push_str(&format!("\nCochain `{}`: {verdict}. {}\n", c.cochain, c.witness));
        }
        s
    }
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}
