//! `brane`: run verification suites, integrate cocycles to group cochains,
//! and compute Lie superalgebra cohomology.
//!
//! Exit status is 0 when everything passes, 1 on a verification failure and
//! 2 on a usage or configuration error. `BRANE_WORKERS` caps the worker pool.

mod report;
mod specs;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use brane_core::cohomology::{cohomology_basis, is_exact, pair_certificate, Exactness, DEFAULT_GUARD};
use brane_core::integration::{integrate_cochain, NilpotentGroup};
use brane_core::ring::q_to_string;
use brane_core::suites::{run_suite, Suite, SuiteConfig};
use clap::{Parser, Subcommand};

use report::{to_json, ClassWitness, CohomologyReport, ExactnessCheck, Format, VerifyReport};

#[derive(Parser)]
#[command(name = "brane", version, about = "Exact verification of the superstring and 2-brane cocycles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a report.
    Verify {
        /// division, spinor, cohomology, linfty, integration, super or all.
        #[arg(value_name = "SUITE", conflicts_with = "suite")]
        positional: Option<String>,
        #[arg(long)]
        suite: Option<String>,
        /// Division algebra dimensions, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
        k: Vec<usize>,
        /// Grassmann generator counts for the supergroup checks.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        grassmann: Vec<u32>,
        /// Override every per-check sample count.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall time per check; the report is then no longer reproducible.
        #[arg(long)]
        timings: bool,
    },
    /// Integrate a cochain on a 2-step nilpotent algebra to a group cochain (JSON).
    Integrate {
        #[arg(long, help = specs::ALGEBRA_HELP)]
        algebra: String,
        /// `gamma`, `j`, `alpha`, `beta`, or terms like `1:p,q,z; 1/2:q,z,z`.
        #[arg(long)]
        cochain: String,
        /// Cochain level.
        #[arg(long)]
        p: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dimension and class witnesses of a cohomology group.
    Cohomology {
        #[arg(long, help = specs::ALGEBRA_HELP)]
        algebra: String,
        #[arg(long)]
        level: usize,
        /// Refuse when the cochain space has more monomials than this.
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: u128,
        /// Also decide whether this cochain is exact.
        #[arg(long)]
        check: Option<String>,
        /// Search primitives only in this bigrade (even,odd), e.g. `2,0`.
        #[arg(long, value_delimiter = ',', requires = "check")]
        bigrade: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn configure_workers() -> Result<()> {
    if let Ok(v) = std::env::var("BRANE_WORKERS") {
        let n: usize = v.trim().parse().with_context(|| format!("BRANE_WORKERS must be a positive integer, got `{v}`"))?;
        if n == 0 {
            bail!("BRANE_WORKERS must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

/// Ok(true) when every check passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Verify { positional, suite, k, grassmann, samples, seed, format, out, timings } => {
            let name = positional.or(suite).unwrap_or_else(|| "all".into());
            let suites: Vec<Suite> =
                if name == "all" { Suite::ALL.to_vec() } else { vec![name.parse()?] };
            let config = SuiteConfig { ks: k, grassmann, samples, seed, timings };
            config.validate()?;
            let mut records = Vec::new();
            for s in &suites {
                records.extend(run_suite(*s, &config)?);
            }
            let report = VerifyReport::new(suites.iter().map(|s| s.to_string()).collect(), config, records);
            let text = match format {
                Format::Json => to_json(&report),
                Format::Md => report.markdown(),
            };
            emit(out.as_deref(), &text)?;
            if out.is_some() {
                eprintln!("{} of {} checks passed", report.summary.passed, report.summary.checks);
            }
            Ok(report.all_passed())
        }
        Command::Integrate { algebra, cochain, p, out } => {
            let alg = specs::parse_algebra(&algebra)?;
            // Nilpotency first, before the cochain is even parsed.
            NilpotentGroup::new(alg.g.clone())?;
            let w = specs::parse_cochain(&alg, &cochain)?;
            if w.level() != p {
                bail!("cochain `{cochain}` has level {}, not {p}", w.level());
            }
            let f = integrate_cochain(&w, p)?;
            let dump = f.to_dump();
            emit(out.as_deref(), &to_json(&dump))?;
            if let Some(path) = &out {
                eprintln!("wrote {} terms to {}", dump.terms.len(), path.display());
            }
            Ok(true)
        }
        Command::Cohomology { algebra, level, guard, check, bigrade, format, out } => {
            let alg = specs::parse_algebra(&algebra)?;
            let basis = cohomology_basis(alg.g.clone(), level, guard)?;
            let check = match check {
                None => None,
                Some(spec) => {
                    let w = specs::parse_cochain(&alg, &spec)?;
                    if w.level() != level {
                        bail!("cochain `{spec}` has level {}, not {level}", w.level());
                    }
                    let bigrade = match bigrade.as_deref() {
                        None => None,
                        Some([a, b]) => Some((*a, *b)),
                        Some(_) => bail!("--bigrade takes two numbers, e.g. 2,0"),
                    };
                    Some(exactness(spec, &w, bigrade)?)
                }
            };
            let report = CohomologyReport {
                tool: report::TOOL,
                version: report::VERSION,
                command: "cohomology",
                algebra: alg.g.name().to_string(),
                algebra_dim: alg.g.dim(),
                level,
                dimension: basis.len(),
                classes: basis.iter().map(|c| ClassWitness { terms: c.to_labeled() }).collect(),
                check,
            };
            let text = match format {
                Format::Json => to_json(&report),
                Format::Md => report.markdown(),
            };
            emit(out.as_deref(), &text)?;
            Ok(true)
        }
    }
}

fn exactness(name: String, w: &brane_core::cohomology::Cochain, bigrade: Option<(usize, usize)>) -> Result<ExactnessCheck> {
    if !w.coboundary().is_zero() {
        let d = w.coboundary();
        return Ok(ExactnessCheck {
            cochain: name,
            closed: false,
            exact: None,
            bigrade,
            witness: format!("dω has {} nonzero monomials", d.support_len()),
        });
    }
    let (exact, witness) = match is_exact(w, bigrade)? {
        Exactness::Exact { theta } => (true, format!("primitive θ with {} terms: {:?}", theta.support_len(), theta.to_labeled())),
        Exactness::NotExact { certificate, unknowns, equations } => (
            false,
            format!(
                "no primitive among {unknowns} unknowns and {equations} equations; certificate pairs to {}",
                q_to_string(&pair_certificate(&certificate, w))
            ),
        ),
    };
    Ok(ExactnessCheck { cochain: name, closed: true, exact: Some(exact), bigrade, witness })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_workers().and_then(|_| run(cli));
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
