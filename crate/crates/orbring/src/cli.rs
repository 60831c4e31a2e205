//! Argument parsing and command dispatch for the `orbring` binary.

use crate::config::{parse_betti, Command, RunConfig, DEFAULT_SAMPLES};
use crate::document::{CheckRecord, CheckReport, Header, RingDocument, Status, SCHEMA_VERSION};
use crate::error::AppError;
use crate::io::{to_json, write_atomic};
use crate::multiply::{multiply, render};
use crate::suites::{self, Context, EXHAUSTIVE_MAX_DIM};
use clap::{Args, Parser, Subcommand, ValueEnum};
use orbring_core::combinatorics::CaseTag;
use std::ffi::OsString;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "orbring",
    version,
    about = "Exact orbifold cohomology rings of symmetric products of abelian surfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Subcommand, Debug)]
pub enum Sub {
    /// Build a ring and write its JSON document.
    Build(Common),
    /// Run a named suite of property checks.
    Check {
        #[command(flatten)]
        common: Common,
        /// associativity, cocycle, euler, gottsche, molien, torsion, duality, lemma59 or all.
        #[arg(long)]
        suite: String,
    },
    /// Multiply two basis vectors, e.g. `"(1 2)|e1,3" "id|1"`.
    Multiply {
        #[command(flatten)]
        common: Common,
        a: String,
        b: String,
    },
    /// Print total and invariant Poincaré polynomials.
    Poincare(Common),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    Hilb,
    Kummer,
}

#[derive(Args, Debug)]
pub struct Common {
    #[arg(long, value_enum)]
    pub case: CaseArg,
    #[arg(short = 'n')]
    pub n: usize,
    /// Twist the product by the discrete-torsion sign.
    #[arg(long)]
    pub dt: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
    /// Betti numbers of the base surface, hilb case only.
    #[arg(long = "base-betti", value_name = "b0,b1,b2,b3,b4")]
    pub base_betti: Option<String>,
    /// Draws per sampled check.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Largest total ring dimension to build.
    #[arg(long = "max-dim")]
    pub max_dim: Option<usize>,
}

impl Common {
    fn into_config(self, command: Command) -> Result<RunConfig, AppError> {
        let case = match (self.case, &self.base_betti) {
            (CaseArg::Hilb, None) => CaseTag::hilb(),
            (CaseArg::Hilb, Some(b)) => CaseTag::hilb_with_betti(parse_betti(b)?)?,
            (CaseArg::Kummer, None) => CaseTag::Kummer,
            (CaseArg::Kummer, Some(_)) => {
                return Err(AppError::Usage(String::from("--base-betti applies to --case hilb only")))
            }
        };
        let mut cfg = RunConfig::new(case, self.n, self.dt, command);
        cfg.seed = self.seed;
        cfg.output = self.output;
        cfg.samples = self.samples;
        if let Some(d) = self.max_dim {
            cfg.bounds.max_total_dim = d;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl Sub {
    pub fn into_config(self) -> Result<RunConfig, AppError> {
        match self {
            Sub::Build(c) => c.into_config(Command::Build),
            Sub::Check { common, suite } => common.into_config(Command::Check { suite }),
            Sub::Multiply { common, a, b } => common.into_config(Command::Multiply { a, b }),
            Sub::Poincare(c) => c.into_config(Command::Poincare),
        }
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match cli.command.into_config().and_then(|cfg| run(&cfg)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("orbring: {e}");
            e.exit_code()
        }
    }
}

/// Runs one configured command; `Ok` carries 0, or 1 if a check failed.
pub fn run(cfg: &RunConfig) -> Result<i32, AppError> {
    match &cfg.command {
        Command::Build => cmd_build(cfg),
        Command::Check { suite } => cmd_check(cfg, suite),
        Command::Multiply { a, b } => cmd_multiply(cfg, a, b),
        Command::Poincare => cmd_poincare(cfg),
    }
}

fn emit(cfg: &RunConfig, json: &str, summary: &str) -> Result<(), AppError> {
    match &cfg.output {
        Some(path) => {
            write_atomic(path, json.as_bytes())?;
            println!("{summary}");
            println!("wrote {}", path.display());
        }
        None => print!("{json}"),
    }
    Ok(())
}

fn exit_for(checks: &[CheckRecord]) -> i32 {
    if checks.iter().all(CheckRecord::passed) {
        0
    } else {
        1
    }
}

/// Checks attached to every built document.
fn build_checks(cfg: &RunConfig, ctx: &mut Context<'_>) -> Result<Vec<CheckRecord>, AppError> {
    let mut checks = Vec::new();
    if cfg.case == CaseTag::Kummer && cfg.n <= 3 {
        checks.extend(suites::torsion(cfg)?);
    }
    checks.extend(suites::duality(ctx)?);
    let (ring, table) = ctx.with_table()?;
    checks.push(CheckRecord::from_outcome("unit", "all basis vectors", &ring.check_unit()));
    if table.is_none() {
        checks.push(CheckRecord::skipped(
            "structure_constants",
            format!("dimension {} exceeds the export limit {EXHAUSTIVE_MAX_DIM}", ring.dim()),
        ));
    }
    Ok(checks)
}

pub fn build_document(cfg: &RunConfig) -> Result<RingDocument, AppError> {
    let mut ctx = Context::new(cfg);
    let checks = build_checks(cfg, &mut ctx)?;
    ctx.with_invariants()?;
    let (ring, inv, table) = ctx.into_parts();
    let (ring, inv) = (ring.expect("built by the checks"), inv.expect("built by the checks"));
    Ok(RingDocument::new(cfg, &ring, &inv, table.as_ref(), checks))
}

fn cmd_build(cfg: &RunConfig) -> Result<i32, AppError> {
    let doc = build_document(cfg)?;
    let failed: Vec<&str> = doc.checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
    let summary = format!(
        "{} n={}{}: {} sectors, {} structure constants, checks {}",
        doc.header.case,
        doc.header.n,
        if doc.header.dt { " dt" } else { "" },
        doc.sectors.len(),
        doc.structure_constants.len(),
        if failed.is_empty() { String::from("passed") } else { format!("FAILED: {}", failed.join(", ")) }
    );
    emit(cfg, &to_json(&doc)?, &summary)?;
    if !failed.is_empty() {
        eprintln!("orbring: failed checks: {}", failed.join(", "));
    }
    Ok(exit_for(&doc.checks))
}

fn cmd_check(cfg: &RunConfig, suite: &str) -> Result<i32, AppError> {
    let checks = suites::run_named(suite, cfg)?;
    let mut summary = String::new();
    for c in &checks {
        let status = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        summary.push_str(&format!("{status} {}: {}", c.name, c.details));
        if let Some(w) = &c.counterexample {
            summary.push_str(&format!(" [counterexample: {w}]"));
        }
        summary.push('\n');
    }
    let report = CheckReport {
        schema: SCHEMA_VERSION,
        header: Header::from_config(cfg),
        suite: suite.to_string(),
        samples: cfg.samples,
        checks,
    };
    match &cfg.output {
        Some(path) => {
            write_atomic(path, to_json(&report)?.as_bytes())?;
            print!("{summary}");
        }
        None => print!("{summary}"),
    }
    Ok(exit_for(&report.checks))
}

fn cmd_multiply(cfg: &RunConfig, a: &str, b: &str) -> Result<i32, AppError> {
    let ring = cfg.build_ring()?;
    let e = multiply(&ring, a, b)?;
    print!("{}", render(&ring, &e));
    Ok(0)
}

fn cmd_poincare(cfg: &RunConfig) -> Result<i32, AppError> {
    let ring = cfg.build_ring()?;
    let inv = ring.invariant_subring()?;
    let (total, invariants) = (ring.poincare_total(), inv.poincare());
    let summary = format!("total: {total}\ninvariants: {invariants}\neuler: {}", invariants.euler());
    match &cfg.output {
        Some(_) => {
            let doc = RingDocument::new(cfg, &ring, &inv, None, Vec::new());
            emit(cfg, &to_json(&doc)?, &summary)?;
        }
        None => println!("{summary}"),
    }
    Ok(0)
}
