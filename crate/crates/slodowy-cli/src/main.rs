//! Command line front end: batch verification of the cover construction,
//! construction dumps, quotient computations, worked-example reproduction,
//! and renderings.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 usage error,
//! 3 i/o error.

use clap::{Parser, Subcommand, ValueEnum};
use slodowy_core::error::CoreError;
use slodowy_core::fixtures::default_fixture_dir;
use slodowy_core::partitions::{all_covers, Partition};
use slodowy_core::pyramids::{enumerate_pyramids, standard_filling};
use slodowy_core::render::{render_hasse, render_pyramid, RenderFormat};
use slodowy_core::stages::{stage_data, verify_stage};
use slodowy_core::uhbar::{invariant_basis, stage_ctxs, PbwJson, PbwTermJson};
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "slodowy", version, about = "Exact verification of the cover construction for nilpotent orbits in type A")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification for every dominance cover at size n (2..=8).
    VerifyAll {
        n: usize,
        /// Worker threads for independent cover pairs.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the JSON-lines report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full verification for a single cover mu -> lam.
    Verify {
        /// Smaller partition, comma separated (e.g. 2,2,2).
        mu: String,
        /// Covering partition (e.g. 3,2,1).
        lam: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump the full construction datum for a cover as JSON.
    Construct {
        mu: String,
        lam: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce a worked example end to end.
    Examples {
        name: ExampleName,
        /// Fixture directory (falls back to SLODOWY_FIXTURES or ./fixtures).
        #[arg(long)]
        fixture_dir: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render pyramids or the dominance Hasse diagram.
    #[command(subcommand)]
    Render(RenderCmd),
    /// Reduce an element to its canonical quotient representative.
    Reduce {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        lam: String,
        /// Which reduction: the first stage (m1) or the one-shot (m2).
        #[arg(long, value_enum, default_value_t = StageSide::Oneshot)]
        stage: StageSide,
        /// JSON input file with {"terms": [...]}; stdin when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generators of the invariants up to a Kazhdan degree bound.
    Invariants {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        lam: String,
        #[arg(long, value_enum, default_value_t = StageSide::Oneshot)]
        stage: StageSide,
        #[arg(long, default_value_t = 6)]
        degree: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RenderCmd {
    /// All pyramids of a shape.
    Pyramids {
        /// Shape, comma separated (e.g. 4,3).
        shape: String,
        #[arg(long, default_value = "ascii")]
        format: String,
        /// Label the boxes with the standard filling.
        #[arg(long)]
        filled: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The dominance Hasse diagram at size n, as DOT.
    Hasse {
        n: usize,
        #[arg(long, default_value = "dot")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExampleName {
    Sl3,
    Sl4,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StageSide {
    First,
    Oneshot,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &CoreError) -> u8 {
    match e {
        CoreError::Input(_) | CoreError::Relation(_) | CoreError::Fixture(_) | CoreError::Json(_) => EXIT_USAGE,
        CoreError::Io(_) => EXIT_IO,
        _ => EXIT_CHECK_FAILED,
    }
}

fn parse_partition(s: &str) -> Result<Partition, CoreError> {
    let parts = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| CoreError::Input(format!("bad part {p:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Partition::new(parts)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CoreError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(CoreError::Io),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CoreError> {
    match cli.command {
        Command::VerifyAll { n, jobs, out } => {
            if !(2..=8).contains(&n) {
                return Err(CoreError::Input(format!("verify-all needs 2 <= n <= 8, got {n}")));
            }
            let covers = all_covers(n)?;
            let reports: Vec<_> = if jobs > 1 {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build()
                    .map_err(|e| CoreError::Internal(e.to_string()))?;
                pool.install(|| {
                    use rayon::prelude::*;
                    covers
                        .par_iter()
                        .map(|(mu, lam)| verify_stage(mu, lam))
                        .collect::<Result<Vec<_>, _>>()
                })?
            } else {
                covers
                    .iter()
                    .map(|(mu, lam)| verify_stage(mu, lam))
                    .collect::<Result<Vec<_>, _>>()?
            };
            // JSON lines, already sorted by (mu, lam) via all_covers
            let mut text = String::new();
            let mut failed = Vec::new();
            for r in &reports {
                text.push_str(&serde_json::to_string(r)?);
                text.push('\n');
                if !r.pass() {
                    failed.push(format!("({}, {}): {:?}", r.mu, r.lam, r.failures()));
                }
            }
            emit(&out, &text)?;
            if failed.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                for f in failed {
                    eprintln!("check failed: {f}");
                }
                Ok(ExitCode::from(EXIT_CHECK_FAILED))
            }
        }
        Command::Verify { mu, lam, out } => {
            let mu = parse_partition(&mu)?;
            let lam = parse_partition(&lam)?;
            let report = verify_stage(&mu, &lam)?;
            emit(&out, &format!("{}\n", serde_json::to_string_pretty(&report)?))?;
            if report.pass() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("check failed: {:?}", report.failures());
                Ok(ExitCode::from(EXIT_CHECK_FAILED))
            }
        }
        Command::Construct { mu, lam, out } => {
            let mu = parse_partition(&mu)?;
            let lam = parse_partition(&lam)?;
            let sd = stage_data(&mu, &lam)?;
            emit(&out, &format!("{}\n", serde_json::to_string_pretty(&sd)?))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Examples { name, fixture_dir, out } => {
            let dir = fixture_dir.unwrap_or_else(default_fixture_dir);
            let (text, pass) = match name {
                ExampleName::Sl3 => {
                    let report = slodowy_core::uhbar::verify_sl3(&dir)?;
                    (serde_json::to_string_pretty(&report)?, report.pass())
                }
                ExampleName::Sl4 => {
                    let report = slodowy_core::poisson::verify_sl4(&dir)?;
                    (serde_json::to_string_pretty(&report)?, report.pass())
                }
            };
            emit(&out, &format!("{text}\n"))?;
            if pass {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("example verification failed");
                Ok(ExitCode::from(EXIT_CHECK_FAILED))
            }
        }
        Command::Render(cmd) => run_render(cmd),
        Command::Reduce { mu, lam, stage, input, out } => {
            let ctx = build_ctx(&mu, &lam, stage)?;
            let text = match input {
                Some(path) => std::fs::read_to_string(path)?,
                None => {
                    let mut buf = String::new();
                    std::io::stdin().read_to_string(&mut buf)?;
                    buf
                }
            };
            #[derive(serde::Deserialize)]
            struct Input {
                terms: Vec<PbwTermJson>,
            }
            let parsed: Input = serde_json::from_str(&text)?;
            let elem = slodowy_core::uhbar::pbw::decode_terms(ctx.basis(), &parsed.terms)?;
            let reduced = ctx.reduce(&elem);
            let json = serde_json::to_string_pretty(&PbwJson::encode(ctx.basis(), &reduced))?;
            emit(&out, &format!("{json}\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Invariants { mu, lam, stage, degree, out } => {
            let ctx = build_ctx(&mu, &lam, stage)?;
            let basis = invariant_basis(&ctx, degree)?;
            let encoded: Vec<PbwJson> =
                basis.iter().map(|e| PbwJson::encode(ctx.basis(), e)).collect();
            emit(&out, &format!("{}\n", serde_json::to_string_pretty(&encoded)?))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn build_ctx(
    mu: &str,
    lam: &str,
    stage: StageSide,
) -> Result<slodowy_core::uhbar::ReductionCtx, CoreError> {
    let mu = parse_partition(mu)?;
    let lam = parse_partition(lam)?;
    if mu.n() > 4 {
        return Err(CoreError::Input("quantum commands are limited to n <= 4".into()));
    }
    let ctxs = stage_ctxs(&mu, &lam)?;
    Ok(match stage {
        StageSide::First => ctxs.first,
        StageSide::Oneshot => ctxs.oneshot,
    })
}

fn run_render(cmd: RenderCmd) -> Result<ExitCode, CoreError> {
    match cmd {
        RenderCmd::Pyramids { shape, format, filled, out } => {
            let shape = parse_partition(&shape)?;
            let format: RenderFormat = format.parse()?;
            let mut text = String::new();
            for p in enumerate_pyramids(&shape) {
                let filling = filled.then(|| standard_filling(&p));
                text.push_str(&render_pyramid(&p, filling.as_ref(), format)?);
                text.push('\n');
            }
            emit(&out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        RenderCmd::Hasse { n, format, out } => {
            if format != "dot" {
                return Err(CoreError::Input(format!(
                    "hasse diagrams support only the dot format, got {format:?}"
                )));
            }
            emit(&out, &render_hasse(n)?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
