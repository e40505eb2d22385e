use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nctorus::harness::{
    apply_files, expand_files, norm_file, rellich_file, run_suite, ExpandKind, Format, RunConfig, Suite,
    VerificationReport,
};
use nctorus::io::{write_atomic, write_json};
use nctorus::oscillatory::{verify_prop_osc_with, AmplitudeFamily, CutoffFamily, OscConfig};
use nctorus::{NctError, Result};

/// Verification and computation on the smooth noncommutative torus.
#[derive(Parser)]
#[command(name = "nct", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, env = "NCT_SEED")]
    seed: Option<u64>,
    #[arg(long = "box", env = "NCT_BOX", allow_negative_numbers = true)]
    box_radius: Option<i64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Comma-separated remainder radii.
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    #[command(flatten)]
    out: ReportArgs,
}

#[derive(clap::Args)]
struct ReportArgs {
    /// Report path; stdout when absent.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpandVerb {
    Adjoint,
    Compose,
}

#[derive(Clone, Copy, ValueEnum)]
enum CutoffArg {
    Gaussian,
    Cos,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite: core, symbols, pdo, sobolev, module, osc or all.
    Verify {
        suite: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Apply the operator of a symbol to an element.
    Apply {
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long)]
        element: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sobolev norm of an element.
    Norm {
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long)]
        element: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Adjoint or composition expansion at a point.
    Expand {
        #[arg(value_enum)]
        kind: ExpandVerb,
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long)]
        symbol2: Option<PathBuf>,
        #[arg(long)]
        order: usize,
        /// Comma-separated point.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        at: Vec<f64>,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract an H^t-Cauchy subsequence from an H^s-bounded sequence.
    Rellich {
        #[arg(long)]
        sequence: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long)]
        bound: Option<f64>,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regularized oscillatory integral against the value at the origin.
    Osc {
        #[arg(long, default_value = "gaussian")]
        amplitude: String,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, value_enum, default_value = "both")]
        cutoff: CutoffArg,
        #[command(flatten)]
        out: ReportArgs,
    },
}

fn emit_json<T: Serialize>(value: &T, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => write_json(p, value),
        None => {
            println!("{}", serde_json::to_string_pretty(value)?);
            Ok(())
        }
    }
}

fn emit_report(report: &VerificationReport, args: &ReportArgs) -> Result<bool> {
    let format: Format = args.format.parse()?;
    let text = report.render(format);
    match &args.report {
        Some(p) => write_atomic(p, text.as_bytes())?,
        None => print!("{text}"),
    }
    for c in report.failures() {
        eprintln!("FAIL {}", c.name);
    }
    Ok(report.passed())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Verify { suite, run } => {
            let suite: Suite = suite.parse()?;
            let d = RunConfig::default();
            let cfg = RunConfig {
                seed: run.seed.unwrap_or(d.seed),
                box_radius: run.box_radius.unwrap_or(d.box_radius),
                trials: run.trials.unwrap_or(d.trials),
                tol: run.tol.unwrap_or(d.tol),
                radii: run.radii.unwrap_or(d.radii),
                report: run.out.report.clone(),
                format: run.out.format.parse()?,
            };
            let report = run_suite(suite, &cfg)?;
            emit_report(&report, &run.out)
        }
        Command::Apply { symbol, element, out } => {
            emit_json(&apply_files(&symbol, &element)?, out.as_ref())?;
            Ok(true)
        }
        Command::Norm { s, element, out } => {
            emit_json(&norm_file(&element, s)?, out.as_ref())?;
            Ok(true)
        }
        Command::Expand {
            kind,
            symbol,
            symbol2,
            order,
            at,
            oracle,
            out,
        } => {
            let kind = match kind {
                ExpandVerb::Adjoint => ExpandKind::Adjoint,
                ExpandVerb::Compose => ExpandKind::Compose,
            };
            let res = expand_files(kind, &symbol, symbol2.as_deref(), order, &at, oracle)?;
            emit_json(&res, out.as_ref())?;
            Ok(true)
        }
        Command::Rellich {
            sequence,
            s,
            t,
            bound,
            eps,
            out,
        } => {
            let res = rellich_file(&sequence, s, t, bound, eps)?;
            emit_json(&res, out.as_ref())?;
            Ok(res.certified)
        }
        Command::Osc {
            amplitude,
            dim,
            cutoff,
            out,
        } => {
            let fam: AmplitudeFamily = amplitude.parse()?;
            if !(1..=2).contains(&dim) {
                return Err(NctError::Usage(format!("--dim must be 1 or 2, got {dim}")));
            }
            let cutoffs: &[CutoffFamily] = match cutoff {
                CutoffArg::Gaussian => &[CutoffFamily::Gaussian],
                CutoffArg::Cos => &[CutoffFamily::RaisedCosine],
                CutoffArg::Both => &CutoffFamily::ALL,
            };
            let report = verify_prop_osc_with(fam.amplitude(), dim, cutoffs, &OscConfig::default())?;
            emit_report(&report, &out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
