//! `orbifold`: classify singularities, check admissibility, and run the
//! curvature and gluing diagnostics from the command line.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use output::Format;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input: bad action syntax, unreadable or invalid documents.
    #[error("{0}")]
    Parse(String),
    /// Well-formed input rejected by the library.
    #[error("{0}")]
    Domain(String),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain(_) | CliError::Output(_) => 3,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "orbifold", version, about = "Orbifold singularities, admissibility and gluing diagnostics")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Output format; each verb has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file. Relative paths resolve against the output directory when one is set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for output files; without --out the file is `<verb>.<ext>`.
    #[arg(long, global = true, env = "ORBIFOLD_OUT_DIR")]
    out_dir: Option<PathBuf>,
    /// Exit with status 1 when the verdict fails.
    #[arg(long, global = true)]
    strict: bool,
    /// Seed for sampled points; overrides seeds in input documents.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Type-T verdict for actions such as `1/9(1,2)` or `D5`.
    Classify {
        #[arg(required = true)]
        actions: Vec<String>,
    },
    /// Admissibility of an orbifold's singular points.
    Check(commands::SpecSource),
    /// Type-T singularities allowed in degree d.
    Enumerate {
        #[arg(long)]
        degree: i64,
    },
    /// Invariants after replacing singular points with bubbles.
    Invariants {
        #[command(flatten)]
        source: commands::SpecSource,
        /// JSON map from singular point index to bubble or tree; default is the canonical bubble everywhere.
        #[arg(long)]
        assignment: Option<PathBuf>,
    },
    /// Curvature spectra on sampled points of a chart.
    CurvatureScan(commands::ScanArgs),
    /// Neck deviations of the naive glued metric across scales.
    GlueScan {
        plan: PathBuf,
    },
    /// Weighted Hölder norm of a named field.
    Norm(commands::NormArgs),
    /// Flat indicial kernel and S³ orthogonality checks.
    Indicial,
}

impl Verb {
    fn name(&self) -> &'static str {
        match self {
            Verb::Classify { .. } => "classify",
            Verb::Check(_) => "check",
            Verb::Enumerate { .. } => "enumerate",
            Verb::Invariants { .. } => "invariants",
            Verb::CurvatureScan(_) => "curvature-scan",
            Verb::GlueScan { .. } => "glue-scan",
            Verb::Norm(_) => "norm",
            Verb::Indicial => "indicial",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Verb::Enumerate { .. } => Format::Table,
            Verb::CurvatureScan(_) | Verb::GlueScan { .. } => Format::Csv,
            _ => Format::Json,
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let g = &cli.global;
    let report = match &cli.verb {
        Verb::Classify { actions } => commands::classify(actions)?,
        Verb::Check(src) => commands::check(src)?,
        Verb::Enumerate { degree } => commands::enumerate(*degree)?,
        Verb::Invariants { source, assignment } => commands::invariants(source, assignment.as_deref())?,
        Verb::CurvatureScan(args) => commands::curvature_scan(args, g.seed)?,
        Verb::GlueScan { plan } => commands::glue_scan(plan, g.seed)?,
        Verb::Norm(args) => commands::norm(args, g.seed)?,
        Verb::Indicial => commands::indicial()?,
    };
    let format = g.format.unwrap_or_else(|| cli.verb.default_format());
    let path = output::target(g.out.as_deref(), g.out_dir.as_deref(), cli.verb.name(), format);
    output::emit(&report, format, path.as_deref())?;
    Ok(report.verdict || !g.strict)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verdict failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
