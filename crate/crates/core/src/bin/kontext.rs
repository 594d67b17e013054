use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::json;

use kontext::error::{Error, Result};
use kontext::hilbert::Branch;
use kontext::model::{Model, ModelFile};
use kontext::random::random_model;
use kontext::report::{analyze, census, oracle_report, represent_report, Format, Render};
use kontext::scalar::Scalar;

#[derive(Parser)]
#[command(name = "kontext", version, about = "Contextual probability models: interference, amplitudes, censuses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Output format.
    #[arg(long, default_value = "text", global = true)]
    format: Format,
    /// Exact rational arithmetic (default).
    #[arg(long, global = true, conflicts_with = "float")]
    exact: bool,
    /// Double precision arithmetic.
    #[arg(long, global = true)]
    float: bool,
}

#[derive(Args, Clone)]
struct Pair {
    /// Variables to compare, `A,B`.
    #[arg(long, default_value = "a,b", value_parser = parse_pair)]
    pair: (String, String),
}

#[derive(Subcommand)]
enum Command {
    /// Check a model file and list every violation.
    Validate { path: PathBuf },
    /// Profile, classify and represent contexts of a pair.
    Analyze {
        path: PathBuf,
        #[command(flatten)]
        pair: Pair,
        /// Context to analyze; repeatable. Default: all named contexts and Omega.
        #[arg(long)]
        context: Vec<String>,
        #[arg(long, default_value = "plus")]
        branch: Branch,
        /// Context used to build the basis of `a`.
        #[arg(long)]
        basis_context: Option<String>,
    },
    /// Classify every context up to a size bound.
    Scan {
        path: PathBuf,
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// Amplitudes of one context, with operators when a basis exists.
    Represent {
        path: PathBuf,
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value = "Omega")]
        context: String,
        #[arg(long, default_value = "plus")]
        branch: Branch,
        #[arg(long)]
        basis_context: Option<String>,
    },
    /// Write a seeded random model as JSON.
    Random {
        #[arg(long, default_value_t = 8)]
        points: usize,
        #[arg(long, default_value_t = 2)]
        values_a: usize,
        #[arg(long, default_value_t = 2)]
        values_b: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write to a file instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Recompute a context by direct summation and compare.
    Oracle {
        path: PathBuf,
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value = "Omega")]
        context: String,
    },
}

fn parse_pair(s: &str) -> std::result::Result<(String, String), String> {
    match s.split_once(',') {
        Some((a, b)) if !a.trim().is_empty() && !b.trim().is_empty() => Ok((a.trim().into(), b.trim().into())),
        _ => Err(format!("expected `A,B`, got `{s}`")),
    }
}

fn load<S: Scalar>(path: &Path) -> Result<Model<S>> {
    Model::load(path)
}

fn validate<S: Scalar>(path: &Path, format: Format) -> Result<(String, bool)> {
    let file = ModelFile::load(path)?;
    let violations = file.validate::<S>();
    let ok = violations.is_empty();
    let out = match format {
        Format::Json => format!("{}\n", json!({"valid": ok, "violations": violations})),
        Format::Csv => std::iter::once("violation\n".to_string()).chain(violations.iter().map(|v| format!("\"{}\"\n", v.replace('"', "\"\"")))).collect(),
        Format::Text if ok => "OK\n".into(),
        Format::Text => violations.iter().map(|v| format!("violation: {v}\n")).collect(),
    };
    Ok((out, ok))
}

fn run<S: Scalar>(command: &Command, format: Format) -> Result<(String, bool)> {
    match command {
        Command::Validate { path } => validate::<S>(path, format),
        Command::Analyze { path, pair, context, branch, basis_context } => {
            let m = load::<S>(path)?;
            let r = analyze(&m, &pair.pair.0, &pair.pair.1, context, *branch, basis_context.as_deref())?;
            Ok((r.render(format), true))
        }
        Command::Scan { path, pair, max_size } => {
            let m = load::<S>(path)?;
            let c = census(&m.space, m.variable(&pair.pair.0)?, m.variable(&pair.pair.1)?, *max_size)?;
            Ok((c.render(format), true))
        }
        Command::Represent { path, pair, context, branch, basis_context } => {
            let m = load::<S>(path)?;
            let r = represent_report(&m, &pair.pair.0, &pair.pair.1, context, *branch, basis_context.as_deref())?;
            Ok((r.render(format), true))
        }
        Command::Oracle { path, pair, context } => {
            let m = load::<S>(path)?;
            Ok((oracle_report(&m, &pair.pair.0, &pair.pair.1, context)?.render(format), true))
        }
        Command::Random { points, values_a, values_b, seed, output } => {
            let text = random_model(*points, *values_a, *values_b, *seed)?.to_json();
            match output {
                Some(p) => {
                    std::fs::write(p, &text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                    Ok((String::new(), true))
                }
                None => Ok((text, true)),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Common { format, float, .. } = cli.common;
    let result = if float { run::<f64>(&cli.command, format) } else { run::<BigRational>(&cli.command, format) };
    match result {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
