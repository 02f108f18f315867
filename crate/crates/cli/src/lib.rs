//! Command-line front end. Every subcommand loads its inputs, calls one
//! library operation and prints the result as a report.

pub mod commands;
pub mod input;
pub mod render;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_PARSE: u8 = 3;
pub const EXIT_SCALE: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid: {0}")]
    Invalid(String),
    #[error("scale exceeded: {0}")]
    Scale(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Parse(_) => EXIT_PARSE,
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Scale(_) => EXIT_SCALE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "catcausal", version, about = "Categorical tools for causal models")]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Config {
    /// Highest simplex dimension built for nerves and homology.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub truncation: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pattern {
    Collider,
    SourceEdge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MigrationKind {
    Pullback,
    Left,
    Right,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and audit a DOT graph or a JSON category, quiver, DAG,
    /// instance, functor or simplicial set.
    Validate { path: PathBuf },
    /// Nerve of a model up to the truncation.
    Nerve { model: PathBuf },
    /// Homology profile of a model's classifying space.
    Homology {
        model: PathBuf,
        /// Also write the boundary matrices as `row col value` triplets.
        #[arg(long)]
        triplets: Option<PathBuf>,
    },
    /// Standard imset of a DAG, or whether two DAGs share one.
    Imset {
        dag: PathBuf,
        other: Option<PathBuf>,
        #[arg(long, requires = "other")]
        compare: bool,
    },
    /// Skeleton and immorality comparison of two DAGs.
    MarkovEq { first: PathBuf, second: PathBuf },
    /// Graph surgery on a DAG.
    Intervene {
        dag: PathBuf,
        /// Remove the edge `CAUSE->EFFECT`.
        #[arg(long, value_name = "CAUSE->EFFECT", conflicts_with = "do_variable", required_unless_present = "do_variable")]
        delete_edge: Option<String>,
        /// Remove every edge into the variable.
        #[arg(long = "do", value_name = "VAR")]
        do_variable: Option<String>,
    },
    /// Answer a built-in query against an instance.
    Query {
        model: PathBuf,
        instance: PathBuf,
        #[arg(long, value_enum)]
        pattern: Pattern,
        /// Source morphism for the source-edge pattern.
        #[arg(long, default_value = "s")]
        morphism: String,
    },
    /// Move an instance along a functor.
    Migrate {
        functor: PathBuf,
        instance: PathBuf,
        #[arg(long, value_enum)]
        kind: MigrationKind,
    },
    /// Compare homotopy colimits before and after an intervention.
    Effect {
        model: PathBuf,
        instance: PathBuf,
        /// `VAR=ROW` binds a variable to one row; `VAR` cuts its incoming
        /// edges.
        #[arg(long = "do", value_name = "VAR[=ROW]")]
        intervention: Option<String>,
    },
}

/// An error, possibly with a report to print before it.
#[derive(Debug)]
pub struct Failure {
    pub error: CliError,
    pub report: Option<serde_json::Value>,
}

macro_rules! failure_from {
    ($($t:ty),*) => {
        $(impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure {
                    error: e.into(),
                    report: None,
                }
            }
        })*
    };
}

failure_from!(
    CliError,
    catcausal::causal::CausalError,
    catcausal::nerve::NerveError,
    catcausal::fincat::CategoryError,
    catcausal::fincat::FunctorError,
    catcausal::elements::ElementsError,
    catcausal::simplex::SimplexError,
    catcausal::homology::HomologyError
);

/// Runs a parsed command; the output is the rendered report.
pub fn execute(cli: &Cli) -> Result<String, (CliError, Option<String>)> {
    match commands::dispatch(&cli.command, &cli.config) {
        Ok(report) => Ok(render::render(&report, cli.config.format)),
        Err(f) => Err((f.error, f.report.map(|r| render::render(&r, cli.config.format)))),
    }
}

/// Parses arguments, runs, prints, and returns the exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{out}");
            EXIT_OK
        }
        Err((e, report)) => {
            if let Some(out) = report {
                print!("{out}");
            }
            eprintln!("catcausal: {e}");
            e.exit_code()
        }
    }
}
