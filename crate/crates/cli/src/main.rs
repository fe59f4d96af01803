//! Command-line interface for exact lattice-polytope invariants: generate
//! family instances, compute monoid and Ehrhart invariants, build and verify
//! fiberwise sweep triangulations, and sweep whole families.

mod analyze;
mod corpus;
mod error;
mod family;
mod generate;
mod instance;
mod io;
mod triangulate;
mod verify;

use clap::{Parser, Subcommand};

use crate::error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[clap(name = "polygap", version, about = "Exact lattice-polytope invariants", long_about = None)]
struct Cli {
    #[clap(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Materialize a family instance as a polytope-plus-fibration document.
    Generate {
        /// Family specification: inline JSON, a file path, or '-' for stdin.
        #[clap(short, long)]
        input: String,
        /// Output file; standard output when omitted.
        #[clap(short, long)]
        output: Option<String>,
        /// Output format; only "json" is supported.
        #[clap(long, default_value = "json")]
        format: String,
    },
    /// Compute invariants of one instance and report per-task outcomes.
    Analyze {
        /// Instance input: inline JSON, a file path, or '-' for stdin.
        #[clap(short, long)]
        input: String,
        /// Output file; standard output when omitted.
        #[clap(short, long)]
        output: Option<String>,
        /// Comma-separated tasks: gaps, very_ample, smooth, ehrhart,
        /// integrally_closed, triangulate, verify.
        #[clap(short, long)]
        tasks: Option<String>,
        /// Height cap for monoid computations.
        #[clap(short = 'k', long, default_value_t = 64)]
        kmax: usize,
        /// Soft wall-clock budget in seconds, checked between tasks.
        #[clap(long)]
        time_budget: Option<u64>,
        /// Output format; only "json" is supported.
        #[clap(long, default_value = "json")]
        format: String,
    },
    /// Build the fiberwise sweep triangulation and re-verify it.
    Triangulate {
        /// Instance input: inline JSON, a file path, or '-' for stdin.
        #[clap(short, long)]
        input: String,
        /// Output file; standard output when omitted.
        #[clap(short, long)]
        output: Option<String>,
        /// Unit-square base diagonal to use: "main" or "anti". When omitted,
        /// both are tried in that order.
        #[clap(long)]
        diagonal: Option<String>,
        /// Sweep enumeration order: "base-then-height" or "height-then-base".
        #[clap(long, default_value = "base-then-height")]
        order: String,
        /// Output format; only "json" is supported.
        #[clap(long, default_value = "json")]
        format: String,
    },
    /// Re-check certificates for a triangulation shipped with the input.
    Verify {
        /// Instance input: inline JSON, a file path, or '-' for stdin.
        #[clap(short, long)]
        input: String,
        /// Output file; standard output when omitted.
        #[clap(short, long)]
        output: Option<String>,
        /// Comma-separated certificate subset; all applicable when omitted.
        #[clap(short, long)]
        certificates: Option<String>,
        /// Output format; only "json" is supported.
        #[clap(long, default_value = "json")]
        format: String,
    },
    /// Sweep a family range and report gap profiles with unimodality verdicts.
    Corpus {
        /// Range specification: inline JSON, a file path, or '-' for stdin.
        #[clap(short, long)]
        input: String,
        /// Output file; standard output when omitted.
        #[clap(short, long)]
        output: Option<String>,
        /// Height cap for monoid computations.
        #[clap(short = 'k', long, default_value_t = 64)]
        kmax: usize,
        /// Number of worker threads.
        #[clap(short, long, default_value_t = 1)]
        jobs: usize,
        /// Output format; only "json" is supported.
        #[clap(long, default_value = "json")]
        format: String,
    },
}

fn dispatch(command: &Command) -> CliResult<()> {
    match command {
        Command::Generate {
            input,
            output,
            format,
        } => generate::run(input, output, format),
        Command::Analyze {
            input,
            output,
            tasks,
            kmax,
            time_budget,
            format,
        } => analyze::run(input, output, tasks, *kmax, *time_budget, format),
        Command::Triangulate {
            input,
            output,
            diagonal,
            order,
            format,
        } => triangulate::run(input, output, diagonal, order, format),
        Command::Verify {
            input,
            output,
            certificates,
            format,
        } => verify::run(input, output, certificates, format),
        Command::Corpus {
            input,
            output,
            kmax,
            jobs,
            format,
        } => corpus::run(input, output, *kmax, *jobs, format),
    }
}

fn main() {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.message());
            if let Some(detail) = e.detail() {
                eprintln!("{}", polygap::json::to_canonical_json(detail).trim_end());
            }
            std::process::exit(e.exit_code());
        }
    }
}
