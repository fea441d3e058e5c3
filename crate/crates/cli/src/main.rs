//! `nspoly`: command-line access to no-signalling polytopes, their vertices
//! and face lattices, and contextuality checks.
//!
//! Exit status is 0 when the checked property holds (or the command simply
//! succeeded), 1 when it fails, and 2 on usage, parse or size-guard errors.

mod commands;
mod input;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nspoly_core::contextuality::DEFAULT_ASSIGNMENT_LIMIT;
use nspoly_core::lattice::DEFAULT_ORACLE_LIMIT;

#[derive(Parser, Debug)]
#[command(
    name = "nspoly",
    version,
    about = "Exact no-signalling polytopes and their face lattices"
)]
struct Cli {
    /// Write the output document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Log progress to stderr; repeat for more detail (-vvv traces LP pivots).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct AssignmentLimit {
    /// Refuse to enumerate more than this many global assignments.
    #[arg(long, default_value_t = DEFAULT_ASSIGNMENT_LIMIT)]
    max_assignments: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check normalization and no-signalling of a model.
    Validate { input: String },
    /// Possibilistic collapse of a probabilistic model.
    Collapse { input: String },
    /// Enumerate the vertices of a polytope.
    Vertices {
        input: String,
        /// Tag each vertex as local deterministic (LD) or strongly contextual (MSC).
        #[arg(long)]
        classify: bool,
        #[command(flatten)]
        limit: AssignmentLimit,
    },
    /// Build the face lattice as the lattice of achievable supports.
    Lattice {
        input: String,
        /// Emit a Graphviz graph instead of the lattice document.
        #[arg(long)]
        dot: bool,
        /// Also compute the face lattice from zero-sets and compare.
        #[arg(long)]
        oracle: bool,
        /// Report lattice properties instead of the lattice itself.
        #[arg(long)]
        check: bool,
        /// Cell limit for the zero-set oracle.
        #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
        oracle_max_cells: usize,
        /// Run the oracle beyond its cell limit.
        #[arg(long)]
        force: bool,
    },
    /// Carrier face of a probabilistic model: its support and dimension.
    Carrier { input: String },
    /// Decide whether a possibilistic model is the support of a probabilistic one.
    Realizable { input: String },
    /// Decide strong contextuality.
    Sc { input: String },
    /// Decide logical contextuality.
    Logical { input: String },
    /// Decide minimality among boolean no-signalling models.
    Minimal { input: String },
    /// Decide membership in the local polytope.
    Local {
        input: String,
        #[command(flatten)]
        limit: AssignmentLimit,
    },
    /// Bipartite doubling of a possibilistic model on a complete pairwise scenario.
    Bellize { input: String },
    /// Dimension of the polytope, or of the face with the given support.
    Dim {
        input: String,
        /// Support bitstring of a face.
        #[arg(long)]
        support: Option<String>,
    },
    /// List the built-in corpus, or dump one entry.
    Corpus {
        name: Option<String>,
        /// Dump the scenario rather than the model.
        #[arg(long)]
        scenario: bool,
    },
    /// Randomized property checks on small scenarios.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_env("NSPOLY_LOG")
        .init();

    match commands::run(&cli.command) {
        Ok(outcome) => {
            if let Err(e) = outcome.write(cli.out.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if outcome.holds { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
