//! `wsts-verify`: clovers, coverability, repeated coverability, downward
//! trace inclusion and LTL for Petri nets and ω-Petri nets.
//!
//! Exit codes: 0 for a positive verdict or a completed export, 1 for a
//! negative verdict, 2 for errors.

mod commands;
mod devtool;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wsts_core::{IkmOptions, Worklist, DEFAULT_NODE_BUDGET};

pub const EXIT_ERROR: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "wsts-verify",
    version,
    about = "Ideal Karp-Miller verification for Petri nets and ω-Petri nets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the ideal decomposition of the cover.
    Clover {
        #[command(flatten)]
        query: Query,
        /// Also write the tree as Graphviz.
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
    },
    /// Decide whether the target is coverable.
    Cover {
        #[command(flatten)]
        query: Query,
        #[arg(long, value_name = "V")]
        target: String,
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
    },
    /// Decide whether the target is coverable infinitely often.
    Repcover {
        #[command(flatten)]
        query: Query,
        #[arg(long, value_name = "V")]
        target: String,
    },
    /// Decide inclusion of the subword-closed trace languages of two nets.
    TracesDc {
        #[command(flatten)]
        query: Query,
        /// Net whose traces should include those of `--net`.
        #[arg(long, value_name = "FILE")]
        other_net: PathBuf,
        #[arg(long, value_name = "V")]
        other_init: String,
    },
    /// Check an LTL formula, or the complement of a Büchi automaton, on all
    /// infinite traces.
    Ltl {
        #[command(flatten)]
        query: Query,
        #[arg(
            long,
            value_name = "STR",
            conflicts_with = "buchi",
            required_unless_present = "buchi"
        )]
        formula: Option<String>,
        /// Automaton describing the bad traces.
        #[arg(long, value_name = "FILE")]
        buchi: Option<PathBuf>,
    },
    /// Write the Karp-Miller tree as Graphviz (stdout without `--dot`).
    KmDot {
        #[command(flatten)]
        query: Query,
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
    },
    /// Run one query per line of FILE; lines hold the arguments of a
    /// single subcommand. Verdicts print in input order.
    Batch {
        #[arg(value_name = "FILE")]
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Seeded generators, oracles and worked examples.
    Devtool {
        #[command(subcommand)]
        command: devtool::DevCommand,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Query {
    #[arg(long, value_name = "FILE")]
    pub net: PathBuf,
    /// Initial marking, e.g. `(1,0,2)`.
    #[arg(long, value_name = "V")]
    pub init: String,
    #[arg(long, env = "WSTS_VERIFY_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: usize,
    #[arg(long, value_enum, default_value_t = WorklistArg::Fifo)]
    pub worklist: WorklistArg,
    /// Write a JSON report.
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
}

impl Query {
    pub fn ikm_options(&self) -> IkmOptions {
        IkmOptions {
            worklist: match self.worklist {
                WorklistArg::Fifo => Worklist::Fifo,
                WorklistArg::Lifo => Worklist::Lifo,
            },
            node_budget: self.budget,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum WorklistArg {
    Fifo,
    Lifo,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::execute(cli.command);
    print!("{}", outcome.text);
    if let Some(message) = &outcome.error {
        eprintln!("error: {message}");
    }
    ExitCode::from(outcome.code)
}
