use std::path::PathBuf;

use clap::{Parser, Subcommand};

use super::{cmd_check, cmd_infer, cmd_lint, cmd_trace, cmd_verify, Outcome, RunOptions};

/// Norm-behavior analysis: infer and verify the required behavior of
/// automated vehicles from formalized traffic rules.
#[derive(Debug, Parser)]
#[command(name = "nba", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse all inputs and report vocabulary, lint and source-link findings.
    Check {
        #[arg(long)]
        project: PathBuf,
    },
    /// Run the rule catalog on one scenario and dump the fact base.
    Infer {
        #[arg(long)]
        project: PathBuf,
        #[arg(long)]
        scenario: String,
        /// Record and write every derivation, not just the first.
        #[arg(long)]
        all_traces: bool,
        /// Output directory (overrides the project's output_dir).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify every scenario against its expectation.
    Verify {
        #[arg(long)]
        project: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Explain a fact and trace it back to its legal sources.
    Trace {
        #[arg(long)]
        project: PathBuf,
        #[arg(long)]
        scenario: String,
        /// Ground atom, e.g. "anhalten_in(ego, zoneBlau1)".
        #[arg(long)]
        fact: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Catalog lints: duplicate ids, redundant rules, missing provenance.
    Lint {
        #[arg(long)]
        project: PathBuf,
    },
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check { project } => cmd_check(&project),
        Command::Lint { project } => cmd_lint(&project),
        Command::Infer { project, scenario, all_traces, out } => {
            cmd_infer(&project, &scenario, &RunOptions { out, all_traces })
        }
        Command::Verify { project, out } => cmd_verify(&project, &RunOptions { out, all_traces: false }),
        Command::Trace { project, scenario, fact, out } => {
            cmd_trace(&project, &scenario, &fact, &RunOptions { out, all_traces: false })
        }
    }
}
