//! `msor`: reconfiguration of MSO-definable vertex sets from the command line.

mod commands;
mod solve;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use msor::Error;

/// Exit status for a yes answer, or a command that simply succeeded.
pub const EXIT_YES: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_UNKNOWN: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;
/// A solver contradicted the oracle, or some other internal check failed.
pub const EXIT_INTERNAL: u8 = 70;

#[derive(Parser, Debug)]
#[command(name = "msor", version, about = "Reconfiguration of MSO-definable vertex sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    /// Shape solver for few types, kernel for a given decomposition, else BFS.
    Auto,
    Nd,
    Td,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Jump,
    Slide,
}

impl From<RuleArg> for msor::Rule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Jump => msor::Rule::Jump,
            RuleArg::Slide => msor::Rule::Slide,
        }
    }
}

#[derive(Args, Clone, Debug)]
pub struct RunConfig {
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    pub algo: Algo,
    /// Overrides the rule given in the instance file.
    #[arg(long, value_enum)]
    pub rule: Option<RuleArg>,
    /// Largest number of candidate shapes the shape solver may enumerate.
    #[arg(long, default_value_t = 1_000_000)]
    pub shape_cap: u128,
    /// Largest number of shape paths priced by the shortest-path search.
    #[arg(long, default_value_t = 1_000_000)]
    pub path_cap: usize,
    /// Largest number of sets the BFS may expand.
    #[arg(long, default_value_t = msor::oracle::DEFAULT_BUDGET)]
    pub budget: usize,
    /// Also run the BFS and fail hard if the answers differ.
    #[arg(long)]
    pub verify: bool,
    /// Largest type count for which `auto` picks the shape solver.
    #[arg(long, default_value_t = 8)]
    pub nd_threshold: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the target set is reachable.
    Check {
        instance: PathBuf,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Print a shortest move sequence.
    Shortest {
        instance: PathBuf,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Write the kernelized instance and a JSON-lines deletion report.
    Kernel {
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        rule: Option<RuleArg>,
    },
    /// Report the shape space and the shape graph of an instance.
    Shapes {
        instance: PathBuf,
        /// Write the shape graph here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        shape_cap: u128,
    },
    /// Evaluate a formula on a graph and an optional set.
    Mc {
        graph: PathBuf,
        /// Formula file, or the name of a built-in formula.
        formula: String,
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
    },
    /// Build the forest instance of an exact cover reconfiguration instance.
    GenXcr {
        /// Exact cover file; a random instance is drawn when omitted.
        xcr: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        universe: usize,
        #[arg(long, default_value_t = 4)]
        family: usize,
    },
    /// Print basic parameters of an instance.
    Info {
        instance: PathBuf,
        #[arg(long, value_enum)]
        rule: Option<RuleArg>,
    },
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded(_)) => EXIT_UNKNOWN,
        Some(Error::Unsupported(_) | Error::NotMso1(_)) => EXIT_USAGE,
        Some(Error::Internal(_)) => EXIT_INTERNAL,
        _ => EXIT_DATA,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { EXIT_USAGE } else { EXIT_YES });
        }
    };
    let result = match cli.command {
        Command::Check { instance, config } => commands::check(&instance, &config),
        Command::Shortest { instance, config } => commands::shortest(&instance, &config),
        Command::Kernel { instance, out, rule } => commands::kernel(&instance, &out, rule),
        Command::Shapes { instance, out, shape_cap } => commands::shapes(&instance, out.as_deref(), shape_cap),
        Command::Mc { graph, formula, set } => commands::mc(&graph, &formula, &set),
        Command::GenXcr { xcr, out, seed, universe, family } => {
            commands::gen_xcr(xcr.as_deref(), &out, seed, universe, family)
        }
        Command::Info { instance, rule } => commands::info(&instance, rule),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            let code = exit_code(&err);
            if code == EXIT_UNKNOWN {
                println!("unknown");
            }
            eprintln!("error: {err:#}");
            ExitCode::from(code)
        }
    }
}
