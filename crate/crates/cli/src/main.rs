mod commands;
mod output;
mod shift;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{emit, render, Format};

#[derive(Parser, Debug)]
#[command(name = "subshift", version, about = "Pressure, equilibrium and Gibbs checks on one-dimensional subshifts")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format; CSV is available for tabular commands only.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    pub format: OutputFormat,
    /// Seed for stochastic commands. A fresh seed is drawn (and reported) when omitted.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Leave the timestamp out of JSON output.
    #[arg(long, global = true)]
    pub deterministic: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Word counts and the estimate (1/n) log |L_n|.
    Entropy {
        #[arg(long)]
        shift: String,
        #[arg(long)]
        n: usize,
        /// Maximum number of words enumerated at one length.
        #[arg(long, default_value_t = subshift::DEFAULT_CAP)]
        cap: u64,
    },
    /// Finite-n pressure of a potential, with exact values on SFTs.
    Pressure {
        #[arg(long)]
        shift: String,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        potential: PotentialArgs,
        #[arg(long, default_value_t = subshift::DEFAULT_CAP)]
        cap: u64,
    },
    /// Language counts for lengths 1..=n, or the words of length n.
    Language {
        #[arg(long)]
        shift: String,
        #[arg(long)]
        n: usize,
        /// List the admissible words of length n.
        #[arg(long)]
        words: bool,
        #[arg(long, default_value_t = subshift::DEFAULT_CAP)]
        cap: u64,
    },
    /// Block swaps of length n that are legal in every context of length pad.
    Swaps {
        #[arg(long)]
        shift: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        pad: usize,
    },
    /// Conformality of the equilibrium measure of a site potential under block
    /// swaps (SFT selectors), or the singular witness table (counterexample).
    Conformal {
        #[arg(long)]
        shift: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        pad: usize,
        /// Site potential values, one per symbol.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        f: Option<Vec<f64>>,
        /// Compare against sampled paths instead of the exact measure.
        #[arg(long)]
        samples: Option<usize>,
        /// Length of each sampled path.
        #[arg(long, default_value_t = 64)]
        len: usize,
        /// Tolerance on the log deviation in exact mode.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// β-shift counts, expansions, cylinder brackets and the Parry density.
    Beta {
        #[command(subcommand)]
        command: BetaCommand,
    },
    /// Equilibrium states and sampling on the Dyck shift.
    Dyck {
        #[command(subcommand)]
        command: DyckCommand,
    },
    /// Random walk in random scenery.
    Kalikow {
        #[command(subcommand)]
        command: KalikowCommand,
    },
    /// Counts and entropy estimates for every built-in shift.
    Gallery {
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Runs the acceptance suite and prints a pass/fail table.
    VerifyAll {
        /// Restrict to these criterion ids.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u32>>,
    },
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct PotentialArgs {
    /// Site potential values, one per symbol.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub f: Option<Vec<f64>>,
    /// Potential file {"range", "alphabet", "entries"}.
    #[arg(long)]
    pub potential: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum BetaCommand {
    /// b_n, f_n and the recursion sequences for n = 1..=N.
    Counts {
        #[arg(long)]
        beta: String,
        #[arg(long)]
        n: usize,
    },
    /// Digits of the expansion of 1.
    Omega {
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 32)]
        len: usize,
    },
    /// Bracket on the cylinder measure of a word y.
    Cylinder {
        #[arg(long)]
        beta: String,
        /// Digits of y, e.g. "1 0".
        #[arg(long)]
        y: String,
        #[arg(long)]
        n: usize,
    },
    /// Partial sums of the invariant density at x.
    Parry {
        #[arg(long)]
        beta: String,
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 200)]
        terms: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum DyckCommand {
    /// Solves for the equilibrium state of a site potential.
    Solve {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,0,0,0")]
        f: Vec<f64>,
    },
    /// Samples a word from the equilibrium state of f.
    Sample {
        #[arg(long)]
        len: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,0,0,0")]
        f: Vec<f64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum KalikowCommand {
    /// Entropy of the walk-in-scenery measure with bias p.
    Entropy {
        #[arg(long = "N")]
        scenery: usize,
        #[arg(long)]
        p: f64,
    },
    /// The entropy-maximizing biases and the topological entropy.
    Optimal {
        #[arg(long = "N")]
        scenery: usize,
    },
    /// Invariance of the measure under exchanging two excursions.
    Invariance {
        #[arg(long, value_enum, default_value_t = InvarianceMode::Exact)]
        mode: InvarianceMode,
        #[arg(long = "N", default_value_t = 2)]
        scenery: usize,
        #[arg(long, default_value_t = 0.8)]
        p: f64,
        /// First word, e.g. "+1 -2 +1 +2".
        #[arg(long, allow_hyphen_values = true)]
        w1: String,
        #[arg(long, allow_hyphen_values = true)]
        w2: String,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
    },
    /// Invariance of the symmetric-walk measure over a Markov scenery.
    Scenery {
        /// Walk words such as "+-+-".
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Time at which the words are placed.
        #[arg(long, default_value_t = 5)]
        k: usize,
        /// Scenery law: `uniform`, `uniform:N` or `two-state:A,B` (flip probabilities).
        #[arg(long, default_value = "uniform")]
        chain: String,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
    },
    /// Samples a word of the walk-in-scenery shift.
    Sample {
        #[arg(long = "N")]
        scenery: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        len: usize,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvarianceMode {
    Exact,
    Mc,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = match cli.global.format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Csv => Format::Csv,
    };
    let result = commands::run(&cli.command, &cli.global).and_then(|report| {
        let text = render(&report, format, !cli.global.deterministic)?;
        emit(&text, cli.global.out.as_deref())?;
        Ok(report.status)
    });
    match result {
        Ok(status) => ExitCode::from(status.exit_code()),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
