use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use txsched::distsim::DistConfig;
use txsched::harness::commands::{self, CommandOutput, RunArgs, ScenarioInput, EXIT_USAGE};
use txsched::harness::{Algorithm, CorpusBounds, ExperimentOptions};
use txsched::tours::TourKind;

#[derive(Parser)]
#[command(name = "txsched", version, about = "Transaction scheduling experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// Scenario file or directory of `*.toml` files (repeatable).
    #[arg(long)]
    scenario: Vec<PathBuf>,
    /// Corpus seed, used when no scenario is given.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Corpus size.
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long, default_value_t = 10)]
    max_nodes: usize,
    #[arg(long, default_value_t = 6)]
    max_txns: usize,
    /// Objects per corpus scenario; each transaction needs up to this many.
    #[arg(long, default_value_t = 1)]
    objects: usize,
}

impl Input {
    fn bounds(&self) -> CorpusBounds {
        CorpusBounds::multi_object(self.max_nodes, self.max_txns, self.objects)
    }

    fn resolve(&self) -> ScenarioInput {
        if self.scenario.is_empty() {
            ScenarioInput::Corpus { seed: self.seed, count: self.count, bounds: self.bounds() }
        } else {
            ScenarioInput::Paths(self.scenario.clone())
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded corpus of scenario files.
    Gen {
        #[command(flatten)]
        input: Input,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run algorithms and emit one CSV row per run.
    Run {
        #[command(flatten)]
        input: Input,
        /// Algorithm (repeatable); all when omitted.
        #[arg(long)]
        algorithm: Vec<Algorithm>,
        /// Tour construction (repeatable); mst when omitted.
        #[arg(long)]
        tour: Vec<TourKind>,
        /// Treat scheduler errors as fatal.
        #[arg(long)]
        strict: bool,
        /// Write the distributed message trace to this file.
        #[arg(long)]
        trace_messages: Option<PathBuf>,
        /// CSV output file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Skip the optimum oracle.
        #[arg(long)]
        no_oracle: bool,
        /// Weight of a control message per unit distance.
        #[arg(long, default_value_t = 1)]
        control_weight: u64,
        /// Fill the runtime column (output is then not reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Optimal cost of each scenario.
    Oracle {
        #[command(flatten)]
        input: Input,
    },
    /// All algorithms and tours against the oracle, with ratio summaries.
    Compare {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every hierarchy level for cluster diameter and coverage.
    VerifyPartition {
        #[command(flatten)]
        input: Input,
    },
    /// Print every cluster of the hierarchy.
    DumpHierarchy {
        #[command(flatten)]
        input: Input,
    },
}

fn dispatch(cmd: Command) -> CommandOutput {
    match cmd {
        Command::Gen { input, out } => commands::gen(input.seed, input.count, &input.bounds(), &out),
        Command::Run { input, algorithm, tour, strict, trace_messages, out, no_oracle, control_weight, timing } => {
            let args = RunArgs {
                input: input.resolve(),
                algorithms: if algorithm.is_empty() { Algorithm::ALL.to_vec() } else { algorithm },
                tours: if tour.is_empty() { vec![TourKind::Mst] } else { tour },
                options: ExperimentOptions { oracle: !no_oracle, dist: DistConfig { control_weight }, timing },
                strict,
                trace: trace_messages,
                out,
            };
            commands::run(&args)
        }
        Command::Oracle { input } => commands::oracle(&input.resolve()),
        Command::Compare { input, strict, out } => commands::compare(&input.resolve(), out.as_deref(), strict),
        Command::VerifyPartition { input } => commands::verify_partitions(&input.resolve()),
        Command::DumpHierarchy { input } => commands::dump_hierarchy(&input.resolve()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let out = dispatch(cli.command);
    if out.code == EXIT_USAGE {
        eprint!("{}", out.stdout);
        if !out.stdout.ends_with('\n') {
            eprintln!();
        }
    } else {
        print!("{}", out.stdout);
    }
    ExitCode::from(out.code as u8)
}
