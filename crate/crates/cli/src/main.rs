//! `medrank` command-line interface.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid data or configuration,
//! 3 I/O failure, 4 size cap exceeded.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use medrank::bb::{BbOptions, Incumbent, DEFAULT_MAX_OBJECTS};
use medrank::sim::{ExperimentConfig, ModelSpec, Space};
use medrank::weak_orders::{approx_weak_order_count, enumerate_weak_orders};
use medrank::{
    bb_consensus, borda_solution, condorcet_solution, dataset_digest, dataset_to_string, fast, kemeny_distance,
    kendall_tau, parse_dataset, quick_consensus, run_experiment, sample, sample_incomplete, spearman_rho, tau_x,
    write_atomic, CombinedInput, Error, Ranking, RunReport,
};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_SIZE_CAP: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "medrank", version, about = "Median consensus ranking toolkit")]
struct Cli {
    /// Worker threads for parallel solvers (results do not depend on it).
    #[arg(long, global = true, env = "MEDRANK_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the consensus ranking of a dataset file.
    Consensus(ConsensusArgs),
    /// Distances and correlations between two rankings.
    Metrics(MetricsArgs),
    /// Draw a synthetic dataset.
    Simulate(SimulateArgs),
    /// Run an experiment grid from a TOML config.
    Bench(BenchArgs),
    /// List every weak order of m objects.
    Enumerate(EnumerateArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgorithmArg {
    Bb,
    Quick,
    Fast,
    Borda,
    Condorcet,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpaceArg {
    Full,
    Weak,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Full => Space::Full,
            SpaceArg::Weak => Space::Weak,
        }
    }
}

#[derive(Args, Debug)]
struct ConsensusArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    algorithm: AlgorithmArg,
    /// Starting points for FAST.
    #[arg(long, default_value_t = 100)]
    maxiter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Start branch-and-bound from the Q vector instead of the QUICK result.
    #[arg(long)]
    fidelity_init: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_OBJECTS)]
    max_objects: usize,
    /// Omit wall-clock timings so reports are byte-reproducible.
    #[arg(long)]
    no_timings: bool,
    /// Report path; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["r1", "file"])))]
struct MetricsArgs {
    /// First ranking, e.g. "1 2 3" or "1,-,2".
    #[arg(long, requires = "r2", allow_hyphen_values = true)]
    r1: Option<String>,
    #[arg(long, requires = "r1", allow_hyphen_values = true)]
    r2: Option<String>,
    /// Dataset file; its first two rows are compared.
    #[arg(long, conflicts_with_all = ["r1", "r2"])]
    file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "full")]
    space: SpaceArg,
    /// Model consensus, e.g. "2 1 3"; defaults to 1..m.
    #[arg(long)]
    consensus: Option<String>,
    /// Draw "pick k of m" incomplete rankings instead of model samples.
    #[arg(long)]
    pick: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    no_timings: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    m: usize,
    /// Print only the exact and approximate counts.
    #[arg(long)]
    count: bool,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(), Failure>;

fn emit(output: Option<&Path>, text: &str) -> Outcome {
    match output {
        Some(p) => write_atomic(p, text.as_bytes())?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(Error::from)?;
        }
    }
    Ok(())
}

fn parse_ranks(text: &str) -> Result<Ranking, Failure> {
    let ranks = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| match t {
            "-" => Ok(None),
            _ => t
                .parse::<u32>()
                .map(Some)
                .map_err(|_| Failure::Usage(format!("`{t}` is not a rank"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Ranking::from_partial(&ranks)?)
}

fn cmd_consensus(a: &ConsensusArgs) -> Outcome {
    let data = parse_dataset(&a.input)?;
    let ci = CombinedInput::from_dataset(&data);
    let set = match a.algorithm {
        AlgorithmArg::Bb => {
            let opts = BbOptions {
                max_objects: a.max_objects,
                incumbent: if a.fidelity_init {
                    Incumbent::InitialQ
                } else {
                    Incumbent::Quick
                },
            };
            bb_consensus(&ci, &opts)?
        }
        AlgorithmArg::Quick => quick_consensus(&ci)?,
        AlgorithmArg::Fast => fast(&ci, a.maxiter, a.seed)?,
        AlgorithmArg::Borda => borda_solution(&data)?,
        AlgorithmArg::Condorcet => condorcet_solution(&data)?,
    };
    let report = RunReport::new(&set, &ci, dataset_digest(&data), !a.no_timings)?;
    emit(a.output.as_deref(), &report.to_json())
}

fn show(name: &str, value: medrank::Result<f64>) -> String {
    match value {
        Ok(v) => format!("{name}={v}\n"),
        Err(e) => format!("{name}=undefined ({e})\n"),
    }
}

fn cmd_metrics(a: &MetricsArgs) -> Outcome {
    let (r1, r2) = match (&a.r1, &a.r2, &a.file) {
        (Some(x), Some(y), None) => {
            let (r1, r2) = (parse_ranks(x)?, parse_ranks(y)?);
            if r1.len() != r2.len() {
                return Err(Error::LabelMismatch(format!(
                    "rankings cover {} and {} objects",
                    r1.len(),
                    r2.len()
                ))
                .into());
            }
            (r1, r2)
        }
        (None, None, Some(f)) => {
            let data = parse_dataset(f)?;
            if data.len() < 2 {
                return Err(Error::InvalidDataset("metrics needs at least two rows".into()).into());
            }
            (data.rows()[0].0.clone(), data.rows()[1].0.clone())
        }
        _ => return Err(Failure::Usage("give --r1 and --r2, or --file".into())),
    };
    let mut out = String::new();
    out += &show("kemeny", kemeny_distance(&r1, &r2));
    out += &show("tau_x", tau_x(&r1, &r2));
    out += &show("kendall", kendall_tau(&r1, &r2));
    out += &show("spearman", spearman_rho(&r1, &r2));
    emit(None, &out)
}

fn cmd_simulate(a: &SimulateArgs) -> Outcome {
    let data = match a.pick {
        Some(k) => sample_incomplete(a.m, k, a.seed)?,
        None => {
            let consensus = match &a.consensus {
                Some(text) => parse_ranks(text)?,
                None => Ranking::from_ranks(&(1..=a.m as u32).collect::<Vec<_>>())?,
            };
            if consensus.len() != a.m {
                return Err(Error::DimensionMismatch {
                    expected: a.m,
                    actual: consensus.len(),
                }
                .into());
            }
            sample(&ModelSpec::new(consensus, a.theta, a.space.into())?, a.n, a.seed)?
        }
    };
    emit(a.output.as_deref(), &dataset_to_string(&data))
}

fn cmd_bench(a: &BenchArgs) -> Outcome {
    let text = std::fs::read_to_string(&a.config)
        .map_err(|e| Error::Io(format!("{}: {e}", a.config.display())))?;
    let mut cfg = ExperimentConfig::from_toml(&text)?;
    if a.no_timings {
        cfg.record_timings = false;
    }
    let report = run_experiment(&cfg)?;
    emit(a.output.as_deref(), &report.to_json())
}

fn cmd_enumerate(a: &EnumerateArgs) -> Outcome {
    let all = enumerate_weak_orders(a.m)?;
    let mut out = format!("count={}\napprox={}\n", all.len(), approx_weak_order_count(a.m));
    if !a.count {
        for r in &all {
            out += &r.to_string();
            out.push('\n');
        }
    }
    emit(None, &out)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Consensus(a) => cmd_consensus(a),
        Command::Metrics(a) => cmd_metrics(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Enumerate(a) => cmd_enumerate(a),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SizeCap { .. } => EXIT_SIZE_CAP,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_DATA,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let threads = cli.threads.unwrap_or(1);
    if threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(EXIT_USAGE);
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return ExitCode::from(EXIT_IO);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
