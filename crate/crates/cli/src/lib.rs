//! Command-line front end for subdata selection, LASSO fitting and the
//! simulation harness. The binary is `iboss`; this library holds its
//! argument definitions and commands so they can be tested directly.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::MethodList;
use iboss_core::lasso::{CvParams, PathParams};
use iboss_core::sim::DesignDist;

#[derive(Debug, Parser)]
#[command(name = "iboss", version, about = "Information-based subdata selection for LASSO regression")]
pub struct Cli {
    /// Base random seed (scenario files may set their own).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads; defaults to one per core.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Directory that receives result folders.
    #[arg(long, global = true, default_value = "results")]
    pub out_dir: PathBuf,

    /// Name result folders by id only and write zero timings, so reruns
    /// produce byte-identical files.
    #[arg(long, global = true)]
    pub deterministic_paths: bool,

    /// More log output (-v, -vv).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the scenarios of a scenario file.
    #[command(after_help = config::KEYS_HELP)]
    Simulate {
        /// Scenario file.
        config: PathBuf,
    },
    /// Select subdata rows from a CSV dataset and write their indices.
    Select(SelectArgs),
    /// Fit a cross-validated LASSO on a CSV dataset or on selected rows of it.
    Fit(FitArgs),
    /// Sweep n (or k) and fit time-scaling exponents per method and phase.
    Bench(BenchArgs),
    /// Repeated train/test splits of a CSV dataset with a prediction-error table.
    Real(RealArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Input CSV file.
    #[arg(long)]
    pub data: PathBuf,
    /// Response column: a header name, or a 0-based position.
    #[arg(long, default_value = "y")]
    pub response: String,
    /// The file has no header row.
    #[arg(long)]
    pub no_header: bool,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct CvArgs {
    /// Cross-validation folds.
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    /// Number of penalties on the path.
    #[arg(long, default_value_t = 100)]
    pub path_length: usize,
    /// Smallest penalty as a fraction of the largest.
    #[arg(long, default_value_t = 0.001)]
    pub epsilon: f64,
}

impl CvArgs {
    pub fn params(&self, seed: u64) -> CvParams {
        CvParams {
            folds: self.folds,
            path: PathParams {
                epsilon: self.epsilon,
                c_count: self.path_length,
            },
            seed,
            ..CvParams::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Row-selecting method: UNIF, LEV, LEV(s), ALEV(s), D-OPT or SIS-IBOSS(s).
    #[arg(long)]
    pub method: iboss_core::Method,
    /// Subdata size.
    #[arg(long)]
    pub k: usize,
    /// Sketch size for ALEV(s).
    #[arg(long)]
    pub sketch_rows: Option<usize>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Restrict the fit to the rows listed in this index file (as written by `select`).
    #[arg(long)]
    pub index: Option<PathBuf>,
    #[command(flatten)]
    pub cv: CvArgs,
    /// Coefficient file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write the cross-validation curve here.
    #[arg(long)]
    pub path_output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Take the sweep from a scenario file instead of the flags below.
    #[arg(long, conflicts_with_all = ["n", "k", "p", "methods"])]
    pub config: Option<PathBuf>,
    /// Sweep identifier, used for the result folder.
    #[arg(long, default_value = "bench")]
    pub id: String,
    #[arg(long, default_value = "t2")]
    pub design: DesignDist,
    /// Full-data sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [10_000usize, 20_000, 40_000, 80_000])]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    pub p: usize,
    /// Subdata sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [1000usize])]
    pub k: Vec<usize>,
    /// Methods, comma separated.
    #[arg(long, default_value = "FULL, D-OPT, UNIF")]
    pub methods: MethodList,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long, default_value_t = 1000)]
    pub n_test: usize,
    #[command(flatten)]
    pub cv: CvArgs,
}

#[derive(Debug, Args)]
pub struct RealArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Rows held out for testing in each run.
    #[arg(long)]
    pub n_test: usize,
    /// Subdata size.
    #[arg(long)]
    pub k: usize,
    /// Methods, comma separated.
    #[arg(long, default_value = "FULL, D-OPT, LEV, UNIF")]
    pub methods: MethodList,
    /// Independent train/test splits.
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    #[command(flatten)]
    pub cv: CvArgs,
}

/// Runs the parsed command line.
pub fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(w) = cli.workers {
        rayon::ThreadPoolBuilder::new().num_threads(w).build_global()?;
    }
    match &cli.command {
        Command::Simulate { config } => commands::simulate(&cli, config),
        Command::Select(a) => commands::select(&cli, a),
        Command::Fit(a) => commands::fit(&cli, a),
        Command::Bench(a) => commands::bench(&cli, a),
        Command::Real(a) => commands::real(&cli, a),
    }
}
