use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "oilab",
    version,
    about = "Order-interference workbench: SD reduction, oracle simulation, LWE tooling"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Root seed; every random stream is derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Maximum number of input bits enumerated exhaustively.
    #[arg(long, global = true, env = "OILAB_CAP_BITS")]
    pub cap_bits: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Circuit inspection.
    #[command(subcommand)]
    Circuit(CircuitCmd),
    /// Reductions between promise problems.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Amplify an SD instance to the gap (2^-k, 1 - 2^-k).
    Polarize {
        instance: PathBuf,
        #[arg(long)]
        polarize_k: Option<u32>,
    },
    /// Oracle-based decision.
    #[command(subcommand)]
    Decide(DecideCmd),
    /// One simulated oracle query.
    Oracle {
        kind: OracleKind,
        query: PathBuf,
        /// Overrides the query file's λ.
        #[arg(long)]
        lambda: Option<u64>,
    },
    /// LWE and GapCVP tooling.
    #[command(subcommand)]
    Lwe(LweCmd),
}

#[derive(Subcommand, Debug)]
pub enum CircuitCmd {
    /// Size, widths and the exact output distribution.
    Stats { circuit: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum ReduceCmd {
    /// Compile an SD instance into an SISD instance.
    SdToSisd { instance: PathBuf },
}

#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 100)]
    pub lambda: u64,
    #[arg(long, default_value_t = 4096)]
    pub shots: u64,
    #[arg(long, default_value_t = 25)]
    pub trials: u32,
    /// Oracle calls allowed per randomized step.
    #[arg(long, default_value_t = 50)]
    pub retry_budget: u32,
}

#[derive(Subcommand, Debug)]
pub enum DecideCmd {
    Sd {
        instance: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Polarize first when the gap condition fails.
        #[arg(long)]
        polarize_k: Option<u32>,
    },
    Sisd {
        instance: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    Oi,
    Ci,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OriginArg {
    Lwe,
    Uniform,
}

#[derive(Args, Debug, Clone)]
pub struct LweShape {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub alpha: f64,
}

#[derive(Subcommand, Debug)]
pub enum LweCmd {
    /// Sample an LWE or uniform instance.
    Gen {
        #[command(flatten)]
        shape: LweShape,
        #[arg(long, value_enum, default_value = "lwe")]
        origin: OriginArg,
    },
    /// Map an LWE instance to GapCVP with `d = √m·αq`.
    ToGapcvp {
        instance: PathBuf,
        #[arg(long, default_value_t = 3.0)]
        gamma: f64,
    },
    /// Exact distance from the target to the lattice.
    Dist { instance: PathBuf },
    /// YES/NO separation experiment; `--out` names a directory for rows.csv and summary.json.
    Experiment {
        #[command(flatten)]
        shape: LweShape,
        #[arg(long, default_value_t = 200)]
        trials: u32,
        #[arg(long, default_value_t = 3.0)]
        separation: f64,
    },
}
