//! `permcirc`: amplitudes of Toffoli–Hadamard circuits via GF(2) gap counting
//! and matrix permanents.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use permcirc_core::pipeline::ExactKernel;
use permcirc_core::Mode;

mod commands;
mod report;

use report::Failure;

#[derive(Parser, Debug)]
#[command(name = "permcirc", version, about = "Circuit amplitudes as permanents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute one amplitude ⟨out|U|in⟩.
    Amp(AmpArgs),
    /// Emit the polynomial, matrix or graph for an instance.
    Compile(CompileArgs),
    /// Cross-check every route on random circuits.
    Verify(VerifyArgs),
    /// Spectral norm of the scaled encoding matrix.
    Norm(NormArgs),
    /// Time the exact permanent kernels on random matrices.
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone)]
pub struct InstanceArgs {
    /// Circuit file.
    #[arg(long)]
    pub circuit: PathBuf,
    /// Input basis state; character i is qubit i.
    #[arg(long = "in", value_name = "BITS")]
    pub input: String,
    /// Output basis state.
    #[arg(long = "out", value_name = "BITS")]
    pub output: String,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value = "graph-fix", value_parser = parse_mode)]
    pub mode: Mode,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Lift the default size caps.
    #[arg(long)]
    pub force_size: bool,
    /// Write the JSON result (or the artifact) here instead of stdout.
    #[arg(long = "output", value_name = "PATH")]
    pub output_path: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Sv,
    Count,
    PermExact,
    PermMc,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Ryser,
    Glynn,
}

impl From<KernelArg> for ExactKernel {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Ryser => ExactKernel::Ryser,
            KernelArg::Glynn => ExactKernel::Glynn,
        }
    }
}

#[derive(Args, Debug)]
pub struct AmpArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "perm-exact")]
    pub backend: Backend,
    #[arg(long, value_enum, default_value = "ryser")]
    pub kernel: KernelArg,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Recompute with the state-vector simulator and fail on mismatch.
    #[arg(long)]
    pub cross_check: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Poly,
    Matrix,
    MatrixDense,
    Dot,
}

#[derive(Args, Debug)]
pub struct CompileArgs {
    #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
    pub circuit: Option<PathBuf>,
    /// Hand-written polynomial; every variable in it is free.
    #[arg(long)]
    pub poly: Option<PathBuf>,
    #[arg(long = "in", value_name = "BITS", requires = "output")]
    pub input: Option<String>,
    #[arg(long = "out", value_name = "BITS", requires = "input")]
    pub output: Option<String>,
    #[arg(long, value_enum)]
    pub emit: Emit,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    pub qubits: usize,
    #[arg(long, default_value_t = 6)]
    pub gates: usize,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.3)]
    pub p_toffoli: f64,
    /// Check every (in, out) pair of each circuit.
    #[arg(long)]
    pub exhaustive: bool,
    /// Corrupt one gadget weight per graph-fix matrix (harness self-test).
    #[arg(long)]
    pub inject_fault: bool,
    #[arg(long, default_value_t = 26)]
    pub max_vars: usize,
    #[arg(long, default_value_t = 30)]
    pub max_matrix: usize,
    #[arg(long, value_enum, default_value = "ryser")]
    pub kernel: KernelArg,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Write the full report, including every trial, here.
    #[arg(long = "output", value_name = "PATH")]
    pub output_path: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct NormArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchBackend {
    Naive,
    Ryser,
    Glynn,
    All,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "all")]
    pub backend: BenchBackend,
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long)]
    pub force_size: bool,
    #[arg(long = "output", value_name = "PATH")]
    pub output_path: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Amp(a) => commands::amp(&a),
        Command::Compile(a) => commands::compile(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Norm(a) => commands::norm(&a),
        Command::Bench(a) => commands::bench(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
