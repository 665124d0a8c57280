use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qpt_probe::probe_protocol::Method;
use qpt_probe::sweep::{run, write_result, Format, Quantity, SweepConfig};

#[derive(Parser)]
#[command(version, about = "Probe-qubit sweeps over the longitudinal field of a small Ising chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of the system Hamiltonian
    Spectrum(Shared),
    /// Ground-state concurrence of the spin pair
    Concurrence(Shared),
    /// Probe overlap for the level-crossing protocol (bx = 0)
    OverlapLc(Shared),
    /// Probe overlap after evolution for a time tau (avoided crossing)
    OverlapAc(Shared),
    /// Mixing-angle sensitivity near the critical field
    Sensitivity(Shared),
    /// Product-formula fidelity against exact evolution
    TrotterFidelity(Shared),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Trotter,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct Shared {
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    bz_min: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    bz_max: f64,
    /// Grid points, endpoints included
    #[arg(long, default_value_t = 81)]
    steps: usize,
    /// Transverse field [default: 0 for spectrum, concurrence, overlap-lc; 0.1 otherwise]
    #[arg(long)]
    bx: Option<f64>,
    /// Probe coupling
    #[arg(long, default_value_t = 0.2)]
    eps: f64,
    /// Evolution time
    #[arg(long, default_value_t = 1.6)]
    tau: f64,
    /// System spins
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, value_enum, default_value = "exact")]
    method: MethodArg,
    /// Product-formula repetitions over tau
    #[arg(long, default_value_t = 1)]
    trotter_steps: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Output file; standard output when omitted or empty
    #[arg(long)]
    out: Option<String>,
    /// Evaluate grid points on the thread pool
    #[arg(long)]
    parallel: bool,
    /// Emit `"metadata": null` instead of version, timestamp and grid
    #[arg(long)]
    no_metadata: bool,
    /// overlap-ac: emit both methods and per-branch fidelity (`exact,trotter`)
    #[arg(long, value_parser = parse_compare)]
    compare: Option<bool>,
}

fn parse_compare(s: &str) -> Result<bool, String> {
    match s {
        "exact,trotter" | "trotter,exact" => Ok(true),
        _ => Err(format!("expected `exact,trotter`, got `{s}`")),
    }
}

fn config(quantity: Quantity, a: Shared) -> SweepConfig {
    let defaults = SweepConfig::new(quantity);
    SweepConfig {
        bz_min: a.bz_min,
        bz_max: a.bz_max,
        steps: a.steps,
        bx: a.bx.unwrap_or(defaults.bx),
        eps: a.eps,
        tau: a.tau,
        n: a.n,
        method: match a.method {
            MethodArg::Exact => Method::Exact,
            MethodArg::Trotter => Method::Trotter,
        },
        trotter_steps: a.trotter_steps,
        format: match a.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        },
        out: a.out.filter(|p| !p.is_empty()).map(PathBuf::from),
        parallel: a.parallel,
        metadata: !a.no_metadata,
        compare: a.compare.unwrap_or(false),
        ..defaults
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (quantity, shared) = match cli.command {
        Command::Spectrum(a) => (Quantity::Spectrum, a),
        Command::Concurrence(a) => (Quantity::Concurrence, a),
        Command::OverlapLc(a) => (Quantity::OverlapLc, a),
        Command::OverlapAc(a) => (Quantity::OverlapAc, a),
        Command::Sensitivity(a) => (Quantity::Sensitivity, a),
        Command::TrotterFidelity(a) => (Quantity::TrotterFidelity, a),
    };
    let cfg = config(quantity, shared);
    match run(&cfg).and_then(|r| write_result(&r)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qpt-probe {quantity}: {e}");
            ExitCode::from(2)
        }
    }
}
