//! `ptm`: command-line access to the Prouhet-Thue-Morse toolkit.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use ptm_core::dynamics::Sign;
use ptm_core::number_theory::ProductFamily;
use ptm_core::{Logical, PauliAxis, PtmError};

/// Usage errors (sysexits EX_USAGE).
const EXIT_USAGE: u8 = 64;
const EXIT_VALIDATION: u8 = 1;
const EXIT_VERIFY_FAILED: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "ptm", version, about = "Prouhet-Thue-Morse sequences, states and spectra")]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    /// Seed for measurement sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// First 2^N terms of the sequence as (index, bit).
    Seq {
        #[arg(long)]
        order: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Power sums over the even and odd index classes.
    Multigrade {
        #[arg(long)]
        order: u32,
        /// Largest exponent; defaults to the order.
        #[arg(long)]
        max_k: Option<u32>,
    },
    /// Amplitudes of a logical PTM state.
    State {
        #[arg(long, required_unless_present = "qudit")]
        n: Option<u32>,
        #[arg(long)]
        which: Logical,
        /// Single qudit of this dimension instead of N qubits.
        #[arg(long)]
        qudit: Option<usize>,
    },
    /// Check a spin-operator property and emit a JSON report.
    Verify(VerifyArgs),
    /// Gate list of a built-in circuit as JSON.
    Circuit {
        #[arg(value_enum)]
        kind: CircuitKind,
        #[arg(long, default_value_t = 3)]
        n: u32,
    },
    /// Run a three-qubit phase-flip code.
    Qec {
        #[arg(long, value_enum)]
        code: Code,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Complex64,
        #[arg(long, allow_hyphen_values = true)]
        beta: Complex64,
        /// Qubit (1-3) hit by a Z error; 0 for none.
        #[arg(long, default_value_t = 0)]
        error_site: usize,
    },
    /// Dephasing XX chain; writes density-matrix entries above threshold.
    Evolve(EvolveArgs),
    /// Populations while the Hadamard Hamiltonian prepares a PTM state.
    Initptm {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        sign: Sign,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// QFT intensity spectrum of an encoded state.
    Fractal(FractalArgs),
    /// PTM Dirichlet series at s = sigma + i tau.
    Zeta {
        #[arg(long)]
        sigma: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        tau: f64,
        #[arg(long, default_value_t = 1_000_000)]
        terms: u64,
        /// Evaluate through the autocorrelation of the level-spectrum system.
        #[arg(long)]
        feiler: bool,
    },
    /// Partial infinite products weighted by the sequence.
    Products {
        #[arg(long)]
        which: ProductFamily,
        #[arg(long, default_value_t = 1_000_000)]
        terms: u64,
        #[arg(long, default_value_t = ptm_core::number_theory::DEFAULT_BITS)]
        bits: u32,
    },
    /// Binary expansion of the PTM constant.
    Constant {
        #[arg(long, default_value_t = 128)]
        bits: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    #[value(name = "1.2.1")]
    FirstMoment,
    #[value(name = "1.2.2")]
    ZProducts,
    #[value(name = "1.2.3")]
    PowerMoments,
    #[value(name = "1.2.4")]
    XxStabilizer,
    Sx,
    Jz,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    property: Property,
    #[arg(long)]
    n: u32,
    /// Axis for 1.2.3; both y and z when omitted.
    #[arg(long)]
    axis: Option<PauliAxis>,
    /// Moment order (1.2.3, jz) or second site (1.2.4); all when omitted.
    #[arg(long)]
    j: Option<u32>,
    /// First site for 1.2.4.
    #[arg(long)]
    k: Option<usize>,
    /// Sites of the Z product for 1.2.2; every subset when omitted.
    #[arg(long, value_delimiter = ',')]
    sites: Option<Vec<usize>>,
    /// Qudit dimension for jz; defaults to 2^N.
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CircuitKind {
    Encoder,
    Qft,
    Shor3,
    Ptm3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Code {
    Shor3,
    Ptm3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Init {
    Ghz,
    Ptm0,
    Ptm1,
}

#[derive(Debug, Args)]
struct EvolveArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 0.1)]
    gamma: f64,
    #[arg(long, default_value_t = 5.0)]
    tfinal: f64,
    #[arg(long, default_value_t = 0.02)]
    dt: f64,
    /// XX coupling strength.
    #[arg(long, default_value_t = 1.0)]
    g: f64,
    #[arg(long, value_enum, default_value_t = Init::Ghz)]
    init: Init,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Fft,
}

#[derive(Debug, Args)]
struct FractalArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, allow_hyphen_values = true, default_value = "0.7071067811865476")]
    alpha: Complex64,
    #[arg(long, allow_hyphen_values = true, default_value = "-0.7071067811865476")]
    beta: Complex64,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    method: Method,
    /// `center,width` as fractions of the index range; repeatable.
    #[arg(long, value_parser = parse_zoom)]
    zoom: Vec<(f64, f64)>,
    #[arg(long)]
    out: PathBuf,
}

fn parse_zoom(s: &str) -> Result<(f64, f64), String> {
    let (c, w) = s
        .split_once(',')
        .ok_or_else(|| format!("expected center,width, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok((parse(c)?, parse(w)?))
}

#[derive(Debug)]
pub enum CliError {
    Ptm(PtmError),
    Io(std::io::Error),
    Invalid(String),
}

impl From<PtmError> for CliError {
    fn from(e: PtmError) -> Self {
        CliError::Ptm(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Ptm(e) => match e {
                PtmError::Capacity { .. } => "capacity",
                PtmError::DimensionMismatch { .. } => "dimension_mismatch",
                PtmError::NotNormalized { .. } => "not_normalized",
                PtmError::InvalidArgument(_) => "invalid_argument",
                PtmError::NonFinite(_) => "non_finite",
                PtmError::NotPowerOfTwo(_) => "not_power_of_two",
                PtmError::StepSize { .. } => "step_size",
                PtmError::MalformedCircuit(_) => "malformed_circuit",
            },
            CliError::Io(_) => "io",
            CliError::Invalid(_) => "invalid_argument",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Ptm(e) => e.to_string(),
            CliError::Io(e) => e.to_string(),
            CliError::Invalid(m) => m.clone(),
        }
    }
}

/// What a successful command observed.
pub enum Status {
    Done,
    VerifyFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::dispatch(cli.command, cli.seed) {
        Ok(Status::Done) => ExitCode::SUCCESS,
        Ok(Status::VerifyFailed) => ExitCode::from(EXIT_VERIFY_FAILED),
        Err(e) => {
            let body = serde_json::json!({ "error": e.kind(), "message": e.message() });
            eprintln!("{body}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
