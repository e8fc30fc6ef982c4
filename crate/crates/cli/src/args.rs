use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rqc_core::fidelity::NoiseModel;
use rqc_core::pattern::{PatternCode, DEFAULT_ENUMERATION_CAP};
use rqc_core::sfa::PathSearchConfig;
use rqc_core::verify::SingleQubitSet;
use rqc_core::{LatticeParams, LatticeSpec};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "rqc", version, about = "Design and rank random quantum circuit layouts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the document to FILE instead of standard output.
    #[arg(long, short, value_name = "FILE", global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Structured document with an embedded run manifest.
    Json,
    /// Plain-text table.
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Describe a lattice and its dual graph.
    Lattice(LatticeArgs),
    /// List the gates of every cycle of a design.
    Circuit(CircuitArgs),
    /// Cost breakdown, cheapest cut and fidelity of one design.
    Evaluate(EvaluateArgs),
    /// Rank every pattern code of a lattice by simulation cost.
    Search(SearchArgs),
    /// Per-cycle entanglement entropy across a cut.
    Entropy(EntropyArgs),
    /// Serve the HTTP API.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LatticeArgs {
    /// Region shape: grid or window.
    #[arg(long, default_value = "grid")]
    pub mode: String,
    #[arg(long)]
    pub width: Option<u32>,
    #[arg(long)]
    pub height: Option<u32>,
    #[arg(long)]
    pub xsize: Option<u32>,
    #[arg(long)]
    pub ysize: Option<u32>,
    /// Removed qubits, e.g. "(2,2) (3,1)".
    #[arg(long)]
    pub defects: Option<String>,
}

impl LatticeArgs {
    pub fn spec(&self) -> CliResult<LatticeSpec> {
        let params = LatticeParams {
            mode: Some(self.mode.clone()),
            width: self.width,
            height: self.height,
            xsize: self.xsize,
            ysize: self.ysize,
            defects: self.defects.clone(),
        };
        Ok(params.to_spec()?)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PatternArgs {
    /// Bits for the A layer, one per row: 0 even, 1 odd.
    #[arg(long = "a", requires = "c_bits", conflicts_with = "pattern")]
    pub a_bits: Option<String>,
    /// Bits for the C layer, one per row.
    #[arg(long = "c", requires = "a_bits", conflicts_with = "pattern")]
    pub c_bits: Option<String>,
    /// Order swap, 0 or 1.
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1), conflicts_with = "pattern")]
    pub swap: Option<u8>,
    /// Whole code as text, e.g. "A=11111 C=00000 swap=0". Defaults to the
    /// aligned baseline.
    #[arg(long)]
    pub pattern: Option<String>,
}

impl PatternArgs {
    pub fn code(&self, baseline: impl FnOnce() -> PatternCode) -> CliResult<PatternCode> {
        if let Some(text) = &self.pattern {
            return Ok(text.parse()?);
        }
        match (&self.a_bits, &self.c_bits) {
            (Some(a), Some(c)) => {
                let swap = self.swap.unwrap_or(0);
                Ok(format!("A={a} C={c} swap={swap}").parse()?)
            }
            _ if self.swap.is_some() => Err(CliError::Usage("--swap needs --a and --c".into())),
            _ => Ok(baseline()),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PathArgs {
    /// Maximum cut length in dual edges; defaults to the shortest straight
    /// crossing.
    #[arg(long = "estar")]
    pub e_star: Option<usize>,
    /// Maximum side imbalance.
    #[arg(long = "nstar", default_value_t = PathSearchConfig::default().n_star)]
    pub n_star: usize,
    /// Maximum size of the larger side.
    #[arg(long = "maxside", default_value_t = PathSearchConfig::default().max_side)]
    pub max_side: usize,
    /// Cap on raw paths visited during enumeration.
    #[arg(long = "max-paths", default_value_t = PathSearchConfig::default().max_paths)]
    pub max_paths: usize,
}

impl PathArgs {
    pub fn config(&self) -> PathSearchConfig {
        PathSearchConfig {
            e_star: self.e_star,
            n_star: self.n_star,
            max_side: self.max_side,
            max_paths: self.max_paths,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CircuitArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[command(flatten)]
    pub pattern: PatternArgs,
    /// Number of cycles.
    #[arg(long, default_value_t = 20)]
    pub depth: usize,
    /// Explicit role letters, e.g. "ABCDCDAB"; overrides --depth.
    #[arg(long)]
    pub sequence: Option<String>,
    /// Let a tail start with the last prefix letter.
    #[arg(long)]
    pub allow_junction_repeat: bool,
    /// Cut thresholds used to pick the costliest tail.
    #[command(flatten)]
    pub paths: PathArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[command(flatten)]
    pub pattern: PatternArgs,
    #[arg(long, default_value_t = 20)]
    pub depth: usize,
    #[command(flatten)]
    pub paths: PathArgs,
    #[arg(long)]
    pub allow_junction_repeat: bool,
    /// Single-qubit Pauli error rate.
    #[arg(long, requires_all = ["e2", "er"])]
    pub e1: Option<f64>,
    /// Two-qubit Pauli error rate.
    #[arg(long, requires_all = ["e1", "er"])]
    pub e2: Option<f64>,
    /// Readout error rate.
    #[arg(long, requires_all = ["e1", "e2"])]
    pub er: Option<f64>,
    /// JSON request with lattice, pattern and options; replaces the flags.
    #[arg(long, value_name = "FILE")]
    pub request: Option<PathBuf>,
}

impl EvaluateArgs {
    pub fn noise(&self) -> Option<NoiseModel> {
        match (self.e1, self.e2, self.er) {
            (Some(e1), Some(e2), Some(er)) => Some(NoiseModel::uniform(e1, e2, er)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SearchArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[arg(long, default_value_t = 20)]
    pub depth: usize,
    /// Number of ranked designs to report.
    #[arg(long = "topk", default_value_t = 10)]
    pub top_k: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "RQC_THREADS", default_value_t = 0)]
    pub threads: usize,
    #[command(flatten)]
    pub paths: PathArgs,
    /// Report the rank of the aligned baseline.
    #[arg(long)]
    pub baseline: bool,
    /// Largest code space, as a power of two, the search may enumerate.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub enumeration_cap: u32,
    #[arg(long)]
    pub allow_junction_repeat: bool,
    /// JSON request with lattice and search options; replaces the flags
    /// except --threads.
    #[arg(long, value_name = "FILE")]
    pub request: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SingleGates {
    Haar,
    Discrete,
}

impl From<SingleGates> for SingleQubitSet {
    fn from(g: SingleGates) -> Self {
        match g {
            SingleGates::Haar => SingleQubitSet::Haar,
            SingleGates::Discrete => SingleQubitSet::Discrete,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[command(flatten)]
    pub pattern: PatternArgs,
    #[arg(long, default_value_t = 20)]
    pub depth: usize,
    /// Explicit role letters; overrides --depth.
    #[arg(long)]
    pub sequence: Option<String>,
    #[arg(long)]
    pub allow_junction_repeat: bool,
    /// First random seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of consecutive seeds to average.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    /// Dual-site path such as "(1,0) (1,2)", or "auto" for the cheapest cut.
    #[arg(long, default_value = "auto")]
    pub cut: String,
    /// Largest statevector, in qubits.
    #[arg(long, default_value_t = rqc_core::verify::statevector::DEFAULT_QUBIT_CAP)]
    pub cap: usize,
    /// Single-qubit gate set.
    #[arg(long, value_enum, default_value_t = SingleGates::Haar)]
    pub single: SingleGates,
    /// Second design to compare, as code text.
    #[arg(long)]
    pub versus: Option<String>,
    /// Role letters for the second design; defaults to the first one's.
    #[arg(long, requires = "versus")]
    pub versus_sequence: Option<String>,
    #[command(flatten)]
    pub paths: PathArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ServeArgs {
    /// Listen address.
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: SocketAddr,
}
