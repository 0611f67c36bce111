use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ddr5sc", version, about = "DDR5 single sub-channel analysis toolkit")]
pub struct Cli {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the result here instead of stdout; a manifest is written alongside.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Write the run manifest to this path.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decode or encode SPD byte 235.
    Spd {
        #[command(subcommand)]
        action: SpdAction,
    },
    /// Memory configuration arithmetic.
    Config {
        #[command(subcommand)]
        action: ConfigAction,
    },
    /// Roofline classification, deficit, inversion and iGPU headroom.
    Roofline {
        #[command(subcommand)]
        action: RooflineAction,
    },
    /// Simulate POST for one slot population.
    Post(PostArgs),
    /// POST outcome for every slot population on a platform.
    Matrix(MatrixArgs),
    /// Discrete-event queueing simulation of sub-channel contention.
    Simulate(SimulateArgs),
    /// Module bill-of-materials estimate.
    Bom(BomArgs),
    /// Regenerate the reference tables.
    Report(ReportArgs),
}

#[derive(Subcommand, Debug)]
pub enum SpdAction {
    /// Decode a byte literal (0x22, 0b00100010, 34) or an SPD image.
    Decode {
        #[arg(required_unless_present = "image", conflicts_with = "image")]
        byte: Option<String>,
        /// Raw SPD binary; byte 235 is decoded.
        #[arg(long)]
        image: Option<PathBuf>,
    },
    /// Encode a descriptor into byte 235.
    Encode {
        #[arg(long)]
        sub_channels: u8,
        /// Primary bus width in bits.
        #[arg(long)]
        width: u8,
        #[arg(long, default_value_t = 0)]
        ecc_bits: u8,
    },
}

#[derive(Subcommand, Debug)]
pub enum ConfigAction {
    /// Transaction width and bandwidth for each configuration.
    Compare {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override every configuration's bus efficiency.
        #[arg(long)]
        efficiency: Option<f64>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StandardArg {
    Ddr4,
    Ddr5,
}

/// Memory configuration flags; unset flags fall back to the config file.
#[derive(Args, Debug, Clone, Default)]
pub struct MemArgs {
    #[arg(long, value_enum)]
    pub standard: Option<StandardArg>,
    #[arg(long)]
    pub channels: Option<u32>,
    /// Populated sub-channels per channel (DDR5).
    #[arg(long)]
    pub sc: Option<u32>,
    #[arg(long)]
    pub mts: Option<u32>,
    #[arg(long)]
    pub bl: Option<u32>,
    #[arg(long)]
    pub efficiency: Option<f64>,
}

impl MemArgs {
    pub fn any(&self) -> bool {
        self.standard.is_some()
            || self.channels.is_some()
            || self.sc.is_some()
            || self.mts.is_some()
            || self.bl.is_some()
            || self.efficiency.is_some()
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct ComputeArgs {
    /// Peak compute P in FLOP/s.
    #[arg(long)]
    pub peak_flops: Option<f64>,
    /// Use peak rather than effective bandwidth.
    #[arg(long)]
    pub use_peak: bool,
}

#[derive(Subcommand, Debug)]
pub enum RooflineAction {
    /// Memory- vs compute-bound classification.
    Classify {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Arithmetic intensity in FLOP/byte; repeatable.
        #[arg(long)]
        intensity: Vec<f64>,
        #[command(flatten)]
        mem: MemArgs,
        #[command(flatten)]
        compute: ComputeArgs,
        /// Write (intensity, attainable) points as CSV.
        #[arg(long)]
        emit_plot_data: Option<PathBuf>,
    },
    /// Throughput deficit from dropping to one sub-channel.
    Deficit {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        intensity: Vec<f64>,
        #[command(flatten)]
        mem: MemArgs,
        #[command(flatten)]
        compute: ComputeArgs,
        /// Sub-channels per channel on the reduced platform.
        #[arg(long, default_value_t = 1)]
        reduced_sc: u32,
        /// Also report the tabulated range for this workload name.
        #[arg(long)]
        workload: Option<String>,
        #[arg(long)]
        emit_plot_data: Option<PathBuf>,
    },
    /// Does the nominally newer configuration sustain less bandwidth?
    Inversion {
        /// File whose `configs` holds exactly two entries.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Sustained bandwidth vs integrated-GPU demand.
    Igpu {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        mem: MemArgs,
        #[arg(long)]
        demand_low: Option<f64>,
        #[arg(long)]
        demand_high: Option<f64>,
    },
}

#[derive(Args, Debug)]
pub struct PostArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// intel-pre-arl, arrow-lake or am5.
    #[arg(long)]
    pub platform: Option<String>,
    /// SLOT=KIND pairs, KIND a module kind or an SPD byte 235 literal.
    #[arg(long, value_delimiter = ',')]
    pub slots: Vec<String>,
    /// Also report the active bus bandwidth at this data rate.
    #[arg(long)]
    pub mts: Option<u32>,
}

#[derive(Args, Debug)]
pub struct MatrixArgs {
    /// Platform, or `all`.
    #[arg(long, default_value = "all")]
    pub platform: String,
    /// Module kinds to combine; empty is always included.
    #[arg(long, value_delimiter = ',', default_values_t = ["single-sc".to_string(), "standard".to_string()])]
    pub kinds: Vec<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RoutingArg {
    RoundRobin,
    UniformRandom,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub sc: Option<u32>,
    #[arg(long)]
    pub mts: Option<u32>,
    #[arg(long)]
    pub bl: Option<u32>,
    /// Aggregate arrival rate, requests per ns.
    #[arg(long, conflicts_with = "rho")]
    pub lambda: Option<f64>,
    /// Per-queue utilization; with --compare, utilization of the single queue.
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub requests: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub routing: Option<RoutingArg>,
    /// Fixed first-access latency in ns.
    #[arg(long)]
    pub first_access: Option<f64>,
    /// Compare one and two sub-channels at equal aggregate load.
    #[arg(long)]
    pub compare: bool,
    /// Per-queue utilizations to sweep, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "compare")]
    pub sweep: Vec<f64>,
    /// Write a total-latency histogram as CSV.
    #[arg(long)]
    pub histogram: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub bin_ns: f64,
}

#[derive(Args, Debug)]
pub struct BomArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Data dies on the standard module; the single-SC module has half.
    #[arg(long)]
    pub dies: Option<u32>,
    #[arg(long)]
    pub price_low: Option<f64>,
    #[arg(long)]
    pub price_high: Option<f64>,
    /// 16gb or 32gb.
    #[arg(long)]
    pub generation: Option<String>,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Table number, 1 to 5.
    #[arg(long, conflicts_with = "all")]
    pub table: Option<u8>,
    #[arg(long)]
    pub all: bool,
}
