//! Config files, input literals and the error-to-exit-code mapping.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use ddr5sc::config::MemoryConfig;
use ddr5sc::roofline::WorkloadProfile;
use serde::{Deserialize, Serialize};

pub const EXIT_IO: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_BOOT_FAILURE: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn io(error: impl Into<anyhow::Error>) -> Self {
        Self { code: EXIT_IO, error: error.into() }
    }

    pub fn invalid(error: impl Into<anyhow::Error>) -> Self {
        Self { code: EXIT_INVALID, error: error.into() }
    }

    pub fn invalid_msg(msg: impl fmt::Display) -> Self {
        Self::invalid(anyhow::anyhow!("{msg}"))
    }
}

pub type CmdResult<T> = Result<T, Failure>;

pub trait OrFail<T> {
    fn or_invalid(self) -> CmdResult<T>;
}

impl<T, E: std::error::Error + Send + Sync + 'static> OrFail<T> for Result<T, E> {
    fn or_invalid(self) -> CmdResult<T> {
        self.map_err(Failure::invalid)
    }
}

/// Shared config file. Every section is optional; command-line flags win.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub memory: Option<MemoryConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub configs: Vec<MemoryConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roofline: Option<RooflineSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub workloads: Vec<WorkloadProfile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub igpu_demand_gbs: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub population: Option<PopulationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bom: Option<BomSection>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RooflineSection {
    pub peak_compute_flops: Option<f64>,
    pub basis: Option<ddr5sc::roofline::BandwidthBasis>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationSection {
    pub platform: Option<String>,
    #[serde(default)]
    pub slots: BTreeMap<String, String>,
    pub data_rate_mts: Option<u32>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub subchannel_count: Option<u32>,
    pub data_rate_mts: Option<u32>,
    pub burst_length: Option<u32>,
    pub first_access_latency_ns: Option<f64>,
    pub arrival_rate_per_ns: Option<f64>,
    pub utilization: Option<f64>,
    pub routing: Option<ddr5sc::queue::Routing>,
    pub duration_requests: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BomSection {
    pub generation: Option<String>,
    pub dies: Option<u32>,
    pub price_low: Option<f64>,
    pub price_high: Option<f64>,
}

/// A file read as input, tracked for the run manifest.
#[derive(Clone, Debug)]
pub struct InputFile {
    pub path: PathBuf,
    pub bytes: Vec<u8>,
}

pub fn read_input(path: &Path) -> CmdResult<InputFile> {
    let bytes = std::fs::read(path).map_err(|e| Failure::io(anyhow::anyhow!("cannot read {}: {e}", path.display())))?;
    Ok(InputFile { path: path.to_path_buf(), bytes })
}

/// Loads the optional config file; absent path yields the empty config.
pub fn load_config(path: Option<&Path>, inputs: &mut Vec<InputFile>) -> CmdResult<FileConfig> {
    let Some(path) = path else { return Ok(FileConfig::default()) };
    let file = read_input(path)?;
    let cfg = serde_json::from_slice(&file.bytes)
        .map_err(|e| Failure::io(anyhow::anyhow!("invalid config {}: {e}", path.display())))?;
    inputs.push(file);
    Ok(cfg)
}

/// Parses `0x22`, `0b00100010`, `0o42` or decimal `34` as one byte.
pub fn parse_byte(s: &str) -> CmdResult<u8> {
    let t = s.trim().replace('_', "");
    let lower = t.to_ascii_lowercase();
    let parsed = if let Some(h) = lower.strip_prefix("0x") {
        u8::from_str_radix(h, 16)
    } else if let Some(b) = lower.strip_prefix("0b") {
        u8::from_str_radix(b, 2)
    } else if let Some(o) = lower.strip_prefix("0o") {
        u8::from_str_radix(o, 8)
    } else {
        lower.parse::<u8>()
    };
    parsed.map_err(|_| Failure::invalid_msg(format!("not a byte literal: {s}")))
}

pub fn looks_like_byte(s: &str) -> bool {
    s.trim().chars().next().is_some_and(|c| c.is_ascii_digit())
}
