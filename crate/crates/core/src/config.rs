//! Transaction width and bandwidth arithmetic for DDR4/DDR5 populations.
//!
//! Bandwidths are decimal GB/s (10^9 bytes per second). A DDR5 sub-channel is
//! a 32-bit independently scheduled unit; DDR4 is one monolithic 64-bit unit
//! per channel with no sub-channel concept.

use crate::table::{fmt1, Table};
use serde::{Deserialize, Serialize};
use std::fmt;

/// x86 last-level cache line, in bytes.
pub const CACHE_LINE_BYTES: u32 = 64;

pub const DDR5_DEFAULT_EFFICIENCY: f64 = 0.85;
pub const DDR4_DEFAULT_EFFICIENCY: f64 = 0.80;

/// Documented DDR4 sustained-efficiency range. Only the 0.80 default is used
/// in calculations.
pub const DDR4_EFFICIENCY_RANGE: (f64, f64) = (0.70, 0.80);

pub const DDR5_SUBCHANNEL_BITS: u32 = 32;
pub const DDR4_CHANNEL_BITS: u32 = 64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("bus width {0} bits is not a positive multiple of 8")]
    InvalidWidth(u32),
    #[error("burst length must be positive")]
    InvalidBurstLength,
    #[error("invalid memory config{}: {reason}", label.as_ref().map(|l| format!(" '{l}'")).unwrap_or_default())]
    Invalid { label: Option<String>, reason: String },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Standard {
    #[serde(rename = "DDR4", alias = "ddr4")]
    Ddr4,
    #[serde(rename = "DDR5", alias = "ddr5")]
    Ddr5,
}

impl fmt::Display for Standard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ddr4 => "DDR4",
            Self::Ddr5 => "DDR5",
        })
    }
}

/// One DRAM population scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemoryConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub standard: Standard,
    pub dimm_count: u32,
    pub channels: u32,
    /// 1 or 2 on DDR5; always 1 on DDR4.
    pub populated_subchannels_per_channel: u32,
    /// 32 for a DDR5 sub-channel, 64 for a DDR4 channel.
    pub bus_bits_per_unit: u32,
    pub burst_length: u32,
    pub data_rate_mts: u32,
    /// Sustained fraction of peak; falls back to the standard's default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bus_efficiency: Option<f64>,
}

impl MemoryConfig {
    pub fn ddr4(channels: u32, data_rate_mts: u32) -> Self {
        Self {
            label: None,
            standard: Standard::Ddr4,
            dimm_count: channels,
            channels,
            populated_subchannels_per_channel: 1,
            bus_bits_per_unit: DDR4_CHANNEL_BITS,
            burst_length: 8,
            data_rate_mts,
            bus_efficiency: None,
        }
    }

    /// DDR5 at BL16 with one DIMM per channel.
    pub fn ddr5(channels: u32, subchannels_per_channel: u32, data_rate_mts: u32) -> Self {
        Self {
            label: None,
            standard: Standard::Ddr5,
            dimm_count: channels,
            channels,
            populated_subchannels_per_channel: subchannels_per_channel,
            bus_bits_per_unit: DDR5_SUBCHANNEL_BITS,
            burst_length: 16,
            data_rate_mts,
            bus_efficiency: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_efficiency(mut self, efficiency: f64) -> Self {
        self.bus_efficiency = Some(efficiency);
        self
    }

    pub fn with_burst_length(mut self, burst_length: u32) -> Self {
        self.burst_length = burst_length;
        self
    }

    pub fn with_dimms(mut self, dimm_count: u32) -> Self {
        self.dimm_count = dimm_count;
        self
    }

    pub fn label_or_default(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| format!("{}-{} {}-bit", self.standard, self.data_rate_mts, self.total_bus_bits()))
    }

    pub fn efficiency(&self) -> f64 {
        self.bus_efficiency.unwrap_or(match self.standard {
            Standard::Ddr4 => DDR4_DEFAULT_EFFICIENCY,
            Standard::Ddr5 => DDR5_DEFAULT_EFFICIENCY,
        })
    }

    pub fn total_bus_bits(&self) -> u32 {
        self.channels * self.populated_subchannels_per_channel * self.bus_bits_per_unit
    }

    fn invalid(&self, reason: impl Into<String>) -> ConfigError {
        ConfigError::Invalid { label: self.label.clone(), reason: reason.into() }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.dimm_count == 0 {
            return Err(self.invalid("dimm_count must be positive"));
        }
        if self.channels == 0 {
            return Err(self.invalid("channels must be positive"));
        }
        if self.data_rate_mts == 0 {
            return Err(self.invalid("data_rate_mts must be positive"));
        }
        let eff = self.efficiency();
        if !(eff > 0.0 && eff <= 1.0) {
            return Err(self.invalid(format!("bus_efficiency {eff} outside (0, 1]")));
        }
        match self.standard {
            Standard::Ddr4 => {
                if self.burst_length != 8 {
                    return Err(self.invalid("DDR4 requires burst_length 8"));
                }
                if self.bus_bits_per_unit != DDR4_CHANNEL_BITS {
                    return Err(self.invalid("DDR4 channels are 64-bit units"));
                }
                if self.populated_subchannels_per_channel != 1 {
                    return Err(self.invalid("DDR4 has no sub-channels; use 1 unit per channel"));
                }
            }
            Standard::Ddr5 => {
                if !matches!(self.burst_length, 16 | 32) {
                    return Err(self.invalid("DDR5 requires burst_length 16 or 32"));
                }
                if self.bus_bits_per_unit != DDR5_SUBCHANNEL_BITS {
                    return Err(self.invalid("DDR5 sub-channels are 32-bit units"));
                }
                if !matches!(self.populated_subchannels_per_channel, 1 | 2) {
                    return Err(self.invalid("DDR5 populates 1 or 2 sub-channels per channel"));
                }
            }
        }
        Ok(())
    }

    /// Bytes moved when every scheduled unit fires one burst together.
    pub fn transaction_width_bytes(&self) -> Result<u32, ConfigError> {
        transaction_width_bytes(self.total_bus_bits(), self.burst_length)
    }
}

pub fn transaction_width_bytes(bus_bits: u32, burst_length: u32) -> Result<u32, ConfigError> {
    if bus_bits == 0 || !bus_bits.is_multiple_of(8) {
        return Err(ConfigError::InvalidWidth(bus_bits));
    }
    if burst_length == 0 {
        return Err(ConfigError::InvalidBurstLength);
    }
    Ok(bus_bits / 8 * burst_length)
}

pub fn fills_cache_line(bus_bits: u32, burst_length: u32) -> Result<bool, ConfigError> {
    Ok(transaction_width_bytes(bus_bits, burst_length)? == CACHE_LINE_BYTES)
}

/// Peak bandwidth in decimal GB/s.
pub fn peak_bandwidth_gbs(config: &MemoryConfig) -> Result<f64, ConfigError> {
    config.validate()?;
    Ok(peak_for_bits(config.total_bus_bits(), config.data_rate_mts))
}

/// `bits/8 × MT/s` is integral MB/s; a single division keeps every
/// sub-channel multiple an exact multiple in floating point as well.
pub(crate) fn peak_for_bits(bus_bits: u32, data_rate_mts: u32) -> f64 {
    let mb_per_s = u64::from(bus_bits / 8) * u64::from(data_rate_mts);
    mb_per_s as f64 / 1000.0
}

pub fn effective_bandwidth_gbs(config: &MemoryConfig) -> Result<f64, ConfigError> {
    Ok(peak_bandwidth_gbs(config)? * config.efficiency())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DieOrganisation {
    X8,
}

impl DieOrganisation {
    pub fn dq_bits(self) -> u32 {
        match self {
            Self::X8 => 8,
        }
    }
}

/// Data dies behind one module.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DieSpec {
    pub die_density_gbit: u32,
    pub organisation: DieOrganisation,
    pub die_count: u32,
}

impl DieSpec {
    pub fn new(die_density_gbit: u32, die_count: u32) -> Self {
        Self { die_density_gbit, organisation: DieOrganisation::X8, die_count }
    }

    /// Single-rank ×8 population that exactly fills `subchannels` 32-bit
    /// sub-channels (4 dies per sub-channel).
    pub fn x8_single_rank(die_density_gbit: u32, subchannels: u32) -> Self {
        let per_sc = DDR5_SUBCHANNEL_BITS / DieOrganisation::X8.dq_bits();
        Self::new(die_density_gbit, per_sc * subchannels)
    }

    pub fn data_bits(&self) -> u32 {
        self.die_count * self.organisation.dq_bits()
    }
}

/// Minimum module capacity in GB (8 Gbit per GB).
pub fn min_capacity_gb(die: &DieSpec) -> f64 {
    f64::from(die.die_count * die.die_density_gbit) / 8.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub label: String,
    pub standard: Standard,
    pub dimm_count: u32,
    pub bus_bits: u32,
    pub burst_length: u32,
    pub tx_width_bytes: u32,
    pub data_rate_mts: u32,
    pub peak_gbs: f64,
    pub effective_gbs: f64,
}

impl ComparisonRow {
    /// Effective bandwidth rounded to the nearest whole GB/s.
    pub fn effective_rounded(&self) -> i64 {
        self.effective_gbs.round() as i64
    }

    pub fn speed_label(&self) -> String {
        format!("{}-{}", self.standard, self.data_rate_mts)
    }
}

/// Rows in the order given.
pub fn compare_configs(configs: &[MemoryConfig]) -> Result<Vec<ComparisonRow>, ConfigError> {
    configs
        .iter()
        .map(|c| {
            Ok(ComparisonRow {
                label: c.label_or_default(),
                standard: c.standard,
                dimm_count: c.dimm_count,
                bus_bits: c.total_bus_bits(),
                burst_length: c.burst_length,
                tx_width_bytes: c.transaction_width_bytes()?,
                data_rate_mts: c.data_rate_mts,
                peak_gbs: peak_bandwidth_gbs(c)?,
                effective_gbs: effective_bandwidth_gbs(c)?,
            })
        })
        .collect()
}

/// Generic comparison table for user-supplied scenarios.
pub fn comparison_table(rows: &[ComparisonRow]) -> Table {
    let mut t = Table::new(
        "Configuration comparison",
        &["Configuration", "Bus", "BL", "Tx Width", "Speed", "Peak (GB/s)", "Effective (GB/s)"],
    )
    .right(&[2, 3, 5, 6]);
    for r in rows {
        t.push(vec![
            r.label.clone(),
            format!("{}-bit", r.bus_bits),
            r.burst_length.to_string(),
            format!("{} B", r.tx_width_bytes),
            r.speed_label(),
            fmt1(r.peak_gbs),
            fmt1(r.effective_gbs),
        ]);
    }
    t
}

/// The six DDR4/DDR5 populations of the transaction-width comparison.
pub fn transaction_width_presets() -> Vec<MemoryConfig> {
    vec![
        MemoryConfig::ddr4(1, 3200).with_label("1 DIMM, 1 channel"),
        MemoryConfig::ddr4(2, 3200).with_label("2 DIMM, 2 channel (dual)"),
        MemoryConfig::ddr5(1, 2, 5600).with_label("1 DIMM, 1ch, dual SC (std.)"),
        MemoryConfig::ddr5(2, 2, 5600).with_label("2 DIMM, 2ch, dual SC (std.)"),
        MemoryConfig::ddr5(1, 1, 5600).with_label("1 DIMM, 1ch, single SC"),
        MemoryConfig::ddr5(2, 1, 5600).with_label("2 DIMM, 2ch, single SC"),
    ]
}

/// Dual-SC vs single-SC DDR5 at 4800/5600/6400 plus the DDR4-3200 reference.
pub fn bandwidth_presets() -> Vec<MemoryConfig> {
    let mut v = Vec::new();
    for mts in [4800, 5600, 6400] {
        v.push(MemoryConfig::ddr5(1, 2, mts).with_label("Dual SC (std.)"));
    }
    for mts in [4800, 5600, 6400] {
        v.push(MemoryConfig::ddr5(1, 1, mts).with_label("Single SC"));
    }
    v.push(MemoryConfig::ddr4(1, 3200).with_label("DDR4-3200 (reference)"));
    v
}

pub fn transaction_width_table(rows: &[ComparisonRow]) -> Table {
    let mut t = Table::new(
        "Table 1. Transaction width and peak bandwidth across DDR4 and DDR5 configurations",
        &["Standard", "Configuration", "DIMMs", "Bus", "BL", "Tx Width", "Speed", "BW (GB/s)"],
    )
    .right(&[2, 4, 5, 7]);
    for r in rows {
        t.push(vec![
            r.standard.to_string(),
            r.label.clone(),
            r.dimm_count.to_string(),
            format!("{}-bit", r.bus_bits),
            r.burst_length.to_string(),
            format!("{} B", r.tx_width_bytes),
            r.speed_label(),
            fmt1(r.peak_gbs),
        ]);
    }
    t.note("Tx Width = (bus_bits/8) x BL. BW = (bus_bits/8) x MT/s.");
    t.note("x86 cache line = 64 bytes.");
    t
}

pub fn bandwidth_table(rows: &[ComparisonRow]) -> Table {
    let mut t = Table::new(
        "Table 2. Peak and effective bandwidth: dual-SC vs single-SC DDR5",
        &["Configuration", "Speed", "Bus", "Peak (GB/s)", "Effective (GB/s)"],
    )
    .right(&[3, 4]);
    for r in rows {
        t.push(vec![
            r.label.clone(),
            r.speed_label(),
            format!("{}-bit", r.bus_bits),
            fmt1(r.peak_gbs),
            format!("~{}", r.effective_rounded()),
        ]);
    }
    t.note(format!(
        "Effective = peak x {:.2} (DDR5) or peak x {:.2} (DDR4), rounded to whole GB/s.",
        DDR5_DEFAULT_EFFICIENCY, DDR4_DEFAULT_EFFICIENCY
    ));
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transaction_widths() {
        assert_eq!(transaction_width_bytes(32, 16), Ok(64));
        assert_eq!(transaction_width_bytes(64, 8), Ok(64));
        assert_eq!(transaction_width_bytes(32, 32), Ok(128));
        assert_eq!(transaction_width_bytes(64, 16), Ok(128));
        assert_eq!(transaction_width_bytes(12, 16), Err(ConfigError::InvalidWidth(12)));
        assert_eq!(transaction_width_bytes(0, 16), Err(ConfigError::InvalidWidth(0)));
        assert_eq!(transaction_width_bytes(32, 0), Err(ConfigError::InvalidBurstLength));
    }

    #[test]
    fn cache_line_fill() {
        assert_eq!(fills_cache_line(32, 16), Ok(true));
        assert_eq!(fills_cache_line(32, 8), Ok(false));
        assert_eq!(fills_cache_line(64, 8), Ok(true));
        assert!(fills_cache_line(7, 8).is_err());
    }

    #[test]
    fn peak_bandwidths() {
        assert_eq!(peak_bandwidth_gbs(&MemoryConfig::ddr5(1, 1, 5600)).unwrap(), 22.4);
        assert_eq!(peak_bandwidth_gbs(&MemoryConfig::ddr5(2, 2, 5600)).unwrap(), 89.6);
        assert_eq!(peak_bandwidth_gbs(&MemoryConfig::ddr4(1, 3200)).unwrap(), 25.6);
        assert_eq!(peak_bandwidth_gbs(&MemoryConfig::ddr5(1, 1, 4800)).unwrap(), 19.2);
    }

    #[test]
    fn effective_bandwidths() {
        let sc = effective_bandwidth_gbs(&MemoryConfig::ddr5(1, 1, 5600)).unwrap();
        assert!((sc - 19.04).abs() < 1e-12);
        assert_eq!(sc.round(), 19.0);
        let d4 = effective_bandwidth_gbs(&MemoryConfig::ddr4(1, 3200)).unwrap();
        assert!((d4 - 20.48).abs() < 1e-12);
        let unity = MemoryConfig::ddr5(1, 1, 5600).with_efficiency(1.0);
        assert_eq!(effective_bandwidth_gbs(&unity).unwrap(), peak_bandwidth_gbs(&unity).unwrap());
    }

    #[test]
    fn validation_rejects_mixed_generations() {
        let mut c = MemoryConfig::ddr4(1, 3200);
        c.burst_length = 16;
        assert!(matches!(peak_bandwidth_gbs(&c), Err(ConfigError::Invalid { .. })));
        let mut c = MemoryConfig::ddr5(1, 3, 5600);
        assert!(c.validate().is_err());
        c.populated_subchannels_per_channel = 2;
        c.bus_bits_per_unit = 64;
        assert!(c.validate().is_err());
        assert!(MemoryConfig::ddr5(1, 1, 5600).with_efficiency(1.2).validate().is_err());
        assert!(MemoryConfig::ddr5(1, 1, 5600).with_efficiency(0.0).validate().is_err());
        assert!(MemoryConfig::ddr5(0, 1, 5600).validate().is_err());
        assert!(MemoryConfig::ddr5(1, 1, 5600).with_burst_length(32).validate().is_ok());
    }

    #[test]
    fn capacities() {
        assert_eq!(min_capacity_gb(&DieSpec::new(16, 4)), 8.0);
        assert_eq!(min_capacity_gb(&DieSpec::new(16, 8)), 16.0);
        assert_eq!(min_capacity_gb(&DieSpec::new(32, 2)), 8.0);
        let sc = DieSpec::x8_single_rank(16, 1);
        assert_eq!(sc.die_count, 4);
        assert_eq!(sc.data_bits(), 32);
    }

    #[test]
    fn preset_tables() {
        let rows = compare_configs(&transaction_width_presets()).unwrap();
        let tx: Vec<u32> = rows.iter().map(|r| r.tx_width_bytes).collect();
        assert_eq!(tx, [64, 128, 128, 256, 64, 128]);
        let rows = compare_configs(&bandwidth_presets()).unwrap();
        let peaks: Vec<f64> = rows.iter().map(|r| r.peak_gbs).collect();
        assert_eq!(peaks, [38.4, 44.8, 51.2, 19.2, 22.4, 25.6, 25.6]);
    }

    #[test]
    fn single_row_comparison() {
        let rows = compare_configs(&[MemoryConfig::ddr5(1, 1, 5600)]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(comparison_table(&rows).rows.len(), 1);
        assert_eq!(rows[0].label, "DDR5-5600 32-bit");
    }

    #[test]
    fn json_schema_roundtrip() {
        let json = r#"[{"label":"x","standard":"DDR5","dimm_count":1,"channels":1,
            "populated_subchannels_per_channel":1,"bus_bits_per_unit":32,
            "burst_length":16,"data_rate_mts":5600}]"#;
        let v: Vec<MemoryConfig> = serde_json::from_str(json).unwrap();
        assert_eq!(v[0], MemoryConfig::ddr5(1, 1, 5600).with_label("x"));
    }
}
