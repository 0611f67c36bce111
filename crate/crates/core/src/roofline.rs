//! Roofline classification, bandwidth-deficit estimation, bandwidth
//! inversion and iGPU headroom.
//!
//! Two independent paths live here. The analytic path takes an arithmetic
//! intensity and evaluates `min(P, I·B)`. The tabulated path returns the
//! published per-workload deficit ranges verbatim; those ranges were
//! calibrated against benchmarks and are not recomputed from intensities.

use crate::config::{effective_bandwidth_gbs, peak_bandwidth_gbs, ConfigError, MemoryConfig};
use crate::interval::Interval;
use crate::table::{fmt1, Table};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RooflineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("unknown workload '{0}'")]
    UnknownWorkload(String),
    #[error("arithmetic intensity must be finite and non-negative, got {0}")]
    InvalidIntensity(f64),
    #[error("peak compute must be positive, got {0}")]
    InvalidCompute(f64),
    #[error("memory bandwidth must be positive, got {0}")]
    InvalidBandwidth(f64),
    #[error("deficit comparison needs platforms with identical peak compute ({0} vs {1})")]
    PlatformMismatch(f64, f64),
    #[error("demand interval must have low < high")]
    DegenerateDemand,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BandwidthBasis {
    #[default]
    Effective,
    Peak,
}

/// Roofline for a single machine: peak compute `P` in FLOP/s and memory
/// bandwidth `B` in byte/s.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Roofline {
    peak_flops: f64,
    bandwidth_bps: f64,
}

impl Roofline {
    pub fn new(peak_flops: f64, bandwidth_bps: f64) -> Result<Self, RooflineError> {
        if !(peak_flops.is_finite() && peak_flops > 0.0) {
            return Err(RooflineError::InvalidCompute(peak_flops));
        }
        if !(bandwidth_bps.is_finite() && bandwidth_bps > 0.0) {
            return Err(RooflineError::InvalidBandwidth(bandwidth_bps));
        }
        Ok(Self { peak_flops, bandwidth_bps })
    }

    pub fn peak_flops(&self) -> f64 {
        self.peak_flops
    }

    pub fn bandwidth_bps(&self) -> f64 {
        self.bandwidth_bps
    }

    /// Same compute roof, bandwidth scaled by `factor`.
    pub fn with_bandwidth_scaled(&self, factor: f64) -> Result<Self, RooflineError> {
        Self::new(self.peak_flops, self.bandwidth_bps * factor)
    }

    /// Intensity `P/B` at which the two roofs meet.
    pub fn crossover_intensity(&self) -> f64 {
        self.peak_flops / self.bandwidth_bps
    }

    /// `I < P/B`. The boundary itself counts as compute-bound.
    pub fn is_bandwidth_limited(&self, intensity: f64) -> Result<bool, RooflineError> {
        check_intensity(intensity)?;
        Ok(intensity < self.crossover_intensity())
    }

    pub fn attainable(&self, intensity: f64) -> Result<f64, RooflineError> {
        check_intensity(intensity)?;
        Ok(self.peak_flops.min(intensity * self.bandwidth_bps))
    }
}

fn check_intensity(intensity: f64) -> Result<(), RooflineError> {
    if intensity.is_finite() && intensity >= 0.0 {
        Ok(())
    } else {
        Err(RooflineError::InvalidIntensity(intensity))
    }
}

/// Fractional throughput lost moving a workload from `full` to `reduced`.
///
/// At zero intensity both attainable values vanish; the limit from above is
/// the bandwidth reduction itself, which is what gets returned.
pub fn roofline_deficit(intensity: f64, full: &Roofline, reduced: &Roofline) -> Result<f64, RooflineError> {
    if full.peak_flops != reduced.peak_flops {
        return Err(RooflineError::PlatformMismatch(full.peak_flops, reduced.peak_flops));
    }
    let a_full = full.attainable(intensity)?;
    let a_reduced = reduced.attainable(intensity)?;
    if a_full == 0.0 {
        return Ok((1.0 - reduced.bandwidth_bps / full.bandwidth_bps).max(0.0));
    }
    Ok(1.0 - a_reduced / a_full)
}

/// Peak compute plus the memory system that feeds it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComputePlatform {
    pub peak_compute_flops: f64,
    pub memory: MemoryConfig,
    #[serde(default)]
    pub basis: BandwidthBasis,
}

impl ComputePlatform {
    pub fn new(peak_compute_flops: f64, memory: MemoryConfig) -> Self {
        Self { peak_compute_flops, memory, basis: BandwidthBasis::Effective }
    }

    pub fn with_basis(mut self, basis: BandwidthBasis) -> Self {
        self.basis = basis;
        self
    }

    pub fn bandwidth_gbs(&self) -> Result<f64, RooflineError> {
        Ok(match self.basis {
            BandwidthBasis::Effective => effective_bandwidth_gbs(&self.memory)?,
            BandwidthBasis::Peak => peak_bandwidth_gbs(&self.memory)?,
        })
    }

    pub fn roofline(&self) -> Result<Roofline, RooflineError> {
        Roofline::new(self.peak_compute_flops, self.bandwidth_gbs()? * 1e9)
    }
}

pub fn is_bandwidth_limited(intensity: f64, platform: &ComputePlatform) -> Result<bool, RooflineError> {
    platform.roofline()?.is_bandwidth_limited(intensity)
}

pub fn attainable_throughput(intensity: f64, platform: &ComputePlatform) -> Result<f64, RooflineError> {
    platform.roofline()?.attainable(intensity)
}

pub fn platform_deficit(
    intensity: f64,
    full: &ComputePlatform,
    reduced: &ComputePlatform,
) -> Result<f64, RooflineError> {
    roofline_deficit(intensity, &full.roofline()?, &reduced.roofline()?)
}

/// `(intensity, attainable)` points on a log-spaced intensity grid.
pub fn plot_series(
    roofline: &Roofline,
    min_intensity: f64,
    max_intensity: f64,
    points: usize,
) -> Result<Vec<(f64, f64)>, RooflineError> {
    check_intensity(min_intensity)?;
    check_intensity(max_intensity)?;
    if min_intensity <= 0.0 || max_intensity < min_intensity || points < 2 {
        return Err(RooflineError::InvalidIntensity(min_intensity));
    }
    let (lo, hi) = (min_intensity.log10(), max_intensity.log10());
    (0..points)
        .map(|k| {
            let i = 10f64.powf(lo + (hi - lo) * k as f64 / (points - 1) as f64);
            Ok((i, roofline.attainable(i)?))
        })
        .collect()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BwSensitivity {
    VeryLow,
    Low,
    LowMedium,
    Medium,
    High,
}

impl BwSensitivity {
    pub fn label(self) -> &'static str {
        match self {
            Self::VeryLow => "Very Low",
            Self::Low => "Low",
            Self::LowMedium => "Low-Med",
            Self::Medium => "Medium",
            Self::High => "High",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorkloadProfile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arithmetic_intensity: Option<f64>,
    pub bw_sensitivity: BwSensitivity,
    /// Percent, within [0, 100].
    pub deficit_range: Interval,
}

impl WorkloadProfile {
    pub fn validate(&self) -> Result<(), RooflineError> {
        let ok = self.deficit_range.low >= 0.0
            && self.deficit_range.high <= 100.0
            && self.deficit_range.low <= self.deficit_range.high;
        if !ok {
            return Err(RooflineError::InvalidIntensity(self.deficit_range.low));
        }
        if let Some(i) = self.arithmetic_intensity {
            check_intensity(i)?;
        }
        Ok(())
    }
}

/// One row of the published workload-impact table.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TabulatedWorkload {
    pub name: &'static str,
    pub sensitivity: BwSensitivity,
    pub deficit: Interval,
    /// Deficit as printed in the source table.
    pub deficit_text: &'static str,
    pub footnote: bool,
}

impl TabulatedWorkload {
    pub fn profile(&self) -> WorkloadProfile {
        WorkloadProfile {
            name: self.name.to_string(),
            arithmetic_intensity: None,
            bw_sensitivity: self.sensitivity,
            deficit_range: self.deficit,
        }
    }
}

const fn row(
    name: &'static str,
    sensitivity: BwSensitivity,
    low: f64,
    high: f64,
    deficit_text: &'static str,
) -> TabulatedWorkload {
    TabulatedWorkload { name, sensitivity, deficit: Interval::new(low, high), deficit_text, footnote: false }
}

/// Deficit vs standard dual-SC DDR5-5600, as published. Provenance:
/// roofline projections calibrated against DDR4-vs-DDR5 benchmark deltas.
pub const WORKLOAD_TABLE: [TabulatedWorkload; 10] = {
    use BwSensitivity::*;
    let mut cpu_gaming = row("Gaming, CPU-bound", Medium, 15.0, 35.0, "15-35%");
    cpu_gaming.footnote = true;
    [
        row("Web / office / productivity", Low, 2.0, 8.0, "2-8%"),
        row("Gaming, GPU-bound", Low, 5.0, 12.0, "5-12%"),
        cpu_gaming,
        row("Software development", LowMedium, 8.0, 15.0, "8-15%"),
        row("Video playback", Low, 2.0, 5.0, "2-5%"),
        row("Video transcoding (x264/x265)", High, 30.0, 50.0, "30-50%"),
        row("iGPU, 1080p+", High, 35.0, 55.0, "35-55%"),
        row("CPU AI / LLM serving", High, 40.0, 60.0, "40-60%"),
        row("Scientific simulation (HPC)", High, 40.0, 60.0, "40-60%"),
        row("POS / kiosk / embedded", VeryLow, 0.0, 3.0, "<3%"),
    ]
};

pub fn table3_lookup(name: &str) -> Result<Interval, RooflineError> {
    let wanted = name.trim().trim_end_matches('†').trim();
    WORKLOAD_TABLE
        .iter()
        .find(|w| w.name.eq_ignore_ascii_case(wanted))
        .map(|w| w.deficit)
        .ok_or_else(|| RooflineError::UnknownWorkload(name.to_string()))
}

pub fn workload_table() -> Table {
    let mut t = Table::new(
        "Table 3. Performance impact by workload vs standard DDR5-5600",
        &["Workload", "BW Sens.", "Deficit"],
    );
    for w in &WORKLOAD_TABLE {
        let name = if w.footnote { format!("{}*", w.name) } else { w.name.to_string() };
        t.push(vec![name, w.sensitivity.label().to_string(), w.deficit_text.to_string()]);
    }
    t.note("* High-fps titles (>240 fps); CPU-side pressure dominant.");
    t.note("Source: tabulated ranges (roofline projections calibrated against benchmark deltas).");
    t
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InversionReport {
    pub newer_label: String,
    pub baseline_label: String,
    pub newer_peak_gbs: f64,
    pub baseline_peak_gbs: f64,
    pub newer_effective_gbs: f64,
    pub baseline_effective_gbs: f64,
    pub inversion: bool,
}

/// Ordering key for "nominally newer/faster": generation first, then rate.
fn nominal_rank(c: &MemoryConfig) -> (crate::config::Standard, u32) {
    (c.standard, c.data_rate_mts)
}

/// Does the nominally newer of the two configs sustain less bandwidth?
pub fn detect_inversion(a: &MemoryConfig, b: &MemoryConfig) -> Result<InversionReport, RooflineError> {
    let (newer, base) = if nominal_rank(a) >= nominal_rank(b) { (a, b) } else { (b, a) };
    let newer_eff = effective_bandwidth_gbs(newer)?;
    let base_eff = effective_bandwidth_gbs(base)?;
    let same_nominal = nominal_rank(a) == nominal_rank(b);
    Ok(InversionReport {
        newer_label: newer.label_or_default(),
        baseline_label: base.label_or_default(),
        newer_peak_gbs: peak_bandwidth_gbs(newer)?,
        baseline_peak_gbs: peak_bandwidth_gbs(base)?,
        newer_effective_gbs: newer_eff,
        baseline_effective_gbs: base_eff,
        inversion: !same_nominal && newer_eff < base_eff,
    })
}

impl InversionReport {
    pub fn table(&self) -> Table {
        let mut t =
            Table::new("Bandwidth inversion check", &["Role", "Configuration", "Peak (GB/s)", "Effective (GB/s)"])
                .right(&[2, 3]);
        t.push(vec![
            "newer".into(),
            self.newer_label.clone(),
            fmt1(self.newer_peak_gbs),
            format!("{:.2}", self.newer_effective_gbs),
        ]);
        t.push(vec![
            "baseline".into(),
            self.baseline_label.clone(),
            fmt1(self.baseline_peak_gbs),
            format!("{:.2}", self.baseline_effective_gbs),
        ]);
        t.note(format!("inversion = {}", self.inversion));
        t
    }
}

/// Default 1080p iGPU demand, GB/s.
pub const IGPU_1080P_DEMAND_GBS: Interval = Interval::new(18.0, 22.0);

/// Fraction of the demand span above `demand.high` that still counts as
/// marginal rather than sufficient. The published analysis only gives a
/// qualitative verdict, so this band is a modeling choice.
pub const MARGINAL_BAND_FRACTION: f64 = 0.25;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MarginVerdict {
    Insufficient,
    Marginal,
    Sufficient,
}

impl MarginVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Insufficient => "insufficient",
            Self::Marginal => "marginal",
            Self::Sufficient => "sufficient",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginReport {
    pub label: String,
    pub sustained_gbs: f64,
    pub demand_gbs: Interval,
    pub headroom_low_gbs: f64,
    pub headroom_high_gbs: f64,
    pub verdict: MarginVerdict,
}

pub fn margin_verdict(sustained: f64, demand: &Interval) -> MarginVerdict {
    let marginal_top = demand.high + MARGINAL_BAND_FRACTION * demand.span();
    if sustained <= demand.high {
        MarginVerdict::Insufficient
    } else if sustained < marginal_top {
        MarginVerdict::Marginal
    } else {
        MarginVerdict::Sufficient
    }
}

pub fn igpu_margin(config: &MemoryConfig, demand: &Interval) -> Result<MarginReport, RooflineError> {
    if demand.low >= demand.high || demand.low.is_nan() || demand.high.is_nan() {
        return Err(RooflineError::DegenerateDemand);
    }
    let sustained = effective_bandwidth_gbs(config)?;
    Ok(MarginReport {
        label: config.label_or_default(),
        sustained_gbs: sustained,
        demand_gbs: *demand,
        headroom_low_gbs: sustained - demand.high,
        headroom_high_gbs: sustained - demand.low,
        verdict: margin_verdict(sustained, demand),
    })
}
