//! Module bill-of-materials decomposition and die-density scaling.
//!
//! All quantities are `[low, high]` intervals combined by endpoint
//! arithmetic.

use crate::config::{min_capacity_gb, DieSpec};
use crate::interval::Interval;
use crate::table::Table;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BomError {
    #[error("die counts must satisfy n_std >= n_sc > 0 (got n_std={n_std}, n_sc={n_sc})")]
    InvalidCounts { n_std: u32, n_sc: u32 },
    #[error("die count must be positive")]
    NoDies,
    #[error("die price bounds must be non-negative with low <= high")]
    InvalidPricing,
    #[error("overhead fraction must lie in [0, 1)")]
    InvalidOverhead,
    #[error("unknown die generation '{0}' (expected 16Gb or 32Gb)")]
    UnknownGeneration(String),
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub enum Saving {
    Approx(Interval),
    /// Shown as "negligible", counted as exactly zero.
    Negligible,
}

impl Saving {
    pub fn fraction(&self) -> Interval {
        match self {
            Self::Approx(i) => i.scale(0.01),
            Self::Negligible => Interval::point(0.0),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct BomComponent {
    pub name: &'static str,
    /// Percent of the standard module BOM.
    pub share_pct: Interval,
    pub share_text: &'static str,
    pub saving: Saving,
    pub saving_text: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BomBreakdown {
    pub components: Vec<BomComponent>,
    /// Published total saving, percent.
    pub total_saving_pct: Interval,
    pub total_saving_text: &'static str,
}

const fn component(
    name: &'static str,
    share: (f64, f64),
    share_text: &'static str,
    saving: Saving,
    saving_text: &'static str,
) -> BomComponent {
    BomComponent { name, share_pct: Interval::new(share.0, share.1), share_text, saving, saving_text }
}

impl BomBreakdown {
    /// Single-SC vs standard DDR5, by component.
    pub fn published() -> Self {
        Self {
            components: vec![
                component("DRAM dies", (60.0, 70.0), "60-70%", Saving::Approx(Interval::point(50.0)), "~50%"),
                component(
                    "PCB (substrate + layers)",
                    (15.0, 20.0),
                    "15-20%",
                    Saving::Approx(Interval::new(30.0, 40.0)),
                    "~30-40%",
                ),
                component("PMIC", (5.0, 10.0), "5-10%", Saving::Negligible, "negligible"),
                component("Passives + assembly", (5.0, 10.0), "5-10%", Saving::Approx(Interval::point(20.0)), "~20%"),
            ],
            total_saving_pct: Interval::new(35.0, 45.0),
            total_saving_text: "~35-45%",
        }
    }

    pub fn component(&self, name: &str) -> Option<&BomComponent> {
        self.components.iter().find(|c| c.name == name)
    }

    /// Sum of component share midpoints, percent. Not exactly 100.
    pub fn midpoint_share_sum(&self) -> f64 {
        self.components.iter().map(|c| c.share_pct.midpoint()).sum()
    }

    /// Share-weighted sum of component savings, as a fraction of the
    /// standard BOM.
    pub fn weighted_saving(&self) -> Interval {
        self.components
            .iter()
            .map(|c| c.share_pct.scale(0.01).mul_nonneg(&c.saving.fraction()))
            .fold(Interval::point(0.0), |acc, x| acc.add(&x))
    }

    /// Die share of the standard BOM: low end from the midpoints normalized to
    /// 100%, high end from the tabulated upper bound.
    pub fn die_share(&self) -> Interval {
        let dies = self.component("DRAM dies").expect("dies row").share_pct;
        let normalized = dies.midpoint() / self.midpoint_share_sum();
        Interval::new(normalized.min(dies.high / 100.0), dies.high / 100.0)
    }

    /// Non-die fraction of the standard BOM (`1 − die_share`).
    pub fn overhead_fraction(&self) -> Interval {
        let s = self.die_share();
        Interval::new(1.0 - s.high, 1.0 - s.low)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(
            "Table 5. BOM reduction by component (single SC vs standard DDR5)",
            &["Component", "% of std. BOM", "Single-SC saving"],
        );
        for c in &self.components {
            t.push(vec![c.name.into(), c.share_text.into(), c.saving_text.into()]);
        }
        t.push(vec!["Total module BOM".into(), "100%".into(), self.total_saving_text.into()]);
        let w = self.weighted_saving().scale(100.0);
        t.note(format!("Share-weighted component saving: {:.1}-{:.1}%", w.low, w.high));
        t
    }
}

pub fn render_bom_table() -> Table {
    BomBreakdown::published().table()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiePricing {
    pub price_per_die_usd: Interval,
    pub generation_label: String,
}

impl Default for DiePricing {
    fn default() -> Self {
        Self { price_per_die_usd: Interval::new(3.50, 4.50), generation_label: "DDR5-5600 16Gbit x8".to_string() }
    }
}

impl DiePricing {
    pub fn new(low: f64, high: f64, label: impl Into<String>) -> Result<Self, BomError> {
        let price = Interval::try_new(low, high)
            .filter(|p| p.low >= 0.0 && p.high.is_finite())
            .ok_or(BomError::InvalidPricing)?;
        Ok(Self { price_per_die_usd: price, generation_label: label.into() })
    }
}

/// Module BOM in USD: die cost divided by the die share `1 − overhead`.
pub fn module_bom_usd(
    die_count: u32,
    pricing: &DiePricing,
    overhead_fraction: &Interval,
) -> Result<Interval, BomError> {
    if die_count == 0 {
        return Err(BomError::NoDies);
    }
    if !(overhead_fraction.low >= 0.0 && overhead_fraction.high < 1.0) {
        return Err(BomError::InvalidOverhead);
    }
    let die_cost = pricing.price_per_die_usd.scale(f64::from(die_count));
    let die_share = Interval::new(1.0 - overhead_fraction.high, 1.0 - overhead_fraction.low);
    Ok(die_cost.div_positive(&die_share))
}

/// Relative die-count advantage `(n_std − n_sc) / n_std`.
pub fn bom_ratio(n_std: u32, n_sc: u32) -> Result<f64, BomError> {
    if n_sc == 0 || n_sc > n_std {
        return Err(BomError::InvalidCounts { n_std, n_sc });
    }
    Ok(f64::from(n_std - n_sc) / f64::from(n_std))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DieGeneration {
    Gb16,
    Gb32,
}

impl DieGeneration {
    pub fn density_gbit(self) -> u32 {
        match self {
            Self::Gb16 => 16,
            Self::Gb32 => 32,
        }
    }

    /// Data dies of a standard 16 GB and a single-SC 8 GB module.
    pub fn die_counts(self) -> (u32, u32) {
        match self {
            Self::Gb16 => (8, 4),
            Self::Gb32 => (4, 2),
        }
    }
}

impl fmt::Display for DieGeneration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}Gb", self.density_gbit())
    }
}

impl FromStr for DieGeneration {
    type Err = BomError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "16gb" | "16" | "16gbit" => Ok(Self::Gb16),
            "32gb" | "32" | "32gbit" => Ok(Self::Gb32),
            _ => Err(BomError::UnknownGeneration(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModuleCost {
    pub label: String,
    pub die_count: u32,
    pub capacity_gb: f64,
    pub bom_usd: Interval,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BomReport {
    pub generation: DieGeneration,
    pub pricing: DiePricing,
    pub overhead_fraction: Interval,
    pub standard: ModuleCost,
    pub single_sc: ModuleCost,
    pub die_ratio: f64,
    pub die_differential: u32,
}

/// Standard vs single-SC module costs for a die generation. `dies`, when
/// given, overrides the standard module's die count (the single-SC module
/// keeps half).
pub fn bom_report(generation: DieGeneration, pricing: &DiePricing, dies: Option<u32>) -> Result<BomReport, BomError> {
    let (n_std, n_sc) = match dies {
        Some(n) if n < 2 || n % 2 != 0 => return Err(BomError::InvalidCounts { n_std: n, n_sc: n / 2 }),
        Some(n) => (n, n / 2),
        None => generation.die_counts(),
    };
    let overhead = BomBreakdown::published().overhead_fraction();
    let density = generation.density_gbit();
    let module = |label: &str, n: u32| -> Result<ModuleCost, BomError> {
        Ok(ModuleCost {
            label: label.to_string(),
            die_count: n,
            capacity_gb: min_capacity_gb(&DieSpec::new(density, n)),
            bom_usd: module_bom_usd(n, pricing, &overhead)?,
        })
    };
    Ok(BomReport {
        generation,
        pricing: pricing.clone(),
        overhead_fraction: overhead,
        standard: module("Standard (dual SC)", n_std)?,
        single_sc: module("Single SC", n_sc)?,
        die_ratio: bom_ratio(n_std, n_sc)?,
        die_differential: n_std - n_sc,
    })
}

impl BomReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(
            format!("Module BOM estimate ({} dies, {})", self.generation, self.pricing.generation_label),
            &["Module", "Data dies", "Capacity (GB)", "BOM (USD)"],
        )
        .right(&[1, 2]);
        for m in [&self.standard, &self.single_sc] {
            t.push(vec![
                m.label.clone(),
                m.die_count.to_string(),
                format!("{:.0}", m.capacity_gb),
                format!("{:.2}-{:.2}", m.bom_usd.low, m.bom_usd.high),
            ]);
        }
        let p = self.pricing.price_per_die_usd;
        t.note(format!(
            "Die price: {:.2}-{:.2} USD; non-die overhead {:.1}-{:.1}% of BOM.",
            p.low,
            p.high,
            self.overhead_fraction.low * 100.0,
            self.overhead_fraction.high * 100.0
        ));
        t.note(format!(
            "Die-count ratio (n_std - n_sc)/n_std = {:.2}; absolute differential = {} dies.",
            self.die_ratio, self.die_differential
        ));
        t
    }
}
