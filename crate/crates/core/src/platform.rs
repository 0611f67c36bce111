//! POST / memory-training outcomes for slot populations.
//!
//! Each platform is a set of controllers, each owning training groups. A
//! training group drives one or more 32-bit lanes, where a lane is one half of
//! the module sitting in a given slot. POST runs as a small state machine:
//!
//! 1. SPD detect: every installed module's byte 235 is decoded and checked
//!    against its declared class and populated halves.
//! 2. Training: each group with no populated lane is skipped; a group with
//!    every lane populated trains; a unified group with only some lanes
//!    populated fails its training assertion and aborts POST.
//! 3. Address map: the trained groups form the active bus.
//!
//! Training is a pass/fail assertion per group, not an electrical model.

use crate::config::peak_for_bits;
use crate::spd::{decode_byte235, encode_byte235, ModuleClass, SpdChannelBusWidth, SpdError};
use crate::table::Table;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub const UNIFIED_FAILURE_REASON: &str = "unterminated DQ half on unified 64-bit training";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlatformError {
    #[error("invalid population: {0}")]
    InvalidPopulation(String),
    #[error("slot {slot} does not exist on {platform}")]
    UnknownSlot { slot: SlotId, platform: Vendor },
    #[error(transparent)]
    Spd(#[from] SpdError),
    #[error("POST did not complete ({0}); no active bandwidth")]
    NotBooted(PostOutcome),
    #[error("unknown {what} '{value}'")]
    Parse { what: &'static str, value: String },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Vendor {
    IntelPreArl,
    IntelArrowLake,
    AmdAm5,
}

impl Vendor {
    pub const ALL: [Vendor; 3] = [Self::IntelPreArl, Self::IntelArrowLake, Self::AmdAm5];

    pub fn is_intel(self) -> bool {
        matches!(self, Self::IntelPreArl | Self::IntelArrowLake)
    }
}

impl fmt::Display for Vendor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::IntelPreArl => "IntelPreARL",
            Self::IntelArrowLake => "IntelArrowLake",
            Self::AmdAm5 => "AmdAm5",
        })
    }
}

impl FromStr for Vendor {
    type Err = PlatformError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "pre-arl" | "intel-pre-arl" | "intelprearl" | "raptor-lake" | "alder-lake" => Ok(Self::IntelPreArl),
            "arrow-lake" | "arl" | "intel-arrow-lake" | "intelarrowlake" => Ok(Self::IntelArrowLake),
            "am5" | "amd" | "amd-am5" | "amdam5" => Ok(Self::AmdAm5),
            _ => Err(PlatformError::Parse { what: "platform", value: s.to_string() }),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SchedulingGranularity {
    SubChannel32,
    Channel64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrainingScope {
    PerSubChannel,
    Unified64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SlotId {
    A,
    B,
}

impl fmt::Display for SlotId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::A => "A",
            Self::B => "B",
        })
    }
}

impl FromStr for SlotId {
    type Err = PlatformError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Self::A),
            "B" => Ok(Self::B),
            _ => Err(PlatformError::Parse { what: "slot", value: s.to_string() }),
        }
    }
}

/// One 32-bit half of a module. `Lower` carries the SC0 dies.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Half {
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrainingGroup {
    pub name: String,
    pub width_bits: u32,
    pub lanes: Vec<(SlotId, Half)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ControllerDesc {
    pub name: String,
    pub groups: Vec<TrainingGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlatformModel {
    pub vendor: Vendor,
    pub scheduling_granularity: SchedulingGranularity,
    pub training_scope: TrainingScope,
    pub slots: Vec<SlotId>,
    pub controllers: Vec<ControllerDesc>,
}

fn group(name: &str, width_bits: u32, lanes: &[(SlotId, Half)]) -> TrainingGroup {
    TrainingGroup { name: name.to_string(), width_bits, lanes: lanes.to_vec() }
}

impl PlatformModel {
    pub fn new(vendor: Vendor) -> Self {
        use Half::*;
        use SlotId::*;
        match vendor {
            // One slot per channel, both sub-channels of the channel on that slot.
            Vendor::IntelPreArl => Self {
                vendor,
                scheduling_granularity: SchedulingGranularity::SubChannel32,
                training_scope: TrainingScope::PerSubChannel,
                slots: vec![A, B],
                controllers: vec![
                    ControllerDesc {
                        name: "MC0".into(),
                        groups: vec![group("SC0", 32, &[(A, Lower)]), group("SC1", 32, &[(A, Upper)])],
                    },
                    ControllerDesc {
                        name: "MC1".into(),
                        groups: vec![group("SC0", 32, &[(B, Lower)]), group("SC1", 32, &[(B, Upper)])],
                    },
                ],
            },
            // Each CMC sends SC0 to slot A and SC1 to slot B; a module's two
            // halves therefore land on different CMCs.
            Vendor::IntelArrowLake => Self {
                vendor,
                scheduling_granularity: SchedulingGranularity::SubChannel32,
                training_scope: TrainingScope::PerSubChannel,
                slots: vec![A, B],
                controllers: vec![
                    ControllerDesc {
                        name: "CMC0".into(),
                        groups: vec![group("SC0", 32, &[(A, Lower)]), group("SC1", 32, &[(B, Lower)])],
                    },
                    ControllerDesc {
                        name: "CMC1".into(),
                        groups: vec![group("SC0", 32, &[(A, Upper)]), group("SC1", 32, &[(B, Upper)])],
                    },
                ],
            },
            Vendor::AmdAm5 => Self {
                vendor,
                scheduling_granularity: SchedulingGranularity::Channel64,
                training_scope: TrainingScope::Unified64,
                slots: vec![A, B],
                controllers: vec![ControllerDesc {
                    name: "UMC".into(),
                    groups: vec![
                        group("CHA", 64, &[(A, Lower), (A, Upper)]),
                        group("CHB", 64, &[(B, Lower), (B, Upper)]),
                    ],
                }],
            },
        }
    }
}

/// Which 32-bit halves of a module carry dies.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PopulatedHalves {
    pub lower: bool,
    pub upper: bool,
}

impl PopulatedHalves {
    pub const LOWER: Self = Self { lower: true, upper: false };
    pub const UPPER: Self = Self { lower: false, upper: true };
    pub const BOTH: Self = Self { lower: true, upper: true };

    pub fn count(&self) -> u32 {
        u32::from(self.lower) + u32::from(self.upper)
    }

    pub fn has(&self, half: Half) -> bool {
        match half {
            Half::Lower => self.lower,
            Half::Upper => self.upper,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InstalledModule {
    pub module_class: ModuleClass,
    pub populated_halves: PopulatedHalves,
    pub spd_byte235: u8,
}

impl InstalledModule {
    /// Decodes the SPD byte and checks it against the declared class and
    /// the physical half population.
    pub fn validate(&self) -> Result<SpdChannelBusWidth, PlatformError> {
        let desc = decode_byte235(self.spd_byte235)?;
        let spd_class = desc.class();
        if spd_class != self.module_class {
            return Err(PlatformError::InvalidPopulation(format!(
                "declared {} but SPD byte {:#04x} decodes to {}",
                self.module_class, self.spd_byte235, spd_class
            )));
        }
        let expected_halves = match spd_class {
            ModuleClass::SingleSC => 1,
            ModuleClass::StandardDualSC => 2,
            other => {
                return Err(PlatformError::InvalidPopulation(format!(
                    "{other} modules are not modeled in a DDR5 UDIMM slot"
                )))
            }
        };
        if self.populated_halves.count() != expected_halves {
            return Err(PlatformError::InvalidPopulation(format!(
                "{} module must populate {} half(s), found {}",
                spd_class,
                expected_halves,
                self.populated_halves.count()
            )));
        }
        Ok(desc)
    }
}

/// Module kinds used when building population scenarios.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModuleKind {
    /// Single sub-channel module with SC0 dies.
    SingleSc,
    /// Single sub-channel module with only the SC1 dies fitted.
    SingleScUpper,
    Standard,
}

impl ModuleKind {
    pub const ALL: [ModuleKind; 3] = [Self::SingleSc, Self::SingleScUpper, Self::Standard];

    pub fn module(self) -> InstalledModule {
        match self {
            Self::SingleSc => InstalledModule {
                module_class: ModuleClass::SingleSC,
                populated_halves: PopulatedHalves::LOWER,
                spd_byte235: encode_byte235(&SpdChannelBusWidth::single_sub_channel()),
            },
            Self::SingleScUpper => InstalledModule {
                module_class: ModuleClass::SingleSC,
                populated_halves: PopulatedHalves::UPPER,
                spd_byte235: encode_byte235(&SpdChannelBusWidth::single_sub_channel()),
            },
            Self::Standard => InstalledModule {
                module_class: ModuleClass::StandardDualSC,
                populated_halves: PopulatedHalves::BOTH,
                spd_byte235: encode_byte235(&SpdChannelBusWidth::standard_dual()),
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::SingleSc => "single-sc",
            Self::SingleScUpper => "single-sc-upper",
            Self::Standard => "standard",
        }
    }
}

impl fmt::Display for ModuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModuleKind {
    type Err = PlatformError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "single-sc" | "sc1" | "single" | "single-sc-lower" => Ok(Self::SingleSc),
            "single-sc-upper" => Ok(Self::SingleScUpper),
            "standard" | "std" | "dual-sc" => Ok(Self::Standard),
            _ => Err(PlatformError::Parse { what: "module kind", value: s.to_string() }),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotPopulation {
    pub slots: BTreeMap<SlotId, InstalledModule>,
}

impl SlotPopulation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, slot: SlotId, module: InstalledModule) -> Self {
        self.slots.insert(slot, module);
        self
    }

    pub fn with_kind(self, slot: SlotId, kind: ModuleKind) -> Self {
        self.with(slot, kind.module())
    }

    fn lane_populated(&self, slot: SlotId, half: Half) -> bool {
        self.slots.get(&slot).is_some_and(|m| m.populated_halves.has(half))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PostOutcome {
    BootOk,
    TrainingFailure,
    NoMemory,
}

impl fmt::Display for PostOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::BootOk => "BootOk",
            Self::TrainingFailure => "TrainingFailure",
            Self::NoMemory => "NoMemory",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrainedUnit {
    pub controller: String,
    pub unit: String,
    pub width_bits: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PostResult {
    pub outcome: PostOutcome,
    pub trained_units: Vec<TrainedUnit>,
    pub total_active_bus_bits: u32,
    pub failure_reason: Option<String>,
    /// Cases the model handles by assumption rather than documented behaviour.
    pub notes: Vec<String>,
    pub trace: Vec<String>,
}

pub fn simulate_post(platform: &PlatformModel, population: &SlotPopulation) -> Result<PostResult, PlatformError> {
    let mut trace = Vec::new();
    let mut notes = Vec::new();

    // SPD detect
    for (&slot, module) in &population.slots {
        if !platform.slots.contains(&slot) {
            return Err(PlatformError::UnknownSlot { slot, platform: platform.vendor });
        }
        let desc = module.validate()?;
        trace.push(format!(
            "spd slot {slot}: byte235={:#04x} sub_channels={} width={} class={}",
            module.spd_byte235,
            desc.sub_channels.count(),
            desc.primary_width_bits(),
            module.module_class
        ));
        if platform.vendor == Vendor::IntelPreArl
            && module.module_class == ModuleClass::SingleSC
            && module.populated_halves == PopulatedHalves::UPPER
        {
            notes.push(format!(
                "slot {slot}: SC1-only module on pre-Arrow Lake Intel modeled symmetrically to SC0-only"
            ));
        }
    }

    // Training
    let mut trained_units = Vec::new();
    for ctrl in &platform.controllers {
        for g in &ctrl.groups {
            let populated = g.lanes.iter().filter(|&&(s, h)| population.lane_populated(s, h)).count();
            let id = format!("{}/{}", ctrl.name, g.name);
            if populated == 0 {
                trace.push(format!("train {id}: skipped (absent)"));
            } else if populated == g.lanes.len() {
                trace.push(format!("train {id}: pass {}-bit", g.width_bits));
                trained_units.push(TrainedUnit {
                    controller: ctrl.name.clone(),
                    unit: g.name.clone(),
                    width_bits: g.width_bits,
                });
            } else {
                trace.push(format!("train {id}: FAIL {UNIFIED_FAILURE_REASON}"));
                trace.push("post: abort".to_string());
                return Ok(PostResult {
                    outcome: PostOutcome::TrainingFailure,
                    trained_units,
                    total_active_bus_bits: 0,
                    failure_reason: Some(format!("{id}: {UNIFIED_FAILURE_REASON}")),
                    notes,
                    trace,
                });
            }
        }
    }

    // Address map
    let total: u32 = trained_units.iter().map(|u| u.width_bits).sum();
    let outcome = if total == 0 { PostOutcome::NoMemory } else { PostOutcome::BootOk };
    trace.push(format!("map: {total}-bit active bus"));
    Ok(PostResult { outcome, trained_units, total_active_bus_bits: total, failure_reason: None, notes, trace })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixCell {
    pub assignment: Vec<(SlotId, Option<ModuleKind>)>,
    pub result: PostResult,
}

impl MatrixCell {
    pub fn contains(&self, kind: ModuleKind) -> bool {
        self.assignment.iter().any(|(_, k)| *k == Some(kind))
    }

    pub fn contains_single_sc(&self) -> bool {
        self.contains(ModuleKind::SingleSc) || self.contains(ModuleKind::SingleScUpper)
    }
}

/// Every assignment of `{empty} ∪ kinds` to the platform's slots, in
/// lexicographic slot order with `empty` first.
pub fn population_matrix(platform: &PlatformModel, kinds: &[ModuleKind]) -> Result<Vec<MatrixCell>, PlatformError> {
    let options: Vec<Option<ModuleKind>> = std::iter::once(None).chain(kinds.iter().copied().map(Some)).collect();
    let mut assignments: Vec<Vec<(SlotId, Option<ModuleKind>)>> = vec![Vec::new()];
    for &slot in &platform.slots {
        assignments = assignments
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |&o| {
                    let mut next = prefix.clone();
                    next.push((slot, o));
                    next
                })
            })
            .collect();
    }
    assignments
        .into_par_iter()
        .map(|assignment| {
            let pop = assignment.iter().fold(SlotPopulation::new(), |p, &(slot, kind)| match kind {
                Some(k) => p.with_kind(slot, k),
                None => p,
            });
            let result = simulate_post(platform, &pop)?;
            Ok(MatrixCell { assignment, result })
        })
        .collect()
}

pub fn matrix_table(platform: &PlatformModel, cells: &[MatrixCell]) -> Table {
    let mut headers: Vec<String> = platform.slots.iter().map(|s| format!("Slot {s}")).collect();
    headers.extend(["Outcome", "Active bits", "Trained units"].map(String::from));
    let refs: Vec<&str> = headers.iter().map(String::as_str).collect();
    let n = platform.slots.len();
    let mut t = Table::new(format!("POST population matrix: {}", platform.vendor), &refs).right(&[n + 1]);
    for c in cells {
        let mut row: Vec<String> =
            c.assignment.iter().map(|(_, k)| k.map_or("-".to_string(), |k| k.name().to_string())).collect();
        row.push(c.result.outcome.to_string());
        row.push(c.result.total_active_bus_bits.to_string());
        let units: Vec<String> =
            c.result.trained_units.iter().map(|u| format!("{}/{}", u.controller, u.unit)).collect();
        row.push(if units.is_empty() { "-".into() } else { units.join(" ") });
        t.push(row);
    }
    t
}

/// Peak GB/s of the bus that survived training.
pub fn active_bandwidth(
    platform: &PlatformModel,
    population: &SlotPopulation,
    data_rate_mts: u32,
) -> Result<f64, PlatformError> {
    let r = simulate_post(platform, population)?;
    if r.outcome != PostOutcome::BootOk {
        return Err(PlatformError::NotBooted(r.outcome));
    }
    Ok(peak_for_bits(r.total_active_bus_bits, data_rate_mts))
}

/// Controller comparison with the support rows derived by simulation.
pub fn controller_table() -> Table {
    let intel = PlatformModel::new(Vendor::IntelArrowLake);
    let amd = PlatformModel::new(Vendor::AmdAm5);
    let mut t =
        Table::new("Table 4. Intel iMC vs AMD UMC: sub-channel handling", &["Property", "Intel iMC", "AMD UMC"]);

    let boots = |p: &PlatformModel, pop: &SlotPopulation| {
        simulate_post(p, pop).map(|r| r.outcome == PostOutcome::BootOk).unwrap_or(false)
    };
    let single = SlotPopulation::new().with_kind(SlotId::A, ModuleKind::SingleSc);
    let mixed = single.clone().with_kind(SlotId::B, ModuleKind::Standard);

    let gran = |p: &PlatformModel| match p.scheduling_granularity {
        SchedulingGranularity::SubChannel32 => "32-bit sub-channel",
        SchedulingGranularity::Channel64 => "64-bit channel",
    };
    let scope = |p: &PlatformModel| match p.training_scope {
        TrainingScope::PerSubChannel => "Per sub-channel",
        TrainingScope::Unified64 => "All 64-bit",
    };
    let gating = |p: &PlatformModel| match p.scheduling_granularity {
        SchedulingGranularity::SubChannel32 => "Per sub-channel",
        SchedulingGranularity::Channel64 => "Full channel",
    };
    let detect = |p: &PlatformModel| match p.training_scope {
        TrainingScope::PerSubChannel => "Used at init",
        TrainingScope::Unified64 => "N/A",
    };
    let yes_no = |b: bool| if b { "Yes" } else { "No" };
    let asym = |b: bool| if b { "Supported" } else { "Boot failure" };

    let rows: [(&str, String, String); 6] = [
        ("Scheduling granularity", gran(&intel).into(), gran(&amd).into()),
        ("Single SC support", yes_no(boots(&intel, &single)).into(), yes_no(boots(&amd, &single)).into()),
        ("Training scope", scope(&intel).into(), scope(&amd).into()),
        ("Asymm. population", asym(boots(&intel, &mixed)).into(), asym(boots(&amd, &mixed)).into()),
        ("PHY power gating", gating(&intel).into(), gating(&amd).into()),
        ("SPD SC detection", detect(&intel).into(), detect(&amd).into()),
    ];
    for (p, i, a) in rows {
        t.push(vec![p.to_string(), i, a]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use SlotId::*;

    fn post(v: Vendor, pop: SlotPopulation) -> PostResult {
        simulate_post(&PlatformModel::new(v), &pop).unwrap()
    }

    #[test]
    fn platform_model_invariants() {
        for v in Vendor::ALL {
            let p = PlatformModel::new(v);
            let expected = if v.is_intel() {
                (SchedulingGranularity::SubChannel32, TrainingScope::PerSubChannel)
            } else {
                (SchedulingGranularity::Channel64, TrainingScope::Unified64)
            };
            assert_eq!((p.scheduling_granularity, p.training_scope), expected);
        }
    }

    #[test]
    fn pre_arl_single_sc_boots_32_bits() {
        let r = post(Vendor::IntelPreArl, SlotPopulation::new().with_kind(A, ModuleKind::SingleSc));
        assert_eq!(r.outcome, PostOutcome::BootOk);
        assert_eq!(r.total_active_bus_bits, 32);
        assert!(r.notes.is_empty());
    }

    #[test]
    fn am5_single_sc_fails_training() {
        let r = post(Vendor::AmdAm5, SlotPopulation::new().with_kind(A, ModuleKind::SingleSc));
        assert_eq!(r.outcome, PostOutcome::TrainingFailure);
        assert!(r.failure_reason.unwrap().contains(UNIFIED_FAILURE_REASON));
        assert_eq!(r.total_active_bus_bits, 0);
    }

    #[test]
    fn am5_standard_boots_64_bits() {
        let r = post(Vendor::AmdAm5, SlotPopulation::new().with_kind(A, ModuleKind::Standard));
        assert_eq!(r.outcome, PostOutcome::BootOk);
        assert_eq!(r.total_active_bus_bits, 64);
    }

    #[test]
    fn arrow_lake_slot_a_standard_trains_sc0_of_each_cmc() {
        let r = post(Vendor::IntelArrowLake, SlotPopulation::new().with_kind(A, ModuleKind::Standard));
        assert_eq!(r.outcome, PostOutcome::BootOk);
        assert_eq!(r.total_active_bus_bits, 64);
        let units: Vec<(&str, &str, u32)> =
            r.trained_units.iter().map(|u| (u.controller.as_str(), u.unit.as_str(), u.width_bits)).collect();
        assert_eq!(units, [("CMC0", "SC0", 32), ("CMC1", "SC0", 32)]);
    }

    #[test]
    fn arrow_lake_single_sc_boots_32_bits() {
        let r = post(Vendor::IntelArrowLake, SlotPopulation::new().with_kind(A, ModuleKind::SingleSc));
        assert_eq!(r.outcome, PostOutcome::BootOk);
        assert_eq!(r.total_active_bus_bits, 32);
    }

    #[test]
    fn empty_population_is_no_memory() {
        for v in Vendor::ALL {
            assert_eq!(post(v, SlotPopulation::new()).outcome, PostOutcome::NoMemory);
        }
    }

    #[test]
    fn sc1_only_on_pre_arl_is_flagged() {
        let r = post(Vendor::IntelPreArl, SlotPopulation::new().with_kind(B, ModuleKind::SingleScUpper));
        assert_eq!(r.outcome, PostOutcome::BootOk);
        assert_eq!(r.total_active_bus_bits, 32);
        assert_eq!(r.trained_units[0].unit, "SC1");
        assert_eq!(r.notes.len(), 1);
    }

    #[test]
    fn inconsistent_modules_are_rejected() {
        let p = PlatformModel::new(Vendor::IntelArrowLake);
        let bad_halves = InstalledModule { populated_halves: PopulatedHalves::BOTH, ..ModuleKind::SingleSc.module() };
        let r = simulate_post(&p, &SlotPopulation::new().with(A, bad_halves));
        assert!(matches!(r, Err(PlatformError::InvalidPopulation(_))));

        let wrong_class =
            InstalledModule { module_class: ModuleClass::StandardDualSC, ..ModuleKind::SingleSc.module() };
        assert!(matches!(
            simulate_post(&p, &SlotPopulation::new().with(A, wrong_class)),
            Err(PlatformError::InvalidPopulation(_))
        ));

        let reserved = InstalledModule { spd_byte235: 0xE2, ..ModuleKind::SingleSc.module() };
        assert!(matches!(
            simulate_post(&p, &SlotPopulation::new().with(A, reserved)),
            Err(PlatformError::Spd(SpdError::ReservedCode { .. }))
        ));

        let none = InstalledModule {
            populated_halves: PopulatedHalves { lower: false, upper: false },
            ..ModuleKind::SingleSc.module()
        };
        assert!(simulate_post(&p, &SlotPopulation::new().with(A, none)).is_err());
    }

    #[test]
    fn matrix_is_complete_and_ordered() {
        let p = PlatformModel::new(Vendor::IntelPreArl);
        let cells = population_matrix(&p, &[ModuleKind::SingleSc, ModuleKind::Standard]).unwrap();
        assert_eq!(cells.len(), 9);
        assert_eq!(cells[0].assignment, vec![(A, None), (B, None)]);
        assert_eq!(cells[1].assignment, vec![(A, None), (B, Some(ModuleKind::SingleSc))]);
        assert_eq!(cells[8].assignment, vec![(A, Some(ModuleKind::Standard)), (B, Some(ModuleKind::Standard))]);
        let two_sc = &cells[4];
        assert_eq!(two_sc.result.outcome, PostOutcome::BootOk);
        assert_eq!(two_sc.result.total_active_bus_bits, 64);
    }

    #[test]
    fn am5_every_single_sc_cell_fails() {
        let p = PlatformModel::new(Vendor::AmdAm5);
        for c in population_matrix(&p, &ModuleKind::ALL).unwrap() {
            if c.contains_single_sc() {
                assert_eq!(c.result.outcome, PostOutcome::TrainingFailure, "{:?}", c.assignment);
            }
            assert!([0, 64, 128].contains(&c.result.total_active_bus_bits));
        }
    }

    #[test]
    fn active_bandwidths() {
        let intel = PlatformModel::new(Vendor::IntelArrowLake);
        let two = SlotPopulation::new().with_kind(A, ModuleKind::SingleSc).with_kind(B, ModuleKind::SingleSc);
        assert_eq!(active_bandwidth(&intel, &two, 5600).unwrap(), 44.8);
        let one = SlotPopulation::new().with_kind(A, ModuleKind::SingleSc);
        assert_eq!(active_bandwidth(&intel, &one, 5600).unwrap(), 22.4);
        let amd = PlatformModel::new(Vendor::AmdAm5);
        assert_eq!(active_bandwidth(&amd, &one, 5600), Err(PlatformError::NotBooted(PostOutcome::TrainingFailure)));
    }

    #[test]
    fn controller_table_rows() {
        let t = controller_table();
        assert_eq!(t.rows[1], vec!["Single SC support", "Yes", "No"]);
        assert_eq!(t.rows[3], vec!["Asymm. population", "Supported", "Boot failure"]);
    }

    #[test]
    fn parse_names() {
        assert_eq!("am5".parse::<Vendor>().unwrap(), Vendor::AmdAm5);
        assert_eq!("arrow-lake".parse::<Vendor>().unwrap(), Vendor::IntelArrowLake);
        assert_eq!("single-sc".parse::<ModuleKind>().unwrap(), ModuleKind::SingleSc);
        assert!("ddr3".parse::<ModuleKind>().is_err());
        assert_eq!("b".parse::<SlotId>().unwrap(), B);
    }
}
