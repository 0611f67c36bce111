use std::path::{Path, PathBuf};
use std::str::FromStr;

use ddr5sc::bom::{bom_report, BomBreakdown, DieGeneration, DiePricing};
use ddr5sc::config::{bandwidth_presets, compare_configs, comparison_table, MemoryConfig, Standard};
use ddr5sc::interval::Interval;
use ddr5sc::platform::{
    active_bandwidth, matrix_table, population_matrix, simulate_post, InstalledModule, ModuleKind, PlatformModel,
    PopulatedHalves, PostOutcome, SlotId, SlotPopulation, Vendor,
};
use ddr5sc::queue::{
    analytic_md1_wait, compare_sc_counts, latency_histogram, run_simulation, run_simulation_traced, sweep_utilization,
    QueueSimResult, Routing, SimConfig,
};
use ddr5sc::report::{all_tables, report_table, TABLE_COUNT};
use ddr5sc::roofline::{
    detect_inversion, igpu_margin, plot_series, table3_lookup, BandwidthBasis, ComputePlatform, Roofline,
    IGPU_1080P_DEMAND_GBS,
};
use ddr5sc::spd::{
    decode_byte235, encode_byte235, BusExtension, ModuleClass, PrimaryBusWidth, SpdChannelBusWidth, SpdImage,
    SubChannelCount,
};
use ddr5sc::table::{fmt1, fmt3, Table};
use serde_json::{json, Value};

use crate::args::*;
use crate::input::*;
use crate::output::{Line, Output};

pub const DEFAULT_PEAK_FLOPS: f64 = 1e11;
/// Single-queue utilization used by `--compare` when no load is given.
const DEFAULT_COMPARE_RHO: f64 = 0.5;
const PLOT_MIN_INTENSITY: f64 = 0.01;
const PLOT_MAX_INTENSITY: f64 = 1000.0;
const PLOT_POINTS: usize = 101;

pub fn run(command: &Command) -> CmdResult<Output> {
    match command {
        Command::Spd { action } => spd(action),
        Command::Config { action: ConfigAction::Compare { config, efficiency } } => {
            config_compare(config.as_deref(), *efficiency)
        }
        Command::Roofline { action } => roofline(action),
        Command::Post(a) => post(a),
        Command::Matrix(a) => matrix(a),
        Command::Simulate(a) => simulate(a),
        Command::Bom(a) => bom(a),
        Command::Report(a) => report(a),
    }
}

fn descriptor_json(raw: u8, desc: &SpdChannelBusWidth) -> Value {
    let mut v = serde_json::to_value(desc.summary()).expect("summary serializes");
    v["byte"] = json!(format!("{raw:#04x}"));
    v
}

fn descriptor_table(raw: u8, desc: &SpdChannelBusWidth) -> Table {
    let s = desc.summary();
    let mut t = Table::new("SPD byte 235", &["Field", "Value"]);
    t.push(vec!["byte".into(), format!("{raw:#04x}")]);
    t.push(vec!["sub_channels".into(), s.sub_channels.to_string()]);
    t.push(vec!["ecc_bits".into(), s.ecc_bits.to_string()]);
    t.push(vec!["primary_width_bits".into(), s.primary_width_bits.to_string()]);
    t.push(vec!["module_class".into(), s.module_class.to_string()]);
    t
}

fn spd(action: &SpdAction) -> CmdResult<Output> {
    match action {
        SpdAction::Decode { byte, image } => {
            let mut inputs = Vec::new();
            let (raw, source) = match (byte, image) {
                (Some(b), _) => (parse_byte(b)?, json!({ "literal": b })),
                (None, Some(path)) => {
                    let file = read_input(path)?;
                    let img = SpdImage::new(file.bytes.clone()).or_invalid()?;
                    inputs.push(file);
                    (img.bus_width_byte(), json!({ "image": path.display().to_string() }))
                }
                (None, None) => return Err(Failure::invalid_msg("a byte literal or --image is required")),
            };
            let desc = decode_byte235(raw).or_invalid()?;
            let mut out = Output::new("spd decode", source, inputs);
            out.default_format = Format::Json;
            out.json = descriptor_json(raw, &desc);
            out.tables.push(descriptor_table(raw, &desc));
            Ok(out)
        }
        SpdAction::Encode { sub_channels, width, ecc_bits } => {
            let sc = SubChannelCount::from_count(*sub_channels)
                .ok_or_else(|| Failure::invalid_msg(format!("unsupported sub-channel count {sub_channels}")))?;
            let w = PrimaryBusWidth::from_bits(*width)
                .ok_or_else(|| Failure::invalid_msg(format!("unsupported primary width {width}")))?;
            let e = BusExtension::from_bits(*ecc_bits)
                .ok_or_else(|| Failure::invalid_msg(format!("unsupported ECC extension {ecc_bits}")))?;
            let desc = SpdChannelBusWidth::new(sc, e, w);
            let raw = encode_byte235(&desc);
            let params = json!({ "sub_channels": sub_channels, "width": width, "ecc_bits": ecc_bits });
            let mut out = Output::new("spd encode", params, Vec::new());
            out.json = descriptor_json(raw, &desc);
            out.tables.push(descriptor_table(raw, &desc));
            out.lines.push(Line::plain(format!("{raw:#04x}")));
            out.lines_only_text = true;
            Ok(out)
        }
    }
}

fn config_compare(path: Option<&Path>, efficiency: Option<f64>) -> CmdResult<Output> {
    let mut inputs = Vec::new();
    let file = load_config(path, &mut inputs)?;
    let mut configs = if !file.configs.is_empty() {
        file.configs.clone()
    } else if let Some(m) = &file.memory {
        vec![m.clone()]
    } else {
        bandwidth_presets()
    };
    if let Some(e) = efficiency {
        configs = configs.into_iter().map(|c| c.with_efficiency(e)).collect();
    }
    for c in &configs {
        c.validate().or_invalid()?;
    }
    let rows = compare_configs(&configs).or_invalid()?;
    let mut out = Output::new("config compare", json!({ "configs": configs }), inputs);
    out.json = json!({ "rows": rows });
    out.tables.push(comparison_table(&rows));
    Ok(out)
}

fn standard_config(standard: Standard, channels: u32, sc: u32, mts: u32) -> MemoryConfig {
    match standard {
        Standard::Ddr4 => MemoryConfig::ddr4(channels, mts),
        Standard::Ddr5 => MemoryConfig::ddr5(channels, sc, mts),
    }
}

/// File (or default) memory config with flag overrides applied.
fn resolve_memory(base: MemoryConfig, mem: &MemArgs) -> CmdResult<MemoryConfig> {
    let mut c = base;
    if mem.any() {
        let standard = match mem.standard {
            Some(StandardArg::Ddr4) => Standard::Ddr4,
            Some(StandardArg::Ddr5) => Standard::Ddr5,
            None => c.standard,
        };
        if standard != c.standard {
            let sc = if standard == Standard::Ddr5 { 2 } else { 1 };
            c = standard_config(standard, c.channels, sc, c.data_rate_mts);
        }
        c.label = None;
        if let Some(ch) = mem.channels {
            c.channels = ch;
            c.dimm_count = ch;
        }
        if let Some(sc) = mem.sc {
            c.populated_subchannels_per_channel = sc;
        }
        if let Some(mts) = mem.mts {
            c.data_rate_mts = mts;
        }
        if let Some(bl) = mem.bl {
            c.burst_length = bl;
        }
        if let Some(e) = mem.efficiency {
            c.bus_efficiency = Some(e);
        }
    }
    c.validate().or_invalid()?;
    Ok(c)
}

fn standard_ddr5_5600() -> MemoryConfig {
    MemoryConfig::ddr5(1, 2, 5600)
}

fn compute_params(file: &FileConfig, compute: &ComputeArgs) -> (f64, BandwidthBasis) {
    let section = file.roofline.clone().unwrap_or_default();
    let peak = compute.peak_flops.or(section.peak_compute_flops).unwrap_or(DEFAULT_PEAK_FLOPS);
    let basis = if compute.use_peak { BandwidthBasis::Peak } else { section.basis.unwrap_or_default() };
    (peak, basis)
}

/// Named intensities from flags, else from the config file's workloads.
fn intensities(flags: &[f64], file: &FileConfig) -> CmdResult<Vec<(String, f64)>> {
    if !flags.is_empty() {
        return Ok(flags.iter().map(|&i| (format!("I={i}"), i)).collect());
    }
    for w in &file.workloads {
        w.validate().or_invalid()?;
    }
    Ok(file.workloads.iter().filter_map(|w| w.arithmetic_intensity.map(|i| (w.name.clone(), i))).collect())
}

fn bound_label(limited: bool) -> &'static str {
    if limited {
        "memory"
    } else {
        "compute"
    }
}

fn plot_csv(header: &str, rooflines: &[&Roofline]) -> CmdResult<String> {
    let series: Vec<Vec<(f64, f64)>> = rooflines
        .iter()
        .map(|r| plot_series(r, PLOT_MIN_INTENSITY, PLOT_MAX_INTENSITY, PLOT_POINTS))
        .collect::<Result<_, _>>()
        .or_invalid()?;
    let mut s = format!("{header}\n");
    for k in 0..PLOT_POINTS {
        s.push_str(&series[0][k].0.to_string());
        for curve in &series {
            s.push(',');
            s.push_str(&curve[k].1.to_string());
        }
        s.push('\n');
    }
    Ok(s)
}

fn roofline(action: &RooflineAction) -> CmdResult<Output> {
    match action {
        RooflineAction::Classify { config, intensity, mem, compute, emit_plot_data } => {
            let mut inputs = Vec::new();
            let file = load_config(config.as_deref(), &mut inputs)?;
            let memory = resolve_memory(file.memory.clone().unwrap_or_else(standard_ddr5_5600), mem)?;
            let (peak, basis) = compute_params(&file, compute);
            let platform = ComputePlatform::new(peak, memory.clone()).with_basis(basis);
            let roof = platform.roofline().or_invalid()?;
            let points = intensities(intensity, &file)?;
            if points.is_empty() {
                return Err(Failure::invalid_msg("no intensities: pass --intensity or workloads in --config"));
            }
            let mut t = Table::new(
                format!("Roofline classification: {}", memory.label_or_default()),
                &["Workload", "I (FLOP/B)", "P/B (FLOP/B)", "Bound", "Attainable (GFLOP/s)"],
            )
            .right(&[1, 2, 4]);
            let mut rows = Vec::new();
            for (name, i) in &points {
                let limited = roof.is_bandwidth_limited(*i).or_invalid()?;
                let att = roof.attainable(*i).or_invalid()?;
                t.push(vec![
                    name.clone(),
                    fmt3(*i),
                    fmt3(roof.crossover_intensity()),
                    bound_label(limited).into(),
                    fmt3(att / 1e9),
                ]);
                rows.push(json!({
                    "workload": name, "intensity": i, "bandwidth_limited": limited, "attainable_flops": att,
                }));
            }
            let basis_name = match basis {
                BandwidthBasis::Effective => "effective",
                BandwidthBasis::Peak => "peak",
            };
            t.note(format!("P = {peak:e} FLOP/s, B = {} GB/s ({basis_name})", fmt3(roof.bandwidth_bps() / 1e9)));
            let params = json!({
                "memory": memory, "peak_compute_flops": peak, "basis": basis,
                "intensities": points.iter().map(|p| p.1).collect::<Vec<_>>(),
            });
            let mut out = Output::new("roofline classify", params, inputs);
            out.json = json!({
                "crossover_intensity": roof.crossover_intensity(), "bandwidth_bps": roof.bandwidth_bps(), "rows": rows,
            });
            out.tables.push(t);
            if let Some(p) = emit_plot_data {
                out.artifacts.push((p.clone(), plot_csv("intensity_flop_per_byte,attainable_flops", &[&roof])?));
            }
            Ok(out)
        }
        RooflineAction::Deficit { config, intensity, mem, compute, reduced_sc, workload, emit_plot_data } => {
            let mut inputs = Vec::new();
            let file = load_config(config.as_deref(), &mut inputs)?;
            let full_mem = resolve_memory(file.memory.clone().unwrap_or_else(standard_ddr5_5600), mem)?;
            if full_mem.standard != Standard::Ddr5 || *reduced_sc >= full_mem.populated_subchannels_per_channel {
                return Err(Failure::invalid_msg(
                    "deficit needs a DDR5 configuration with more sub-channels than --reduced-sc",
                ));
            }
            let mut reduced_mem = full_mem.clone();
            reduced_mem.label = None;
            reduced_mem.populated_subchannels_per_channel = *reduced_sc;
            reduced_mem.validate().or_invalid()?;
            let (peak, basis) = compute_params(&file, compute);
            let full = ComputePlatform::new(peak, full_mem.clone()).with_basis(basis).roofline().or_invalid()?;
            let reduced = ComputePlatform::new(peak, reduced_mem.clone()).with_basis(basis).roofline().or_invalid()?;
            let tabulated = workload.as_deref().map(table3_lookup).transpose().or_invalid()?;
            let points = intensities(intensity, &file)?;
            if points.is_empty() && tabulated.is_none() {
                return Err(Failure::invalid_msg("no intensities: pass --intensity, --workload or --config"));
            }
            let mut t = Table::new(
                format!("Roofline deficit: {} -> {}", full_mem.label_or_default(), reduced_mem.label_or_default()),
                &["Workload", "I (FLOP/B)", "Full (GFLOP/s)", "Reduced (GFLOP/s)", "Deficit (%)"],
            )
            .right(&[1, 2, 3, 4]);
            let mut rows = Vec::new();
            for (name, i) in &points {
                let d = ddr5sc::roofline::roofline_deficit(*i, &full, &reduced).or_invalid()?;
                let (af, ar) = (full.attainable(*i).or_invalid()?, reduced.attainable(*i).or_invalid()?);
                t.push(vec![name.clone(), fmt3(*i), fmt3(af / 1e9), fmt3(ar / 1e9), fmt1(d * 100.0)]);
                rows.push(json!({
                    "workload": name, "intensity": i, "attainable_full_flops": af,
                    "attainable_reduced_flops": ar, "deficit": d,
                }));
            }
            let reduction = 1.0 - reduced.bandwidth_bps() / full.bandwidth_bps();
            t.note(format!("Bandwidth reduction: {}%", fmt1(reduction * 100.0)));
            if let (Some(name), Some(range)) = (workload, tabulated) {
                t.note(format!("Tabulated deficit for {name}: {:.0}-{:.0}%", range.low, range.high));
            }
            let params = json!({
                "full": full_mem, "reduced": reduced_mem, "peak_compute_flops": peak, "basis": basis,
                "intensities": points.iter().map(|p| p.1).collect::<Vec<_>>(), "workload": workload,
            });
            let mut out = Output::new("roofline deficit", params, inputs);
            out.json = json!({
                "bandwidth_reduction": reduction, "rows": rows,
                "tabulated_deficit_pct": tabulated,
            });
            out.tables.push(t);
            if let Some(p) = emit_plot_data {
                let csv = plot_csv(
                    "intensity_flop_per_byte,attainable_full_flops,attainable_reduced_flops",
                    &[&full, &reduced],
                )?;
                out.artifacts.push((p.clone(), csv));
            }
            Ok(out)
        }
        RooflineAction::Inversion { config } => {
            let mut inputs = Vec::new();
            let file = load_config(config.as_deref(), &mut inputs)?;
            let pairs: Vec<(MemoryConfig, MemoryConfig)> = if file.configs.is_empty() {
                let ddr4 = MemoryConfig::ddr4(1, 3200).with_label("DDR4-3200");
                vec![
                    (MemoryConfig::ddr5(1, 1, 4800).with_label("DDR5-4800 single SC"), ddr4.clone()),
                    (MemoryConfig::ddr5(1, 1, 6400).with_label("DDR5-6400 single SC"), ddr4),
                ]
            } else if file.configs.len() == 2 {
                vec![(file.configs[0].clone(), file.configs[1].clone())]
            } else {
                return Err(Failure::invalid_msg("inversion config must list exactly two configs"));
            };
            let mut out = Output::new("roofline inversion", json!({ "pairs": pairs }), inputs);
            let mut reports = Vec::new();
            for (a, b) in &pairs {
                a.validate().or_invalid()?;
                b.validate().or_invalid()?;
                let r = detect_inversion(a, b).or_invalid()?;
                out.tables.push(r.table());
                reports.push(r);
            }
            out.json = json!({ "reports": reports });
            Ok(out)
        }
        RooflineAction::Igpu { config, mem, demand_low, demand_high } => {
            let mut inputs = Vec::new();
            let file = load_config(config.as_deref(), &mut inputs)?;
            let configs: Vec<MemoryConfig> = if mem.any() || file.memory.is_some() {
                vec![resolve_memory(file.memory.clone().unwrap_or_else(|| MemoryConfig::ddr5(1, 1, 5600)), mem)?]
            } else if !file.configs.is_empty() {
                file.configs.clone()
            } else {
                vec![
                    MemoryConfig::ddr5(1, 1, 5600).with_label("DDR5-5600 single SC"),
                    MemoryConfig::ddr5(1, 1, 6400).with_label("DDR5-6400 single SC"),
                    MemoryConfig::ddr5(1, 2, 5600).with_label("DDR5-5600 dual SC"),
                ]
            };
            let base = file.igpu_demand_gbs.map_or(IGPU_1080P_DEMAND_GBS, |[l, h]| Interval { low: l, high: h });
            let demand = Interval { low: demand_low.unwrap_or(base.low), high: demand_high.unwrap_or(base.high) };
            let mut t = Table::new(
                format!("iGPU headroom vs {:.1}-{:.1} GB/s demand", demand.low, demand.high),
                &["Configuration", "Sustained (GB/s)", "Headroom (GB/s)", "Verdict"],
            )
            .right(&[1]);
            let mut reports = Vec::new();
            for c in &configs {
                c.validate().or_invalid()?;
                let r = igpu_margin(c, &demand).or_invalid()?;
                t.push(vec![
                    r.label.clone(),
                    fmt1(r.sustained_gbs),
                    format!("{:+.1} to {:+.1}", r.headroom_low_gbs, r.headroom_high_gbs),
                    r.verdict.as_str().into(),
                ]);
                reports.push(r);
            }
            let mut out = Output::new("roofline igpu", json!({ "configs": configs, "demand_gbs": demand }), inputs);
            out.json = json!({ "reports": reports });
            out.tables.push(t);
            Ok(out)
        }
    }
}

fn parse_slot_module(value: &str) -> CmdResult<(String, InstalledModule)> {
    if looks_like_byte(value) {
        let raw = parse_byte(value)?;
        let desc = decode_byte235(raw).or_invalid()?;
        let halves = match desc.class() {
            ModuleClass::SingleSC => PopulatedHalves::LOWER,
            ModuleClass::StandardDualSC => PopulatedHalves::BOTH,
            other => return Err(Failure::invalid_msg(format!("SPD byte {raw:#04x} describes a {other} module"))),
        };
        let module = InstalledModule { module_class: desc.class(), populated_halves: halves, spd_byte235: raw };
        Ok((format!("{raw:#04x}"), module))
    } else {
        let kind = ModuleKind::from_str(value).or_invalid()?;
        Ok((kind.name().to_string(), kind.module()))
    }
}

fn post(a: &PostArgs) -> CmdResult<Output> {
    let mut inputs = Vec::new();
    let file = load_config(a.config.as_deref(), &mut inputs)?;
    let section = file.population.clone().unwrap_or_default();
    let platform_name = a
        .platform
        .clone()
        .or(section.platform.clone())
        .ok_or_else(|| Failure::invalid_msg("--platform is required"))?;
    let vendor = Vendor::from_str(&platform_name).or_invalid()?;
    let mut assignments: std::collections::BTreeMap<SlotId, String> = std::collections::BTreeMap::new();
    for (slot, value) in &section.slots {
        assignments.insert(SlotId::from_str(slot).or_invalid()?, value.clone());
    }
    for pair in &a.slots {
        let (slot, value) =
            pair.split_once('=').ok_or_else(|| Failure::invalid_msg(format!("expected SLOT=KIND, got '{pair}'")))?;
        assignments.insert(SlotId::from_str(slot).or_invalid()?, value.trim().to_string());
    }
    let mut population = SlotPopulation::new();
    let mut resolved = serde_json::Map::new();
    for (&slot, value) in &assignments {
        let (name, module) = parse_slot_module(value)?;
        resolved.insert(slot.to_string(), json!(name));
        population = population.with(slot, module);
    }
    let platform = PlatformModel::new(vendor);
    let result = simulate_post(&platform, &population).or_invalid()?;
    let mts = a.mts.or(section.data_rate_mts);
    let bandwidth = match mts {
        Some(m) if result.outcome == PostOutcome::BootOk => {
            Some(active_bandwidth(&platform, &population, m).or_invalid()?)
        }
        _ => None,
    };

    let params = json!({ "platform": vendor, "slots": resolved, "data_rate_mts": mts });
    let mut out = Output::new("post", params, inputs);
    out.json = json!({ "platform": vendor, "result": result, "active_peak_gbs": bandwidth });
    let mut t = Table::new(format!("POST: {vendor}"), &["Controller", "Unit", "Width (bits)"]).right(&[2]);
    for u in &result.trained_units {
        t.push(vec![u.controller.clone(), u.unit.clone(), u.width_bits.to_string()]);
    }
    if !t.rows.is_empty() {
        out.tables.push(t);
    }
    for step in &result.trace {
        out.lines.push(Line::plain(format!("trace: {step}")));
    }
    for note in &result.notes {
        out.lines.push(Line::plain(format!("note: {note}")));
    }
    let ok = result.outcome == PostOutcome::BootOk;
    let mut summary = format!("outcome: {} ({}-bit active bus)", result.outcome, result.total_active_bus_bits);
    if let Some(reason) = &result.failure_reason {
        summary = format!("outcome: {} ({reason})", result.outcome);
    }
    out.lines.push(Line::toned(summary, ok));
    if let Some(bw) = bandwidth {
        out.lines.push(Line::plain(format!("active peak bandwidth: {} GB/s", fmt1(bw))));
    }
    if !ok {
        out.exit = EXIT_BOOT_FAILURE;
    }
    Ok(out)
}

fn matrix(a: &MatrixArgs) -> CmdResult<Output> {
    let vendors: Vec<Vendor> = if a.platform.eq_ignore_ascii_case("all") {
        Vendor::ALL.to_vec()
    } else {
        vec![Vendor::from_str(&a.platform).or_invalid()?]
    };
    let kinds: Vec<ModuleKind> =
        a.kinds.iter().map(|k| ModuleKind::from_str(k)).collect::<Result<_, _>>().or_invalid()?;
    let params = json!({ "platforms": vendors, "kinds": kinds });
    let mut out = Output::new("matrix", params, Vec::new());
    let mut all = Vec::new();
    for v in vendors {
        let platform = PlatformModel::new(v);
        let cells = population_matrix(&platform, &kinds).or_invalid()?;
        out.tables.push(matrix_table(&platform, &cells));
        all.push(json!({ "platform": v, "cells": cells }));
    }
    out.json = json!({ "platforms": all });
    Ok(out)
}

fn sim_rows(t: &mut Table, label: &str, r: &QueueSimResult) {
    t.push(vec![
        label.into(),
        fmt3(r.mean_queue_wait_ns),
        fmt3(r.mean_total_latency_ns),
        fmt3(r.p95_latency_ns),
        fmt3(r.achieved_utilization),
        fmt1(r.throughput_gbs),
        r.requests_served.to_string(),
    ]);
}

const SIM_HEADERS: [&str; 7] =
    ["Run", "Mean wait (ns)", "Mean latency (ns)", "p95 latency (ns)", "Utilization", "Throughput (GB/s)", "Requests"];

fn simulate(a: &SimulateArgs) -> CmdResult<Output> {
    let mut inputs = Vec::new();
    let file = load_config(a.config.as_deref(), &mut inputs)?;
    let s = file.simulation.clone().unwrap_or_default();
    let sc = a.sc.or(s.subchannel_count).unwrap_or(1);
    let mts = a.mts.or(s.data_rate_mts).unwrap_or(5600);
    let mut cfg = SimConfig::new(sc, mts);
    if let Some(bl) = a.bl.or(s.burst_length) {
        cfg = cfg.with_burst_length(bl);
    }
    if let Some(fa) = a.first_access.or(s.first_access_latency_ns) {
        cfg.first_access_latency_ns = fa;
    }
    if let Some(n) = a.requests.or(s.duration_requests) {
        cfg = cfg.with_requests(n);
    }
    if let Some(seed) = a.seed.or(s.seed) {
        cfg = cfg.with_seed(seed);
    }
    let routing = match a.routing {
        Some(RoutingArg::RoundRobin) => Some(Routing::RoundRobin),
        Some(RoutingArg::UniformRandom) => Some(Routing::UniformRandom),
        None => s.routing,
    };
    if let Some(r) = routing {
        cfg = cfg.with_routing(r);
    }
    // Flags before file values; an explicit rate beats a utilization at the same level.
    let load = match (a.lambda, a.rho, s.arrival_rate_per_ns, s.utilization) {
        (Some(l), _, _, _) => Some(Load::Lambda(l)),
        (None, Some(r), _, _) => Some(Load::Rho(r)),
        (None, None, Some(l), _) => Some(Load::Lambda(l)),
        (None, None, None, Some(r)) => Some(Load::Rho(r)),
        _ => None,
    };
    if let Some(r) = match load {
        Some(Load::Rho(r)) => Some(r),
        _ => None,
    } {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Failure::invalid_msg(format!("utilization must be positive, got {r}")));
        }
    }

    if a.compare {
        let single_s = cfg.service_time_ns();
        let lambda = match load {
            Some(Load::Lambda(l)) => l,
            Some(Load::Rho(r)) => r / single_s,
            None => DEFAULT_COMPARE_RHO / single_s,
        };
        if a.histogram.is_some() {
            return Err(Failure::invalid_msg("--histogram applies to a single run, not --compare"));
        }
        let cmp = compare_sc_counts(&cfg, lambda).or_invalid()?;
        let mut params = serde_json::to_value(cfg.clone().with_lambda(lambda)).expect("config serializes");
        params["mode"] = json!("compare");
        let mut out = Output::new("simulate", params, inputs);
        let mut t =
            Table::new(format!("Sub-channel comparison at aggregate lambda = {} req/ns", fmt3(lambda)), &SIM_HEADERS)
                .right(&[1, 2, 3, 4, 5, 6]);
        sim_rows(&mut t, "1 SC", &cmp.single);
        sim_rows(&mut t, "2 SC", &cmp.dual);
        let (lo, hi) = cmp.published_band_pct;
        t.note(format!(
            "Relative latency increase (1 SC vs 2 SC): {}%; published estimate {lo:.0}-{hi:.0}% above 60% utilization (reported, not asserted).",
            fmt1(cmp.relative_increase * 100.0)
        ));
        out.tables.push(t);
        out.json = serde_json::to_value(&cmp).expect("comparison serializes");
        return Ok(out);
    }

    match load {
        Some(Load::Lambda(l)) => cfg = cfg.with_lambda(l),
        Some(Load::Rho(r)) => cfg = cfg.with_utilization(r),
        None => {}
    }

    if !a.sweep.is_empty() {
        if a.histogram.is_some() {
            return Err(Failure::invalid_msg("--histogram applies to a single run, not --sweep"));
        }
        let results: Vec<QueueSimResult> =
            sweep_utilization(&cfg, &a.sweep).into_iter().collect::<Result<_, _>>().or_invalid()?;
        let mut params = serde_json::to_value(&cfg).expect("config serializes");
        params["sweep"] = json!(a.sweep);
        let mut out = Output::new("simulate", params, inputs);
        let mut t =
            Table::new(format!("Utilization sweep, {sc} SC @ {mts} MT/s"), &SIM_HEADERS).right(&[1, 2, 3, 4, 5, 6]);
        for (rho, r) in a.sweep.iter().zip(&results) {
            sim_rows(&mut t, &format!("rho={}", fmt3(*rho)), r);
        }
        out.tables.push(t);
        out.json = json!({ "utilizations": a.sweep, "results": results });
        return Ok(out);
    }

    cfg.validate().or_invalid()?;
    let (result, records) = if a.histogram.is_some() {
        let (r, rec) = run_simulation_traced(&cfg).or_invalid()?;
        (r, Some(rec))
    } else {
        (run_simulation(&cfg).or_invalid()?, None)
    };
    let params = serde_json::to_value(&cfg).expect("config serializes");
    let mut out = Output::new("simulate", params, inputs);
    let mut t = Table::new(format!("Queue simulation, {sc} SC @ {mts} MT/s, seed {}", cfg.seed), &SIM_HEADERS)
        .right(&[1, 2, 3, 4, 5, 6]);
    sim_rows(&mut t, &format!("rho={}", fmt3(cfg.utilization())), &result);
    let poisson_per_queue = cfg.subchannel_count == 1 || cfg.routing == Routing::UniformRandom;
    let analytic = if poisson_per_queue {
        let w = analytic_md1_wait(cfg.utilization(), cfg.service_time_ns()).or_invalid()?;
        t.note(format!("M/D/1 reference mean wait: {} ns", fmt3(w)));
        Some(w)
    } else {
        None
    };
    t.note(format!(
        "Service time {} ns per burst; peak concurrent bursts {}.",
        fmt3(cfg.service_time_ns()),
        result.max_concurrent_bursts
    ));
    out.tables.push(t);
    out.json = json!({ "result": result, "md1_wait_ns": analytic });
    if let (Some(path), Some(records)) = (&a.histogram, records) {
        if !(a.bin_ns > 0.0 && a.bin_ns.is_finite()) {
            return Err(Failure::invalid_msg("--bin-ns must be positive"));
        }
        let mut csv = String::from("bin_start_ns,count\n");
        for (start, count) in latency_histogram(&cfg, &records, a.bin_ns) {
            csv.push_str(&format!("{},{count}\n", fmt3(start)));
        }
        out.artifacts.push((path.clone(), csv));
    }
    Ok(out)
}

#[derive(Copy, Clone)]
enum Load {
    Lambda(f64),
    Rho(f64),
}

fn bom(a: &BomArgs) -> CmdResult<Output> {
    let mut inputs = Vec::new();
    let file = load_config(a.config.as_deref(), &mut inputs)?;
    let s = file.bom.clone().unwrap_or_default();
    let generation = match a.generation.clone().or(s.generation) {
        Some(g) => DieGeneration::from_str(&g).or_invalid()?,
        None => DieGeneration::Gb16,
    };
    let default = DiePricing::default();
    let low = a.price_low.or(s.price_low).unwrap_or(default.price_per_die_usd.low);
    let high = a.price_high.or(s.price_high).unwrap_or(default.price_per_die_usd.high);
    let label = if (low, high) == (default.price_per_die_usd.low, default.price_per_die_usd.high) {
        default.generation_label.clone()
    } else {
        "user pricing".to_string()
    };
    let pricing = DiePricing::new(low, high, label).or_invalid()?;
    let dies = a.dies.or(s.dies);
    let report = bom_report(generation, &pricing, dies).or_invalid()?;
    let breakdown = BomBreakdown::published();
    let params = json!({ "generation": generation.to_string(), "dies": dies, "price_low": low, "price_high": high });
    let mut out = Output::new("bom", params, inputs);
    out.tables.push(breakdown.table());
    out.tables.push(report.table());
    out.json = json!({ "breakdown": breakdown, "report": report });
    Ok(out)
}

fn report(a: &ReportArgs) -> CmdResult<Output> {
    let tables =
        match a.table {
            Some(n) => vec![report_table(n)
                .ok_or_else(|| Failure::invalid_msg(format!("table must be 1-{TABLE_COUNT}, got {n}")))?],
            None => all_tables(),
        };
    let params = json!({ "table": a.table, "all": a.table.is_none() });
    let mut out = Output::new("report", params, Vec::new());
    out.json = json!({ "tables": tables.iter().map(|t| json!({
        "title": t.title, "headers": t.headers, "rows": t.rows, "notes": t.notes,
    })).collect::<Vec<_>>() });
    out.tables = tables;
    Ok(out)
}

/// Manifest path for a result file: `<file>.manifest.json`.
pub fn manifest_path_for(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}
