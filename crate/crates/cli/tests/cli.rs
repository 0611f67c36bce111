use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn ddr5sc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddr5sc")).args(args).env("DDR5SC_NO_COLOR", "1").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json stdout")
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares against the checked-in file; `UPDATE_GOLDEN=1` rewrites it.
fn assert_golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

#[test]
fn report_all_text_matches_golden() {
    let o = ddr5sc(&["report", "--all"]);
    assert!(o.status.success());
    assert_golden("report_all.txt", &stdout(&o));
}

#[test]
fn report_all_csv_matches_golden() {
    let o = ddr5sc(&["report", "--all", "--format", "csv"]);
    assert!(o.status.success());
    assert_golden("report_all.csv", &stdout(&o));
}

#[test]
fn report_defaults_to_all_tables_in_order() {
    let text = stdout(&ddr5sc(&["report"]));
    let titles: Vec<&str> = text.lines().filter(|l| l.starts_with("Table ")).collect();
    assert_eq!(titles.len(), 5);
    for (i, t) in titles.iter().enumerate() {
        assert!(t.starts_with(&format!("Table {}.", i + 1)));
    }
    assert_eq!(text, stdout(&ddr5sc(&["report", "--all"])));
}

#[test]
fn report_single_tables_are_slices_of_all() {
    let all = stdout(&ddr5sc(&["report", "--all"]));
    for n in 1..=5 {
        let one = stdout(&ddr5sc(&["report", "--table", &n.to_string()]));
        assert!(all.contains(&one), "table {n} not found in --all");
    }
    assert_eq!(ddr5sc(&["report", "--table", "6"]).status.code(), Some(2));
}

#[test]
fn spd_decode_accepts_hex_binary_and_decimal() {
    for lit in ["0x02", "0b00000010", "2", "0X02"] {
        let o = ddr5sc(&["spd", "decode", lit]);
        assert!(o.status.success(), "{lit}");
        let v = json(&o);
        assert_eq!(v["sub_channels"], 1);
        assert_eq!(v["primary_width_bits"], 32);
        assert_eq!(v["module_class"], "SingleSC");
        assert_eq!(v["byte"], "0x02");
    }
    let v = json(&ddr5sc(&["spd", "decode", "0x22"]));
    assert_eq!(v["sub_channels"], 2);
    assert_eq!(v["module_class"], "StandardDualSC");
}

#[test]
fn spd_decode_errors_exit_2() {
    let reserved = ddr5sc(&["spd", "decode", "0xE2"]);
    assert_eq!(reserved.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&reserved.stderr).contains("reserved"));
    assert_eq!(ddr5sc(&["spd", "decode", "0x1ff"]).status.code(), Some(2));
    assert_eq!(ddr5sc(&["spd", "decode", "zz"]).status.code(), Some(2));
}

#[test]
fn spd_decode_image() {
    let dir = tempfile::tempdir().unwrap();
    let mut image = vec![0u8; 512];
    image[235] = 0x22;
    let path = dir.path().join("dump.bin");
    std::fs::write(&path, &image).unwrap();
    let v = json(&ddr5sc(&["spd", "decode", "--image", path.to_str().unwrap()]));
    assert_eq!(v["module_class"], "StandardDualSC");

    let short = dir.path().join("short.bin");
    std::fs::write(&short, [0u8; 100]).unwrap();
    assert_eq!(ddr5sc(&["spd", "decode", "--image", short.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.bin");
    assert_eq!(ddr5sc(&["spd", "decode", "--image", missing.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn spd_encode() {
    let o = ddr5sc(&["spd", "encode", "--sub-channels", "2", "--width", "32"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0x22\n");
    let o = ddr5sc(&["spd", "encode", "--sub-channels", "1", "--width", "32", "--ecc-bits", "8"]);
    let byte = stdout(&o);
    let v = json(&ddr5sc(&["spd", "decode", byte.trim()]));
    assert_eq!(v["ecc_bits"], 8);
    assert_eq!(ddr5sc(&["spd", "encode", "--sub-channels", "3", "--width", "32"]).status.code(), Some(2));
}

#[test]
fn post_am5_single_sc_is_a_boot_failure() {
    let o = ddr5sc(&["post", "--platform", "am5", "--slots", "A=single-sc"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("TrainingFailure"));
    let v = json(&ddr5sc(&["post", "--platform", "am5", "--slots", "A=single-sc", "--format", "json"]));
    assert_eq!(v["result"]["outcome"], "TrainingFailure");
    assert!(v["result"]["failure_reason"].as_str().unwrap().contains("unterminated DQ half"));
}

#[test]
fn post_arrow_lake_single_sc_boots_32_bit() {
    let o = ddr5sc(&["post", "--platform", "arrow-lake", "--slots", "A=single-sc", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["outcome"], "BootOk");
    assert_eq!(v["result"]["total_active_bus_bits"], 32);
}

#[test]
fn post_accepts_spd_bytes_and_reports_bandwidth() {
    let o = ddr5sc(&["post", "--platform", "intel-pre-arl", "--slots", "A=0x02,B=0x22", "--mts", "5600"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("96-bit active bus"), "{text}");
    assert!(text.contains("active peak bandwidth: 67.2 GB/s"));
    assert_eq!(ddr5sc(&["post", "--platform", "am5"]).status.code(), Some(3));
    assert_eq!(ddr5sc(&["post", "--platform", "z790"]).status.code(), Some(2));
}

#[test]
fn post_flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"population": {"platform": "am5", "slots": {"A": "single-sc"}}}"#).unwrap();
    let c = cfg.to_str().unwrap();
    assert_eq!(ddr5sc(&["post", "--config", c]).status.code(), Some(3));
    assert_eq!(ddr5sc(&["post", "--config", c, "--platform", "arrow-lake"]).status.code(), Some(0));
    assert_eq!(ddr5sc(&["post", "--config", c, "--slots", "A=standard"]).status.code(), Some(0));
}

#[test]
fn matrix_json_covers_every_platform() {
    let v = json(&ddr5sc(&["matrix", "--format", "json"]));
    let platforms = v["platforms"].as_array().unwrap();
    assert_eq!(platforms.len(), 3);
    for p in platforms {
        assert_eq!(p["cells"].as_array().unwrap().len(), 9);
    }
}

#[test]
fn simulate_is_deterministic() {
    let a = ddr5sc(&["simulate", "--sc", "1", "--rho", "0.5", "--seed", "7", "--requests", "20000"]);
    let b = ddr5sc(&["simulate", "--sc", "1", "--rho", "0.5", "--seed", "7", "--requests", "20000"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = ddr5sc(&["simulate", "--sc", "1", "--rho", "0.5", "--seed", "8", "--requests", "20000"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn simulate_rejects_unstable_load() {
    assert_eq!(ddr5sc(&["simulate", "--rho", "0.99"]).status.code(), Some(2));
    assert_eq!(ddr5sc(&["simulate", "--requests", "10"]).status.code(), Some(2));
}

#[test]
fn simulate_compare_reports_band_without_asserting() {
    let o = ddr5sc(&["simulate", "--compare", "--rho", "0.7", "--requests", "20000", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert!(v["single"]["mean_queue_wait_ns"].as_f64().unwrap() >= v["dual"]["mean_queue_wait_ns"].as_f64().unwrap());
    assert_eq!(v["published_band_pct"], serde_json::json!([15.0, 25.0]));
}

#[test]
fn simulate_histogram_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let hist = dir.path().join("hist.csv");
    let o = ddr5sc(&["simulate", "--requests", "20000", "--histogram", hist.to_str().unwrap()]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&hist).unwrap();
    assert!(csv.starts_with("bin_start_ns,count\n"));
    let total: u64 = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 18_000);
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("hist.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["subcommand"], "simulate");
}

#[test]
fn output_file_carries_manifest_with_input_digest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.json");
    let body = r#"{"simulation": {"seed": 3, "duration_requests": 20000, "utilization": 0.4}}"#;
    std::fs::write(&cfg, body).unwrap();
    let out = dir.path().join("result.txt");
    let o = ddr5sc(&["simulate", "--config", cfg.to_str().unwrap(), "--seed", "7", "--output", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("result.txt.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["toolkit"], "ddr5sc");
    assert_eq!(manifest["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(manifest["parameters"]["seed"], 7);
    assert_eq!(manifest["parameters"]["duration_requests"], 20000);
    assert_eq!(manifest["inputs"][0]["sha256"], hex::encode(Sha256::digest(body.as_bytes())));

    let direct = ddr5sc(&["simulate", "--requests", "20000", "--rho", "0.4", "--seed", "7"]);
    assert_eq!(std::fs::read(&out).unwrap(), direct.stdout);
}

#[test]
fn bad_config_is_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, "{ not json").unwrap();
    assert_eq!(ddr5sc(&["bom", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
    std::fs::write(&cfg, r#"{"unknown_section": 1}"#).unwrap();
    assert_eq!(ddr5sc(&["bom", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(ddr5sc(&["bom", "--config", "/nonexistent/cfg.json"]).status.code(), Some(1));
}

#[test]
fn config_compare_reads_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"configs": [
        {"label": "laptop", "standard": "DDR5", "dimm_count": 1, "channels": 1,
         "populated_subchannels_per_channel": 1, "bus_bits_per_unit": 32, "burst_length": 16, "data_rate_mts": 5600}
    ]}"#,
    )
    .unwrap();
    let v = json(&ddr5sc(&["config", "compare", "--config", cfg.to_str().unwrap(), "--format", "json"]));
    let row = &v["rows"][0];
    assert_eq!(row["label"], "laptop");
    assert_eq!(row["tx_width_bytes"], 64);
    assert_eq!(row["peak_gbs"], 22.4);
    let text = stdout(&ddr5sc(&["config", "compare"]));
    assert!(text.contains("DDR4-3200"));
}

#[test]
fn roofline_subcommands() {
    let v = json(&ddr5sc(&[
        "roofline",
        "classify",
        "--intensity",
        "0.1",
        "--peak-flops",
        "1e11",
        "--sc",
        "1",
        "--use-peak",
        "--format",
        "json",
    ]));
    assert_eq!(v["rows"][0]["bandwidth_limited"], true);
    assert!((v["crossover_intensity"].as_f64().unwrap() - 1e11 / 22.4e9).abs() < 1e-9);

    let v = json(&ddr5sc(&["roofline", "deficit", "--intensity", "0.01", "--format", "json"]));
    assert_eq!(v["rows"][0]["deficit"], 0.5);

    let v = json(&ddr5sc(&["roofline", "deficit", "--workload", "POS / kiosk / embedded", "--format", "json"]));
    assert_eq!(v["tabulated_deficit_pct"]["high"], 3.0);
    assert_eq!(ddr5sc(&["roofline", "deficit", "--workload", "Crysis"]).status.code(), Some(2));

    let v = json(&ddr5sc(&["roofline", "igpu", "--format", "json"]));
    let verdicts: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["verdict"].as_str().unwrap()).collect();
    assert_eq!(verdicts, ["insufficient", "insufficient", "sufficient"]);

    let text = stdout(&ddr5sc(&["roofline", "inversion"]));
    assert!(text.contains("inversion = true") && text.contains("inversion = false"));
}

#[test]
fn roofline_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("plot.csv");
    let o = ddr5sc(&["roofline", "deficit", "--intensity", "1", "--emit-plot-data", plot.to_str().unwrap()]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&plot).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "intensity_flop_per_byte,attainable_full_flops,attainable_reduced_flops");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 101);
    assert!(rows.iter().all(|r| r[2] <= r[1]));
    assert!(rows.windows(2).all(|w| w[1][1] >= w[0][1]));
}

#[test]
fn bom_flags() {
    let v = json(&ddr5sc(&["bom", "--generation", "32gb", "--format", "json"]));
    assert_eq!(v["report"]["standard"]["die_count"], 4);
    assert_eq!(v["report"]["single_sc"]["die_count"], 2);
    assert_eq!(v["report"]["die_ratio"], 0.5);
    let v = json(&ddr5sc(&["bom", "--price-low", "2", "--price-high", "2", "--format", "json"]));
    assert_eq!(v["report"]["pricing"]["price_per_die_usd"]["low"], 2.0);
    assert_eq!(ddr5sc(&["bom", "--dies", "7"]).status.code(), Some(2));
    assert_eq!(ddr5sc(&["bom", "--price-low", "5", "--price-high", "4"]).status.code(), Some(2));
}

#[test]
fn no_color_output_is_plain() {
    let o = ddr5sc(&["post", "--platform", "arrow-lake", "--slots", "A=single-sc"]);
    assert!(!stdout(&o).contains('\u{1b}'));
}

#[test]
fn classify_reads_workloads_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("w.json");
    std::fs::write(&cfg, r#"{"roofline": {"peak_compute_flops": 2e11},
        "workloads": [
          {"name": "stream", "arithmetic_intensity": 0.25, "bw_sensitivity": "High", "deficit_range": {"low": 40, "high": 60}},
          {"name": "dgemm", "arithmetic_intensity": 50, "bw_sensitivity": "Low", "deficit_range": {"low": 0, "high": 5}}
        ]}"#).unwrap();
    let v = json(&ddr5sc(&["roofline", "classify", "--config", cfg.to_str().unwrap(), "--format", "json"]));
    assert_eq!(v["rows"][0]["bandwidth_limited"], true);
    assert_eq!(v["rows"][1]["bandwidth_limited"], false);
    assert_eq!(v["rows"][1]["attainable_flops"], 2e11);

    std::fs::write(&cfg, r#"{"workloads": [{"name": "bad", "arithmetic_intensity": 1,
        "bw_sensitivity": "Low", "deficit_range": {"low": 50, "high": 120}}]}"#).unwrap();
    assert_eq!(ddr5sc(&["roofline", "classify", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}
