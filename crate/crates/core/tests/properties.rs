use ddr5sc::bom::{bom_ratio, module_bom_usd, BomBreakdown, DiePricing};
use ddr5sc::config::{effective_bandwidth_gbs, peak_bandwidth_gbs, transaction_width_bytes, MemoryConfig};
use ddr5sc::interval::Interval;
use ddr5sc::queue::{compare_sc_counts, run_simulation, SimConfig};
use ddr5sc::roofline::{roofline_deficit, Roofline};
use ddr5sc::spd::{decode_byte235, encode_byte235, SpdChannelBusWidth};
use proptest::prelude::*;

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.log10()..hi.log10()).prop_map(|e| 10f64.powf(e))
}

proptest! {
    #[test]
    fn spd_decode_encode_is_identity_on_valid_bytes(b in any::<u8>()) {
        if let Ok(d) = decode_byte235(b) {
            prop_assert_eq!(encode_byte235(&d), b);
        }
    }

    #[test]
    fn spd_every_descriptor_roundtrips(i in 0usize..48) {
        let d = SpdChannelBusWidth::all().nth(i).unwrap();
        prop_assert_eq!(decode_byte235(encode_byte235(&d)).unwrap(), d);
    }

    #[test]
    fn halving_bandwidth_doubles_crossover(p in log_uniform(1e8, 1e14), b in log_uniform(1e8, 1e13)) {
        let full = Roofline::new(p, b).unwrap();
        let half = full.with_bandwidth_scaled(0.5).unwrap();
        let ratio = half.crossover_intensity() / full.crossover_intensity();
        prop_assert!((ratio - 2.0).abs() <= 2.0 * 1e-12);
    }

    #[test]
    fn deficit_bounded_by_bandwidth_reduction(
        p in log_uniform(1e9, 1e13),
        b in log_uniform(1e9, 1e12),
        k in 0.05f64..0.95,
        x in 0.0f64..4.0,
    ) {
        let full = Roofline::new(p, b).unwrap();
        let reduced = full.with_bandwidth_scaled(k).unwrap();
        let i = x * p / b / k;
        let d = roofline_deficit(i, &full, &reduced).unwrap();
        let cap = 1.0 - k;
        prop_assert!(d >= -1e-12 && d <= cap + 1e-12, "d={d} cap={cap}");
        if i <= p / b {
            prop_assert!((d - cap).abs() <= 1e-12);
        }
        if i >= p / (b * k) {
            prop_assert_eq!(d, 0.0);
        }
    }

    #[test]
    fn attainable_monotone(
        p in log_uniform(1e9, 1e13),
        b in log_uniform(1e9, 1e12),
        i in 0.0f64..1e3,
        di in 0.0f64..1e3,
        scale in 1.0f64..10.0,
    ) {
        let r = Roofline::new(p, b).unwrap();
        let base = r.attainable(i).unwrap();
        prop_assert!(r.attainable(i + di).unwrap() >= base);
        prop_assert!(Roofline::new(p, b * scale).unwrap().attainable(i).unwrap() >= base);
        prop_assert!(Roofline::new(p * scale, b).unwrap().attainable(i).unwrap() >= base);
        prop_assert!(base <= p && base <= i * b * (1.0 + 1e-15));
    }

    #[test]
    fn single_sc_halves_peak(channels in 1u32..=4, mts in (1600u32..=8800).prop_map(|m| m / 400 * 400)) {
        let dual = peak_bandwidth_gbs(&MemoryConfig::ddr5(channels, 2, mts)).unwrap();
        let single = peak_bandwidth_gbs(&MemoryConfig::ddr5(channels, 1, mts)).unwrap();
        prop_assert_eq!(single * 2.0, dual);
        let faster = peak_bandwidth_gbs(&MemoryConfig::ddr5(channels, 1, mts + 400)).unwrap();
        prop_assert!(faster > single);
    }

    #[test]
    fn effective_never_exceeds_peak(eff in 0.01f64..=1.0, mts in 1600u32..8800) {
        let c = MemoryConfig::ddr5(1, 2, mts).with_efficiency(eff);
        prop_assert!(effective_bandwidth_gbs(&c).unwrap() <= peak_bandwidth_gbs(&c).unwrap());
    }

    #[test]
    fn bandwidth_aggregates_over_channels(channels in 1u32..=8, mts in 1600u32..8800) {
        let one = peak_bandwidth_gbs(&MemoryConfig::ddr5(1, 2, mts)).unwrap();
        let many = peak_bandwidth_gbs(&MemoryConfig::ddr5(channels, 2, mts)).unwrap();
        prop_assert!((many - one * f64::from(channels)).abs() <= 1e-9 * many);
    }

    #[test]
    fn transaction_width_is_bits_times_burst(units in 1u32..=8, bl in prop::sample::select(vec![8u32, 16, 32])) {
        let bits = 32 * units;
        prop_assert_eq!(transaction_width_bytes(bits, bl).unwrap(), bits / 8 * bl);
    }

    #[test]
    fn bom_ratio_is_scale_invariant(n_sc in 1u32..1000, k in 1u32..50) {
        let n_std = 2 * n_sc;
        prop_assert_eq!(bom_ratio(n_std, n_sc).unwrap(), bom_ratio(k * n_std, k * n_sc).unwrap());
        prop_assert_eq!(bom_ratio(n_std, n_sc).unwrap(), 0.5);
    }

    #[test]
    fn module_bom_scales_with_dies(n in 1u32..64, lo in 0.5f64..10.0, span in 0.0f64..5.0) {
        let pricing = DiePricing::new(lo, lo + span, "test").unwrap();
        let oh = BomBreakdown::published().overhead_fraction();
        let one = module_bom_usd(n, &pricing, &oh).unwrap();
        let two = module_bom_usd(2 * n, &pricing, &oh).unwrap();
        prop_assert!((two.low - 2.0 * one.low).abs() <= 1e-9 * two.low);
        prop_assert!((two.high - 2.0 * one.high).abs() <= 1e-9 * two.high);
        let die_cost = Interval::new(lo, lo + span).scale(f64::from(n));
        prop_assert!(one.low >= die_cost.low && one.high >= die_cost.high);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn one_queue_waits_at_least_as_long_as_two(rho in 0.05f64..0.9, seed in any::<u64>()) {
        let base = SimConfig::new(1, 5600).with_requests(20_000).with_seed(seed);
        let lambda = rho / base.service_time_ns();
        let c = compare_sc_counts(&base, lambda).unwrap();
        prop_assert!(c.single.mean_queue_wait_ns >= c.dual.mean_queue_wait_ns);
        prop_assert!(c.single.mean_total_latency_ns >= c.dual.mean_total_latency_ns);
    }

    #[test]
    fn simulation_is_reproducible(seed in any::<u64>(), sc in 1u32..=2) {
        let cfg = SimConfig::new(sc, 4800).with_requests(10_000).with_seed(seed);
        prop_assert_eq!(run_simulation(&cfg).unwrap(), run_simulation(&cfg).unwrap());
    }

    #[test]
    fn served_work_matches_offered_load(rho in 0.1f64..0.8, seed in any::<u64>()) {
        let cfg = SimConfig::new(1, 5600).with_requests(50_000).with_seed(seed).with_utilization(rho);
        let r = run_simulation(&cfg).unwrap();
        prop_assert_eq!(r.requests_served, 45_000);
        prop_assert!((r.achieved_utilization - rho).abs() < 0.05 * rho.max(0.2));
        prop_assert!(r.mean_total_latency_ns >= cfg.first_access_latency_ns + cfg.service_time_ns());
    }
}
