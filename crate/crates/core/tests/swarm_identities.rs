use firefront::swarm::*;
use proptest::prelude::*;

fn cfg(drones: u32, payload_l: f64, cycle_min: f64) -> PlatformConfig {
    PlatformConfig {
        drones,
        payload_l,
        cycle_min,
        ..PlatformConfig::default()
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn meters_times_cf_is_flow(
        n in 1u32..=500, ld in 1.0..100.0f64, dt in 0.5..60.0f64, cf in 0.1..50.0f64, platforms in 1u32..5,
    ) {
        let c = cfg(n, ld, dt);
        let flow = drone_flow(&c, platforms);
        prop_assert!(rel(flow.flow_l_min, flow.litres_per_hour / 60.0) < 1e-12);
        let m = extinguishable_meters(&c, platforms, cf).unwrap();
        prop_assert!(rel(m * cf, flow.flow_l_min) < 1e-12);
        prop_assert!(rel(required_flow(m, cf), flow.flow_l_min) < 1e-12);
    }

    #[test]
    fn drone_count_round_trip(n in 1u32..=500, ld in 1.0..100.0f64, dt in 0.5..60.0f64, cf in 0.1..50.0f64) {
        let m = extinguishable_meters(&cfg(n, ld, dt), 1, cf).unwrap();
        prop_assert!(rel(required_drones_exact(m, cf, ld, dt), n as f64) < 1e-12);
        prop_assert_eq!(required_drones(m, cf, ld, dt), n as u64);
    }

    #[test]
    fn drone_count_is_monotone(m in 0.0..500.0f64, cf in 0.1..50.0f64, ld in 1.0..100.0f64, dt in 0.5..60.0f64, k in 1.0..3.0f64) {
        let n = required_drones(m, cf, ld, dt);
        prop_assert!(required_drones(m * k, cf, ld, dt) >= n);
        prop_assert!(required_drones(m, cf * k, ld, dt) >= n);
        prop_assert!(required_drones(m, cf, ld, dt * k) >= n);
        prop_assert!(required_drones(m, cf, ld * k, dt) <= n);
    }
}
