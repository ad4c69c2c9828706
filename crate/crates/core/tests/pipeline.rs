use std::sync::Arc;
use std::time::Duration;

use lockup_core::config::{parse_scenario, RoadPreset, ScenarioFile, VariantKey};
use lockup_core::ndob::ObserverForm;
use lockup_core::output::{read_csv, write_run, RunManifest};
use lockup_core::sim::{run_scenario, Termination};
use lockup_core::traction::{BoundedDisturbance, Signal};
use proptest::prelude::*;

fn run(config: &ScenarioFile) -> lockup_core::sim::ScenarioResult {
    run_scenario(&config.build("pipeline").unwrap()).unwrap()
}

#[test]
fn csv_and_manifest_reproduce_metrics_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let config = ScenarioFile::default();
    let result = run(&config);
    assert!(result.metrics.success);
    let files = write_run(dir.path(), &config, &result, Duration::from_millis(3)).unwrap();

    let samples = read_csv(&files.csv).unwrap();
    assert_eq!(samples, result.samples);
    let manifest = RunManifest::read(&files.manifest).unwrap();
    let recomputed = manifest.recompute_metrics(&samples);
    let bits = |x: Option<f64>| x.map(f64::to_bits);
    assert_eq!(
        bits(recomputed.time_to_lockup),
        bits(manifest.metrics.time_to_lockup)
    );
    assert_eq!(
        bits(recomputed.settling_margin),
        bits(manifest.metrics.settling_margin)
    );
    assert_eq!(
        recomputed.final_v.to_bits(),
        manifest.metrics.final_v.to_bits()
    );
    assert_eq!(
        recomputed.peak_command.to_bits(),
        manifest.metrics.peak_command.to_bits()
    );
    assert_eq!(manifest.config, config);
    assert_eq!(manifest.rows, samples.len());
    assert_eq!(manifest.termination, Termination::SustainedLockup);
    assert_eq!(manifest.csv, std::path::Path::new("pipeline.csv"));
}

#[test]
fn time_limit_gives_one_row_per_step() {
    let f = parse_scenario("[sim]\nt_max = 0.001\n").unwrap();
    let r = run(&f);
    assert_eq!(r.samples.len(), 10);
    assert_eq!(r.termination, Termination::TimeLimit);
    assert_eq!(r.samples[9].t, 9.0 * 1e-4);
}

#[test]
fn reruns_are_bit_identical() {
    let f = ScenarioFile::default().with_road(RoadPreset::WetAsphalt);
    assert_eq!(run(&f), run(&f));
}

#[test]
fn low_initial_speed_ends_at_the_floor() {
    let mut f = ScenarioFile::default();
    f.attack.variant = VariantKey::Constant;
    f.sim.v0 = 2.0;
    let r = run(&f);
    assert_eq!(r.termination, Termination::SpeedFloor);
    assert!(r.samples.last().unwrap().v > f.sim.v_floor);
}

#[test]
fn disturbance_beyond_its_bound_fails_the_run() {
    let f = ScenarioFile::default();
    let mut sc = f.build("rogue").unwrap();
    sc.plant.disturbances.force = BoundedDisturbance::new(
        "force",
        Signal::Custom(Arc::new(|t, _| if t > 0.01 { 500.0 } else { 0.0 })),
        100.0,
    )
    .unwrap();
    let r = run_scenario(&sc).unwrap();
    assert!(r.failed(), "{:?}", r.termination);
    assert!(!r.samples.is_empty());
}

#[test]
fn published_observer_form_runs() {
    let mut f = ScenarioFile::default();
    f.ndob.form = ObserverForm::Published;
    let r = run(&f);
    assert!(!r.failed());
}

#[test]
fn brake_clamp_bounds_applied_torque() {
    let f = parse_scenario("[actuator]\nclamp_max = 5.0\n").unwrap();
    let r = run(&f);
    assert!(r
        .samples
        .iter()
        .all(|s| (0.0..=5.0).contains(&s.torque_applied)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trajectories_stay_in_the_braking_domain(
        v0 in 5.0f64..45.0,
        t_c in 0.2f64..3.0,
        wet in any::<bool>(),
        ndob in any::<bool>(),
        omega_coords in any::<bool>(),
    ) {
        let road = if wet { RoadPreset::WetAsphalt } else { RoadPreset::DryAsphalt };
        let mut f = ScenarioFile::default().with_road(road);
        f.attack.t_c = t_c;
        f.attack.use_ndob = Some(ndob);
        f.sim.v0 = v0;
        f.sim.t_max = 0.5;
        if omega_coords {
            f.sim.coordinate_system = lockup_core::sim::CoordinateSystem::VOmega;
        }
        let r = run(&f);
        prop_assert!(!r.failed(), "{:?}", r.termination);
        let mut prev_v = f64::INFINITY;
        for s in &r.samples {
            prop_assert!((0.0..=1.0).contains(&s.lambda));
            prop_assert!(s.omega >= 0.0);
            prop_assert!(s.v > f.sim.v_floor && s.v <= prev_v);
            prop_assert!((s.e_l - (s.lambda - 1.0)).abs() == 0.0);
            prev_v = s.v;
        }
    }

    #[test]
    fn scenario_documents_round_trip(
        t_c in 0.05f64..0.99,
        dt_exp in 4u32..6,
        v0 in 5.0f64..50.0,
        bound_v in 0.0f64..500.0,
        variant in 0usize..4,
    ) {
        let mut f = ScenarioFile::default();
        f.attack.variant = [VariantKey::Prop1, VariantKey::Prop2, VariantKey::Prop3, VariantKey::Constant][variant];
        f.attack.t_c = t_c;
        f.attack.use_ndob = Some(variant == 0);
        f.sim.dt = 10f64.powi(-(dt_exp as i32));
        f.sim.v0 = v0;
        f.disturbance.bound_v = bound_v;
        let text = f.to_toml();
        let back = parse_scenario(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_toml(), text);
    }
}

#[test]
fn reference_scenario_file_lists_the_defaults() {
    let path =
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/reference.toml");
    let text = std::fs::read_to_string(path).unwrap();
    let parsed = parse_scenario(&text).unwrap();
    assert_eq!(
        parsed,
        ScenarioFile::default().with_road(RoadPreset::DryAsphalt)
    );
    assert_eq!(
        parsed.road().unwrap(),
        ScenarioFile::default().road().unwrap()
    );
}
