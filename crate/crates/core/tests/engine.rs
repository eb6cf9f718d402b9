//! End-to-end checks of the Monte Carlo engines against closed forms, against each
//! other, and against the determinism contract.

use irsfactory_core::analytic::{expected_snr_void, AnalyticInputs};
use irsfactory_core::channel::path_loss_direct;
use irsfactory_core::engine::{
    estimate_point, run_points, EngineMode, MetricsReport, Metric, SampleBudget, ScenarioConfig, Substream,
};
use irsfactory_core::geometry::{ue_subgrid, Point3};
use irsfactory_core::units::linear_to_db;
use proptest::prelude::*;

fn scenario(num_irs: usize, density: f64, budget: SampleBudget) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::reference(num_irs, 4.0, density).unwrap();
    cfg.budget = budget;
    cfg
}

#[test]
fn blockage_free_direct_link_matches_path_loss() {
    let cfg = scenario(0, 0.0, SampleBudget::from_total(200_000));
    let ue = cfg.layout.ue_at(10.0, 25.0);
    let p = estimate_point(&cfg, ue, Substream::new(1, 0)).unwrap();
    let d0 = ue.distance(cfg.layout.bs_position());
    assert!((d0 - 10.96585609973065).abs() < 1e-12);
    let want = cfg.radio.transmit_snr()
        * path_loss_direct(d0, cfg.radio.tx_gain, cfg.radio.rx_gain, cfg.radio.wavelength)
        * cfg.blockage.shelf_loss;
    let z = (p.snr.mean - want) / p.snr.std_error;
    assert!(z.abs() < 4.0, "z = {z}");
}

#[test]
fn dense_blockage_snr_close_to_closed_form_at_centre() {
    let cfg = scenario(8, 1.0, SampleBudget::from_total(100_000));
    let ue = cfg.layout.ue_at(13.65, 25.0);
    let p = estimate_point(&cfg, ue, Substream::new(2, 0)).unwrap();
    let closed = expected_snr_void(
        &AnalyticInputs::new(&cfg.layout, &cfg.deployment, &cfg.blockage, &cfg.radio, ue).unwrap(),
    );
    let gap = linear_to_db(closed) - p.snr_db();
    assert!(gap.abs() < 1.0, "gap {gap} dB");
}

#[test]
fn engines_agree_at_an_interior_point() {
    let mut cfg = scenario(4, 0.2, SampleBudget::from_total(200_000));
    let ue = cfg.layout.ue_at(12.0, 25.0);
    let geo = estimate_point(&cfg, ue, Substream::new(3, 0)).unwrap();
    cfg.mode = EngineMode::Enumerated;
    let en = estimate_point(&cfg, ue, Substream::new(4, 0)).unwrap();
    for (a, b) in [(geo.snr, en.snr), (geo.fb_capacity, en.fb_capacity)] {
        let se = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
        assert!((a.mean - b.mean).abs() < 3.0 * se, "{} vs {} (se {se})", a.mean, b.mean);
    }
}

#[test]
fn standard_error_scales_with_sample_count() {
    let ue = Point3::new(6.0, 14.0, 0.5);
    let run = |drops| {
        let cfg = scenario(8, 0.2, SampleBudget { drops, draws: 20 });
        estimate_point(&cfg, ue, Substream::new(5, 0)).unwrap()
    };
    let small = run(2_000);
    let large = run(8_000);
    for (a, b) in [(small.snr, large.snr), (small.fb_capacity, large.fb_capacity)] {
        let ratio = a.std_error / b.std_error;
        assert!((1.6..2.5).contains(&ratio), "ratio {ratio}");
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let cfg = scenario(4, 0.5, SampleBudget { drops: 300, draws: 7 });
    let pts = ue_subgrid(&cfg.layout, 3, 2).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_points(&cfg, &pts).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
    let mut enumerated = cfg.clone();
    enumerated.mode = EngineMode::Enumerated;
    let pool = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    let a = pool(1).install(|| run_points(&enumerated, &pts).unwrap());
    let b = pool(5).install(|| run_points(&enumerated, &pts).unwrap());
    assert_eq!(a, b);
}

#[test]
fn seeds_change_results() {
    let mut cfg = scenario(4, 0.5, SampleBudget { drops: 50, draws: 5 });
    let ue = cfg.layout.ue_at(5.0, 5.0);
    let a = estimate_point(&cfg, ue, Substream::new(cfg.seed, 0)).unwrap();
    cfg.seed = 99;
    let b = estimate_point(&cfg, ue, Substream::new(cfg.seed, 0)).unwrap();
    assert_ne!(a.snr.mean, b.snr.mean);
}

#[test]
fn distributed_irs_cut_outage_at_a_weak_point() {
    let budget = SampleBudget::from_total(100_000);
    let ue = Point3::new(1.0, 1.0, 0.5);
    let baseline = estimate_point(&scenario(0, 0.2, budget), ue, Substream::new(6, 0)).unwrap();
    let with_irs = estimate_point(&scenario(16, 0.2, budget), ue, Substream::new(6, 0)).unwrap();
    assert!(baseline.outage.mean > 0.05, "{}", baseline.outage.mean);
    assert!(with_irs.outage.mean < baseline.outage.mean / 100.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn metrics_stay_in_range(
        m in prop::sample::select(vec![0usize, 1, 4, 8]),
        density in 0.0f64..1.5,
        h in 2.0f64..5.0,
        pt in -40.0f64..40.0,
        enumerated in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let mut cfg = ScenarioConfig::reference(m, h, density).unwrap();
        cfg.radio.tx_power_dbm = pt;
        cfg.budget = SampleBudget { drops: 20, draws: 5 };
        cfg.seed = seed;
        if enumerated {
            cfg.mode = EngineMode::Enumerated;
        }
        let pts = ue_subgrid(&cfg.layout, 2, 3).unwrap();
        let report = MetricsReport::from_points(run_points(&cfg, &pts).unwrap()).unwrap();
        for p in &report.points {
            prop_assert!((0.0..=1.0).contains(&p.outage.mean));
            prop_assert!(p.fb_capacity.mean >= 0.0);
            prop_assert!(p.snr.mean > 0.0);
            prop_assert!(p.snr.std_error >= 0.0);
        }
        for metric in Metric::ALL {
            let s = report.summary_of(metric);
            prop_assert!(s.min <= s.mean && s.mean <= s.max);
        }
    }
}
