//! Statistical checks of the screen field against the closed-form blocking law.

use irsfactory_core::blockage::{los_probability, sample_field, sample_field_in, BlockageModel, FloorWindow};
use irsfactory_core::geometry::{FactoryLayout, IrsDeployment};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

#[test]
fn whole_floor_screen_count_is_poisson() {
    let layout = FactoryLayout::reference();
    let model = BlockageModel::new(0.2, 2.5, 1.7, 0.5, 0.01, 0.01).unwrap();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(1);
    let n = 10_000;
    let counts: Vec<f64> = (0..n).map(|_| sample_field(&model, &layout, &mut rng).screens.len() as f64).collect();
    let mean = counts.iter().sum::<f64>() / n as f64;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    assert!((mean - 400.0).abs() < 3.0 * 20.0 / 100.0, "mean {mean}");
    assert!((var / 400.0 - 1.0).abs() < 0.1, "variance {var}");
    let field = sample_field(&model, &layout, &mut rng);
    for s in &field.screens {
        assert!((0.5..=1.7).contains(&s.height));
        assert!((0.0..=std::f64::consts::PI).contains(&s.orientation));
        assert!((0.0..=40.0).contains(&s.center[0]) && (0.0..=50.0).contains(&s.center[1]));
    }
}

#[test]
fn single_link_los_frequency_matches_closed_form() {
    let layout = FactoryLayout::reference();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(2);
    for link in 0..4 {
        let density = rng.random_range(0.1..0.6);
        let model = BlockageModel::new(density, 2.5, 1.7, 0.5, 0.01, 0.01).unwrap();
        let dep = IrsDeployment::new(&layout, 8, 960, 3.0, 0.005, 1.7).unwrap();
        let irs = dep.panels[link * 2].position;
        let ue = layout.ue_at(rng.random_range(1.0..19.0), rng.random_range(1.0..49.0));
        let window = FloorWindow::around(&[irs, ue], model.width / 2.0);
        let fields = 20_000;
        let los = (0..fields)
            .filter(|_| sample_field_in(&model, window, &mut rng).count_intersections(irs, ue) == 0)
            .count();
        let p = los_probability(model.expected_blockers(irs.horizontal_distance(ue), 3.0).unwrap());
        let sigma = (p * (1.0 - p) / fields as f64).sqrt();
        let freq = los as f64 / fields as f64;
        assert!((freq - p).abs() < 3.5 * sigma, "link {link}: {freq} vs {p}");
    }
}

#[test]
fn walls_reduce_blocking_near_the_back_wall() {
    // Screens only exist on the floor, so a link hugging a wall sees fewer of them
    // than the unbounded-plane mean predicts.
    let layout = FactoryLayout::reference();
    let model = BlockageModel::new(1.0, 2.5, 1.7, 0.5, 0.01, 0.01).unwrap();
    let dep = IrsDeployment::new(&layout, 1, 960, 4.0, 0.005, 1.7).unwrap();
    let irs = dep.panels[0].position;
    let ue = layout.ue_at(0.2, 40.0);
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(3);
    let fields = 20_000;
    let total: u64 = (0..fields)
        .map(|_| sample_field(&model, &layout, &mut rng).count_intersections(irs, ue) as u64)
        .sum();
    let mean = total as f64 / fields as f64;
    let unbounded = model.expected_blockers(irs.horizontal_distance(ue), 4.0).unwrap();
    assert!(mean < 0.8 * unbounded, "{mean} vs {unbounded}");
}
