mod common;

use crescendo_core::model_problem::verify_full_op_identity;
use crescendo_core::op_engine::{dyson_residual, mean_solution, solve_full_op};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn final_error(system: &crescendo_core::LinearSystem, measure: &crescendo_core::GaussianMeasure, dt: f64) -> f64 {
    let t = 1.0;
    let traj = solve_full_op(system, measure, t, dt).unwrap();
    let exact = mean_solution(system, measure, t).unwrap();
    let k = measure.split();
    (traj.last() - exact.rows(0, k)).norm()
}

#[test]
fn full_op_is_second_order_on_random_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10 {
        let n = rng.gen_range(2..=5);
        let system = common::random_system(&mut rng, n);
        let measure = common::random_measure(&mut rng, n);
        let coarse = final_error(&system, &measure, 0.02);
        let fine = final_error(&system, &measure, 0.01);
        let order = (coarse / fine).log2();
        assert!((1.8..=2.2).contains(&order), "order {order} ({coarse:e}, {fine:e})");
    }
}

#[test]
fn full_op_on_model_modes() {
    for xi in [1.0, 3.0] {
        let coarse = verify_full_op_identity(0.4, xi, 1.0, 0.02).unwrap();
        let fine = verify_full_op_identity(0.4, xi, 1.0, 0.01).unwrap();
        let order = (coarse / fine).log2();
        assert!((1.8..=2.2).contains(&order), "xi={xi}: {order}");
    }
}

#[test]
fn dyson_identity_on_random_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let n = rng.gen_range(2..=5);
        let system = common::random_system(&mut rng, n);
        let measure = common::random_measure(&mut rng, n);
        let t = rng.gen_range(0.1..2.0);
        assert!(dyson_residual(&system, &measure, t, 1e-3).unwrap() <= 1e-6);
    }
}
