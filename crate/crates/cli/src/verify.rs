//! Randomized and deterministic verification suites with fixed seeds.

use crescendo_core::model_problem::verify_full_op_identity;
use crescendo_core::moments::{
    advection_matrix, build_matrices, closure_coefficients, correction_factor, ClosureFamily, ClosureSpec,
};
use crescendo_core::op_engine::{
    dyson_residual, foop_generator, mean_solution, soop_generator, solve_full_op, CMatrix, MemoryPolicy,
};
use crescendo_core::solver1d::{init_paper_scenario, slab_simulation};
use crescendo_core::spatial_moments::{verify_theorem, TheoremSetup};
use crescendo_core::{GaussianMeasure, LinearSystem};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outcome of one suite: how many cases passed and the worst observed value.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    pub worst: f64,
    pub detail: String,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {}/{} passed, worst {:.3e} ({})",
            self.name, self.passed, self.total, self.worst, self.detail
        )
    }
}

fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    &m * m.transpose() + DMatrix::identity(n, n) * 0.5
}

fn random_measure(rng: &mut ChaCha8Rng, n: usize) -> GaussianMeasure {
    let split = rng.gen_range(1..n);
    GaussianMeasure::centered(random_spd(rng, n), split).expect("shifted Gram matrix is SPD")
}

fn random_system(rng: &mut ChaCha8Rng, n: usize) -> LinearSystem {
    let r = DMatrix::from_fn(n, n, |i, j| rng.gen_range(-1.0..1.0) - if i == j { 1.0 } else { 0.0 });
    let u0 = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
    LinearSystem::from_real(&r, &u0).expect("square generator")
}

/// `E^2 = E`, `F^2 = F`, `EF = FE = 0`, `E + F = I` on random SPD measures.
pub fn projection_suite(seed: u64, count: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut worst = 0.0f64;
    for _ in 0..count {
        let n = rng.gen_range(2..=6);
        let p = random_measure(&mut rng, n).projection_pair();
        let id = DMatrix::<f64>::identity(n, n);
        let defect = [
            (&p.e * &p.e - &p.e).amax(),
            (&p.f * &p.f - &p.f).amax(),
            (&p.e * &p.f).amax(),
            (&p.f * &p.e).amax(),
            (&p.e + &p.f - id).amax(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        worst = worst.max(defect);
        passed += (defect <= 1e-12) as usize;
    }
    SuiteResult {
        name: "projection",
        passed,
        total: count,
        worst,
        detail: "max entry defect, tolerance 1e-12".into(),
    }
}

/// Dyson identity residual with quadrature step `1e-3`.
pub fn dyson_suite(seed: u64, count: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut worst = 0.0f64;
    for _ in 0..count {
        let n = rng.gen_range(2..=5);
        let system = random_system(&mut rng, n);
        let measure = random_measure(&mut rng, n);
        let t = rng.gen_range(0.1..=2.0);
        let r = dyson_residual(&system, &measure, t, 1e-3).unwrap_or(f64::INFINITY);
        worst = worst.max(r);
        passed += (r <= 1e-6) as usize;
    }
    SuiteResult {
        name: "dyson",
        passed,
        total: count,
        worst,
        detail: "Frobenius residual, tolerance 1e-6".into(),
    }
}

fn full_op_error(system: &LinearSystem, measure: &GaussianMeasure, dt: f64) -> f64 {
    let t = 1.0;
    let k = measure.split();
    match (solve_full_op(system, measure, t, dt), mean_solution(system, measure, t)) {
        (Ok(traj), Ok(exact)) => (traj.last() - exact.rows(0, k)).norm(),
        _ => f64::INFINITY,
    }
}

/// Observed order of the full-OP integrator between `dt = 0.02` and `0.01`,
/// on random systems and on model-problem Fourier modes. Each case passes
/// when the order lies in `[1.8, 2.2]`; `worst` is the largest distance from 2.
pub fn full_op_suite(seed: u64, count: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut orders = Vec::new();
    for _ in 0..count {
        let n = rng.gen_range(2..=5);
        let system = random_system(&mut rng, n);
        let measure = random_measure(&mut rng, n);
        let coarse = full_op_error(&system, &measure, 0.02);
        let fine = full_op_error(&system, &measure, 0.01);
        orders.push((coarse / fine).log2());
    }
    for xi in [1.0, 2.0, 3.0] {
        let coarse = verify_full_op_identity(0.5, xi, 1.0, 0.02).unwrap_or(f64::INFINITY);
        let fine = verify_full_op_identity(0.5, xi, 1.0, 0.01).unwrap_or(f64::NAN);
        orders.push((coarse / fine).log2());
    }
    let passed = orders.iter().filter(|o| (1.8..=2.2).contains(*o)).count();
    let worst = orders.iter().map(|o| (o - 2.0).abs()).fold(0.0, f64::max);
    let (lo, hi) = orders
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &o| (a.min(o), b.max(o)));
    SuiteResult {
        name: "full_op",
        passed,
        total: orders.len(),
        worst,
        detail: format!("observed orders in [{lo:.3}, {hi:.3}]"),
    }
}

/// Fourier symbol `-i xi B - C` of the moment system truncated to `size` moments.
pub fn moment_mode_system(size: usize, kappa: f64, sigma: f64, xi: f64) -> LinearSystem {
    let mut u0 = DVector::from_element(size, Complex64::from(0.0));
    u0[0] = Complex64::from(1.0);
    LinearSystem::new(moment_mode_symbol(size, kappa, sigma, xi), u0).expect("square generator")
}

fn moment_mode_symbol(size: usize, kappa: f64, sigma: f64, xi: f64) -> CMatrix {
    let b = advection_matrix(size - 1);
    let mut r = CMatrix::zeros(size, size);
    for i in 0..size {
        for j in 0..size {
            r[(i, j)] = Complex64::new(0.0, -xi) * b[(i, j)];
        }
        r[(i, i)] -= if i == 0 { kappa } else { kappa + sigma };
    }
    r
}

/// Closure equivalences for `N = 0..=5`: a diagonal measure turns first-order
/// prediction into P_N, the constant-memory second-order correction is the
/// diffusion `theta = (N+1)^2 / ((2N+1)(2N+3)(kappa+sigma))`, and `N = 0`
/// gives `1 / (3 (kappa + sigma))`.
pub fn closure_equivalence_suite(kappa: f64, sigma: f64) -> SuiteResult {
    let tau = 1.0 / (kappa + sigma);
    let xi = 2.7;
    let mut passed = 0;
    let mut total = 0;
    let mut worst = 0.0f64;
    let mut check = |defect: f64, tol: f64| {
        total += 1;
        worst = worst.max(defect);
        passed += (defect <= tol) as usize;
    };
    for order in 0..=5usize {
        let size = order + 3;
        let system = moment_mode_system(size, kappa, sigma, xi);
        let measure = GaussianMeasure::diagonal(&vec![1.0; size], order + 1).expect("unit variances");

        let foop = foop_generator(&system, &measure).expect("valid split");
        let truncated = moment_mode_symbol(order + 1, kappa, sigma, xi);
        check((foop - truncated).norm(), 0.0);

        let soop = soop_generator(&system, &measure, tau, 1.0, MemoryPolicy::Constant).expect("positive tau");
        let foop = foop_generator(&system, &measure).expect("valid split");
        let correction = soop - foop;
        let theta = -correction[(order, order)].re / (xi * xi);
        let n = order as f64;
        let expected = (n + 1.0).powi(2) / ((2.0 * n + 1.0) * (2.0 * n + 3.0) * (kappa + sigma));
        let mut rest = correction.clone();
        rest[(order, order)] = Complex64::from(0.0);
        let off_diagonal = rest.norm() + correction[(order, order)].im.abs();
        check(((theta - expected) / expected).abs() + off_diagonal, 1e-14);

        let matrices = build_matrices(order, kappa, sigma, 0.0).expect("nonnegative coefficients");
        let coeffs = closure_coefficients(
            &ClosureSpec::new(ClosureFamily::DiffusionCorrection, order),
            matrices.absorption(),
            matrices.scattering(),
        )
        .expect("positive total cross section");
        check(((coeffs.theta(0.0, 0) - expected) / expected).abs(), 1e-14);
        check((correction_factor(order) * tau - expected).abs() / expected, 1e-14);
    }
    let matrices = build_matrices(0, kappa, sigma, 0.0).expect("nonnegative coefficients");
    let diffusion = closure_coefficients(
        &ClosureSpec::new(ClosureFamily::Diffusion, 0),
        matrices.absorption(),
        matrices.scattering(),
    )
    .expect("positive total cross section");
    let classical = 1.0 / (3.0 * (kappa + sigma));
    check(((diffusion.theta(0.0, 0) - classical) / classical).abs(), 1e-15);
    SuiteResult {
        name: "closure_equivalence",
        passed,
        total,
        worst,
        detail: "FOOP vs P_N, SOOP theta vs closed form".into(),
    }
}

/// Moment preservation of P_N on the slab benchmark at `t = 0.4`, relative
/// tolerance `1e-4` for `m^0_0 .. m^{N+1}_0`.
pub fn theorem_suite(n_cells: usize, orders: &[usize]) -> SuiteResult {
    let mut passed = 0;
    let mut total = 0;
    let mut worst = 0.0f64;
    for &order in orders {
        let setup = TheoremSetup {
            spec: ClosureSpec::new(ClosureFamily::Pn, order),
            kappa: 1.5,
            sigma: 1.5,
            cfl: 0.8,
            t: 0.4,
            x0: 0.5,
        };
        let initial = init_paper_scenario(order + 1, n_cells).expect("valid grid");
        match verify_theorem(&initial, &setup) {
            Ok(devs) => {
                for d in devs {
                    total += 1;
                    worst = worst.max(d.relative);
                    passed += (d.relative <= 1e-4) as usize;
                }
            }
            Err(_) => {
                total += 1;
                worst = f64::INFINITY;
            }
        }
    }
    SuiteResult {
        name: "moment_preservation",
        passed,
        total,
        worst,
        detail: format!("P_N for N in {orders:?}, relative tolerance 1e-4"),
    }
}

/// `sum u_0 dx` conserved to `1e-12` per step with `kappa = 0` for every family.
pub fn conservation_suite(n_cells: usize, steps: usize) -> SuiteResult {
    let mut passed = 0;
    let mut total = 0;
    let mut worst = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for family in ClosureFamily::ALL {
        for order in [0usize, 1, 3] {
            let spec = if family == ClosureFamily::GeneralLinear {
                ClosureSpec::general_linear(
                    order,
                    GaussianMeasure::centered(random_spd(&mut rng, order + 2), order + 1).expect("SPD"),
                )
            } else {
                ClosureSpec::new(family, order)
            };
            total += 1;
            let Ok(mut sim) = slab_simulation(&spec, 0.0, 1.0, 0.0, n_cells, 0.8) else {
                worst = f64::INFINITY;
                continue;
            };
            let e0 = sim.field.energy();
            let mut drift = 0.0f64;
            for _ in 0..steps {
                let before = sim.field.energy();
                if sim.step().is_err() {
                    drift = f64::INFINITY;
                    break;
                }
                drift = drift.max((sim.field.energy() - before).abs() / e0);
            }
            worst = worst.max(drift);
            passed += (drift <= 1e-12) as usize;
        }
    }
    SuiteResult {
        name: "conservation",
        passed,
        total,
        worst,
        detail: "relative per-step drift of sum u0 dx, tolerance 1e-12".into(),
    }
}

/// Every suite with the default seeds.
pub fn run_all(n_cells: usize) -> Vec<SuiteResult> {
    vec![
        projection_suite(1, 100),
        dyson_suite(2, 20),
        full_op_suite(3, 10),
        closure_equivalence_suite(1.5, 1.5),
        theorem_suite(n_cells, &[0, 1, 3]),
        conservation_suite(200, 50),
    ]
}
