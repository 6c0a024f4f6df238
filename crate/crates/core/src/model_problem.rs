//! Two-component model `u_t = [[-1, d/dx], [d/dx, -1]] u` on a periodic
//! interval, with closed-form exact, mean, and reduced solutions.
//!
//! Shift convention: `shift(f, s)(x) = f(x - s)`, so a negative shift moves a
//! profile toward negative `x`. Under `d/dx -> i xi` the shift by `s` has the
//! symbol `e^{-i xi s}`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{invalid, Error, Result};
use crate::gaussian::GaussianMeasure;
use crate::op_engine::{self, CMatrix, CVector, LinearSystem, MemoryPolicy};

/// Grid functions sampled on a uniform periodic grid of `length`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelState {
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
    pub length: f64,
}

impl ModelState {
    pub fn new(u1: Vec<f64>, u2: Vec<f64>, length: f64) -> Result<Self> {
        if u1.len() != u2.len() || u1.is_empty() {
            return Err(Error::Dimension("components must share a nonempty grid".into()));
        }
        if !(length > 0.0) {
            return Err(invalid("length", "must be positive"));
        }
        Ok(Self { u1, u2, length })
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.u1.len() as f64
    }
}

/// Measure `[[1, beta], [beta, gamma]]` with `u1` resolved.
pub fn model_measure(beta: f64, gamma: f64) -> Result<GaussianMeasure> {
    if !(beta * beta < gamma) {
        return Err(invalid("beta", format!("|beta| must be below sqrt(gamma) = {}", gamma.sqrt())));
    }
    GaussianMeasure::centered(DMatrix::from_row_slice(2, 2, &[1.0, beta, beta, gamma]), 1)
}

/// Fourier symbol of the generator at mode `xi`.
pub fn mode_generator(xi: f64) -> CMatrix {
    let i = Complex64::i();
    let d = Complex64::from(-1.0);
    CMatrix::from_row_slice(2, 2, &[d, i * xi, i * xi, d])
}

/// Periodic translation `g(x) = f(x - s)`: exact index rotation when `s` is a
/// multiple of the spacing, spectral phase shift otherwise.
pub fn shift(f: &[f64], s: f64, length: f64) -> Vec<f64> {
    let n = f.len();
    let h = length / n as f64;
    let cells = s / h;
    let rounded = cells.round();
    if (cells - rounded).abs() < 1e-9 {
        let m = (rounded as i64).rem_euclid(n as i64) as usize;
        return (0..n).map(|i| f[(i + n - m) % n]).collect();
    }
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut buf: Vec<Complex64> = f.iter().map(|&v| Complex64::from(v)).collect();
    forward.process(&mut buf);
    for (k, z) in buf.iter_mut().enumerate() {
        let signed = if 2 * k < n { k as f64 } else { k as f64 - n as f64 };
        let xi = 2.0 * std::f64::consts::PI * signed / length;
        if 2 * k == n {
            // Nyquist mode: keep the real part of the phase so the result stays real
            *z *= (xi * s).cos();
        } else {
            *z *= Complex64::new(0.0, -xi * s).exp();
        }
    }
    inverse.process(&mut buf);
    buf.iter().map(|z| z.re / n as f64).collect()
}

fn combine(a: &[f64], wa: f64, b: &[f64], wb: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| wa * x + wb * y).collect()
}

/// `u(t) = e^{tR} u(0)`: the sum `u1+u2` travels left and the difference right.
pub fn exact_solution(initial: &ModelState, t: f64) -> Result<ModelState> {
    if !(t >= 0.0) {
        return Err(invalid("t", "must be >= 0"));
    }
    let plus = combine(&initial.u1, 1.0, &initial.u2, 1.0);
    let minus = combine(&initial.u1, 1.0, &initial.u2, -1.0);
    let left = shift(&plus, -t, initial.length);
    let right = shift(&minus, t, initial.length);
    let w = 0.5 * (-t).exp();
    ModelState::new(combine(&left, w, &right, w), combine(&left, w, &right, -w), initial.length)
}

/// Mean solution `e^{tR} E u(0)` for resolved data `u1`.
pub fn mean_solution(u1: &[f64], beta: f64, t: f64, length: f64) -> Result<ModelState> {
    if !(t >= 0.0) {
        return Err(invalid("t", "must be >= 0"));
    }
    let left = shift(u1, -t, length);
    let right = shift(u1, t, length);
    let decay = (-t).exp();
    let (wl, wr) = (decay * (1.0 + beta) / 2.0, decay * (1.0 - beta) / 2.0);
    ModelState::new(combine(&left, wl, &right, wr), combine(&left, wl, &right, -wr), length)
}

/// First-order prediction `e^{-t} shift(u1, -beta t)`.
pub fn foop_solution(u1: &[f64], beta: f64, t: f64, length: f64) -> Result<Vec<f64>> {
    if !(t >= 0.0) {
        return Err(invalid("t", "must be >= 0"));
    }
    let decay = (-t).exp();
    Ok(shift(u1, -beta * t, length).into_iter().map(|v| v * decay).collect())
}

/// Second-order prediction: the first-order flow plus diffusion
/// `c(t) (1 - beta^2) u_xx`, solved spectrally. The memory coefficient is
/// integrated exactly in time, so crescendo ramps are captured without
/// time-stepping error.
pub fn soop_solution(u1: &[f64], beta: f64, tau: f64, t: f64, policy: MemoryPolicy, length: f64) -> Result<Vec<f64>> {
    if !(tau > 0.0) || !(t >= 0.0) {
        return Err(invalid("tau", "tau must be positive and t nonnegative"));
    }
    let integrated = match policy {
        MemoryPolicy::Constant => tau * t,
        MemoryPolicy::Trapezoidal => 0.5 * tau * t,
        MemoryPolicy::Crescendo => {
            if t <= tau {
                0.5 * t * t
            } else {
                0.5 * tau * tau + tau * (t - tau)
            }
        }
    };
    let diffusivity = integrated * (1.0 - beta * beta);
    let n = u1.len();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut buf: Vec<Complex64> = u1.iter().map(|&v| Complex64::from(v)).collect();
    forward.process(&mut buf);
    for (k, z) in buf.iter_mut().enumerate() {
        let signed = if 2 * k < n { k as f64 } else { k as f64 - n as f64 };
        let xi = 2.0 * std::f64::consts::PI * signed / length;
        let damping = (-t - diffusivity * xi * xi).exp();
        if 2 * k == n {
            *z *= damping * (beta * xi * t).cos();
        } else {
            *z *= damping * Complex64::new(0.0, beta * xi * t).exp();
        }
    }
    inverse.process(&mut buf);
    Ok(buf.iter().map(|z| z.re / n as f64).collect())
}

/// `(1-beta^2) e^{-t} e^{-i beta xi t} [[-xi^2, 0], [-i xi, 0]]`.
pub fn model_memory_kernel(beta: f64, t: f64, xi: f64) -> CMatrix {
    let i = Complex64::i();
    let scale = (1.0 - beta * beta) * Complex64::new(-t, -beta * xi * t).exp();
    let zero = Complex64::from(0.0);
    CMatrix::from_row_slice(2, 2, &[-xi * xi * scale, zero, -i * xi * scale, zero])
}

/// Resolved mean-solution mode: `e^{-t} [(1+beta)/2 e^{i xi t} + (1-beta)/2 e^{-i xi t}]`.
pub fn mean_mode(beta: f64, xi: f64, t: f64) -> Complex64 {
    let i = Complex64::i();
    (-t).exp() * ((1.0 + beta) / 2.0 * (i * xi * t).exp() + (1.0 - beta) / 2.0 * (-i * xi * t).exp())
}

/// Integrates the full optimal-prediction equation for a single Fourier mode
/// and returns the largest deviation from the closed-form mean mode.
pub fn verify_full_op_identity(beta: f64, xi: f64, t_end: f64, dt: f64) -> Result<f64> {
    let system = LinearSystem::new(
        mode_generator(xi),
        CVector::from_vec(vec![Complex64::from(1.0), Complex64::from(0.0)]),
    )?;
    let measure = model_measure(beta, 1.0)?;
    let traj = op_engine::solve_full_op(&system, &measure, t_end, dt)?;
    Ok(traj
        .times
        .iter()
        .zip(&traj.resolved)
        .map(|(t, u)| (u[0] - mean_mode(beta, xi, *t)).norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, length: f64, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..n).map(|i| f(i as f64 * length / n as f64)).collect()
    }

    fn bump(x: f64) -> f64 {
        (-200.0 * (x - 0.5) * (x - 0.5)).exp()
    }

    fn max_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn shift_grid_multiple_is_exact_rotation() {
        let f: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let g = shift(&f, 2.0 / 8.0, 1.0);
        assert_eq!(g, vec![6.0, 7.0, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(shift(&f, -1.0 / 8.0, 1.0)[0], 1.0);
    }

    #[test]
    fn spectral_shift_matches_analytic_translation() {
        let n = 256;
        let f = grid(n, 1.0, bump);
        let s = 0.1234;
        let g = shift(&f, s, 1.0);
        let expected = grid(n, 1.0, |x| bump((x - s).rem_euclid(1.0)));
        assert!(max_diff(&g, &expected) < 1e-10);
    }

    #[test]
    fn exact_solution_cases() {
        let n = 200;
        let f = grid(n, 1.0, bump);
        let zero = vec![0.0; n];
        let s0 = ModelState::new(f.clone(), f.clone(), 1.0).unwrap();
        assert_eq!(exact_solution(&s0, 0.0).unwrap(), s0);

        // equal components ride a single left-moving characteristic
        let t = 0.13;
        let u = exact_solution(&s0, t).unwrap();
        let expected: Vec<f64> = shift(&f, -t, 1.0).iter().map(|v| v * (-t).exp()).collect();
        assert!(max_diff(&u.u1, &expected) < 1e-12);
        assert!(max_diff(&u.u2, &expected) < 1e-12);

        // a single pulse splits into two half-weight pulses
        let s1 = ModelState::new(f.clone(), zero, 1.0).unwrap();
        let u = exact_solution(&s1, 0.25).unwrap();
        let w = 0.5 * (-0.25f64).exp();
        let traced = grid(n, 1.0, |x| {
            w * (bump((x + 0.25).rem_euclid(1.0)) + bump((x - 0.25).rem_euclid(1.0)))
        });
        assert!(max_diff(&u.u1, &traced) < 1e-12);
    }

    #[test]
    fn mean_solution_weights() {
        let n = 100;
        let mut f = vec![0.0; n];
        f[50] = 1.0;
        let t = 0.1;
        let m = mean_solution(&f, 0.5, t, 1.0).unwrap();
        let d = (-t).exp();
        assert!((m.u1[40] - 0.75 * d).abs() < 1e-15);
        assert!((m.u1[60] - 0.25 * d).abs() < 1e-15);
        let m0 = mean_solution(&f, 0.0, t, 1.0).unwrap();
        assert!((m0.u1[40] - m0.u1[60]).abs() < 1e-15);

        // beta = 1 is the fully correlated case u2 = u1
        let g = grid(n, 1.0, bump);
        let m1 = mean_solution(&g, 1.0, 0.3, 1.0).unwrap();
        let ex = exact_solution(&ModelState::new(g.clone(), g, 1.0).unwrap(), 0.3).unwrap();
        assert!(max_diff(&m1.u1, &ex.u1) < 1e-14);
    }

    #[test]
    fn mean_solution_integral_decays_exponentially() {
        let n = 300;
        let f = grid(n, 1.0, bump);
        let total: f64 = f.iter().sum();
        for beta in [-0.7, 0.0, 0.4, 0.9] {
            let t = 0.377;
            let m = mean_solution(&f, beta, t, 1.0).unwrap();
            let s: f64 = m.u1.iter().sum();
            assert!((s - (-t).exp() * total).abs() < 1e-11);
        }
    }

    #[test]
    fn foop_translates_and_decays() {
        let n = 400;
        let f = grid(n, 1.0, bump);
        assert!(max_diff(&foop_solution(&f, 0.5, 0.0, 1.0).unwrap(), &f) < 1e-15);
        let still = foop_solution(&f, 0.0, 1.0, 1.0).unwrap();
        assert!(max_diff(&still, &f.iter().map(|v| v * (-1f64).exp()).collect::<Vec<_>>()) < 1e-15);
        // characteristics x(t) = x0 - beta t
        let moved = foop_solution(&f, 0.5, 1.0, 1.0).unwrap();
        let traced = grid(n, 1.0, |x| (-1f64).exp() * bump((x + 0.5).rem_euclid(1.0)));
        assert!(max_diff(&moved, &traced) < 1e-12);
    }

    #[test]
    fn soop_with_crescendo_starts_as_foop() {
        let n = 128;
        let f = grid(n, 1.0, bump);
        let a = soop_solution(&f, 0.3, 1.0, 1e-9, MemoryPolicy::Crescendo, 1.0).unwrap();
        assert!(max_diff(&a, &f) < 1e-8);
        let b = soop_solution(&f, 0.3, 1.0, 0.5, MemoryPolicy::Constant, 1.0).unwrap();
        let c = soop_solution(&f, 0.3, 1.0, 0.5, MemoryPolicy::Crescendo, 1.0).unwrap();
        let peak = |v: &[f64]| v.iter().cloned().fold(f64::MIN, f64::max);
        assert!(peak(&c) > peak(&b));
    }

    #[test]
    fn kernel_closed_form_matches_engine() {
        for &(beta, xi, t) in &[(0.0, 1.0, 0.0), (0.5, 2.0, 0.7), (-0.3, 5.0, 1.9)] {
            let system = LinearSystem::new(
                mode_generator(xi),
                CVector::from_vec(vec![Complex64::from(1.0), Complex64::from(0.0)]),
            )
            .unwrap();
            let measure = model_measure(beta, 1.0).unwrap();
            let trace = op_engine::memory_kernel(&system, &measure, &[t]).unwrap();
            assert!((&trace.values[0] - model_memory_kernel(beta, t, xi)).norm() < 1e-9);
        }
        let k = model_memory_kernel(0.0, 0.0, 3.0);
        assert_eq!(k[(0, 0)], Complex64::from(-9.0));
        assert_eq!(k[(1, 0)], Complex64::new(0.0, -3.0));
        let k0 = model_memory_kernel(0.4, 1.0, 0.0);
        assert_eq!(k0.row(0).iter().map(|z| z.norm()).sum::<f64>(), 0.0);
    }

    #[test]
    fn full_op_identity_deviation() {
        assert!(verify_full_op_identity(0.5, 0.0, 1.0, 1e-3).unwrap() <= 1e-12);
        let d = verify_full_op_identity(0.5, 2.0 * std::f64::consts::PI, 1.0, 1e-3).unwrap();
        assert!(d <= 1e-4, "{d}");
        let d0 = verify_full_op_identity(0.0, 2.0 * std::f64::consts::PI, 1.0, 1e-3).unwrap();
        assert!(d0 <= 1e-4, "{d0}");
    }

    #[test]
    fn measure_validity() {
        assert!(model_measure(0.5, 1.0).is_ok());
        assert!(model_measure(1.0, 1.0).is_err());
        assert!(model_measure(1.2, 2.0).is_ok());
    }
}
