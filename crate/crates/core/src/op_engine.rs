//! Finite-matrix optimal prediction for linear systems `du/dt = R u`.
//!
//! All generators are complex so that a constant-coefficient PDE can be
//! checked one Fourier mode at a time (`d/dx -> i xi`). The measure is taken
//! centered; a nonzero mean is handled by shifting coordinates first.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::gaussian::GaussianMeasure;
use crate::linalg::expm;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Norm growth (relative to the initial state) treated as a blow-up.
const GROWTH_LIMIT: f64 = 1e6;

#[derive(Debug, Clone)]
pub struct LinearSystem {
    generator: CMatrix,
    initial: CVector,
}

impl LinearSystem {
    pub fn new(generator: CMatrix, initial: CVector) -> Result<Self> {
        let n = generator.nrows();
        if !generator.is_square() || n < 2 {
            return Err(Error::Dimension(format!(
                "generator must be square with n >= 2, got {}x{}",
                generator.nrows(),
                generator.ncols()
            )));
        }
        if initial.len() != n {
            return Err(Error::Dimension(format!(
                "initial state has length {} for an {n}x{n} generator",
                initial.len()
            )));
        }
        if generator.iter().chain(initial.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("generator", "non-finite entry"));
        }
        Ok(Self { generator, initial })
    }

    pub fn from_real(generator: &DMatrix<f64>, initial: &DVector<f64>) -> Result<Self> {
        Self::new(generator.map(Complex64::from), initial.map(Complex64::from))
    }

    pub fn generator(&self) -> &CMatrix {
        &self.generator
    }

    pub fn initial(&self) -> &CVector {
        &self.initial
    }

    pub fn dim(&self) -> usize {
        self.generator.nrows()
    }

    fn check_measure(&self, measure: &GaussianMeasure) -> Result<()> {
        if measure.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "measure has dimension {} but system has {}",
                measure.dim(),
                self.dim()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct KernelTrace {
    pub times: Vec<f64>,
    pub values: Vec<CMatrix>,
}

/// How the memory integral is collapsed onto the current state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MemoryPolicy {
    /// `tau`
    Constant,
    /// `min(t, tau)`
    Crescendo,
    /// `tau / 2`
    Trapezoidal,
}

impl MemoryPolicy {
    pub fn coefficient(self, tau: f64, t: f64) -> f64 {
        match self {
            MemoryPolicy::Constant => tau,
            MemoryPolicy::Crescendo => t.min(tau),
            MemoryPolicy::Trapezoidal => 0.5 * tau,
        }
    }
}

fn complex_projection(measure: &GaussianMeasure) -> (CMatrix, CMatrix) {
    let p = measure.projection_pair();
    (p.e.map(Complex64::from), p.f.map(Complex64::from))
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(invalid("t", format!("time must be finite and >= 0, got {t}")));
    }
    Ok(())
}

fn check_finite_state(v: &CVector, t: f64) -> Result<()> {
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Unstable {
            t,
            growth: f64::INFINITY,
        });
    }
    Ok(())
}

/// `e^{tR} u0`.
pub fn propagate(system: &LinearSystem, t: f64) -> Result<CVector> {
    check_time(t)?;
    let out = expm(&(system.generator() * Complex64::from(t))) * system.initial();
    check_finite_state(&out, t)?;
    Ok(out)
}

/// The mean solution `e^{tR} E u0`.
pub fn mean_solution(system: &LinearSystem, measure: &GaussianMeasure, t: f64) -> Result<CVector> {
    check_time(t)?;
    system.check_measure(measure)?;
    let (e, _) = complex_projection(measure);
    let out = expm(&(system.generator() * Complex64::from(t))) * (e * system.initial());
    check_finite_state(&out, t)?;
    Ok(out)
}

/// `e^{tRF}`, the orthogonal-dynamics solution operator.
pub fn orthogonal_propagate(system: &LinearSystem, measure: &GaussianMeasure, t: f64) -> Result<CMatrix> {
    check_time(t)?;
    system.check_measure(measure)?;
    let (_, f) = complex_projection(measure);
    Ok(expm(&(system.generator() * f * Complex64::from(t))))
}

/// The projected generator `R E`.
pub fn projected_generator(system: &LinearSystem, measure: &GaussianMeasure) -> Result<CMatrix> {
    system.check_measure(measure)?;
    measure.project_matrix(system.generator())
}

/// `R F R E`, the memory kernel at `t = 0`.
pub fn kernel_at_zero(system: &LinearSystem, measure: &GaussianMeasure) -> Result<CMatrix> {
    system.check_measure(measure)?;
    let (_, f) = complex_projection(measure);
    let re = projected_generator(system, measure)?;
    Ok(system.generator() * f * re)
}

/// `K(t) = e^{tRF} R F R E` sampled at `times`.
pub fn memory_kernel(system: &LinearSystem, measure: &GaussianMeasure, times: &[f64]) -> Result<KernelTrace> {
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("times", "must be strictly increasing"));
    }
    let k0 = kernel_at_zero(system, measure)?;
    let values = times
        .iter()
        .map(|&t| Ok(orthogonal_propagate(system, measure, t)? * &k0))
        .collect::<Result<Vec<_>>>()?;
    Ok(KernelTrace {
        times: times.to_vec(),
        values,
    })
}

/// Kernel samples `K(j h)` for `j = 0..=steps`, built by repeated
/// application of `e^{hRF}`.
fn kernel_samples(system: &LinearSystem, measure: &GaussianMeasure, h: f64, steps: usize) -> Result<Vec<CMatrix>> {
    let step = orthogonal_propagate(system, measure, h)?;
    let mut current = kernel_at_zero(system, measure)?;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(current.clone());
    for _ in 0..steps {
        current = &step * current;
        out.push(current.clone());
    }
    Ok(out)
}

fn uniform_steps(t_end: f64, dt: f64) -> Result<(usize, f64)> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(invalid("dt", format!("must be positive, got {dt}")));
    }
    check_time(t_end)?;
    let steps = ((t_end / dt) - 1e-9).ceil().max(0.0) as usize;
    if steps == 0 {
        return Ok((0, dt));
    }
    Ok((steps, t_end / steps as f64))
}

/// Resolved trajectory of the full optimal-prediction equation.
#[derive(Debug, Clone)]
pub struct FullOpTrajectory {
    pub step: f64,
    pub times: Vec<f64>,
    pub resolved: Vec<CVector>,
}

impl FullOpTrajectory {
    pub fn last(&self) -> &CVector {
        self.resolved.last().expect("trajectory holds the initial state")
    }
}

/// Integrates `du_C/dt = R_CC u_C + (K_CC * u_C)(t)`, `u_C(0) = u0_C`.
///
/// The local part is propagated exactly with `e^{h R_CC}`; the memory
/// forcing is treated with the trapezoidal rule in both the step and the
/// convolution, so the scheme is second order and exact when `K = 0`.
pub fn solve_full_op(system: &LinearSystem, measure: &GaussianMeasure, t_end: f64, dt: f64) -> Result<FullOpTrajectory> {
    let (steps, h) = uniform_steps(t_end, dt)?;
    let k = measure.split();
    let re = projected_generator(system, measure)?;
    let local = re.view((0, 0), (k, k)).into_owned();
    let kernels: Vec<CMatrix> = kernel_samples(system, measure, h, steps)?
        .into_iter()
        .map(|m| m.view((0, 0), (k, k)).into_owned())
        .collect();

    let half = Complex64::from(0.5 * h);
    let full = Complex64::from(h);
    let propagator = expm(&(&local * full));
    let implicit = CMatrix::identity(k, k) - &kernels[0] * Complex64::from(0.25 * h * h);
    let lu = implicit.lu();

    let u0 = system.initial().rows(0, k).into_owned();
    let norm0 = u0.norm().max(f64::MIN_POSITIVE);
    let mut states = vec![u0];
    let mut memory = CVector::zeros(k);
    let mut times = vec![0.0];
    for n in 0..steps {
        // memory forcing at t_{n+1} without the implicit j = n+1 term
        let mut partial = &kernels[n + 1] * &states[0] * half;
        for j in 1..=n {
            partial += &kernels[n + 1 - j] * &states[j] * full;
        }
        let rhs = &propagator * (&states[n] + &memory * half) + &partial * half;
        let next = lu
            .solve(&rhs)
            .ok_or_else(|| Error::LinearSolve("singular implicit memory matrix".into()))?;
        memory = partial + &kernels[0] * &next * half;
        let t = (n + 1) as f64 * h;
        let growth = next.norm() / norm0;
        if !(growth <= GROWTH_LIMIT) {
            return Err(Error::Unstable { t, growth });
        }
        states.push(next);
        times.push(t);
    }
    Ok(FullOpTrajectory {
        step: h,
        times,
        resolved: states,
    })
}

/// Recovers the averaged unresolved variables from a resolved trajectory:
/// `du_F/dt = R_FC u_C + K_FC * u_C`, `u_F(0) = A_FC A_CC^{-1} u0_C`, by
/// trapezoidal quadrature.
pub fn reconstruct_unresolved(
    system: &LinearSystem,
    measure: &GaussianMeasure,
    trajectory: &FullOpTrajectory,
) -> Result<Vec<CVector>> {
    let (n_dim, k) = (system.dim(), measure.split());
    let steps = trajectory.resolved.len() - 1;
    let h = trajectory.step;
    let re = projected_generator(system, measure)?;
    let coupling = re.view((k, 0), (n_dim - k, k)).into_owned();
    let kernels: Vec<CMatrix> = kernel_samples(system, measure, h, steps)?
        .into_iter()
        .map(|m| m.view((k, 0), (n_dim - k, k)).into_owned())
        .collect();
    let u = &trajectory.resolved;
    let half = Complex64::from(0.5 * h);
    let full = Complex64::from(h);

    let forcing = |n: usize| -> CVector {
        let mut g = &coupling * &u[n];
        if n > 0 {
            g += (&kernels[n] * &u[0] + &kernels[0] * &u[n]) * half;
            for j in 1..n {
                g += &kernels[n - j] * &u[j] * full;
            }
        }
        g
    };

    let gain = measure.gain().map(Complex64::from);
    let mut out = Vec::with_capacity(steps + 1);
    out.push(&gain * &u[0]);
    let mut previous = forcing(0);
    for n in 0..steps {
        let current = forcing(n + 1);
        let next = &out[n] + (&previous + &current) * half;
        out.push(next);
        previous = current;
    }
    Ok(out)
}

/// First-order optimal prediction generator `(R E)_CC`.
pub fn foop_generator(system: &LinearSystem, measure: &GaussianMeasure) -> Result<CMatrix> {
    let k = measure.split();
    Ok(projected_generator(system, measure)?.view((0, 0), (k, k)).into_owned())
}

/// `(R F R E)_CC` from the blocks of `R` and the gain `G = A_FC A_CC^{-1}`:
/// `R_CF R_FC + R_CF R_FF G - R_CF G R_CC - R_CF G R_CF G`.
pub fn second_order_operator(system: &LinearSystem, measure: &GaussianMeasure) -> Result<CMatrix> {
    system.check_measure(measure)?;
    let (n, k) = (system.dim(), measure.split());
    let r = system.generator();
    let r_cc = r.view((0, 0), (k, k));
    let r_cf = r.view((0, k), (k, n - k));
    let r_fc = r.view((k, 0), (n - k, k));
    let r_ff = r.view((k, k), (n - k, n - k));
    let g = measure.gain().map(Complex64::from);
    let r_cf_g = r_cf * &g;
    Ok(r_cf * r_fc + r_cf * r_ff * &g - &r_cf_g * r_cc - &r_cf_g * r_cf * &g)
}

/// Second-order optimal prediction generator
/// `(R E)_CC + c (R F R E)_CC` with `c` from the memory policy.
pub fn soop_generator(
    system: &LinearSystem,
    measure: &GaussianMeasure,
    tau: f64,
    t: f64,
    policy: MemoryPolicy,
) -> Result<CMatrix> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(invalid("tau", format!("must be positive, got {tau}")));
    }
    check_time(t)?;
    let c = policy.coefficient(tau, t);
    Ok(foop_generator(system, measure)? + second_order_operator(system, measure)? * Complex64::from(c))
}

/// Composite Simpson weights for `2m` intervals.
fn simpson_weights(intervals: usize, h: f64) -> Vec<f64> {
    (0..=intervals)
        .map(|j| {
            let w = if j == 0 || j == intervals {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect()
}

/// `int_0^t e^{(t-s)RF} R E e^{sR} ds` by composite Simpson with step close to `dt`.
fn dyson_integral(system: &LinearSystem, measure: &GaussianMeasure, t: f64, dt: f64) -> Result<CMatrix> {
    let n = system.dim();
    let (mut steps, _) = uniform_steps(t, dt)?;
    if steps == 0 {
        return Ok(CMatrix::zeros(n, n));
    }
    steps += steps % 2;
    let h = t / steps as f64;
    let (e, f) = complex_projection(measure);
    let r = system.generator();
    let step_full = expm(&(r * Complex64::from(h)));
    let step_orth = expm(&(r * &f * Complex64::from(h)));
    let re = r * e;

    let mut orth_powers = Vec::with_capacity(steps + 1);
    orth_powers.push(CMatrix::identity(n, n));
    for j in 1..=steps {
        orth_powers.push(&step_orth * &orth_powers[j - 1]);
    }
    let weights = simpson_weights(steps, h);
    let mut full = CMatrix::identity(n, n);
    let mut acc = CMatrix::zeros(n, n);
    for j in 0..=steps {
        acc += &orth_powers[steps - j] * &re * &full * Complex64::from(weights[j]);
        full = &step_full * full;
    }
    Ok(acc)
}

/// Frobenius norm of `e^{tR} - e^{tRF} - int_0^t e^{(t-s)RF} R E e^{sR} ds`.
pub fn dyson_residual(system: &LinearSystem, measure: &GaussianMeasure, t: f64, dt: f64) -> Result<f64> {
    system.check_measure(measure)?;
    let full = expm(&(system.generator() * Complex64::from(t)));
    let orth = orthogonal_propagate(system, measure, t)?;
    let integral = dyson_integral(system, measure, t, dt)?;
    Ok((full - orth - integral).norm())
}

/// Frobenius norm of the defect in
/// `d/dt e^{tR} = R E e^{tR} + e^{tRF} R F + int_0^t K(t-s) e^{sR} ds`,
/// with the derivative taken by a central difference of width `2 h`.
pub fn solution_identity_residual(
    system: &LinearSystem,
    measure: &GaussianMeasure,
    t: f64,
    h: f64,
    dt: f64,
) -> Result<f64> {
    system.check_measure(measure)?;
    if !(h > 0.0) || h > t {
        return Err(invalid("h", "difference width must lie in (0, t]"));
    }
    let r = system.generator();
    let n = system.dim();
    let at = |s: f64| expm(&(r * Complex64::from(s)));
    let derivative = (at(t + h) - at(t - h)) / Complex64::from(2.0 * h);

    let (_, f) = complex_projection(measure);
    let re = projected_generator(system, measure)?;
    let rf = r * &f;
    let k0 = kernel_at_zero(system, measure)?;

    let (mut steps, _) = uniform_steps(t, dt)?;
    steps = steps.max(2);
    steps += steps % 2;
    let step = t / steps as f64;
    let weights = simpson_weights(steps, step);
    let orth_step = expm(&(&rf * Complex64::from(step)));
    let full_step = expm(&(r * Complex64::from(step)));
    let mut kernels = Vec::with_capacity(steps + 1);
    kernels.push(k0);
    for j in 1..=steps {
        kernels.push(&orth_step * &kernels[j - 1]);
    }
    let mut full = CMatrix::identity(n, n);
    let mut conv = CMatrix::zeros(n, n);
    for j in 0..=steps {
        conv += &kernels[steps - j] * &full * Complex64::from(weights[j]);
        full = &full_step * full;
    }
    let rhs = &re * at(t) + expm(&(&rf * Complex64::from(t))) * &rf + conv;
    Ok((derivative - rhs).norm())
}
