//! Staggered-grid solver for the truncated 1D moment system
//! `u_t + B u_x + C u = q` on a periodic interval, closed by a
//! [`ClosureCoefficients`] row and optional diffusion on the last moment.
//!
//! Even moments live at cell centers, odd moments at faces; face `i` sits
//! between cells `i` and `i+1`. One step is the symmetric composition
//!
//! ```text
//! CN(dt/2) . decay(dt/2) . closure(dt/2) . verlet(dt) . closure(dt/2) . decay(dt/2) . CN(dt/2)
//! ```

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{invalid, Error, Result};
use crate::linalg::solve_cyclic_tridiagonal;
use crate::moments::{
    build_matrices, closure_coefficients, ClosureCoefficients, ClosureSpec, Coefficient, MomentMatrices,
};

/// Moments `u_0..u_N` on a periodic staggered grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentField1D {
    order: usize,
    domain: (f64, f64),
    dx: f64,
    /// `moments[k][i]`: cell `i` for even `k`, face `i` for odd `k`.
    pub moments: Vec<Vec<f64>>,
    pub t: f64,
}

impl MomentField1D {
    pub fn zeros(order: usize, domain: (f64, f64), n_cells: usize) -> Result<Self> {
        if n_cells < 3 {
            return Err(invalid("n_cells", "need at least 3 cells"));
        }
        if !(domain.1 > domain.0) || !domain.0.is_finite() || !domain.1.is_finite() {
            return Err(invalid("domain", "must be a finite interval a < b"));
        }
        Ok(Self {
            order,
            domain,
            dx: (domain.1 - domain.0) / n_cells as f64,
            moments: vec![vec![0.0; n_cells]; order + 1],
            t: 0.0,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn n_cells(&self) -> usize {
        self.moments[0].len()
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells()).map(|i| self.domain.0 + (i as f64 + 0.5) * self.dx).collect()
    }

    pub fn faces(&self) -> Vec<f64> {
        (0..self.n_cells()).map(|i| self.domain.0 + (i as f64 + 1.0) * self.dx).collect()
    }

    /// Sample positions of moment `k`.
    pub fn positions(&self, k: usize) -> Vec<f64> {
        if k.is_multiple_of(2) {
            self.centers()
        } else {
            self.faces()
        }
    }

    /// Fills moment `k` by sampling `f` at its positions.
    pub fn set_moment(&mut self, k: usize, f: impl Fn(f64) -> f64) -> Result<()> {
        if k > self.order {
            return Err(invalid("k", format!("moment {k} exceeds order {}", self.order)));
        }
        self.moments[k] = self.positions(k).into_iter().map(f).collect();
        Ok(())
    }

    /// Midpoint-rule `sum u_0 dx`.
    pub fn energy(&self) -> f64 {
        self.moments[0].iter().sum::<f64>() * self.dx
    }

    pub fn is_finite(&self) -> bool {
        self.moments.iter().flatten().all(|v| v.is_finite())
    }

    /// Co-located snapshot; odd moments averaged from the two adjacent faces.
    pub fn snapshot(&self) -> Snapshot {
        let n = self.n_cells();
        let moments = self
            .moments
            .iter()
            .enumerate()
            .map(|(k, u)| {
                if k % 2 == 0 {
                    u.clone()
                } else {
                    (0..n).map(|i| 0.5 * (u[(i + n - 1) % n] + u[i])).collect()
                }
            })
            .collect();
        Snapshot {
            t: self.t,
            x: self.centers(),
            moments,
        }
    }
}

/// Moments sampled at cell centers at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub x: Vec<f64>,
    pub moments: Vec<Vec<f64>>,
}

impl Snapshot {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# t={:.16e}", self.t);
        out.push('x');
        for k in 0..self.moments.len() {
            let _ = write!(out, ",u{k}");
        }
        out.push('\n');
        for (i, x) in self.x.iter().enumerate() {
            let _ = write!(out, "{x:.16e}");
            for u in &self.moments {
                let _ = write!(out, ",{:.16e}", u[i]);
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> io::Result<()> {
        std::fs::write(path, self.to_csv())
    }

    /// `sum u_0 dx`
    pub fn energy(&self) -> f64 {
        if self.x.len() < 2 {
            return 0.0;
        }
        self.moments[0].iter().sum::<f64>() * (self.x[1] - self.x[0])
    }
}

/// Spectral radius of the tridiagonal zero-diagonal matrix `B`. Rejects
/// coupling pairs of opposite sign, which would make the system non-hyperbolic.
pub fn advection_speed(advection: &DMatrix<f64>) -> Result<f64> {
    let n = advection.nrows();
    let mut sym = DMatrix::zeros(n, n);
    for k in 0..n.saturating_sub(1) {
        let p = advection[(k, k + 1)] * advection[(k + 1, k)];
        if p < 0.0 {
            return Err(invalid("B", format!("couplings between moments {k} and {} have opposite signs", k + 1)));
        }
        sym[(k, k + 1)] = p.sqrt();
        sym[(k + 1, k)] = p.sqrt();
    }
    Ok(SymmetricEigen::new(sym).eigenvalues.amax())
}

/// A field together with the matrices and closure that evolve it.
#[derive(Debug, Clone)]
pub struct Simulation1D {
    pub field: MomentField1D,
    pub matrices: MomentMatrices,
    pub closure: ClosureCoefficients,
    pub dt: f64,
    speed: f64,
}

impl Simulation1D {
    pub fn new(field: MomentField1D, matrices: MomentMatrices, closure: ClosureCoefficients, dt: f64) -> Result<Self> {
        let n = field.n_cells();
        if matrices.order() != field.order() {
            return Err(Error::Dimension(format!(
                "matrices have order {}, field has order {}",
                matrices.order(),
                field.order()
            )));
        }
        if closure.advection_row.len() != field.order() + 1 {
            return Err(Error::Dimension("closure row length must be N+1".into()));
        }
        for (name, c) in [
            ("kappa", matrices.absorption()),
            ("sigma", matrices.scattering()),
            ("q", matrices.source_density()),
        ] {
            if let Coefficient::Field(v) = c {
                if v.len() != n {
                    return Err(Error::Dimension(format!("{name} has {} values for {n} cells", v.len())));
                }
            }
        }
        if let Some(Coefficient::Field(v)) = closure.diffusion.as_ref().map(|d| &d.tau) {
            if v.len() != n {
                return Err(Error::Dimension(format!("tau has {} values for {n} cells", v.len())));
            }
        }
        if !(dt > 0.0) {
            return Err(invalid("dt", "must be positive"));
        }
        let speed = advection_speed(matrices.advection())?;
        let sim = Self {
            field,
            matrices,
            closure,
            dt,
            speed,
        };
        sim.check_cfl(dt)?;
        Ok(sim)
    }

    /// Largest admissible step, `dx / rho(B)`.
    pub fn cfl_limit(&self) -> f64 {
        if self.speed == 0.0 {
            f64::INFINITY
        } else {
            self.field.dx() / self.speed
        }
    }

    fn check_cfl(&self, dt: f64) -> Result<()> {
        let limit = self.cfl_limit();
        if dt > limit * (1.0 + 1e-12) {
            return Err(Error::Cfl { dt, limit });
        }
        Ok(())
    }

    /// Advances by `dt` (which may differ from `self.dt`).
    pub fn step_by(&mut self, dt: f64) -> Result<()> {
        if !(dt > 0.0) {
            return Err(invalid("dt", "must be positive"));
        }
        self.check_cfl(dt)?;
        let t0 = self.field.t;
        let half = 0.5 * dt;
        self.diffuse(half, t0 + 0.25 * dt)?;
        self.decay(half);
        self.closure_row(half);
        self.verlet(dt);
        self.closure_row(half);
        self.decay(half);
        self.diffuse(half, t0 + 0.75 * dt)?;
        self.field.t = t0 + dt;
        if !self.field.is_finite() {
            return Err(Error::Unstable {
                t: self.field.t,
                growth: f64::INFINITY,
            });
        }
        Ok(())
    }

    pub fn step(&mut self) -> Result<()> {
        self.step_by(self.dt)
    }

    /// Advances to `target`, shortening the last step to land on it exactly.
    pub fn advance_to(&mut self, target: f64) -> Result<()> {
        if target < self.field.t {
            return Err(invalid("t", format!("{target} lies before the current time {}", self.field.t)));
        }
        let slack = 1e-12 * target.abs().max(1.0);
        while target - self.field.t > slack {
            let h = self.dt.min(target - self.field.t);
            self.step_by(h)?;
        }
        self.field.t = target;
        Ok(())
    }

    /// Snapshots at the sorted requested times.
    pub fn run(&mut self, times: &[f64]) -> Result<Vec<Snapshot>> {
        if times.windows(2).any(|w| w[1] < w[0]) {
            return Err(invalid("snapshot_times", "must be sorted"));
        }
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            self.advance_to(t)?;
            out.push(self.field.snapshot());
        }
        Ok(out)
    }

    /// Staggered update of `u_t = -B u_x`: odd half, even full, odd half.
    fn verlet(&mut self, dt: f64) {
        if self.field.order() == 0 {
            return;
        }
        self.verlet_parity(1, 0.5 * dt);
        self.verlet_parity(0, dt);
        self.verlet_parity(1, 0.5 * dt);
    }

    fn verlet_parity(&mut self, parity: usize, h: f64) {
        let n = self.field.n_cells();
        let order = self.field.order();
        let r = h / self.field.dx();
        let b = self.matrices.advection();
        let mut k = parity;
        while k <= order {
            let mut update = vec![0.0; n];
            for j in [k.wrapping_sub(1), k + 1] {
                if j > order {
                    continue;
                }
                let w = b[(k, j)];
                if w == 0.0 {
                    continue;
                }
                let u = &self.field.moments[j];
                for (i, d) in update.iter_mut().enumerate() {
                    let grad = if parity == 0 {
                        u[i] - u[(i + n - 1) % n]
                    } else {
                        u[(i + 1) % n] - u[i]
                    };
                    *d -= r * w * grad;
                }
            }
            for (v, d) in self.field.moments[k].iter_mut().zip(update) {
                *v += d;
            }
            k += 2;
        }
    }

    /// Exact integrating factor for `u_t = -c u + q`; face rates are averages
    /// of the adjacent cells.
    fn decay(&mut self, h: f64) {
        let n = self.field.n_cells();
        let uniform = self.matrices.absorption().as_constant().is_some()
            && self.matrices.scattering().as_constant().is_some()
            && self.matrices.source_density().as_constant().is_some();
        let cell_rates: Vec<Vec<f64>> = if uniform {
            vec![self.matrices.decay_rates(0)]
        } else {
            (0..n).map(|i| self.matrices.decay_rates(i)).collect()
        };
        let sources: Vec<f64> = if uniform {
            vec![self.matrices.source(0)[0]]
        } else {
            (0..n).map(|i| self.matrices.source(i)[0]).collect()
        };
        let rate = |k: usize, i: usize| -> f64 {
            if uniform {
                return cell_rates[0][k];
            }
            if k.is_multiple_of(2) {
                cell_rates[i][k]
            } else {
                0.5 * (cell_rates[i][k] + cell_rates[(i + 1) % n][k])
            }
        };
        for k in 0..=self.field.order() {
            for i in 0..n {
                let c = rate(k, i);
                let factor = (-c * h).exp();
                let u = &mut self.field.moments[k][i];
                *u *= factor;
                if k == 0 {
                    let q = sources[if uniform { 0 } else { i }];
                    if q != 0.0 {
                        let gain = if c == 0.0 { h } else { -(-c * h).exp_m1() / c };
                        *u += gain * q;
                    }
                }
            }
        }
    }

    /// `u_N,t = -sum_j r_j d/dx u_j` by SSP-RK3; same-parity neighbours use
    /// centered differences, opposite-parity ones the compact staggered form.
    fn closure_row(&mut self, h: f64) {
        let row = &self.closure.advection_row;
        if row.iter().all(|&r| r == 0.0) {
            return;
        }
        let order = self.field.order();
        let n = self.field.n_cells();
        let dx = self.field.dx();
        let mut frozen = vec![0.0; n];
        for j in 0..order {
            if row[j] != 0.0 {
                let g = gradient(&self.field.moments[j], j % 2, order % 2, dx);
                for (f, d) in frozen.iter_mut().zip(g) {
                    *f -= row[j] * d;
                }
            }
        }
        let r_self = row[order];
        let rhs = |u: &[f64]| -> Vec<f64> {
            if r_self == 0.0 {
                return frozen.clone();
            }
            gradient(u, order % 2, order % 2, dx)
                .into_iter()
                .zip(&frozen)
                .map(|(d, f)| f - r_self * d)
                .collect()
        };
        let u0 = self.field.moments[order].clone();
        let k1 = rhs(&u0);
        let u1: Vec<f64> = u0.iter().zip(&k1).map(|(u, k)| u + h * k).collect();
        let k2 = rhs(&u1);
        let u2: Vec<f64> = u0
            .iter()
            .zip(&u1)
            .zip(&k2)
            .map(|((a, b), k)| 0.75 * a + 0.25 * (b + h * k))
            .collect();
        let k3 = rhs(&u2);
        self.field.moments[order] = u0
            .iter()
            .zip(&u2)
            .zip(&k3)
            .map(|((a, b), k)| a / 3.0 + 2.0 / 3.0 * (b + h * k))
            .collect();
    }

    /// Crank-Nicolson for `u_N,t = (theta u_N,x)_x` over `h`, with `theta`
    /// frozen at `t_eval`.
    fn diffuse(&mut self, h: f64, t_eval: f64) -> Result<()> {
        let Some(diffusion) = &self.closure.diffusion else {
            return Ok(());
        };
        let n = self.field.n_cells();
        let order = self.field.order();
        let theta: Vec<f64> = match &diffusion.tau {
            Coefficient::Constant(_) => vec![diffusion.theta(t_eval, 0); n],
            Coefficient::Field(_) => (0..n).map(|i| diffusion.theta(t_eval, i)).collect(),
        };
        if theta.iter().all(|&v| v == 0.0) {
            return Ok(());
        }
        // w[i]: conductance between node i and node i+1
        let w: Vec<f64> = if order.is_multiple_of(2) {
            (0..n).map(|i| harmonic_mean(theta[i], theta[(i + 1) % n])).collect()
        } else {
            (0..n).map(|i| theta[(i + 1) % n]).collect()
        };
        let r = 0.5 * h / (self.field.dx() * self.field.dx());
        let u = &self.field.moments[order];
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            let wp = w[i];
            let wm = w[(i + n - 1) % n];
            let (um, up) = (u[(i + n - 1) % n], u[(i + 1) % n]);
            lower[i] = -r * wm;
            upper[i] = -r * wp;
            diag[i] = 1.0 + r * (wp + wm);
            rhs[i] = u[i] + r * (wp * (up - u[i]) - wm * (u[i] - um));
        }
        self.field.moments[order] = solve_cyclic_tridiagonal(&lower, &diag, &upper, &rhs)?;
        Ok(())
    }
}

fn harmonic_mean(a: f64, b: f64) -> f64 {
    if a + b == 0.0 {
        0.0
    } else {
        2.0 * a * b / (a + b)
    }
}

/// `d/dx` of a field on layout `from` (0 centers, 1 faces) sampled at
/// layout `to`.
fn gradient(u: &[f64], from: usize, to: usize, dx: f64) -> Vec<f64> {
    let n = u.len();
    (0..n)
        .map(|i| match (from, to) {
            (0, 1) => (u[(i + 1) % n] - u[i]) / dx,
            (1, 0) => (u[i] - u[(i + n - 1) % n]) / dx,
            _ => (u[(i + 1) % n] - u[(i + n - 1) % n]) / (2.0 * dx),
        })
        .collect()
}

/// Absorption and scattering of the slab benchmark.
pub const SLAB_KAPPA: f64 = 1.5;
pub const SLAB_SIGMA: f64 = 1.5;
pub const SLAB_CELLS: usize = 1000;
pub const SLAB_CFL: f64 = 0.8;
pub const SLAB_TIMES: [f64; 4] = [0.1, 0.2, 0.3, 0.4];

/// `exp(-500 (x - 1/2)^2)`
pub fn slab_pulse(x: f64) -> f64 {
    (-500.0 * (x - 0.5) * (x - 0.5)).exp()
}

/// Slab benchmark field on `[0, 1]`: Gaussian pulse in `u_0`, all other moments zero.
pub fn init_paper_scenario(order: usize, n_cells: usize) -> Result<MomentField1D> {
    let mut field = MomentField1D::zeros(order, (0.0, 1.0), n_cells)?;
    field.set_moment(0, slab_pulse)?;
    Ok(field)
}

/// Slab benchmark ready to run with the given closure.
pub fn slab_benchmark(spec: &ClosureSpec, n_cells: usize, cfl: f64) -> Result<Simulation1D> {
    slab_simulation(spec, SLAB_KAPPA, SLAB_SIGMA, 0.0, n_cells, cfl)
}

/// Periodic slab on `[0, 1]` with uniform coefficients and the Gaussian pulse.
pub fn slab_simulation(
    spec: &ClosureSpec,
    kappa: f64,
    sigma: f64,
    q: f64,
    n_cells: usize,
    cfl: f64,
) -> Result<Simulation1D> {
    let field = init_paper_scenario(spec.order, n_cells)?;
    let matrices = build_matrices(spec.order, kappa, sigma, q)?;
    let closure = closure_coefficients(spec, matrices.absorption(), matrices.scattering())?;
    let dt = cfl * field.dx();
    Simulation1D::new(field, matrices, closure, dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_problem::{exact_solution, ModelState};
    use crate::moments::ClosureFamily;
    use nalgebra::DVector;

    fn no_closure(order: usize) -> ClosureCoefficients {
        ClosureCoefficients {
            advection_row: DVector::zeros(order + 1),
            diffusion: None,
        }
    }

    #[test]
    fn initial_pulse_energy() {
        let f = init_paper_scenario(1, 1000).unwrap();
        let exact = (std::f64::consts::PI / 500.0).sqrt();
        assert!(((f.energy() - exact) / exact).abs() < 1e-6);
        assert!(f.moments[1].iter().all(|&v| v == 0.0));
        assert_eq!(init_paper_scenario(51, 1000).unwrap().moments.len(), 52);
    }

    #[test]
    fn cfl_violation_rejected() {
        let spec = ClosureSpec::new(ClosureFamily::Pn, 3);
        assert!(matches!(slab_benchmark(&spec, 100, 2.0), Err(Error::Cfl { .. })));
        let sim = slab_benchmark(&spec, 100, 0.8).unwrap();
        assert!(sim.cfl_limit() > sim.field.dx());
    }

    #[test]
    fn conservation_without_absorption() {
        let field = {
            let mut f = MomentField1D::zeros(1, (0.0, 1.0), 200).unwrap();
            f.set_moment(0, |x| if (x - 0.5).abs() < 0.05 { 1.0 } else { 0.0 }).unwrap();
            f
        };
        let m = build_matrices(1, 0.0, 0.0, 0.0).unwrap();
        let mut sim = Simulation1D::new(field, m, no_closure(1), 0.004).unwrap();
        let e0 = sim.field.energy();
        for _ in 0..50 {
            let before = sim.field.energy();
            sim.step().unwrap();
            assert!((sim.field.energy() - before).abs() <= 1e-12 * e0);
        }
    }

    #[test]
    fn absorption_decreases_energy() {
        let spec = ClosureSpec::new(ClosureFamily::Diffusion, 1);
        let mut sim = slab_benchmark(&spec, 200, 0.8).unwrap();
        let mut e = sim.field.energy();
        for _ in 0..20 {
            sim.step().unwrap();
            assert!(sim.field.energy() < e);
            e = sim.field.energy();
        }
    }

    #[test]
    fn snapshots_land_on_requested_times() {
        let spec = ClosureSpec::new(ClosureFamily::Pn, 1);
        let mut sim = slab_benchmark(&spec, 100, 0.8).unwrap();
        assert!(sim.run(&[]).unwrap().is_empty());
        let snaps = sim.run(&[0.0, 0.0123, 0.05]).unwrap();
        assert_eq!(snaps.iter().map(|s| s.t).collect::<Vec<_>>(), vec![0.0, 0.0123, 0.05]);
        assert!(snaps[0].x.windows(2).all(|w| w[1] > w[0]));
        assert!(sim.run(&[0.01]).is_err());
    }

    #[test]
    fn csv_layout() {
        let f = init_paper_scenario(2, 4).unwrap();
        let csv = f.snapshot().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# t="));
        assert_eq!(lines[1], "x,u0,u1,u2");
        assert_eq!(lines.len(), 6);
        let first: f64 = lines[2].split(',').next().unwrap().parse().unwrap();
        assert!((first - 0.125).abs() < 1e-15);
    }

    #[test]
    fn crescendo_starts_with_smaller_diffusion() {
        let m = build_matrices(0, 1.5, 1.5, 0.0).unwrap();
        let cres = closure_coefficients(
            &ClosureSpec::new(ClosureFamily::CrescendoDiffusion, 0),
            m.absorption(),
            m.scattering(),
        )
        .unwrap();
        let diff = closure_coefficients(&ClosureSpec::new(ClosureFamily::Diffusion, 0), m.absorption(), m.scattering())
            .unwrap();
        for t in [0.01, 0.1, 0.3] {
            assert!(cres.theta(t, 0) < diff.theta(t, 0));
        }
        assert_eq!(cres.theta(0.4, 0), diff.theta(0.4, 0));
    }

    /// Independent dense Crank-Nicolson on the periodic heat equation.
    fn dense_cn(u: &[f64], theta: f64, h: f64, dx: f64, steps: usize) -> Vec<f64> {
        let n = u.len();
        let r = theta * h / (dx * dx);
        let mut lap = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            lap[(i, i)] = -2.0;
            lap[(i, (i + 1) % n)] += 1.0;
            lap[(i, (i + n - 1) % n)] += 1.0;
        }
        let id = DMatrix::<f64>::identity(n, n);
        let a = &id - &lap * (0.5 * r);
        let b = &id + &lap * (0.5 * r);
        let lu = a.lu();
        let mut v = DVector::from_column_slice(u);
        for _ in 0..steps {
            v = lu.solve(&(&b * v)).unwrap();
        }
        v.as_slice().to_vec()
    }

    #[test]
    fn scalar_diffusion_matches_standalone_cn() {
        let spec = ClosureSpec::new(ClosureFamily::Diffusion, 0);
        let mut sim = slab_benchmark(&spec, 64, 0.8).unwrap();
        let u0 = sim.field.moments[0].clone();
        let dt = sim.dt;
        for _ in 0..10 {
            sim.step().unwrap();
        }
        let theta = 1.0 / 9.0;
        let reference: Vec<f64> = dense_cn(&u0, theta, 0.5 * dt, sim.field.dx(), 20)
            .into_iter()
            .map(|v| v * (-1.5 * 10.0 * dt).exp())
            .collect();
        let err = sim.field.moments[0]
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn symmetric_data_stays_symmetric() {
        for family in [ClosureFamily::Pn, ClosureFamily::DiffusionCorrection] {
            let mut sim = slab_benchmark(&ClosureSpec::new(family, 3), 200, 0.8).unwrap();
            sim.advance_to(0.1).unwrap();
            let u = &sim.field.moments[0];
            let n = u.len();
            let asym = (0..n).map(|i| (u[i] - u[n - 1 - i]).abs()).fold(0.0, f64::max);
            assert!(asym < 1e-12, "{family}: {asym}");
        }
    }

    fn model_error(n_cells: usize, t: f64) -> f64 {
        let bump = |x: f64| (-60.0 * (x - 0.5) * (x - 0.5)).exp();
        let bump2 = |x: f64| 0.5 * (-80.0 * (x - 0.4) * (x - 0.4)).exp();
        let mut field = MomentField1D::zeros(1, (0.0, 1.0), n_cells).unwrap();
        field.set_moment(0, bump).unwrap();
        field.set_moment(1, bump2).unwrap();
        let b = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0]);
        let m = build_matrices(1, 1.0, 0.0, 0.0).unwrap().with_advection(b).unwrap();
        let dx = field.dx();
        let mut sim = Simulation1D::new(field, m, no_closure(1), 0.8 * dx).unwrap();
        sim.advance_to(t).unwrap();

        let centers = sim.field.centers();
        let faces = sim.field.faces();
        let at = |xs: &[f64]| {
            let s = ModelState::new(xs.iter().map(|&x| bump(x)).collect(), xs.iter().map(|&x| bump2(x)).collect(), 1.0)
                .unwrap();
            exact_solution(&s, t).unwrap()
        };
        let ec = at(&centers);
        let ef = at(&faces);
        let e0 = sim.field.moments[0].iter().zip(&ec.u1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let e1 = sim.field.moments[1].iter().zip(&ef.u2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        e0.max(e1)
    }

    #[test]
    fn model_problem_second_order() {
        let errs: Vec<f64> = [100, 200, 400].iter().map(|&n| model_error(n, 0.4)).collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order > 1.9, "{errs:?}");
        }
    }
}
