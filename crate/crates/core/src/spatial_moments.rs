//! Spatial moments `m^l_k = int (x - x0)^l u_k dx` and their exact evolution
//! `dm^l/dt = l B m^{l-1} - C m^l`.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::linalg::expm;
use crate::moments::{advection_matrix, build_matrices, closure_coefficients, ClosureSpec};
use crate::solver1d::{MomentField1D, Simulation1D, Snapshot};

/// `values[l][k]` for `l = 0..=L`, `k = 0..K`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialMomentTable {
    pub t: f64,
    pub values: Vec<Vec<f64>>,
}

impl SpatialMomentTable {
    pub fn new(t: f64, values: Vec<Vec<f64>>) -> Result<Self> {
        let k = values.first().map_or(0, Vec::len);
        if values.is_empty() || k == 0 || values.iter().any(|row| row.len() != k) {
            return Err(Error::Dimension("moment table must be a nonempty rectangle".into()));
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(invalid("table", "entries must be finite"));
        }
        Ok(Self { t, values })
    }

    pub fn max_l(&self) -> usize {
        self.values.len() - 1
    }

    pub fn n_angular(&self) -> usize {
        self.values[0].len()
    }

    pub fn get(&self, l: usize, k: usize) -> f64 {
        self.values.get(l).and_then(|row| row.get(k)).copied().unwrap_or(0.0)
    }

    /// `m^0_0`
    pub fn total_energy(&self) -> f64 {
        self.values[0][0]
    }

    /// `l,k,value` rows, preceded by `# t=`.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# t={:.16e}\nl,k,value\n", self.t);
        for (l, row) in self.values.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                let _ = writeln!(out, "{l},{k},{v:.16e}");
            }
        }
        out
    }
}

fn quadrature(xs: &[f64], u: &[f64], dx: f64, x0: f64, l: usize) -> f64 {
    xs.iter().zip(u).map(|(x, v)| (x - x0).powi(l as i32) * v).sum::<f64>() * dx
}

/// Midpoint quadrature on a co-located snapshot.
pub fn measure_moments(snapshot: &Snapshot, max_l: usize, x0: f64) -> Result<SpatialMomentTable> {
    if snapshot.x.len() < 2 {
        return Err(invalid("snapshot", "needs at least two sample points"));
    }
    let dx = snapshot.x[1] - snapshot.x[0];
    let values = (0..=max_l)
        .map(|l| snapshot.moments.iter().map(|u| quadrature(&snapshot.x, u, dx, x0, l)).collect())
        .collect();
    SpatialMomentTable::new(snapshot.t, values)
}

/// Midpoint quadrature at each moment's native staggered positions.
pub fn measure_field_moments(field: &MomentField1D, max_l: usize, x0: f64) -> Result<SpatialMomentTable> {
    let positions = [field.centers(), field.faces()];
    let values = (0..=max_l)
        .map(|l| {
            field
                .moments
                .iter()
                .enumerate()
                .map(|(k, u)| quadrature(&positions[k % 2], u, field.dx(), x0, l))
                .collect()
        })
        .collect();
    SpatialMomentTable::new(field.t, values)
}

/// `int |x - x0|^l |u_0| dx`, the scale against which moment deviations are measured.
pub fn absolute_moment(field: &MomentField1D, l: usize, x0: f64) -> f64 {
    field
        .centers()
        .iter()
        .zip(&field.moments[0])
        .map(|(x, v)| (x - x0).abs().powi(l as i32) * v.abs())
        .sum::<f64>()
        * field.dx()
}

/// Exact evolution of a moment table under `dm^l/dt = l B m^{l-1} - C m^l`.
///
/// The table rows are stacked into one vector and propagated with the
/// exponential of the block lower-bidiagonal generator. For diagonal `C`
/// the zeroth row is overwritten by the closed form `e^{-tC} m^0`.
pub fn evolve_moments_oracle(
    advection: &DMatrix<f64>,
    decay: &DMatrix<f64>,
    initial: &SpatialMomentTable,
    t: f64,
) -> Result<SpatialMomentTable> {
    let k = initial.n_angular();
    if advection.shape() != (k, k) || decay.shape() != (k, k) {
        return Err(Error::Dimension(format!("B and C must be {k}x{k}")));
    }
    if !(t >= 0.0) {
        return Err(invalid("t", "must be >= 0"));
    }
    let rows = initial.max_l() + 1;
    let size = rows * k;
    let mut generator = DMatrix::<f64>::zeros(size, size);
    for l in 0..rows {
        let d = l * k;
        generator.view_mut((d, d), (k, k)).copy_from(&(-decay));
        if l > 0 {
            generator.view_mut((d, d - k), (k, k)).copy_from(&(advection * l as f64));
        }
    }
    let start = DVector::from_iterator(size, initial.values.iter().flatten().copied());
    let end = expm(&(generator * t)) * start;
    let mut values: Vec<Vec<f64>> = (0..rows).map(|l| end.rows(l * k, k).iter().copied().collect()).collect();
    let diagonal = (0..k).all(|i| (0..k).all(|j| i == j || decay[(i, j)] == 0.0));
    if diagonal {
        values[0] = (0..k).map(|j| (-t * decay[(j, j)]).exp() * initial.values[0][j]).collect();
    }
    SpatialMomentTable::new(t, values)
}

/// Deviation of one spatial moment `m^l_0` between a run and the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentDeviation {
    pub l: usize,
    pub measured: f64,
    pub oracle: f64,
    /// `|measured - oracle| / int |x - x0|^l |u_0| dx`
    pub relative: f64,
}

/// Slab setup for checking moment preservation of a truncated closure.
#[derive(Debug, Clone)]
pub struct TheoremSetup {
    pub spec: ClosureSpec,
    pub kappa: f64,
    pub sigma: f64,
    pub cfl: f64,
    pub t: f64,
    pub x0: f64,
}

/// Runs the truncated system from `initial` (which may carry moments past
/// `N`) and compares `m^0_0 .. m^{N+1}_0` with the untruncated oracle.
///
/// Refuses data whose moment `u_{N+1}` has nonzero integral, since moment
/// preservation is not claimed there.
pub fn verify_theorem(initial: &MomentField1D, setup: &TheoremSetup) -> Result<Vec<MomentDeviation>> {
    let order = setup.spec.order;
    let top = order + 1;
    let full = measure_field_moments(initial, top, setup.x0)?;
    let next_integral = full.get(0, order + 1);
    let scale = full.values[0].iter().map(|v| v.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    if next_integral.abs() > 1e-12 * scale {
        return Err(Error::Hypothesis(format!(
            "integral of u_{} is {next_integral:e}, must vanish",
            order + 1
        )));
    }

    let mut field = MomentField1D::zeros(order, initial.domain(), initial.n_cells())?;
    for k in 0..=order.min(initial.order()) {
        field.moments[k] = initial.moments[k].clone();
    }
    let matrices = build_matrices(order, setup.kappa, setup.sigma, 0.0)?;
    let closure = closure_coefficients(&setup.spec, matrices.absorption(), matrices.scattering())?;
    let dt = setup.cfl * field.dx();
    let mut sim = Simulation1D::new(field, matrices, closure, dt)?;
    sim.advance_to(setup.t)?;
    let measured = measure_field_moments(&sim.field, top, setup.x0)?;

    // K = N+3 angular moments already resolve every entry with l + k <= N+2
    let k_oracle = top + 2;
    let start_rows = (0..=top)
        .map(|l| (0..k_oracle).map(|k| full.get(l, k)).collect())
        .collect();
    let start = SpatialMomentTable::new(0.0, start_rows)?;
    let oracle_matrices = build_matrices(k_oracle - 1, setup.kappa, setup.sigma, 0.0)?;
    let oracle = evolve_moments_oracle(
        &advection_matrix(k_oracle - 1),
        &oracle_matrices.decay_matrix()?,
        &start,
        setup.t,
    )?;

    Ok((0..=top)
        .map(|l| {
            let (m, o) = (measured.get(l, 0), oracle.get(l, 0));
            MomentDeviation {
                l,
                measured: m,
                oracle: o,
                relative: (m - o).abs() / absolute_moment(&sim.field, l, setup.x0).max(f64::MIN_POSITIVE),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::ClosureFamily;
    use crate::solver1d::init_paper_scenario;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn decay(rates: &[f64]) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_column_slice(rates))
    }

    #[test]
    fn gaussian_first_moment_vanishes() {
        let f = init_paper_scenario(0, 1000).unwrap();
        let t = measure_moments(&f.snapshot(), 1, 0.5).unwrap();
        assert!(t.get(1, 0).abs() < 1e-10);
        let exact = (std::f64::consts::PI / 500.0).sqrt();
        assert!((t.total_energy() - exact).abs() / exact < 1e-6);
    }

    #[test]
    fn constant_profile_moments() {
        let mut f = MomentField1D::zeros(0, (0.0, 1.0), 2000).unwrap();
        f.set_moment(0, |_| 1.0).unwrap();
        let t = measure_moments(&f.snapshot(), 4, 0.0).unwrap();
        for l in 0..=4 {
            assert!((t.get(l, 0) - 1.0 / (l as f64 + 1.0)).abs() < 1e-6);
        }
    }

    #[test]
    fn oracle_pure_decay_without_advection() {
        let start = SpatialMomentTable::new(0.0, vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]).unwrap();
        let c = decay(&[1.5, 3.0]);
        let out = evolve_moments_oracle(&DMatrix::zeros(2, 2), &c, &start, 0.7).unwrap();
        for l in 0..3 {
            for k in 0..2 {
                let expected = start.values[l][k] * (-0.7 * c[(k, k)]).exp();
                assert!((out.values[l][k] - expected).abs() < 1e-13);
            }
        }
        assert_eq!(out.values[0][0], (-0.7f64 * 1.5).exp());
    }

    #[test]
    fn oracle_first_moment_closed_form() {
        let b = advection_matrix(3);
        let mut rows = vec![vec![0.0; 4]; 2];
        rows[0][0] = 1.0;
        rows[1] = vec![0.2, -0.1, 0.3, 0.05];
        let start = SpatialMomentTable::new(0.0, rows.clone()).unwrap();
        let t = 0.9;
        let out = evolve_moments_oracle(&b, &DMatrix::zeros(4, 4), &start, t).unwrap();
        let m0 = DVector::from_vec(rows[0].clone());
        let expected = DVector::from_vec(rows[1].clone()) + &b * m0 * t;
        for k in 0..4 {
            assert!((out.values[1][k] - expected[k]).abs() < 1e-12);
        }
    }

    /// Independent fine-step RK4 on the moment recursion.
    #[test]
    fn oracle_matches_rk4() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let k = 5;
        let b = advection_matrix(k - 1);
        let c = decay(&[0.5, 2.0, 2.0, 2.0, 2.0]);
        let rows: Vec<Vec<f64>> = (0..4).map(|_| (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let start = SpatialMomentTable::new(0.0, rows.clone()).unwrap();
        let t = 1.3;
        let out = evolve_moments_oracle(&b, &c, &start, t).unwrap();

        let rhs = |m: &Vec<DVector<f64>>| -> Vec<DVector<f64>> {
            (0..m.len())
                .map(|l| {
                    let mut d = -&c * &m[l];
                    if l > 0 {
                        d += &b * &m[l - 1] * l as f64;
                    }
                    d
                })
                .collect()
        };
        let axpy = |m: &Vec<DVector<f64>>, d: &Vec<DVector<f64>>, h: f64| -> Vec<DVector<f64>> {
            m.iter().zip(d).map(|(a, b)| a + b * h).collect()
        };
        let mut m: Vec<DVector<f64>> = rows.iter().map(|r| DVector::from_vec(r.clone())).collect();
        let steps = 2000;
        let h = t / steps as f64;
        for _ in 0..steps {
            let k1 = rhs(&m);
            let k2 = rhs(&axpy(&m, &k1, h / 2.0));
            let k3 = rhs(&axpy(&m, &k2, h / 2.0));
            let k4 = rhs(&axpy(&m, &k3, h));
            for l in 0..m.len() {
                m[l] += (&k1[l] + &k2[l] * 2.0 + &k3[l] * 2.0 + &k4[l]) * (h / 6.0);
            }
        }
        for (got, want) in out.values.iter().zip(&m).take(4) {
            for (g, w) in got.iter().zip(want.iter()).take(k) {
                assert!((g - w).abs() < 1e-10);
            }
        }
    }

    /// Perturbing the closure row of a truncated system moves exactly the
    /// entries with `l + k = N + 1` among those with `l + k <= N + 1`.
    #[test]
    fn dependence_tree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for order in 0..4 {
            let k = order + 1;
            let rows: Vec<Vec<f64>> = (0..=order + 1).map(|_| (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
            let start = SpatialMomentTable::new(0.0, rows).unwrap();
            let c = decay(&vec![1.0; k]);
            let b = advection_matrix(order);
            let base = evolve_moments_oracle(&b, &c, &start, 0.5).unwrap();
            let mut bp = b.clone();
            for j in 0..k {
                bp[(order, j)] += 1e-3 * (j as f64 + 1.0);
            }
            let pert = evolve_moments_oracle(&bp, &c, &start, 0.5).unwrap();
            for l in 0..=order + 1 {
                for j in 0..k {
                    let changed = (base.values[l][j] - pert.values[l][j]).abs() > 1e-12;
                    if l + j <= order {
                        assert!(!changed, "N={order} l={l} k={j}");
                    } else if l + j == order + 1 {
                        assert!(changed, "N={order} l={l} k={j}");
                    }
                }
            }
        }
    }

    fn setup(family: ClosureFamily, order: usize) -> TheoremSetup {
        TheoremSetup {
            spec: ClosureSpec::new(family, order),
            kappa: 1.5,
            sigma: 1.5,
            cfl: 0.8,
            t: 0.4,
            x0: 0.5,
        }
    }

    #[test]
    fn pn_preserves_moments_up_to_n_plus_one() {
        let initial = init_paper_scenario(1, 1000).unwrap();
        let devs = verify_theorem(&initial, &setup(ClosureFamily::Pn, 1)).unwrap();
        assert_eq!(devs.len(), 3);
        for d in devs {
            assert!(d.relative < 5e-5, "{d:?}");
        }
    }

    #[test]
    fn nonzero_next_moment_is_refused() {
        let mut initial = init_paper_scenario(1, 200).unwrap();
        initial.set_moment(1, |x| (-100.0 * (x - 0.5) * (x - 0.5)).exp()).unwrap();
        let err = verify_theorem(&initial, &setup(ClosureFamily::Pn, 0)).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
    }

    #[test]
    fn csv_rows() {
        let t = SpatialMomentTable::new(0.5, vec![vec![1.0, 2.0]]).unwrap();
        let csv = t.to_csv();
        assert_eq!(csv.lines().nth(1), Some("l,k,value"));
        assert_eq!(csv.lines().count(), 4);
    }
}
