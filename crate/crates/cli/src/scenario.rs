//! Scenario execution: runs solvers, writes CSV artifacts, and assembles a report.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use crescendo_core::model_problem::{foop_solution, mean_solution, soop_solution};
use crescendo_core::moments::{ClosureFamily, ClosureSpec};
use crescendo_core::op_engine::MemoryPolicy;
use crescendo_core::solver1d::{slab_simulation, Snapshot};
use crescendo_core::solver2d::{build_lattice, step_2d, Geometry};
use crescendo_core::spatial_moments::measure_moments;
use crescendo_core::{Closure2D, Field2D, GaussianMeasure, MaterialMap2D};
use nalgebra::DMatrix;

use crate::cache::{ReferenceCache, ReferenceProfile};
use crate::config::{ModelCurve, ScenarioConfig, ScenarioKind};
use crate::verify;
use crate::CliError;

/// Residual bound for the per-step energy identity of the 2D solver.
pub const ENERGY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    pub name: String,
    pub value: f64,
}

/// Outcome of a scenario run.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub scenario: String,
    pub lines: Vec<String>,
    pub metrics: Vec<Metric>,
    pub failures: Vec<String>,
    pub files: Vec<PathBuf>,
}

impl Report {
    fn metric(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.push(Metric {
            name: name.into(),
            value,
        });
    }

    pub fn success(&self) -> bool {
        self.failures.is_empty()
    }

    /// `metric,name,value` lines.
    pub fn metric_lines(&self) -> String {
        self.metrics
            .iter()
            .map(|m| format!("metric,{},{:.12e}\n", m.name, m.value))
            .collect()
    }

    /// Plain-text summary followed by the metric lines.
    pub fn render(&self) -> String {
        let mut out = format!("scenario {}\n", self.scenario);
        for line in &self.lines {
            let _ = writeln!(out, "{line}");
        }
        for f in &self.failures {
            let _ = writeln!(out, "FAILED: {f}");
        }
        let _ = writeln!(
            out,
            "status: {}",
            if self.success() { "ok" } else { "failed" }
        );
        out.push_str(&self.metric_lines());
        out
    }
}

fn solver_error(context: impl Into<String>) -> impl FnOnce(crescendo_core::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Solver { context, source }
}

fn write_file(report: &mut Report, path: PathBuf, contents: &str) -> Result<(), CliError> {
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    report.files.push(path);
    Ok(())
}

/// Runs a scenario, writing artifacts below `root / output_dir`.
pub fn run_scenario(config: &ScenarioConfig, root: &Path) -> Result<Report, CliError> {
    run_scenario_in(config, root, None)
}

/// As [`run_scenario`], resolving a relative geometry path against `base`.
pub fn run_scenario_in(config: &ScenarioConfig, root: &Path, base: Option<&Path>) -> Result<Report, CliError> {
    let out = root.join(&config.output_dir);
    fs::create_dir_all(&out).map_err(|e| CliError::io(&out, e))?;
    let mut report = Report {
        scenario: config.scenario.to_string(),
        ..Report::default()
    };
    match config.scenario {
        ScenarioKind::Slab1d => run_slab(config, root, &out, &mut report)?,
        ScenarioKind::Lattice2d => run_lattice(config, &out, base, &mut report)?,
        ScenarioKind::Model => run_model(config, &out, &mut report)?,
        ScenarioKind::Verify => run_verify(config, &mut report),
    }
    let summary = report.render();
    write_file(&mut report, out.join("summary.txt"), &summary)?;
    Ok(report)
}

fn time_tag(t: f64) -> String {
    format!("t{t:.4}")
}

/// Spec for a closure name. `general_linear` uses the measure with unit
/// variances, correlation `beta` between `u_N` and `u_{N+1}`, and variance
/// `gamma` for `u_{N+1}`.
fn slab_spec(family: ClosureFamily, config: &ScenarioConfig) -> Result<ClosureSpec, CliError> {
    if family != ClosureFamily::GeneralLinear {
        return Ok(ClosureSpec::new(family, config.order));
    }
    let n = config.order + 2;
    let mut cov = DMatrix::<f64>::identity(n, n);
    cov[(n - 2, n - 1)] = config.beta;
    cov[(n - 1, n - 2)] = config.beta;
    cov[(n - 1, n - 1)] = config.gamma;
    let measure = GaussianMeasure::centered(cov, n - 1).map_err(solver_error("general_linear measure"))?;
    Ok(ClosureSpec::general_linear(config.order, measure))
}

fn run_closure(spec: &ClosureSpec, config: &ScenarioConfig) -> Result<Vec<Snapshot>, crescendo_core::Error> {
    let mut sim = slab_simulation(spec, config.kappa, config.sigma, config.q, config.n_cells, config.cfl)?;
    sim.run(&config.snapshot_times)
}

/// Parameters that determine the reference run, one per line.
pub fn reference_canonical(config: &ScenarioConfig) -> String {
    let times: Vec<String> = config.snapshot_times.iter().map(|t| t.to_string()).collect();
    format!(
        "reference=pn\nN={}\nkappa={}\nsigma={}\nq={}\nn_cells={}\ncfl={}\nsnapshot_times={}\n",
        config.reference_order,
        config.kappa,
        config.sigma,
        config.q,
        config.n_cells,
        config.cfl,
        times.join(",")
    )
}

fn l2(a: &[f64], b: &[f64], dx: f64) -> f64 {
    (a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() * dx).sqrt()
}

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn run_slab(config: &ScenarioConfig, root: &Path, out: &Path, report: &mut Report) -> Result<(), CliError> {
    let families = config.slab_closures().map_err(|m| CliError::Config { line: 0, message: m })?;
    let specs = families
        .iter()
        .map(|&f| slab_spec(f, config))
        .collect::<Result<Vec<_>, _>>()?;

    let cache = ReferenceCache::new(root.join(".reference_cache"));
    let canonical = reference_canonical(config);
    let cached = cache.load(&canonical);
    let reference_spec = ClosureSpec::new(ClosureFamily::Pn, config.reference_order);

    // the reference and every closure run concurrently; results keep list order
    let (runs, fresh_reference) = thread::scope(|s| {
        let reference = cached
            .is_none()
            .then(|| s.spawn(|| run_closure(&reference_spec, config)));
        let handles: Vec<_> = specs.iter().map(|spec| s.spawn(|| run_closure(spec, config))).collect();
        let runs: Vec<_> = handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect();
        (runs, reference.map(|h| h.join().expect("solver thread panicked")))
    });

    let reference: Vec<ReferenceProfile> = match (cached, fresh_reference) {
        (Some(profiles), _) => {
            report.lines.push(format!("reference P_{} loaded from cache", config.reference_order));
            profiles
        }
        (None, Some(result)) => {
            let snaps = result.map_err(solver_error(format!("reference P_{}", config.reference_order)))?;
            let profiles: Vec<ReferenceProfile> = snaps
                .iter()
                .map(|s| ReferenceProfile {
                    t: s.t,
                    x: s.x.clone(),
                    u0: s.moments[0].clone(),
                })
                .collect();
            let path = cache.store(&canonical, &profiles)?;
            report.lines.push(format!("reference P_{} computed, cached at {}", config.reference_order, path.display()));
            profiles
        }
        (None, None) => unreachable!("reference is computed whenever the cache misses"),
    };

    let dx = 1.0 / config.n_cells as f64;
    let mut errors = String::from("closure,N,t,l2,linf\n");
    for (family, result) in families.iter().zip(runs) {
        let snaps = result.map_err(solver_error(format!("{family} N={}", config.order)))?;
        let mut moments_csv = String::new();
        for (snap, reference) in snaps.iter().zip(&reference) {
            let tag = time_tag(snap.t);
            write_file(report, out.join(format!("{family}_N{}_{tag}.csv", config.order)), &snap.to_csv())?;
            let e2 = l2(&snap.moments[0], &reference.u0, dx);
            let einf = linf(&snap.moments[0], &reference.u0);
            let _ = writeln!(errors, "{family},{},{:.6},{e2:.12e},{einf:.12e}", config.order, snap.t);
            report.metric(format!("l2_error.{family}.N{}.{tag}", config.order), e2);
            report.metric(format!("linf_error.{family}.N{}.{tag}", config.order), einf);
            let table = measure_moments(snap, config.order + 1, config.x0)
                .map_err(solver_error(format!("moments of {family}")))?;
            moments_csv.push_str(&table.to_csv());
        }
        write_file(report, out.join(format!("moments_{family}_N{}.csv", config.order)), &moments_csv)?;
        report.lines.push(format!("{family} N={}: {} snapshots", config.order, snaps.len()));
    }
    write_file(report, out.join("errors.csv"), &errors)?;
    Ok(())
}

fn load_geometry(config: &ScenarioConfig, base: Option<&Path>) -> Result<MaterialMap2D, CliError> {
    if config.geometry == "builtin" {
        return build_lattice(config.nx, config.ny).map_err(solver_error("lattice"));
    }
    let mut path = PathBuf::from(&config.geometry);
    if path.is_relative() {
        if let Some(base) = base {
            path = base.join(path);
        }
    }
    let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    Geometry::parse(&text)
        .and_then(|g| g.rasterize(config.nx, config.ny))
        .map_err(solver_error(format!("geometry {}", path.display())))
}

struct LatticeRun {
    snapshots: Vec<Field2D>,
    peaks: Vec<f64>,
    energy_log: String,
    worst_residual: f64,
    max_cg_iterations: usize,
}

fn run_lattice_closure(map: &MaterialMap2D, closure: Closure2D, config: &ScenarioConfig) -> Result<LatticeRun, crescendo_core::Error> {
    let mut field = Field2D::zeros(map);
    let source_cell = map.locate(map.width / 2.0, map.height / 2.0);
    let steps = (config.t_final / config.dt).round() as usize;
    let mut run = LatticeRun {
        snapshots: Vec::new(),
        peaks: Vec::with_capacity(steps),
        energy_log: String::from("step,t,energy,source,absorption,boundary_flux,residual\n"),
        worst_residual: 0.0,
        max_cg_iterations: 0,
    };
    let mut pending = config.snapshot_times.iter().peekable();
    while pending.next_if(|&&t| t <= 0.0).is_some() {
        run.snapshots.push(field.clone());
    }
    for step in 1..=steps {
        let report = step_2d(&mut field, map, closure, config.boundary, config.dt)?;
        // pin the clock to the grid so snapshot times match exactly
        field.t = step as f64 * config.dt;
        let b = report.balance;
        let _ = writeln!(
            run.energy_log,
            "{step},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.6e}",
            field.t, b.energy_after, b.source, b.absorption, b.boundary_flux, b.residual
        );
        run.worst_residual = run.worst_residual.max(b.residual);
        run.max_cg_iterations = run.max_cg_iterations.max(report.cg.iterations);
        run.peaks.push(field.values[source_cell]);
        while pending.next_if(|&&t| t <= field.t + 0.5 * config.dt).is_some() {
            run.snapshots.push(field.clone());
        }
    }
    Ok(run)
}

fn run_lattice(config: &ScenarioConfig, out: &Path, base: Option<&Path>, report: &mut Report) -> Result<(), CliError> {
    let closures = config.lattice_closures().map_err(|m| CliError::Config { line: 0, message: m })?;
    let map = load_geometry(config, base)?;
    let runs: Vec<_> = thread::scope(|s| {
        let handles: Vec<_> = closures
            .iter()
            .map(|&c| {
                let map = &map;
                s.spawn(move || run_lattice_closure(map, c, config))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
    });
    let mut by_closure = Vec::new();
    for (closure, result) in closures.iter().zip(runs) {
        let run = result.map_err(solver_error(format!("lattice {closure}")))?;
        for field in &run.snapshots {
            write_file(report, out.join(format!("{closure}_{}.csv", time_tag(field.t))), &field.to_csv(&map))?;
        }
        write_file(report, out.join(format!("energy_{closure}.csv")), &run.energy_log)?;
        report.metric(format!("energy_residual_max.{closure}"), run.worst_residual);
        report.metric(format!("cg_iterations_max.{closure}"), run.max_cg_iterations as f64);
        report.metric(
            format!("source_peak_final.{closure}"),
            run.peaks.last().copied().unwrap_or(0.0),
        );
        report.lines.push(format!(
            "{closure}: {} steps, worst energy residual {:.3e}",
            run.peaks.len(),
            run.worst_residual
        ));
        if run.worst_residual > ENERGY_TOLERANCE {
            report.failures.push(format!(
                "{closure}: energy residual {:.3e} exceeds {ENERGY_TOLERANCE:e}",
                run.worst_residual
            ));
        }
        by_closure.push((*closure, run));
    }
    let find = |c: Closure2D| by_closure.iter().find(|(k, _)| *k == c).map(|(_, r)| r);
    if let (Some(d), Some(c)) = (find(Closure2D::Diffusion), find(Closure2D::Crescendo)) {
        let violations = d.peaks.iter().zip(&c.peaks).filter(|(pd, pc)| pc < pd).count();
        report.metric("peak_order_violations", violations as f64);
        if violations > 0 {
            report
                .failures
                .push(format!("crescendo source peak below diffusion on {violations} steps"));
        }
    }
    Ok(())
}

fn run_model(config: &ScenarioConfig, out: &Path, report: &mut Report) -> Result<(), CliError> {
    let curves = config.model_curves().map_err(|m| CliError::Config { line: 0, message: m })?;
    let n = config.n_cells;
    let length = config.length;
    let h = length / n as f64;
    let x: Vec<f64> = (0..n).map(|i| -0.5 * length + i as f64 * h).collect();
    let u1: Vec<f64> = x.iter().map(|&x| (-x.powi(6)).exp()).collect();
    let (beta, tau) = (config.beta, config.tau);
    for &t in &config.snapshot_times {
        let mean = mean_solution(&u1, beta, t, length).map_err(solver_error("model mean"))?;
        let mut columns: Vec<(&str, Vec<f64>)> = vec![("mean", mean.u1)];
        for &curve in &curves {
            let values = match curve {
                ModelCurve::Foop => foop_solution(&u1, beta, t, length),
                ModelCurve::Soop => soop_solution(&u1, beta, tau, t, MemoryPolicy::Constant, length),
                ModelCurve::SoopCrescendo => soop_solution(&u1, beta, tau, t, MemoryPolicy::Crescendo, length),
                ModelCurve::SoopTrapezoidal => soop_solution(&u1, beta, tau, t, MemoryPolicy::Trapezoidal, length),
            }
            .map_err(solver_error(format!("model {}", curve.name())))?;
            let err = l2(&values, &columns[0].1, h);
            report.metric(format!("l2_vs_mean.{}.{}", curve.name(), time_tag(t)), err);
            columns.push((curve.name(), values));
        }
        let mut csv = format!("# t={t:.16e}\nx");
        for (name, _) in &columns {
            let _ = write!(csv, ",{name}");
        }
        csv.push('\n');
        for i in 0..n {
            let _ = write!(csv, "{:.16e}", x[i]);
            for (_, v) in &columns {
                let _ = write!(csv, ",{:.16e}", v[i]);
            }
            csv.push('\n');
        }
        write_file(report, out.join(format!("model_{}.csv", time_tag(t))), &csv)?;
    }
    report
        .lines
        .push(format!("model problem: beta={beta}, tau={tau}, {} snapshots", config.snapshot_times.len()));
    Ok(())
}

fn run_verify(config: &ScenarioConfig, report: &mut Report) {
    for suite in verify::run_all(config.n_cells) {
        report.metric(format!("suite_passed.{}", suite.name), suite.passed as f64);
        report.metric(format!("suite_total.{}", suite.name), suite.total as f64);
        report.metric(format!("suite_worst.{}", suite.name), suite.worst);
        if !suite.ok() {
            report.failures.push(suite.summary());
        }
        report.lines.push(suite.summary());
    }
}
