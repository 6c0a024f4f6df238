//! Flat `key=value` scenario configuration.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crescendo_core::moments::ClosureFamily;
use crescendo_core::solver1d::{SLAB_CELLS, SLAB_CFL, SLAB_KAPPA, SLAB_SIGMA, SLAB_TIMES};
use crescendo_core::{Boundary, Closure2D};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    Slab1d,
    Lattice2d,
    Model,
    Verify,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 4] = [
        ScenarioKind::Slab1d,
        ScenarioKind::Lattice2d,
        ScenarioKind::Model,
        ScenarioKind::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Slab1d => "slab1d",
            ScenarioKind::Lattice2d => "lattice2d",
            ScenarioKind::Model => "model",
            ScenarioKind::Verify => "verify",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ScenarioKind::Slab1d => "periodic 1D slab, closures compared against a high-order P_N reference",
            ScenarioKind::Lattice2d => "2D checkerboard lattice with diffusion and crescendo diffusion",
            ScenarioKind::Model => "two-component model problem: mean, first- and second-order predictions",
            ScenarioKind::Verify => "projection, Dyson, full-OP, closure and moment-preservation suites",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown scenario `{s}` (slab1d, lattice2d, model, verify)"))
    }
}

/// Approximations drawn for the model problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelCurve {
    Foop,
    Soop,
    SoopCrescendo,
    SoopTrapezoidal,
}

impl ModelCurve {
    pub const ALL: [ModelCurve; 4] = [
        ModelCurve::Foop,
        ModelCurve::Soop,
        ModelCurve::SoopCrescendo,
        ModelCurve::SoopTrapezoidal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelCurve::Foop => "foop",
            ModelCurve::Soop => "soop",
            ModelCurve::SoopCrescendo => "soop_crescendo",
            ModelCurve::SoopTrapezoidal => "soop_trapezoidal",
        }
    }
}

impl FromStr for ModelCurve {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        ModelCurve::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown model curve `{s}` (foop, soop, soop_crescendo, soop_trapezoidal)"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    /// Closure names, interpreted per scenario.
    pub closures: Vec<String>,
    pub order: usize,
    pub kappa: f64,
    pub sigma: f64,
    pub q: f64,
    pub n_cells: usize,
    pub nx: usize,
    pub ny: usize,
    pub cfl: f64,
    pub dt: f64,
    pub t_final: f64,
    pub snapshot_times: Vec<f64>,
    pub x0: f64,
    pub output_dir: String,
    pub reference_order: usize,
    /// Geometry file for the lattice; `builtin` selects the shipped layout.
    pub geometry: String,
    pub boundary: Boundary,
    pub beta: f64,
    pub gamma: f64,
    pub tau: f64,
    pub length: f64,
}

pub const KEYS: [&str; 22] = [
    "scenario",
    "closure",
    "N",
    "kappa",
    "sigma",
    "q",
    "n_cells",
    "nx",
    "ny",
    "cfl",
    "dt",
    "t_final",
    "snapshot_times",
    "x0",
    "output_dir",
    "reference_N",
    "geometry",
    "boundary",
    "beta",
    "gamma",
    "tau",
    "length",
];

impl ScenarioConfig {
    /// Defaults for a scenario: the slab benchmark for `slab1d`, the
    /// full-scale lattice for `lattice2d`.
    pub fn defaults(scenario: ScenarioKind) -> Self {
        let mut c = Self {
            scenario,
            closures: Vec::new(),
            order: 0,
            kappa: SLAB_KAPPA,
            sigma: SLAB_SIGMA,
            q: 0.0,
            n_cells: SLAB_CELLS,
            nx: 400,
            ny: 400,
            cfl: SLAB_CFL,
            dt: 3e-5,
            t_final: 0.4,
            snapshot_times: SLAB_TIMES.to_vec(),
            x0: 0.5,
            output_dir: scenario.name().to_string(),
            reference_order: 51,
            geometry: "builtin".into(),
            boundary: Boundary::Dirichlet,
            beta: 0.5,
            gamma: 1.0,
            tau: 1.0,
            length: 16.0,
        };
        let names = |list: &[&str]| list.iter().map(|s| s.to_string()).collect();
        match scenario {
            ScenarioKind::Slab1d => {
                c.closures = names(&["pn", "diffusion_correction", "crescendo_correction"]);
            }
            ScenarioKind::Lattice2d => {
                c.closures = names(&["diffusion", "crescendo"]);
                c.t_final = 2.0;
                c.snapshot_times = vec![0.5, 1.0, 1.5, 2.0];
            }
            ScenarioKind::Model => {
                c.closures = names(&["foop", "soop"]);
                c.n_cells = 1024;
                c.t_final = 3.0;
                c.snapshot_times = vec![0.1, 1.0, 2.0, 3.0];
            }
            ScenarioKind::Verify => {}
        }
        c
    }

    /// Canonical text form; `parse_config(c.serialize()) == c`.
    pub fn serialize(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let lines = [
            ("scenario", self.scenario.to_string()),
            ("closure", self.closures.join(",")),
            ("N", self.order.to_string()),
            ("kappa", self.kappa.to_string()),
            ("sigma", self.sigma.to_string()),
            ("q", self.q.to_string()),
            ("n_cells", self.n_cells.to_string()),
            ("nx", self.nx.to_string()),
            ("ny", self.ny.to_string()),
            ("cfl", self.cfl.to_string()),
            ("dt", self.dt.to_string()),
            ("t_final", self.t_final.to_string()),
            ("snapshot_times", join(&self.snapshot_times)),
            ("x0", self.x0.to_string()),
            ("output_dir", self.output_dir.clone()),
            ("reference_N", self.reference_order.to_string()),
            ("geometry", self.geometry.clone()),
            ("boundary", self.boundary.to_string()),
            ("beta", self.beta.to_string()),
            ("gamma", self.gamma.to_string()),
            ("tau", self.tau.to_string()),
            ("length", self.length.to_string()),
        ];
        lines
            .iter()
            .filter(|(k, v)| !(*k == "closure" && v.is_empty()))
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }

    pub fn slab_closures(&self) -> Result<Vec<ClosureFamily>, String> {
        self.closures
            .iter()
            .map(|s| s.parse::<ClosureFamily>().map_err(|e| e.to_string()))
            .collect()
    }

    pub fn lattice_closures(&self) -> Result<Vec<Closure2D>, String> {
        self.closures
            .iter()
            .map(|s| s.parse::<Closure2D>().map_err(|e| e.to_string()))
            .collect()
    }

    pub fn model_curves(&self) -> Result<Vec<ModelCurve>, String> {
        self.closures.iter().map(|s| s.parse::<ModelCurve>()).collect()
    }
}

fn config_error(line: usize, message: impl Into<String>) -> CliError {
    CliError::Config {
        line,
        message: message.into(),
    }
}

fn number<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse::<T>()
        .map_err(|_| config_error(line, format!("malformed number for `{key}`: `{value}`")))
}

fn positive(line: usize, key: &str, value: f64) -> Result<f64, CliError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(config_error(line, format!("`{key}` must be positive, got {value}")))
    }
}

fn nonnegative(line: usize, key: &str, value: f64) -> Result<f64, CliError> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(config_error(line, format!("`{key}` must be nonnegative, got {value}")))
    }
}

fn mesh(line: usize, key: &str, value: &str) -> Result<usize, CliError> {
    let n: usize = number(line, key, value)?;
    if n < 8 {
        return Err(config_error(line, format!("`{key}` must be at least 8, got {n}")));
    }
    Ok(n)
}

/// Parses `key=value` lines. `#` starts a comment; blank lines are ignored.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, CliError> {
    let mut entries: HashMap<&str, (usize, &str)> = HashMap::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| config_error(line, format!("expected key=value, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(config_error(line, format!("unknown key `{key}`")));
        }
        if let Some((first, _)) = entries.insert(key, (line, value)) {
            return Err(config_error(line, format!("duplicate key `{key}` (first on line {first})")));
        }
    }

    let (scenario_line, scenario_value) = entries
        .get("scenario")
        .copied()
        .ok_or_else(|| config_error(0, "missing required key `scenario`"))?;
    if scenario_value.is_empty() {
        return Err(config_error(scenario_line, "`scenario` must not be empty"));
    }
    let scenario: ScenarioKind = scenario_value.parse().map_err(|e: String| config_error(scenario_line, e))?;
    let mut c = ScenarioConfig::defaults(scenario);

    let mut keys: Vec<(&str, (usize, &str))> = entries.into_iter().collect();
    keys.sort_by_key(|(_, (line, _))| *line);
    for &(key, (line, value)) in &keys {
        match key {
            "scenario" => {}
            "closure" => {
                c.closures = value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                if c.closures.is_empty() {
                    return Err(config_error(line, "`closure` lists no closures"));
                }
            }
            "N" => c.order = number(line, key, value)?,
            "kappa" => c.kappa = nonnegative(line, key, number(line, key, value)?)?,
            "sigma" => c.sigma = nonnegative(line, key, number(line, key, value)?)?,
            "q" => c.q = nonnegative(line, key, number(line, key, value)?)?,
            "n_cells" => c.n_cells = mesh(line, key, value)?,
            "nx" => {
                c.nx = mesh(line, key, value)?;
                if !keys.iter().any(|(k, _)| *k == "ny") {
                    c.ny = c.nx;
                }
            }
            "ny" => c.ny = mesh(line, key, value)?,
            "cfl" => c.cfl = positive(line, key, number(line, key, value)?)?,
            "dt" => c.dt = positive(line, key, number(line, key, value)?)?,
            "t_final" => c.t_final = nonnegative(line, key, number(line, key, value)?)?,
            "snapshot_times" => {
                c.snapshot_times = if value.is_empty() {
                    Vec::new()
                } else {
                    value
                        .split(',')
                        .map(|s| number::<f64>(line, key, s.trim()))
                        .collect::<Result<_, _>>()?
                };
            }
            "x0" => c.x0 = number(line, key, value)?,
            "output_dir" => {
                if value.is_empty() {
                    return Err(config_error(line, "`output_dir` must not be empty"));
                }
                c.output_dir = value.to_string();
            }
            "reference_N" => c.reference_order = number(line, key, value)?,
            "geometry" => c.geometry = value.to_string(),
            "boundary" => c.boundary = value.parse().map_err(|e: crescendo_core::Error| config_error(line, e.to_string()))?,
            "beta" => c.beta = number(line, key, value)?,
            "gamma" => c.gamma = positive(line, key, number(line, key, value)?)?,
            "tau" => c.tau = positive(line, key, number(line, key, value)?)?,
            "length" => c.length = positive(line, key, number(line, key, value)?)?,
            _ => unreachable!("keys are checked against KEYS"),
        }
    }

    let line_of = |key: &str| keys.iter().find(|(k, _)| *k == key).map_or(0, |(_, (l, _))| *l);
    let times_line = line_of("snapshot_times").max(line_of("t_final"));
    if c.snapshot_times.windows(2).any(|w| w[1] < w[0]) {
        return Err(config_error(times_line, "`snapshot_times` must be sorted"));
    }
    if let Some(bad) = c.snapshot_times.iter().find(|&&t| !(0.0..=c.t_final).contains(&t)) {
        return Err(config_error(
            times_line,
            format!("snapshot time {bad} lies outside [0, t_final = {}]", c.t_final),
        ));
    }
    let closures_ok = match scenario {
        ScenarioKind::Slab1d => c.slab_closures().map(|_| ()),
        ScenarioKind::Lattice2d => c.lattice_closures().map(|_| ()),
        ScenarioKind::Model => c.model_curves().map(|_| ()),
        ScenarioKind::Verify => Ok(()),
    };
    closures_ok.map_err(|e| config_error(line_of("closure"), e))?;
    if scenario == ScenarioKind::Slab1d && c.reference_order < c.order {
        return Err(config_error(line_of("reference_N"), "`reference_N` must be at least `N`"));
    }
    if scenario == ScenarioKind::Model && c.beta.abs() >= c.gamma.sqrt() {
        return Err(config_error(line_of("beta"), "|beta| must be below sqrt(gamma)"));
    }
    Ok(c)
}
