//! Truncated slab-geometry moment hierarchy `u_t + B u_x = -C u + q` and the
//! closure coefficients for each supported closure family.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::gaussian::GaussianMeasure;
use crate::op_engine::MemoryPolicy;

/// A material coefficient that is either uniform or given per cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient {
    Constant(f64),
    Field(Vec<f64>),
}

impl Coefficient {
    pub fn at(&self, cell: usize) -> f64 {
        match self {
            Coefficient::Constant(v) => *v,
            Coefficient::Field(values) => values[cell],
        }
    }

    pub fn values(&self) -> Box<dyn Iterator<Item = f64> + '_> {
        match self {
            Coefficient::Constant(v) => Box::new(std::iter::once(*v)),
            Coefficient::Field(values) => Box::new(values.iter().copied()),
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Coefficient::Constant(v) => Some(*v),
            Coefficient::Field(_) => None,
        }
    }

    fn zip_with(&self, other: &Coefficient, f: impl Fn(f64, f64) -> f64) -> Result<Coefficient> {
        Ok(match (self, other) {
            (Coefficient::Constant(a), Coefficient::Constant(b)) => Coefficient::Constant(f(*a, *b)),
            (Coefficient::Field(a), Coefficient::Constant(b)) => Coefficient::Field(a.iter().map(|x| f(*x, *b)).collect()),
            (Coefficient::Constant(a), Coefficient::Field(b)) => Coefficient::Field(b.iter().map(|y| f(*a, *y)).collect()),
            (Coefficient::Field(a), Coefficient::Field(b)) => {
                if a.len() != b.len() {
                    return Err(Error::Dimension("material fields differ in length".into()));
                }
                Coefficient::Field(a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect())
            }
        })
    }
}

impl From<f64> for Coefficient {
    fn from(v: f64) -> Self {
        Coefficient::Constant(v)
    }
}

/// `b_{k,k+1} = (k+1)/(2k+1)`
pub fn upper_coupling(k: usize) -> f64 {
    (k + 1) as f64 / (2 * k + 1) as f64
}

/// `b_{k,k-1} = k/(2k+1)`
pub fn lower_coupling(k: usize) -> f64 {
    k as f64 / (2 * k + 1) as f64
}

/// `(N+1)^2 / ((2N+1)(2N+3))`, the weight of `B_CF B_FC` in the last equation.
pub fn correction_factor(order: usize) -> f64 {
    let n = order as f64;
    (n + 1.0) * (n + 1.0) / ((2.0 * n + 1.0) * (2.0 * n + 3.0))
}

/// Advection matrix of the full hierarchy truncated to moments `0..=order`.
pub fn advection_matrix(order: usize) -> DMatrix<f64> {
    let n = order + 1;
    let mut b = DMatrix::zeros(n, n);
    for k in 0..n {
        if k + 1 < n {
            b[(k, k + 1)] = upper_coupling(k);
        }
        if k > 0 {
            b[(k, k - 1)] = lower_coupling(k);
        }
    }
    b
}

#[derive(Debug, Clone)]
pub struct MomentMatrices {
    order: usize,
    advection: DMatrix<f64>,
    absorption: Coefficient,
    scattering: Coefficient,
    source: Coefficient,
}

impl MomentMatrices {
    pub fn order(&self) -> usize {
        self.order
    }

    /// `B`
    pub fn advection(&self) -> &DMatrix<f64> {
        &self.advection
    }

    pub fn absorption(&self) -> &Coefficient {
        &self.absorption
    }

    pub fn scattering(&self) -> &Coefficient {
        &self.scattering
    }

    pub fn source_density(&self) -> &Coefficient {
        &self.source
    }

    /// Diagonal of `C` at a cell: `(kappa, kappa+sigma, ..., kappa+sigma)`.
    pub fn decay_rates(&self, cell: usize) -> Vec<f64> {
        let kappa = self.absorption.at(cell);
        let total = kappa + self.scattering.at(cell);
        (0..=self.order).map(|k| if k == 0 { kappa } else { total }).collect()
    }

    /// `q = (2 kappa q_hat, 0, ..., 0)` at a cell.
    pub fn source(&self, cell: usize) -> Vec<f64> {
        let mut q = vec![0.0; self.order + 1];
        q[0] = 2.0 * self.absorption.at(cell) * self.source.at(cell);
        q
    }

    /// `C` as a matrix; only defined for uniform coefficients.
    pub fn decay_matrix(&self) -> Result<DMatrix<f64>> {
        if self.absorption.as_constant().is_none() || self.scattering.as_constant().is_none() {
            return Err(invalid("C", "decay matrix needs uniform coefficients"));
        }
        Ok(DMatrix::from_diagonal(&DVector::from_vec(self.decay_rates(0))))
    }

    /// Replaces `B` with a custom tridiagonal, zero-diagonal matrix. Used for
    /// systems with the same coupling graph, such as the two-component model.
    pub fn with_advection(mut self, advection: DMatrix<f64>) -> Result<Self> {
        let n = self.order + 1;
        if advection.nrows() != n || advection.ncols() != n {
            return Err(Error::Dimension(format!("advection must be {n}x{n}")));
        }
        for i in 0..n {
            for j in 0..n {
                let allowed = i.abs_diff(j) == 1;
                if !allowed && advection[(i, j)] != 0.0 {
                    return Err(invalid("B", "must be tridiagonal with zero diagonal"));
                }
            }
        }
        self.advection = advection;
        Ok(self)
    }
}

/// Builds `B`, `C`, `q` for moments `0..=order`.
pub fn build_matrices(
    order: usize,
    absorption: impl Into<Coefficient>,
    scattering: impl Into<Coefficient>,
    source: impl Into<Coefficient>,
) -> Result<MomentMatrices> {
    let (absorption, scattering, source) = (absorption.into(), scattering.into(), source.into());
    for (name, c) in [("kappa", &absorption), ("sigma", &scattering)] {
        if c.values().any(|v| !(v >= 0.0) || !v.is_finite()) {
            return Err(invalid(name, "coefficients must be finite and nonnegative"));
        }
    }
    if source.values().any(|v| !v.is_finite()) {
        return Err(invalid("q", "source must be finite"));
    }
    Ok(MomentMatrices {
        order,
        advection: advection_matrix(order),
        absorption,
        scattering,
        source,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosureFamily {
    Pn,
    Diffusion,
    DiffusionCorrection,
    CrescendoDiffusion,
    CrescendoCorrection,
    TrapezoidalCorrection,
    GeneralLinear,
}

impl ClosureFamily {
    pub const ALL: [ClosureFamily; 7] = [
        ClosureFamily::Pn,
        ClosureFamily::Diffusion,
        ClosureFamily::DiffusionCorrection,
        ClosureFamily::CrescendoDiffusion,
        ClosureFamily::CrescendoCorrection,
        ClosureFamily::TrapezoidalCorrection,
        ClosureFamily::GeneralLinear,
    ];

    /// Memory policy of the diffusive families, `None` for hyperbolic ones.
    pub fn memory_policy(self) -> Option<MemoryPolicy> {
        match self {
            ClosureFamily::Pn | ClosureFamily::GeneralLinear => None,
            ClosureFamily::Diffusion | ClosureFamily::DiffusionCorrection => Some(MemoryPolicy::Constant),
            ClosureFamily::CrescendoDiffusion | ClosureFamily::CrescendoCorrection => Some(MemoryPolicy::Crescendo),
            ClosureFamily::TrapezoidalCorrection => Some(MemoryPolicy::Trapezoidal),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ClosureFamily::Pn => "pn",
            ClosureFamily::Diffusion => "diffusion",
            ClosureFamily::DiffusionCorrection => "diffusion_correction",
            ClosureFamily::CrescendoDiffusion => "crescendo",
            ClosureFamily::CrescendoCorrection => "crescendo_correction",
            ClosureFamily::TrapezoidalCorrection => "trapezoidal",
            ClosureFamily::GeneralLinear => "general_linear",
        }
    }
}

impl fmt::Display for ClosureFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClosureFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClosureFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| invalid("closure", format!("unknown closure family `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct ClosureSpec {
    pub family: ClosureFamily,
    pub order: usize,
    /// Measure over moments `0..=M` with split `order+1`; GeneralLinear only.
    pub measure: Option<GaussianMeasure>,
}

impl ClosureSpec {
    pub fn new(family: ClosureFamily, order: usize) -> Self {
        Self {
            family,
            order,
            measure: None,
        }
    }

    pub fn general_linear(order: usize, measure: GaussianMeasure) -> Self {
        Self {
            family: ClosureFamily::GeneralLinear,
            order,
            measure: Some(measure),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.family, &self.measure) {
            (ClosureFamily::GeneralLinear, None) => Err(invalid("measure", "general linear closure needs a measure")),
            (ClosureFamily::GeneralLinear, Some(m)) if m.split() != self.order + 1 => Err(invalid(
                "measure",
                format!("split {} must equal N+1 = {}", m.split(), self.order + 1),
            )),
            _ => Ok(()),
        }
    }
}

/// Diffusion added to the highest retained moment: `theta = factor * c(t, tau(x))`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionCoefficient {
    pub factor: f64,
    /// `tau = 1/(kappa+sigma)`, uniform or per cell.
    pub tau: Coefficient,
    pub policy: MemoryPolicy,
}

impl DiffusionCoefficient {
    pub fn theta(&self, t: f64, cell: usize) -> f64 {
        self.factor * self.policy.coefficient(self.tau.at(cell), t)
    }

    /// Time beyond which the coefficient no longer changes.
    pub fn saturation_time(&self) -> f64 {
        match self.policy {
            MemoryPolicy::Crescendo => self.tau.values().fold(0.0, f64::max),
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureCoefficients {
    /// Row added to the last row of `B`.
    pub advection_row: DVector<f64>,
    pub diffusion: Option<DiffusionCoefficient>,
}

impl ClosureCoefficients {
    pub fn theta(&self, t: f64, cell: usize) -> f64 {
        self.diffusion.as_ref().map_or(0.0, |d| d.theta(t, cell))
    }
}

pub fn closure_coefficients(
    spec: &ClosureSpec,
    absorption: &Coefficient,
    scattering: &Coefficient,
) -> Result<ClosureCoefficients> {
    spec.validate()?;
    let n = spec.order + 1;
    let advection_row = match (&spec.family, &spec.measure) {
        (ClosureFamily::GeneralLinear, Some(measure)) => general_linear_closure(measure, spec.order)?,
        _ => DVector::zeros(n),
    };
    let diffusion = match spec.family.memory_policy() {
        None => None,
        Some(policy) => {
            let total = absorption.zip_with(scattering, |k, s| k + s)?;
            if total.values().any(|v| !(v > 0.0)) {
                return Err(invalid("kappa+sigma", "must be positive everywhere for a diffusive closure"));
            }
            let tau = match total {
                Coefficient::Constant(v) => Coefficient::Constant(1.0 / v),
                Coefficient::Field(v) => Coefficient::Field(v.iter().map(|x| 1.0 / x).collect()),
            };
            Some(DiffusionCoefficient {
                factor: correction_factor(spec.order),
                tau,
                policy,
            })
        }
    };
    Ok(ClosureCoefficients {
        advection_row,
        diffusion,
    })
}

/// Last-row modification of `B` induced by a measure on moments `0..=M`:
/// `(N+1)/(2N+1)` times the first row of `A_FC A_CC^{-1}`. Only that first
/// unresolved row matters, so moments beyond `N+1` never change the result.
pub fn general_linear_closure(measure: &GaussianMeasure, order: usize) -> Result<DVector<f64>> {
    if measure.split() != order + 1 {
        return Err(invalid(
            "measure",
            format!("split {} must equal N+1 = {}", measure.split(), order + 1),
        ));
    }
    let weight = upper_coupling(order);
    Ok(measure.gain().row(0).transpose() * weight)
}

/// `P_0 .. P_order` at `mu` by the three-term recurrence.
pub fn legendre_values(order: usize, mu: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(order + 1);
    p.push(1.0);
    if order >= 1 {
        p.push(mu);
    }
    for l in 1..order {
        let lf = l as f64;
        let next = ((2.0 * lf + 1.0) * mu * p[l] - lf * p[l - 1]) / (lf + 1.0);
        p.push(next);
    }
    p
}

/// `I(mu) = sum_l (2l+1)/2 u_l P_l(mu)`.
pub fn reconstruct_intensity(moments: &[f64], mu: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&mu) {
        return Err(invalid("mu", format!("direction cosine {mu} outside [-1, 1]")));
    }
    if moments.is_empty() {
        return Ok(0.0);
    }
    let p = legendre_values(moments.len() - 1, mu);
    Ok(moments
        .iter()
        .zip(&p)
        .enumerate()
        .map(|(l, (u, pl))| (2 * l + 1) as f64 / 2.0 * u * pl)
        .sum())
}
