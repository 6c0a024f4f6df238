//! Cell-centered 2D diffusion `u_t = div(D grad u) - kappa u + q` with
//! backward Euler in time and a five-point stencil in space.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::linalg::{conjugate_gradient, CgOutcome};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    pub kappa: f64,
    pub sigma: f64,
    pub source: f64,
}

impl Material {
    fn validate(&self) -> std::result::Result<(), String> {
        let all = [self.kappa, self.sigma, self.source];
        if all.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err("kappa, sigma, q must be finite and nonnegative".into());
        }
        if !(self.kappa + self.sigma > 0.0) {
            return Err("kappa + sigma must be positive".into());
        }
        Ok(())
    }

    pub fn tag(&self) -> RegionTag {
        if self.source > 0.0 {
            RegionTag::Source
        } else if self.kappa > self.sigma {
            RegionTag::Absorbing
        } else {
            RegionTag::Scattering
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionTag {
    Scattering,
    Absorbing,
    Source,
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]` in cm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
    pub material: Material,
}

impl Rect {
    fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x0 && x < self.x1 && y >= self.y0 && y < self.y1
    }
}

/// Domain size, background material, and overriding rectangles (later wins).
///
/// Text form, one directive per line, `#` comments:
///
/// ```text
/// domain 7 7
/// background 0 0.2 0
/// rect 1 1 2 2 10 0 0
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    pub width: f64,
    pub height: f64,
    pub background: Material,
    pub rects: Vec<Rect>,
}

impl Geometry {
    pub fn parse(text: &str) -> Result<Self> {
        let mut domain = None;
        let mut background = None;
        let mut rects = Vec::new();
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let err = |message: String| Error::Geometry { line, message };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut parts = content.split_whitespace();
            let keyword = parts.next().unwrap_or_default();
            let numbers = parts
                .map(|p| p.parse::<f64>().map_err(|_| err(format!("malformed number `{p}`"))))
                .collect::<Result<Vec<f64>>>()?;
            let expect = |n: usize| {
                if numbers.len() == n {
                    Ok(())
                } else {
                    Err(err(format!("`{keyword}` takes {n} numbers, got {}", numbers.len())))
                }
            };
            match keyword {
                "domain" => {
                    expect(2)?;
                    if !(numbers[0] > 0.0 && numbers[1] > 0.0) {
                        return Err(err("domain size must be positive".into()));
                    }
                    domain = Some((numbers[0], numbers[1]));
                }
                "background" => {
                    expect(3)?;
                    let m = Material {
                        kappa: numbers[0],
                        sigma: numbers[1],
                        source: numbers[2],
                    };
                    m.validate().map_err(err)?;
                    background = Some(m);
                }
                "rect" => {
                    expect(7)?;
                    let r = Rect {
                        x0: numbers[0],
                        y0: numbers[1],
                        x1: numbers[2],
                        y1: numbers[3],
                        material: Material {
                            kappa: numbers[4],
                            sigma: numbers[5],
                            source: numbers[6],
                        },
                    };
                    if !(r.x1 > r.x0 && r.y1 > r.y0) {
                        return Err(err("rectangle needs x0 < x1 and y0 < y1".into()));
                    }
                    r.material.validate().map_err(err)?;
                    rects.push(r);
                }
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        let missing = |what: &str| Error::Geometry {
            line: 0,
            message: format!("missing `{what}` directive"),
        };
        let (width, height) = domain.ok_or_else(|| missing("domain"))?;
        let background = background.ok_or_else(|| missing("background"))?;
        Ok(Self {
            width,
            height,
            background,
            rects,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("domain {} {}\n", self.width, self.height);
        let b = self.background;
        let _ = writeln!(out, "background {} {} {}", b.kappa, b.sigma, b.source);
        for r in &self.rects {
            let m = r.material;
            let _ = writeln!(
                out,
                "rect {} {} {} {} {} {} {}",
                r.x0, r.y0, r.x1, r.y1, m.kappa, m.sigma, m.source
            );
        }
        out
    }

    /// Samples the material at each cell center.
    pub fn rasterize(&self, nx: usize, ny: usize) -> Result<MaterialMap2D> {
        if nx < 3 || ny < 3 {
            return Err(invalid("nx, ny", "need at least 3 cells per direction"));
        }
        let (hx, hy) = (self.width / nx as f64, self.height / ny as f64);
        let mut cells = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            let y = (j as f64 + 0.5) * hy;
            for i in 0..nx {
                let x = (i as f64 + 0.5) * hx;
                let m = self
                    .rects
                    .iter()
                    .rev()
                    .find(|r| r.contains(x, y))
                    .map_or(self.background, |r| r.material);
                cells.push(m);
            }
        }
        Ok(MaterialMap2D {
            nx,
            ny,
            width: self.width,
            height: self.height,
            kappa: cells.iter().map(|m| m.kappa).collect(),
            sigma: cells.iter().map(|m| m.sigma).collect(),
            source: cells.iter().map(|m| m.source).collect(),
            tags: cells.iter().map(Material::tag).collect(),
        })
    }
}

pub const LATTICE_SIZE: f64 = 7.0;
pub const LATTICE_ABSORBER: Material = Material {
    kappa: 10.0,
    sigma: 0.0,
    source: 0.0,
};
pub const LATTICE_SCATTERER: Material = Material {
    kappa: 0.0,
    sigma: 0.2,
    source: 0.0,
};
pub const LATTICE_SOURCE: Material = Material {
    kappa: 0.0,
    sigma: 0.2,
    source: 1.0,
};

/// Unit squares `(i, j)` (lower-left corners in cm) holding absorbers.
pub fn lattice_absorbers() -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 1..=5 {
        for i in 1..=5 {
            if (i + j) % 2 == 0 && (i, j) != (3, 3) && (i, j) != (3, 5) {
                out.push((i, j));
            }
        }
    }
    out
}

/// The 7x7 cm checkerboard lattice with a central unit source.
pub fn lattice_geometry() -> Geometry {
    let square = |i: usize, j: usize, material| Rect {
        x0: i as f64,
        y0: j as f64,
        x1: i as f64 + 1.0,
        y1: j as f64 + 1.0,
        material,
    };
    let mut rects: Vec<Rect> = lattice_absorbers()
        .into_iter()
        .map(|(i, j)| square(i, j, LATTICE_ABSORBER))
        .collect();
    rects.push(square(3, 3, LATTICE_SOURCE));
    Geometry {
        width: LATTICE_SIZE,
        height: LATTICE_SIZE,
        background: LATTICE_SCATTERER,
        rects,
    }
}

pub fn build_lattice(nx: usize, ny: usize) -> Result<MaterialMap2D> {
    lattice_geometry().rasterize(nx, ny)
}

/// Per-cell coefficients on an `nx x ny` grid; index `j * nx + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialMap2D {
    pub nx: usize,
    pub ny: usize,
    pub width: f64,
    pub height: f64,
    pub kappa: Vec<f64>,
    pub sigma: Vec<f64>,
    pub source: Vec<f64>,
    pub tags: Vec<RegionTag>,
}

impl MaterialMap2D {
    pub fn uniform(nx: usize, ny: usize, width: f64, height: f64, material: Material) -> Result<Self> {
        material.validate().map_err(|m| invalid("material", m))?;
        Geometry {
            width,
            height,
            background: material,
            rects: Vec::new(),
        }
        .rasterize(nx, ny)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self) -> (f64, f64) {
        (self.width / self.nx as f64, self.height / self.ny as f64)
    }

    pub fn cell_area(&self) -> f64 {
        let (hx, hy) = self.spacing();
        hx * hy
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        let (hx, hy) = self.spacing();
        ((i as f64 + 0.5) * hx, (j as f64 + 0.5) * hy)
    }

    /// Cell containing the point.
    pub fn locate(&self, x: f64, y: f64) -> usize {
        let (hx, hy) = self.spacing();
        let i = ((x / hx).floor().max(0.0) as usize).min(self.nx - 1);
        let j = ((y / hy).floor().max(0.0) as usize).min(self.ny - 1);
        self.index(i, j)
    }

    /// `1 / (kappa + sigma)`
    pub fn tau(&self, cell: usize) -> f64 {
        1.0 / (self.kappa[cell] + self.sigma[cell])
    }

    pub fn area_of(&self, tag: RegionTag) -> f64 {
        self.tags.iter().filter(|&&t| t == tag).count() as f64 * self.cell_area()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure2D {
    Diffusion,
    Crescendo,
}

impl Closure2D {
    pub fn name(self) -> &'static str {
        match self {
            Closure2D::Diffusion => "diffusion",
            Closure2D::Crescendo => "crescendo",
        }
    }
}

impl fmt::Display for Closure2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Closure2D {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diffusion" => Ok(Closure2D::Diffusion),
            "crescendo" => Ok(Closure2D::Crescendo),
            other => Err(invalid("closure", format!("`{other}` is not a 2D closure (diffusion, crescendo)"))),
        }
    }
}

/// `D = c(t) / 3` with `c = tau` or `min(t, tau)`.
pub fn diffusivity(map: &MaterialMap2D, closure: Closure2D, t: f64) -> Vec<f64> {
    (0..map.len())
        .map(|c| {
            let tau = map.tau(c);
            match closure {
                Closure2D::Diffusion => tau / 3.0,
                Closure2D::Crescendo => t.min(tau) / 3.0,
            }
        })
        .collect()
}

/// Outer boundary treatment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// `u = 0` on the boundary.
    Dirichlet,
    /// `u/2 + D du/dn = 0`.
    Marshak,
    /// No flux.
    Neumann,
}

impl Boundary {
    /// Outflow per unit boundary length per unit `u_P` for a cell with
    /// diffusivity `d` and normal spacing `h`.
    fn conductance(self, d: f64, h: f64) -> f64 {
        match self {
            Boundary::Dirichlet => 2.0 * d / h,
            Boundary::Marshak => {
                let g = 2.0 * d / h;
                g * 0.5 / (g + 0.5)
            }
            Boundary::Neumann => 0.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Boundary::Dirichlet => "dirichlet",
            Boundary::Marshak => "marshak",
            Boundary::Neumann => "neumann",
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(Boundary::Dirichlet),
            "marshak" => Ok(Boundary::Marshak),
            "neumann" => Ok(Boundary::Neumann),
            other => Err(invalid("boundary", format!("`{other}` (dirichlet, marshak, neumann)"))),
        }
    }
}

/// Cell-centered `u_0` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
    pub t: f64,
}

impl Field2D {
    pub fn zeros(map: &MaterialMap2D) -> Self {
        Self {
            nx: map.nx,
            ny: map.ny,
            values: vec![0.0; map.len()],
            t: 0.0,
        }
    }

    pub fn from_fn(map: &MaterialMap2D, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut field = Self::zeros(map);
        for j in 0..map.ny {
            for i in 0..map.nx {
                let (x, y) = map.center(i, j);
                field.values[map.index(i, j)] = f(x, y);
            }
        }
        field
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn energy(&self, map: &MaterialMap2D) -> f64 {
        self.values.iter().sum::<f64>() * map.cell_area()
    }

    /// `# t=` line, header `x,y,u0`, one row per cell.
    pub fn to_csv(&self, map: &MaterialMap2D) -> String {
        let mut out = format!("# t={:.16e}\nx,y,u0\n", self.t);
        for j in 0..self.ny {
            for i in 0..self.nx {
                let (x, y) = map.center(i, j);
                let _ = writeln!(out, "{x:.16e},{y:.16e},{:.16e}", self.values[map.index(i, j)]);
            }
        }
        out
    }
}

/// Terms of the discrete energy identity for one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBalance {
    pub energy_before: f64,
    pub energy_after: f64,
    /// Source input rate.
    pub source: f64,
    /// Absorption rate at the new time level.
    pub absorption: f64,
    /// Boundary outflow rate at the new time level.
    pub boundary_flux: f64,
    /// `|dE - dt (S - A - Phi)| / max(E, S dt)`
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub cg: CgOutcome,
    pub balance: EnergyBalance,
}

/// Assembled backward-Euler operator `I + dt (-div D grad + kappa)`.
struct Stencil {
    nx: usize,
    ny: usize,
    /// Coupling to the east / north neighbour (already scaled by `dt`).
    east: Vec<f64>,
    north: Vec<f64>,
    diag: Vec<f64>,
    /// Boundary outflow coefficient per cell, before `dt` scaling, per unit area.
    leak: Vec<f64>,
}

impl Stencil {
    fn new(map: &MaterialMap2D, d: &[f64], boundary: Boundary, dt: f64) -> Self {
        let (nx, ny) = (map.nx, map.ny);
        let (hx, hy) = map.spacing();
        let n = map.len();
        let mut east = vec![0.0; n];
        let mut north = vec![0.0; n];
        let mut leak = vec![0.0; n];
        for j in 0..ny {
            for i in 0..nx {
                let p = map.index(i, j);
                if i + 1 < nx {
                    east[p] = harmonic_mean(d[p], d[p + 1]) / (hx * hx);
                }
                if j + 1 < ny {
                    north[p] = harmonic_mean(d[p], d[p + nx]) / (hy * hy);
                }
                let sides_x = (i == 0) as usize + (i + 1 == nx) as usize;
                let sides_y = (j == 0) as usize + (j + 1 == ny) as usize;
                leak[p] = sides_x as f64 * boundary.conductance(d[p], hx) / hx
                    + sides_y as f64 * boundary.conductance(d[p], hy) / hy;
            }
        }
        let mut diag = vec![0.0; n];
        for j in 0..ny {
            for i in 0..nx {
                let p = map.index(i, j);
                let mut s = east[p] + north[p] + leak[p] + map.kappa[p];
                if i > 0 {
                    s += east[p - 1];
                }
                if j > 0 {
                    s += north[p - nx];
                }
                diag[p] = 1.0 + dt * s;
            }
        }
        for v in east.iter_mut().chain(north.iter_mut()) {
            *v *= dt;
        }
        Self {
            nx,
            ny,
            east,
            north,
            diag,
            leak,
        }
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let nx = self.nx;
        for j in 0..self.ny {
            for i in 0..nx {
                let p = j * nx + i;
                let mut v = self.diag[p] * x[p];
                if i + 1 < nx {
                    v -= self.east[p] * x[p + 1];
                }
                if i > 0 {
                    v -= self.east[p - 1] * x[p - 1];
                }
                if j + 1 < self.ny {
                    v -= self.north[p] * x[p + nx];
                }
                if j > 0 {
                    v -= self.north[p - nx] * x[p - nx];
                }
                y[p] = v;
            }
        }
    }
}

fn harmonic_mean(a: f64, b: f64) -> f64 {
    if a + b == 0.0 {
        0.0
    } else {
        2.0 * a * b / (a + b)
    }
}

pub const CG_TOLERANCE: f64 = 1e-10;

/// One backward-Euler step. The crescendo diffusivity is frozen at `t + dt/2`.
pub fn step_2d(
    field: &mut Field2D,
    map: &MaterialMap2D,
    closure: Closure2D,
    boundary: Boundary,
    dt: f64,
) -> Result<StepReport> {
    if !(dt > 0.0) {
        return Err(invalid("dt", "must be positive"));
    }
    if field.nx != map.nx || field.ny != map.ny {
        return Err(Error::Dimension("field and material map grids differ".into()));
    }
    let d = diffusivity(map, closure, field.t + 0.5 * dt);
    let stencil = Stencil::new(map, &d, boundary, dt);
    let rhs: Vec<f64> = field.values.iter().zip(&map.source).map(|(u, q)| u + dt * q).collect();
    let mut next = field.values.clone();
    let n = map.len();
    let cg = conjugate_gradient(
        |x, y| stencil.apply(x, y),
        &stencil.diag,
        &rhs,
        &mut next,
        CG_TOLERANCE,
        10 * n,
    )?;

    let area = map.cell_area();
    let energy_before = field.energy(map);
    let energy_after = next.iter().sum::<f64>() * area;
    let source = map.source.iter().sum::<f64>() * area;
    let absorption = next.iter().zip(&map.kappa).map(|(u, k)| u * k).sum::<f64>() * area;
    let boundary_flux = next.iter().zip(&stencil.leak).map(|(u, g)| u * g).sum::<f64>() * area;
    let imbalance = (energy_after - energy_before) - dt * (source - absorption - boundary_flux);
    let scale = energy_after.abs().max(source * dt);
    let residual = if scale == 0.0 { imbalance.abs() } else { imbalance.abs() / scale };

    field.values = next;
    field.t += dt;
    Ok(StepReport {
        cg,
        balance: EnergyBalance {
            energy_before,
            energy_after,
            source,
            absorption,
            boundary_flux,
            residual,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_layout() {
        let map = build_lattice(70, 70).unwrap();
        assert_eq!(lattice_absorbers().len(), 11);
        assert!((map.area_of(RegionTag::Absorbing) - 11.0).abs() < 1e-9);
        assert!((map.area_of(RegionTag::Source) - 1.0).abs() < 1e-9);
        assert_eq!(map.tags[map.locate(3.5, 3.5)], RegionTag::Source);
        for c in 0..map.len() {
            let total = map.kappa[c] + map.sigma[c];
            assert!(total == 0.2 || total == 10.0);
        }
    }

    #[test]
    fn geometry_round_trip_and_errors() {
        let g = lattice_geometry();
        assert_eq!(Geometry::parse(&g.to_text()).unwrap(), g);
        let bad = Geometry::parse("domain 7 7\nbackground 0 0.2 0\nrect 1 1 0 2 1 1 0\n").unwrap_err();
        assert!(matches!(bad, Error::Geometry { line: 3, .. }));
        let bad = Geometry::parse("domain 7 x\n").unwrap_err();
        assert!(matches!(bad, Error::Geometry { line: 1, .. }));
        assert!(Geometry::parse("domain 1 1\n").is_err());
        assert!(Geometry::parse("# c\ndomain 1 1\nbackground 0 0 0\n").is_err());
    }

    #[test]
    fn constant_field_is_steady_in_a_sealed_box() {
        let m = Material {
            kappa: 0.0,
            sigma: 1.0,
            source: 0.0,
        };
        let map = MaterialMap2D::uniform(10, 10, 1.0, 1.0, m).unwrap();
        let mut f = Field2D::from_fn(&map, |_, _| 2.5);
        let r = step_2d(&mut f, &map, Closure2D::Diffusion, Boundary::Neumann, 0.1).unwrap();
        assert!(f.values.iter().all(|&v| (v - 2.5).abs() < 1e-12));
        assert!((r.balance.energy_after - r.balance.energy_before).abs() < 1e-12);
    }

    #[test]
    fn crescendo_saturates_at_tau() {
        let map = build_lattice(14, 14).unwrap();
        let diff = diffusivity(&map, Closure2D::Diffusion, 0.0);
        for t in [0.05, 0.1, 1.0, 4.99, 5.0, 6.0] {
            let cres = diffusivity(&map, Closure2D::Crescendo, t);
            for c in 0..map.len() {
                if t >= map.tau(c) {
                    assert_eq!(cres[c], diff[c]);
                } else {
                    assert!(cres[c] < diff[c]);
                }
            }
        }
    }

    #[test]
    fn absorbing_medium_loses_energy_monotonically() {
        let m = Material {
            kappa: 1.0,
            sigma: 0.0,
            source: 0.0,
        };
        let map = MaterialMap2D::uniform(12, 12, 1.0, 1.0, m).unwrap();
        let mut f = Field2D::from_fn(&map, |x, y| (-20.0 * ((x - 0.5).powi(2) + (y - 0.5).powi(2))).exp());
        let mut e = f.energy(&map);
        let mut peak = f.max();
        for _ in 0..10 {
            let r = step_2d(&mut f, &map, Closure2D::Diffusion, Boundary::Marshak, 0.01).unwrap();
            assert!(r.balance.residual < 1e-8);
            assert!(f.energy(&map) < e);
            assert!(f.max() <= peak);
            e = f.energy(&map);
            peak = f.max();
        }
    }

    /// Gaussian pulse against the free-space heat kernel with decay.
    #[test]
    fn radial_heat_kernel() {
        let m = Material {
            kappa: 0.5,
            sigma: 1.0,
            source: 0.0,
        };
        let d = 1.0 / (3.0 * (m.kappa + m.sigma));
        let (l, n) = (16.0, 320);
        let map = MaterialMap2D::uniform(n, n, l, l, m).unwrap();
        let s0 = 2.0;
        let pulse = |x: f64, y: f64, s: f64| {
            let r2 = (x - l / 2.0).powi(2) + (y - l / 2.0).powi(2);
            (-r2 / (4.0 * d * s)).exp() / (4.0 * std::f64::consts::PI * d * s)
        };
        let mut f = Field2D::from_fn(&map, |x, y| pulse(x, y, s0));
        let dt = 1e-3;
        let t_end = 0.5;
        while f.t < t_end - 1e-12 {
            step_2d(&mut f, &map, Closure2D::Diffusion, Boundary::Dirichlet, dt).unwrap();
        }
        let exact = Field2D::from_fn(&map, |x, y| (-m.kappa * f.t).exp() * pulse(x, y, s0 + f.t));
        let cutoff = 1e-6 * exact.max();
        let mut worst = 0.0f64;
        for (u, e) in f.values.iter().zip(&exact.values) {
            if *e > cutoff {
                worst = worst.max((u - e).abs() / e);
            }
        }
        assert!(worst < 0.02, "{worst}");
    }

    #[test]
    fn csv_layout() {
        let map = MaterialMap2D::uniform(3, 4, 3.0, 4.0, LATTICE_SCATTERER).unwrap();
        let csv = Field2D::zeros(&map).to_csv(&map);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[1], "x,y,u0");
        assert_eq!(lines.len(), 14);
    }
}
