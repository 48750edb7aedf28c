//! Line-by-line integration of the base `s` and of `(t, z)` on a square grid.
//!
//! Frame derivatives become coordinate derivatives through
//! `∂_a c = λ_a (c_a + μ_a c)` for a weight-one scalar `c`. The scheme is
//! classical RK4 along the x-line through the center, then along every
//! y-line starting from that x-line.

use obstruction::ObstructionTower;
use webgeom::{Gauge, WebChart};

use crate::error::LinError;
use crate::local::{horner, CompiledPoly, Local, LocalModel};

/// Spacing and size of a centered `n × n` grid (`n` odd).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub h: f64,
    pub n: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { h: 0.01, n: 21 }
    }
}

impl GridSpec {
    fn validate(&self) -> Result<(), LinError> {
        if self.n % 2 == 1 && self.h > 0.0 && self.h.is_finite() {
            Ok(())
        } else {
            Err(LinError::BadGrid { n: self.n, h: self.h })
        }
    }

    fn half(&self) -> usize {
        self.n / 2
    }
}

/// Abort thresholds of the integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrationOptions {
    /// Minimum of `|D(s)| / Σ|D_k||s|^k` inside the admissible domain.
    pub d_min: f64,
    /// Maximum of `|F·G − H|` at a node.
    pub fgh_tol: f64,
    /// Largest admissible field magnitude.
    pub blow_up: f64,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        IntegrationOptions { d_min: 1e-10, fgh_tol: 1e-6, blow_up: 1e8 }
    }
}

/// Frame derivatives `(s₁, s₂)` of the base at a point, and the value of
/// `F·G − H` there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Slopes {
    pub s1: f64,
    pub s2: f64,
    pub fgh: f64,
}

/// How `s₁, s₂` depend on `s`.
pub enum BaseLaw {
    /// `s₁ = A/D`, `s₂ = B/D` from the evaluated tower.
    Tower { d: CompiledPoly, a: CompiledPoly, b: CompiledPoly, c: CompiledPoly },
    /// The parallelizable case `ℛ ≡ 0`: `s` is covariantly constant.
    Parallel,
}

impl BaseLaw {
    pub fn slopes(&self, local: &Local, s: f64, opts: &IntegrationOptions, at: (f64, f64)) -> Result<Slopes, LinError> {
        match self {
            BaseLaw::Parallel => Ok(Slopes { s1: 0.0, s2: 0.0, fgh: 0.0 }),
            BaseLaw::Tower { d, a, b, c } => {
                let (dv, scale) = horner(&d.at(&local.words), s);
                if !(dv.abs() > opts.d_min * scale) {
                    return Err(LinError::LeftDomain { x: at.0, y: at.1, d: dv.abs() });
                }
                let av = horner(&a.at(&local.words), s).0;
                let bv = horner(&b.at(&local.words), s).0;
                let cv = horner(&c.at(&local.words), s).0;
                let (s1, s2) = (av / dv, bv / dv);
                Ok(Slopes { s1, s2, fgh: s1 * s2 - cv / dv })
            }
        }
    }
}

/// The three fields on the grid; `t` and `z` are present after [`Linearizer::integrate_tz`].
#[derive(Clone, Debug)]
pub struct FieldGrid {
    pub center: (f64, f64),
    pub spec: GridSpec,
    pub s: Vec<f64>,
    pub t: Option<Vec<f64>>,
    pub z: Option<Vec<f64>>,
    /// Frame and curvature data at every node.
    pub locals: Vec<Local>,
    /// `(s₁, s₂)` at every node.
    pub slopes: Vec<Slopes>,
}

impl FieldGrid {
    pub fn n(&self) -> usize {
        self.spec.n
    }

    /// Node index of column `i` (along x) and row `j` (along y).
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.spec.n + i
    }

    pub fn coords(&self, i: usize, j: usize) -> (f64, f64) {
        let m = self.spec.half() as f64;
        (self.center.0 + (i as f64 - m) * self.spec.h, self.center.1 + (j as f64 - m) * self.spec.h)
    }

    pub fn center_index(&self) -> usize {
        let m = self.spec.half();
        self.index(m, m)
    }

    pub fn max_fgh(&self) -> f64 {
        self.slopes.iter().map(|s| s.fgh.abs()).fold(0.0, f64::max)
    }
}

/// A web prepared for integration.
pub struct Linearizer {
    model: LocalModel,
    law: BaseLaw,
    pub options: IntegrationOptions,
}

fn step<const N: usize>(u: &[f64; N], k: &[f64; N], c: f64) -> [f64; N] {
    std::array::from_fn(|i| u[i] + c * k[i])
}

impl Linearizer {
    /// The main branch: slopes from the determinants of the tower.
    pub fn new(chart: &WebChart, gauge: Gauge, tower: &ObstructionTower) -> Result<Linearizer, LinError> {
        let [d, a, b, c] = tower.dets();
        let order = [&d, &a, &b, &c].iter().flat_map(|p| p.coeffs().iter().map(|c| c.max_order())).max().unwrap_or(0);
        let model = LocalModel::new(chart, gauge, order)?;
        let compile = |p| CompiledPoly::new(p, &model).expect("every word of the tower is in the ladder");
        let law = BaseLaw::Tower { d: compile(&d), a: compile(&a), b: compile(&b), c: compile(&c) };
        Ok(Linearizer { model, law, options: IntegrationOptions::default() })
    }

    /// The parallelizable branch.
    pub fn parallel(chart: &WebChart, gauge: Gauge) -> Result<Linearizer, LinError> {
        let model = LocalModel::new(chart, gauge, 1)?;
        Ok(Linearizer { model, law: BaseLaw::Parallel, options: IntegrationOptions::default() })
    }

    pub fn model(&self) -> &LocalModel {
        &self.model
    }

    pub fn law(&self) -> &BaseLaw {
        &self.law
    }

    pub fn is_parallel(&self) -> bool {
        matches!(self.law, BaseLaw::Parallel)
    }

    /// Frame derivatives `D_dir` of `(s, t, z)`, from the tower and the `(t, z)` system.
    fn frame_rhs(&self, dir: usize, local: &Local, u: &[f64], at: (f64, f64)) -> Result<Vec<f64>, LinError> {
        let sl = self.law.slopes(local, u[0], &self.options, at)?;
        let mut out = vec![if dir == 0 { sl.s1 } else { sl.s2 }];
        if u.len() == 3 {
            let (s, t, z, r) = (u[0], u[1], u[2], local.curvature());
            if dir == 0 {
                out.push(s * t + t * t);
                out.push(2.0 * sl.s1 / 3.0 - sl.s2 / 3.0 + z * t + r / 3.0);
            } else {
                out.push(sl.s1 / 3.0 - 2.0 * sl.s2 / 3.0 + z * t - r / 3.0);
                out.push(-z * s + z * z);
            }
        }
        Ok(out)
    }

    fn coordinate_rhs<const N: usize>(&self, dir: usize, x: f64, y: f64, u: &[f64; N]) -> Result<[f64; N], LinError> {
        let local = self.model.at(x, y)?;
        let d = self.frame_rhs(dir, &local, u, (x, y))?;
        Ok(std::array::from_fn(|i| local.lambda[dir] * (d[i] + local.mu[dir] * u[i])))
    }

    fn rk4<const N: usize>(&self, dir: usize, x: f64, y: f64, h: f64, u: &[f64; N]) -> Result<[f64; N], LinError> {
        let shift = |c: f64| {
            if dir == 0 {
                (x + c * h, y)
            } else {
                (x, y + c * h)
            }
        };
        let (p2, p3) = (shift(0.5), shift(1.0));
        let k1 = self.coordinate_rhs(dir, x, y, u)?;
        let k2 = self.coordinate_rhs(dir, p2.0, p2.1, &step(u, &k1, h / 2.0))?;
        let k3 = self.coordinate_rhs(dir, p2.0, p2.1, &step(u, &k2, h / 2.0))?;
        let k4 = self.coordinate_rhs(dir, p3.0, p3.1, &step(u, &k3, h))?;
        let out: [f64; N] = std::array::from_fn(|i| u[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        if out.iter().any(|v| !v.is_finite() || v.abs() > self.options.blow_up) {
            return Err(LinError::BlowUp { x: p3.0, y: p3.1 });
        }
        Ok(out)
    }

    fn integrate<const N: usize>(
        &self,
        center: (f64, f64),
        spec: GridSpec,
        init: [f64; N],
    ) -> Result<Vec<[f64; N]>, LinError> {
        spec.validate()?;
        let (n, m, h) = (spec.n, spec.half(), spec.h);
        let coord = |k: usize, c: f64| c + (k as f64 - m as f64) * h;
        let mut out = vec![[0.0; N]; n * n];
        let mut line = vec![[0.0; N]; n];
        line[m] = init;
        for i in m + 1..n {
            line[i] = self.rk4(0, coord(i - 1, center.0), center.1, h, &line[i - 1])?;
        }
        for i in (0..m).rev() {
            line[i] = self.rk4(0, coord(i + 1, center.0), center.1, -h, &line[i + 1])?;
        }
        for (i, start) in line.into_iter().enumerate() {
            let x = coord(i, center.0);
            out[m * n + i] = start;
            for j in m + 1..n {
                out[j * n + i] = self.rk4(1, x, coord(j - 1, center.1), h, &out[(j - 1) * n + i])?;
            }
            for j in (0..m).rev() {
                out[j * n + i] = self.rk4(1, x, coord(j + 1, center.1), -h, &out[(j + 1) * n + i])?;
            }
        }
        Ok(out)
    }

    fn node_data(&self, grid: &mut FieldGrid) -> Result<(), LinError> {
        let n = grid.n();
        for j in 0..n {
            for i in 0..n {
                let (x, y) = grid.coords(i, j);
                let local = self.model.at(x, y)?;
                let sl = self.law.slopes(&local, grid.s[grid.index(i, j)], &self.options, (x, y))?;
                if sl.fgh.abs() > self.options.fgh_tol {
                    return Err(LinError::Consistency { x, y, residual: sl.fgh.abs(), tol: self.options.fgh_tol });
                }
                grid.locals.push(local);
                grid.slopes.push(sl);
            }
        }
        Ok(())
    }

    /// Integrates `s₁ = F(s)`, `s₂ = G(s)` from `s(center) = s0`.
    pub fn integrate_base(&self, center: (f64, f64), s0: f64, spec: GridSpec) -> Result<FieldGrid, LinError> {
        spec.validate()?;
        let start = self.law.slopes(&self.model.at(center.0, center.1)?, s0, &self.options, center)?;
        if start.fgh.abs() > self.options.fgh_tol {
            return Err(LinError::Consistency {
                x: center.0,
                y: center.1,
                residual: start.fgh.abs(),
                tol: self.options.fgh_tol,
            });
        }
        let s = self.integrate(center, spec, [s0])?.into_iter().map(|[v]| v).collect();
        let mut grid = FieldGrid { center, spec, s, t: None, z: None, locals: Vec::new(), slopes: Vec::new() };
        self.node_data(&mut grid)?;
        Ok(grid)
    }

    /// Integrates the `(t, z)` system for `(t, z)` with the base of `grid`.
    ///
    /// `s` is integrated again jointly with `(t, z)` by the same scheme; its
    /// values must reproduce the base grid exactly.
    pub fn integrate_tz(&self, grid: &FieldGrid, t0: f64, z0: f64) -> Result<FieldGrid, LinError> {
        let s0 = grid.s[grid.center_index()];
        let all = self.integrate(grid.center, grid.spec, [s0, t0, z0])?;
        if let Some(k) = all.iter().zip(&grid.s).position(|(u, s)| u[0].to_bits() != s.to_bits()) {
            return Err(LinError::BaseMismatch(k));
        }
        let mut out = grid.clone();
        out.t = Some(all.iter().map(|u| u[1]).collect());
        out.z = Some(all.iter().map(|u| u[2]).collect());
        Ok(out)
    }
}
