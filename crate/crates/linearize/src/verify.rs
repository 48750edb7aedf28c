//! Finite-difference verification of an integrated linearization.

use crate::field::LinearizationField;
use crate::grid::FieldGrid;
use crate::local::Local;

/// Residual tolerances, by default `C·h⁴`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub p1: f64,
    pub curvature: f64,
    pub autoparallel: f64,
    pub frobenius: f64,
}

/// The constant `C` in the default tolerances `C·h⁴`.
pub const TOLERANCE_CONSTANT: f64 = 1e5;

impl Tolerances {
    pub fn scaled(h: f64) -> Tolerances {
        let t = TOLERANCE_CONSTANT * h.powi(4);
        Tolerances { p1: t, curvature: t, autoparallel: 1e-9, frobenius: t }
    }

    pub fn uniform(t: f64) -> Tolerances {
        Tolerances { p1: t, curvature: t, autoparallel: t, frobenius: t }
    }
}

/// Maximum residuals over the nodes where each check applies.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    /// `P₁(L)` in the frame, over interior nodes.
    pub p1: f64,
    /// Curvature of `∇ + L` in coordinates, over interior nodes.
    pub curvature: f64,
    /// Geodesic defect of the three leaf directions, over all nodes.
    pub autoparallel: f64,
    /// `c₁₂ − c₂₁ − ℛc` for `c = s, t, z`, over interior nodes.
    pub frobenius: [f64; 3],
    /// Per-node `P₁` residual; `None` on the two-node boundary layer.
    pub p1_nodes: Vec<Option<f64>>,
    pub interior_nodes: usize,
    pub tolerances: Tolerances,
}

impl VerifyReport {
    pub fn p1_ok(&self) -> bool {
        self.p1 <= self.tolerances.p1
    }

    pub fn curvature_ok(&self) -> bool {
        self.curvature <= self.tolerances.curvature
    }

    pub fn autoparallel_ok(&self) -> bool {
        self.autoparallel <= self.tolerances.autoparallel
    }

    pub fn frobenius_ok(&self) -> bool {
        self.frobenius.iter().all(|&r| r <= self.tolerances.frobenius)
    }

    pub fn passed(&self) -> bool {
        self.p1_ok() && self.curvature_ok() && self.autoparallel_ok() && self.frobenius_ok()
    }
}

struct Stencil {
    n: usize,
    h: f64,
}

impl Stencil {
    /// Fourth-order central difference of `v` along `dir` at `(i, j)`.
    fn d(&self, v: impl Fn(usize) -> f64, i: usize, j: usize, dir: usize) -> f64 {
        let at = |k: isize| {
            let (ii, jj) = if dir == 0 { ((i as isize + k) as usize, j) } else { (i, (j as isize + k) as usize) };
            v(jj * self.n + ii)
        };
        (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * self.h)
    }

    fn interior(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let range = 2..self.n.saturating_sub(2);
        range.clone().flat_map(move |j| range.clone().map(move |i| (i, j)))
    }
}

/// `D_a c = ∂_a c / λ_a − w μ_a c` from a coordinate derivative.
fn frame_derivative(local: &Local, a: usize, dc: f64, c: f64, weight: f64) -> f64 {
    dc / local.lambda[a] - weight * local.mu[a] * c
}

/// Coordinate connection coefficients `Γ[c][a][b]` of `∇ + L`, with
/// `∇_{∂a}∂b = Γ^c_{ab} ∂c`.
pub fn total_connection(local: &Local, l: &[f64; 6]) -> [[[f64; 2]; 2]; 2] {
    let lam = local.lambda;
    let mut g = [[[0.0; 2]; 2]; 2];
    for c in 0..2 {
        for a in 0..2 {
            for b in 0..2 {
                let chern = if c == b { local.dlambda[a][b] / lam[b] + lam[a] * local.mu[a] } else { 0.0 };
                let lc = l[crate::field::slot(c + 1, a + 1, b + 1)];
                g[c][a][b] = chern + lam[a] * lam[b] * lc / lam[c];
            }
        }
    }
    g
}

fn geodesic_defects(local: &Local, g: &[[[f64; 2]; 2]; 2]) -> [f64; 3] {
    let x = [local.f_grad[1], -local.f_grad[0]];
    let dx = |a: usize| [local.hess[a][1], -local.hess[a][0]];
    let mut acc = [0.0; 2];
    for (c, slot) in acc.iter_mut().enumerate() {
        for a in 0..2 {
            *slot += x[a] * dx(a)[c];
            for b in 0..2 {
                *slot += g[c][a][b] * x[a] * x[b];
            }
        }
    }
    let norm = (x[0] * x[0] + x[1] * x[1]).sqrt();
    [g[1][0][0].abs(), g[0][1][1].abs(), (acc[0] * x[1] - acc[1] * x[0]).abs() / norm.powi(3)]
}

/// Checks `P₁(L) = 0`, flatness of `∇ + L`, the geodesic property of the
/// three foliations and the Frobenius conditions of the integrated fields.
pub fn verify(grid: &FieldGrid, field: &LinearizationField, tol: Tolerances) -> VerifyReport {
    let n = grid.n();
    let st = Stencil { n, h: grid.spec.h };
    let comp = |node: usize, k, a, b| field.get(node, k, a, b);
    let mut p1_nodes = vec![None; n * n];
    let mut p1: f64 = 0.0;
    let mut curvature: f64 = 0.0;
    let mut frobenius = [0.0f64; 3];
    let gammas: Vec<_> = (0..n * n).map(|k| total_connection(&grid.locals[k], &field.components[k])).collect();
    let autoparallel = (0..n * n)
        .map(|k| geodesic_defects(&grid.locals[k], &gammas[k]).into_iter().fold(0.0, f64::max))
        .fold(0.0, f64::max);
    let fields: Vec<&[f64]> =
        [Some(&grid.s), grid.t.as_ref(), grid.z.as_ref()].into_iter().flatten().map(|v| v.as_slice()).collect();
    let derivs = frame_derivatives_of_fields(grid);
    let mut interior_nodes = 0;
    for (i, j) in st.interior() {
        interior_nodes += 1;
        let node = j * n + i;
        let local = &grid.locals[node];
        let d_l = |a: usize, k, b, c| {
            let dc = st.d(|m| comp(m, k, b, c), i, j, a - 1);
            frame_derivative(local, a - 1, dc, comp(node, k, b, c), 1.0)
        };
        let mut worst: f64 = 0.0;
        for k in 1..=2 {
            for b in 1..=2 {
                let mut e = d_l(1, k, 2, b) - d_l(2, k, 1, b);
                for m in 1..=2 {
                    e += comp(node, k, 1, m) * comp(node, m, 2, b) - comp(node, k, 2, m) * comp(node, m, 1, b);
                }
                if k == b {
                    e -= local.curvature();
                }
                worst = worst.max(e.abs());
            }
        }
        p1_nodes[node] = Some(worst);
        p1 = p1.max(worst);
        for d in 0..2 {
            for c in 0..2 {
                let dg = |a: usize, bb: usize| st.d(|m| gammas[m][d][bb][c], i, j, a);
                let g = &gammas[node];
                let mut r = dg(0, 1) - dg(1, 0);
                for e in 0..2 {
                    r += g[d][0][e] * g[e][1][c] - g[d][1][e] * g[e][0][c];
                }
                curvature = curvature.max(r.abs());
            }
        }
        for (f, field_values) in fields.iter().enumerate() {
            let d1 = |m: usize| derivs[m][f][0];
            let d2 = |m: usize| derivs[m][f][1];
            let c12 = frame_derivative(local, 0, st.d(d2, i, j, 0), d2(node), 2.0);
            let c21 = frame_derivative(local, 1, st.d(d1, i, j, 1), d1(node), 2.0);
            frobenius[f] = frobenius[f].max((c12 - c21 - local.curvature() * field_values[node]).abs());
        }
    }
    VerifyReport { p1, curvature, autoparallel, frobenius, p1_nodes, interior_nodes, tolerances: tol }
}

/// `[field][direction]` frame derivatives at every node from the
/// integrated laws: `(s₁, s₂)` from the slopes, `(t₁, t₂, z₁, z₂)` from the `(t, z)` system.
fn frame_derivatives_of_fields(grid: &FieldGrid) -> Vec<[[f64; 2]; 3]> {
    (0..grid.s.len())
        .map(|k| {
            let sl = grid.slopes[k];
            let s = grid.s[k];
            let r = grid.locals[k].curvature();
            let mut out = [[sl.s1, sl.s2], [0.0; 2], [0.0; 2]];
            if let (Some(t), Some(z)) = (&grid.t, &grid.z) {
                let (t, z) = (t[k], z[k]);
                out[1] = [s * t + t * t, sl.s1 / 3.0 - 2.0 * sl.s2 / 3.0 + z * t - r / 3.0];
                out[2] = [2.0 * sl.s1 / 3.0 - sl.s2 / 3.0 + z * t + r / 3.0, -z * s + z * z];
            }
            out
        })
        .collect()
}
