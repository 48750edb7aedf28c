//! The linearization tensor `L` in the adapted frame, and projective
//! equivalence of two linearizations.

use crate::grid::FieldGrid;

/// Index of `L^k_{ab}` (with `a ≤ b`) in a component array:
/// `[L¹₁₁, L¹₁₂, L¹₂₂, L²₁₁, L²₁₂, L²₂₂]`.
pub fn slot(k: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    3 * (k - 1) + (a - 1) + (b - 1)
}

/// Frame components of `L` at every node, with the base kept as integrated.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearizationField {
    pub n: usize,
    pub components: Vec<[f64; 6]>,
    base: Vec<f64>,
}

impl LinearizationField {
    pub fn new(n: usize, components: Vec<[f64; 6]>, base: Vec<f64>) -> LinearizationField {
        LinearizationField { n, components, base }
    }

    /// `L^k_{ab}` at a node, indices in `{1, 2}`.
    pub fn get(&self, node: usize, k: usize, a: usize, b: usize) -> f64 {
        self.components[node][slot(k, a, b)]
    }

    /// The base `s` the field was assembled from.
    pub fn base(&self) -> &[f64] {
        &self.base
    }

    /// `2L¹₁₂ − L²₂₂` recomputed from the components.
    pub fn base_from_components(&self, node: usize) -> f64 {
        2.0 * self.get(node, 1, 1, 2) - self.get(node, 2, 2, 2)
    }
}

/// `L` from `(s, t, z)`: with `x = 2t + s` and `y = 2z − s`, `L¹₁₁ = x`,
/// `L¹₁₂ = z`, `L²₂₂ = y`, `L²₁₂ = ½(L¹₁₁ + L²₂₂) − L¹₁₂` and
/// `L¹₂₂ = L²₁₁ = 0`.
///
/// # Panics
///
/// If the grid has no `(t, z)`.
pub fn assemble_l(grid: &FieldGrid) -> LinearizationField {
    let (t, z) = (grid.t.as_ref().expect("t integrated"), grid.z.as_ref().expect("z integrated"));
    let components = grid
        .s
        .iter()
        .zip(t)
        .zip(z)
        .map(|((&s, &t), &z)| {
            let (x, y) = (2.0 * t + s, 2.0 * z - s);
            [x, z, 0.0, 0.0, 0.5 * (x + y) - z, y]
        })
        .collect();
    LinearizationField::new(grid.n(), components, grid.s.clone())
}

/// Outcome of [`projective_equiv_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveVerdict {
    pub equal_base: bool,
    pub max_base_difference: f64,
    /// `ω` with `L′ = L + ω⊙id` at every node, when the bases agree.
    pub omega: Option<Vec<[f64; 2]>>,
    /// Largest component of `L′ − L − ω⊙id`.
    pub omega_residual: Option<f64>,
}

/// Compares two linearizations on the same grid.
///
/// `(ω⊙id)(X, Y) = ω(X)Y + ω(Y)X`, so `ω₁ = ½ΔL¹₁₁` and `ω₂ = ½ΔL²₂₂`.
pub fn projective_equiv_check(l: &LinearizationField, other: &LinearizationField, tol: f64) -> ProjectiveVerdict {
    assert_eq!(l.components.len(), other.components.len(), "fields on different grids");
    let max_base_difference = l.base().iter().zip(other.base()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let equal_base = max_base_difference <= tol;
    if !equal_base {
        return ProjectiveVerdict { equal_base, max_base_difference, omega: None, omega_residual: None };
    }
    let mut residual: f64 = 0.0;
    let omega: Vec<[f64; 2]> = (0..l.components.len())
        .map(|node| {
            let delta = |k, a, b| other.get(node, k, a, b) - l.get(node, k, a, b);
            let w = [delta(1, 1, 1) / 2.0, delta(2, 2, 2) / 2.0];
            for k in 1..=2 {
                for (a, b) in [(1, 1), (1, 2), (2, 2)] {
                    let sym = if k == b { w[a - 1] } else { 0.0 } + if k == a { w[b - 1] } else { 0.0 };
                    residual = residual.max((delta(k, a, b) - sym).abs());
                }
            }
            w
        })
        .collect();
    ProjectiveVerdict { equal_base, max_base_difference, omega: Some(omega), omega_residual: Some(residual) }
}
