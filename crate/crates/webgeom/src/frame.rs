//! The adapted frame, the connection scalars and the curvature.
//!
//! A gauge `ρ` fixes the frame `e₁ = (ρ/f_x)∂_x`, `e₂ = (ρ/f_y)∂_y`; both
//! vectors are tangent to the leaves `y = c` and `x = c` and `e₁ − e₂`
//! annihilates `df`. The connection scalars are
//! `μ₁ = e₁(g₁)/g₁` with `g₁ = ρ/f_y` and `μ₂ = e₂(g₂)/g₂` with `g₂ = ρ/f_x`,
//! so that `[e₁, e₂] = −μ₂e₁ + μ₁e₂` and `ℛ = e₂(μ₁) − e₁(μ₂)`.
//!
//! The covariant derivative of a weight-`w` scalar component is
//! `C_i = e_i(C) + κ·w·μ_i·C` with [`KAPPA`] `= −1`.

use std::sync::Mutex;

use symexpr::{Differentiator, Expr, Var};

use crate::chart::WebChart;

/// Sign of the connection term in [`FrameField::derive`].
pub const KAPPA: i64 = -1;

/// Choice of frame normalization `ρ`.
#[derive(Clone, Debug, PartialEq)]
pub enum Gauge {
    /// `ρ = 1`: `e₁ = (1/f_x)∂_x`, `e₂ = (1/f_y)∂_y`, and `μ₁ = μ₂ = −f_xy/(f_x f_y)`.
    Gradient,
    /// `ρ = f_x`: `e₁ = ∂_x`, which makes `μ₂` vanish.
    Unit,
    Custom(Expr),
}

impl Gauge {
    pub fn name(&self) -> String {
        match self {
            Gauge::Gradient => "gradient".into(),
            Gauge::Unit => "unit".into(),
            Gauge::Custom(rho) => format!("custom({rho})"),
        }
    }

    pub fn parse(src: &str) -> Result<Gauge, symexpr::ExprError> {
        match src.trim() {
            "gradient" => Ok(Gauge::Gradient),
            "unit" => Ok(Gauge::Unit),
            other => Ok(Gauge::Custom(Expr::parse(other)?)),
        }
    }

    pub fn rho(&self, chart: &WebChart) -> Expr {
        match self {
            Gauge::Gradient => Expr::one(),
            Gauge::Unit => chart.fx().clone(),
            Gauge::Custom(rho) => rho.clone(),
        }
    }
}

/// Frame coefficients and connection scalars of a web in a gauge.
pub struct FrameField {
    gauge: Gauge,
    rho: Expr,
    /// `e_i = coeff[i]·∂`, where `∂` is `∂_x` for `i = 0` and `∂_y` for `i = 1`.
    coeff: [Expr; 2],
    mu: [Expr; 2],
    diff: Mutex<Differentiator>,
}

impl FrameField {
    pub fn new(chart: &WebChart, gauge: Gauge) -> FrameField {
        let (fx, fy, fxy) = (chart.fx(), chart.fy(), chart.partial(1, 1));
        let mut d = Differentiator::new();
        let rho = gauge.rho(chart);
        let coeff = [rho.clone() / fx, rho.clone() / fy];
        let mu = match &gauge {
            Gauge::Gradient => {
                let mu = -(fxy / &(fx * fy));
                [mu.clone(), mu]
            }
            Gauge::Unit => [chart.partial(2, 0) / fx - fxy / fy, Expr::zero()],
            Gauge::Custom(_) => {
                let (rx, ry) = (d.diff(&rho, Var::X), d.diff(&rho, Var::Y));
                [&coeff[0] * &(rx / &rho - fxy / fy), &coeff[1] * &(ry / &rho - fxy / fx)]
            }
        };
        FrameField { gauge, rho, coeff, mu, diff: Mutex::new(d) }
    }

    pub fn gauge(&self) -> &Gauge {
        &self.gauge
    }

    pub fn rho(&self) -> &Expr {
        &self.rho
    }

    /// Coefficient of `e_i` on its coordinate vector field.
    pub fn coeff(&self, i: u8) -> &Expr {
        &self.coeff[slot(i)]
    }

    pub fn mu(&self, i: u8) -> &Expr {
        &self.mu[slot(i)]
    }

    /// The vector field `e_i` applied to a function.
    pub fn apply(&self, i: u8, c: &Expr) -> Expr {
        let v = if i == 1 { Var::X } else { Var::Y };
        let dc = self.diff.lock().expect("differentiator lock").diff(c, v);
        self.coeff(i) * &dc
    }

    /// Covariant derivative `e_i(c) + κ·w·μ_i·c` of a weight-`w` component.
    pub fn derive(&self, c: &Expr, weight: i64, i: u8) -> Expr {
        let e = self.apply(i, c);
        if weight == 0 {
            return e;
        }
        e + &(&Expr::int(KAPPA * weight) * &(self.mu(i) * c))
    }

    /// Curvature from the connection scalars: `e₂(μ₁) − e₁(μ₂)`.
    pub fn curvature(&self) -> Expr {
        self.apply(2, self.mu(1)) - self.apply(1, self.mu(2))
    }

    /// The two components of `[e₁, e₂] + μ₂e₁ − μ₁e₂` on `∂_x` and `∂_y`.
    ///
    /// Both vanish identically for a correct frame.
    pub fn bracket_defect(&self) -> [Expr; 2] {
        let (c1, c2) = (&self.coeff[0], &self.coeff[1]);
        let x_part = -(c2 * &self.diff.lock().expect("differentiator lock").diff(c1, Var::Y)) + &(self.mu(2) * c1);
        let y_part = c1 * &self.diff.lock().expect("differentiator lock").diff(c2, Var::X) - &(self.mu(1) * c2);
        [x_part, y_part]
    }
}

fn slot(i: u8) -> usize {
    match i {
        1 => 0,
        2 => 1,
        _ => panic!("frame index must be 1 or 2, got {i}"),
    }
}

/// Closed-form curvature in the gradient gauge:
/// `(f_xxy/f_x − f_xyy/f_y + f_xy f_yy/f_y² − f_xx f_xy/f_x²)/(f_x f_y)`.
pub fn curvature(chart: &WebChart) -> Expr {
    let p = |i, j| chart.partial(i, j);
    let (fx, fy, fxy) = (p(1, 0), p(0, 1), p(1, 1));
    let bracket = p(2, 1) / fx - p(1, 2) / fy + &(&(fxy * p(0, 2)) / &fy.powi(2)) - &(&(p(2, 0) * fxy) / &fx.powi(2));
    bracket / &(fx * fy)
}

/// Covariant derivative of a weight-`weight` component in the frame of `gauge`.
pub fn frame_derive(chart: &WebChart, gauge: &Gauge, c: &Expr, weight: i64, i: u8) -> Expr {
    FrameField::new(chart, gauge.clone()).derive(c, weight, i)
}
