//! Initial values of `(t, z)` at the base point.
//!
//! Cross-differentiating the `(t, z)` system gives one consistency relation for `t`
//! and one for `z`:
//!
//! * `t₁₂ − t₂₁ − ℛt = −(ℛs + ℛ₁ + ss₁ − 2ss₂ − s₁₁ + 2s₂₁)/3`
//! * `z₁₂ − z₂₁ − ℛz = −(ℛs + ℛ₂ + 2ss₁ − ss₂ + 2s₂₁ − s₂₂)/3`
//!
//! Neither involves `t` or `z`: they are the two second-order equations of
//! the base, i.e. `Q₄` and `Q₃` divided by `−3D³`. They therefore test the
//! base jet and leave `(t₀, z₀)` unconstrained.

use obstruction::EvaluatedTower;
use symexpr::NumValue;

/// The chosen `(t₀, z₀)` together with the consistency residuals at `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct TzSeed {
    pub t0: f64,
    pub z0: f64,
    /// The `t` and `z` consistency residuals at the base point.
    pub consistency: [NumValue; 2],
    /// Whether the relations pin down `(t₀, z₀)`; always `false`.
    pub determined: bool,
}

/// Consistency residuals of the `(t, z)` system at `s0`, or `None` where `D(s0) = 0`.
pub fn seed_tz(tower: &EvaluatedTower, s0: &NumValue, t0: f64, z0: f64) -> Option<TzSeed> {
    let sys = &tower.system;
    let d = sys.d.eval(s0);
    let d3 = &(&d * &d) * &d;
    let minus_3d3 = &d3 * &NumValue::int(-3);
    let t_res = sys.q[3].eval(s0).checked_div(&minus_3d3)?;
    let z_res = sys.q[2].eval(s0).checked_div(&minus_3d3)?;
    Some(TzSeed { t0, z0, consistency: [t_res, z_res], determined: false })
}
