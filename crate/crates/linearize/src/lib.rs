//! From an admissible base at a point to a verified linearization.
//!
//! The base `s` is integrated from `s₁ = A/D`, `s₂ = B/D`, then `(t, z)` from
//! the first-order system
//!
//! ```text
//! t₁ = st + t²                      t₂ = s₁/3 − 2s₂/3 + zt − ℛ/3
//! z₁ = 2s₁/3 − s₂/3 + zt + ℛ/3      z₂ = −zs + z²
//! ```
//!
//! called the `(t, z)` system below. `L` is assembled in the adapted frame
//! and checked by finite differences. A web with `ℛ ≡ 0` takes the parallelizable branch, where
//! `s` is covariantly constant.

pub mod dump;
pub mod error;
pub mod field;
pub mod grid;
pub mod local;
pub mod seed;
pub mod verify;

pub use dump::{dump_grid, DUMP_HEADER};
pub use error::LinError;
pub use field::{assemble_l, projective_equiv_check, slot, LinearizationField, ProjectiveVerdict};
pub use grid::{BaseLaw, FieldGrid, GridSpec, IntegrationOptions, Linearizer, Slopes};
pub use local::{Local, LocalModel};
pub use seed::{seed_tz, TzSeed};
pub use verify::{total_connection, verify, Tolerances, VerifyReport, TOLERANCE_CONSTANT};

use symexpr::{simplify, EvalMode};
use webgeom::{Gauge, Point, WebChart, WebError};

/// Which branch applies at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `ℛ(p) ≠ 0`: the obstruction tower applies.
    Main,
    /// `ℛ` vanishes identically.
    Parallel,
    /// `ℛ(p) = 0` without `ℛ` vanishing nearby.
    Singular,
}

/// Number of sample points per axis used when simplification cannot decide `ℛ ≡ 0`.
const SAMPLES: i64 = 5;

impl Branch {
    /// Decides the branch from `ℛ(p)`, then from a symbolic zero test of `ℛ`,
    /// then from samples of `|ℛ|` on a square of side `2·radius` around `p`.
    pub fn detect(chart: &WebChart, gauge: &Gauge, p: &Point, radius: f64) -> Result<Branch, WebError> {
        let model = LocalModel::new(chart, gauge.clone(), 1)?;
        let ladder = webgeom::ladder(chart, gauge.clone(), 0)?;
        let at_p = webgeom::evaluate_ladder(chart, &ladder, p, EvalMode::Exact)?;
        let r = at_p.curvature();
        let scale = 1e-12;
        if !(r.is_zero() || (!r.is_exact() && r.to_f64().abs() < scale)) {
            return Ok(Branch::Main);
        }
        if simplify(ladder.curvature()).is_zero() {
            return Ok(Branch::Parallel);
        }
        let (x0, y0) = p.to_f64();
        for a in -SAMPLES / 2..=SAMPLES / 2 {
            for b in -SAMPLES / 2..=SAMPLES / 2 {
                let step = radius / (SAMPLES / 2) as f64;
                let local = model.at(x0 + a as f64 * step, y0 + b as f64 * step)?;
                if local.curvature().abs() > scale {
                    return Ok(Branch::Singular);
                }
            }
        }
        Ok(Branch::Parallel)
    }
}
