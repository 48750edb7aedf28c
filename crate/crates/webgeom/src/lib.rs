//! Local differential geometry of a planar 3-web `{x = c, y = c, f = c}`.
//!
//! A [`WebChart`] caches the partials of `f`; a [`FrameField`] fixes the
//! adapted frame in a [`Gauge`] together with the Chern connection scalars;
//! a [`CurvLadder`] holds the iterated covariant derivatives `ℛ_w` of the
//! curvature, following the word convention `C_{i₁i₂} = (C_{i₂})_{i₁}`.

pub mod chart;
pub mod error;
pub mod frame;
pub mod ladder;

pub use chart::{Point, WebChart, MAX_PARTIAL_ORDER};
pub use error::WebError;
pub use frame::{curvature, frame_derive, FrameField, Gauge, KAPPA};
pub use ladder::{evaluate_ladder, CurvLadder, FrameValues, LadderTape, LadderValues, Words, MAX_LADDER_ORDER};

/// Builds the canonical ladder of `chart` up to `max_order` in `gauge`.
pub fn ladder(chart: &WebChart, gauge: Gauge, max_order: usize) -> Result<CurvLadder, WebError> {
    CurvLadder::build(chart, gauge, max_order, Words::Canonical)
}
