//! Differential polynomial algebra for the base invariant of a planar 3-web.
//!
//! Coefficients live in [`RAlg`], Laurent in the curvature `R` and polynomial
//! in its canonical covariant derivatives `R_w`. Polynomials in the jet
//! variables `s_w` are [`JetPoly`]; derivations and normal forms are provided
//! by a [`JetRing`] in one of three [`Mode`]s.
//!
//! Word convention: `C_{i₁…iₖ} = D_{i₁}(…D_{iₖ}(C))`, and the commutation rule
//! for an object of weight `p` is `C_{12} − C_{21} = p·R·C`.

pub mod error;
pub mod jet;
pub mod ralg;
pub mod raw;
pub mod ring;
pub mod text;
pub mod word;

pub use error::JetError;
pub use jet::{qi, qr, JetMono, JetPoly, JetValues, JetVar, Weight, MAX_S_ORDER};
pub use ralg::{RAlg, RMono, RValues, RWord, MAX_R_ORDER};
pub use ring::{
    eliminate_s21, eliminate_squares, free_derive, free_word, p2_residuals, rhs_s11, rhs_s22, JetRing, Mode,
};
pub use text::{parse_jet, parse_named_blocks, parse_ralg, write_named_blocks};
pub use word::Word;

/// Weight of a polynomial, or the list of conflicting terms.
pub fn weight_of(e: &JetPoly) -> Weight {
    e.weight()
}
