//! Univariate polynomials over the rationals, with a float fallback.
//!
//! [`QPoly`] holds evaluated obstruction polynomials. The exact path decides
//! gcds, radicals and resultants in rational arithmetic; the float path
//! carries an explicit [`Tolerance`].

mod dense;
pub mod error;
pub mod gcd;
pub mod qpoly;
pub mod resultant;
pub mod roots;

pub use error::PolyError;
pub use gcd::{
    gcd, gcd_with, radical_at_point, radical_at_point_with, squarefree_decomposition, squarefree_part, Tolerance,
    CERTIFIED_GAP,
};
pub use qpoly::QPoly;
pub use resultant::resultant;
pub use roots::{roots, Root, RootValue, ROOT_TOL};
