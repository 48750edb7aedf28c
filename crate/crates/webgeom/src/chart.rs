//! A web `{x = c, y = c, f = c}` with its cached partial derivatives.

use std::fmt;

use num_rational::BigRational;
use symexpr::{rational_to_f64, Differentiator, EvalMode, Expr, Tape, Var};

use crate::error::WebError;

/// Highest total order of cached partials of `f`.
pub const MAX_PARTIAL_ORDER: usize = 8;

/// A point of the plane with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub x: BigRational,
    pub y: BigRational,
}

impl Point {
    pub fn new(x: BigRational, y: BigRational) -> Point {
        Point { x, y }
    }

    pub fn ratio(xn: i64, xd: i64, yn: i64, yd: i64) -> Point {
        Point::new(BigRational::new(xn.into(), xd.into()), BigRational::new(yn.into(), yd.into()))
    }

    pub fn origin() -> Point {
        Point::ratio(0, 1, 0, 1)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rational_to_f64(&self.x), rational_to_f64(&self.y))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The web defined by the coordinate foliations and the level sets of `f`.
#[derive(Clone, Debug)]
pub struct WebChart {
    f: Expr,
    /// `partials[i][j] = ∂ˣⁱ∂ʸʲ f` for `i + j ≤ MAX_PARTIAL_ORDER`.
    partials: Vec<Vec<Expr>>,
}

impl WebChart {
    pub fn new(f: Expr) -> WebChart {
        let mut d = Differentiator::new();
        let mut partials: Vec<Vec<Expr>> = Vec::with_capacity(MAX_PARTIAL_ORDER + 1);
        for i in 0..=MAX_PARTIAL_ORDER {
            let mut row = Vec::with_capacity(MAX_PARTIAL_ORDER + 1 - i);
            row.push(if i == 0 { f.clone() } else { d.diff(&partials[i - 1][0], Var::X) });
            for j in 1..=MAX_PARTIAL_ORDER - i {
                let prev = row[j - 1].clone();
                row.push(d.diff(&prev, Var::Y));
            }
            partials.push(row);
        }
        WebChart { f, partials }
    }

    pub fn parse(src: &str) -> Result<WebChart, WebError> {
        Ok(WebChart::new(Expr::parse(src)?))
    }

    pub fn f(&self) -> &Expr {
        &self.f
    }

    /// `∂ˣⁱ∂ʸʲ f`.
    ///
    /// # Panics
    /// If `i + j` exceeds [`MAX_PARTIAL_ORDER`].
    pub fn partial(&self, i: usize, j: usize) -> &Expr {
        assert!(i + j <= MAX_PARTIAL_ORDER, "partial of order {} is not cached", i + j);
        &self.partials[i][j]
    }

    pub fn fx(&self) -> &Expr {
        self.partial(1, 0)
    }

    pub fn fy(&self) -> &Expr {
        self.partial(0, 1)
    }

    /// Checks that `f_x` and `f_y` are defined and nonzero at `p`.
    pub fn check_point(&self, p: &Point, mode: EvalMode) -> Result<(), WebError> {
        let tape = Tape::compile(&[self.fx().clone(), self.fy().clone()]);
        let values = tape.eval(&p.x, &p.y, mode)?;
        for (v, which) in values.iter().zip(["f_x", "f_y"]) {
            if v.is_zero() || v.to_f64() == 0.0 {
                return Err(WebError::Degenerate { x: p.x.to_string(), y: p.y.to_string(), which });
            }
        }
        Ok(())
    }
}
