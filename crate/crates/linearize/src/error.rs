use obstruction::TowerError;
use thiserror::Error;
use webgeom::WebError;

#[derive(Debug, Error)]
pub enum LinError {
    #[error(transparent)]
    Web(#[from] WebError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error("grid must have an odd positive size and positive spacing (n = {n}, h = {h})")]
    BadGrid { n: usize, h: f64 },
    #[error("left the domain D(s) != 0 at ({x}, {y}): |D(s)| = {d:.3e}")]
    LeftDomain { x: f64, y: f64, d: f64 },
    #[error("consistency residual F*G - H = {residual:.3e} at ({x}, {y}) exceeds {tol:.1e}")]
    Consistency { x: f64, y: f64, residual: f64, tol: f64 },
    #[error("fields blew up at ({x}, {y})")]
    BlowUp { x: f64, y: f64 },
    #[error("the s column of the joint integration differs from the base grid at node {0}")]
    BaseMismatch(usize),
}
