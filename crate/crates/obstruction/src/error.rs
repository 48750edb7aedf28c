use thiserror::Error;

#[derive(Debug, Error)]
pub enum TowerError {
    #[error(transparent)]
    Jet(#[from] jetalg::JetError),
    #[error(transparent)]
    Web(#[from] webgeom::WebError),
    #[error("{0} has the wrong shape: {1}")]
    Shape(&'static str, String),
    #[error("{name} is not weight homogeneous: {detail}")]
    Inhomogeneous { name: String, detail: String },
    #[error("the 4x4 determinant of the row system does not vanish")]
    NonzeroDeterminant,
    #[error("degree of {name} is {found}, above the bound {bound}")]
    DegreeOverrun { name: String, found: usize, bound: usize },
    #[error("the curvature vanishes at the point; the web is in the parallelizable branch")]
    Parallelizable,
    #[error("mirror symmetry fails: {0}")]
    Mirror(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
