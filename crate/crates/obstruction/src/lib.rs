//! The obstruction tower of a planar 3-web.

pub mod error;
pub mod phi;
pub mod spoly;
pub mod tower;

pub use error::TowerError;
pub use phi::{build_phi, build_phi_as_printed, derive_phi_from_p2, PHI_AS_PRINTED, PHI_CORRECTIONS};
pub use spoly::{rational_content, Coeff, NumPoly, SPoly, SymPoly};
pub use tower::{build_psi, derive_rows, ObstructionTower, Row};
pub mod eval;
pub mod qsys;

pub use eval::{symbolic_inputs, EvaluatedTower, TowerEvaluator, DET_DEGREES, Q_DEGREE_BOUNDS};
pub use qsys::{det3, det4, q1_q2, QInputs, QSystem, RowParts};
pub mod reference;

pub use reference::{compare_with_reference, derived_tables, TypoEntry, REFERENCE_TABLES};
pub mod cache;

pub use cache::{default_cache_dir, pipeline_hash, CacheStatus, TowerCache, CACHE_DIR_ENV, PIPELINE_VERSION};
