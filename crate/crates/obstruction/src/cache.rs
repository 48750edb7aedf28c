//! On-disk cache of the symbolic tower.
//!
//! The cache directory holds `tower.txt`, the named polynomials in the text
//! format of `jetalg`, and `manifest.json` with the pipeline hash and the
//! SHA-256 of `tower.txt`. A missing, corrupted or outdated cache is rebuilt.

use std::fs;
use std::path::{Path, PathBuf};

use jetalg::{parse_named_blocks, write_named_blocks, JetPoly};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::TowerError;
use crate::phi::{PHI_AS_PRINTED, PHI_CORRECTIONS};
use crate::spoly::SymPoly;
use crate::tower::{ObstructionTower, Row};

/// Bumped whenever a derivation rule changes.
pub const PIPELINE_VERSION: &str = "tower-pipeline/3";
/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "WEBLIN_CACHE_DIR";

const TOWER_FILE: &str = "tower.txt";
const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: u32,
    pub pipeline: String,
    pub tower_sha256: String,
    pub entries: usize,
}

/// What happened when the cache was consulted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Rebuilt { reason: String },
}

/// Hash of everything that determines the derived tower.
pub fn pipeline_hash() -> String {
    let mut h = Sha256::new();
    h.update(PIPELINE_VERSION.as_bytes());
    h.update(PHI_AS_PRINTED.as_bytes());
    for (c, _) in PHI_CORRECTIONS {
        h.update(c.as_bytes());
    }
    hex::encode(h.finalize())
}

/// The default cache directory: `$WEBLIN_CACHE_DIR`, else `.weblin-cache`.
pub fn default_cache_dir() -> PathBuf {
    std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".weblin-cache"))
}

/// Text serialization of a tower.
pub fn serialize(t: &ObstructionTower) -> String {
    let mut entries = vec![
        ("phi".to_string(), t.phi.clone()),
        ("psi1".to_string(), t.psi1.clone()),
        ("psi2".to_string(), t.psi2.clone()),
    ];
    for (k, row) in t.rows.iter().enumerate() {
        for (name, p) in ["a", "b", "c", "d"].into_iter().zip(row.parts()) {
            entries.push((format!("row{}_{name}", k + 1), p.to_jet()));
        }
    }
    write_named_blocks(&entries)
}

/// Inverse of [`serialize`]; runs the structural checks of the tower.
pub fn deserialize(text: &str) -> Result<ObstructionTower, TowerError> {
    let entries = parse_named_blocks(text)?;
    let get = |name: &str| -> Result<JetPoly, TowerError> {
        entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p.clone())
            .ok_or_else(|| TowerError::Cache(format!("missing entry {name}")))
    };
    let spoly = |name: String| -> Result<SymPoly, TowerError> {
        SymPoly::from_jet(&get(&name)?).ok_or_else(|| TowerError::Cache(format!("{name} is not a polynomial in s")))
    };
    let row = |k: usize| -> Result<Row, TowerError> {
        Ok(Row {
            a: spoly(format!("row{k}_a"))?,
            b: spoly(format!("row{k}_b"))?,
            c: spoly(format!("row{k}_c"))?,
            d: spoly(format!("row{k}_d"))?,
        })
    };
    let tower = ObstructionTower {
        phi: get("phi")?,
        psi1: get("psi1")?,
        psi2: get("psi2")?,
        rows: [row(1)?, row(2)?, row(3)?, row(4)?],
    };
    tower.check()?;
    Ok(tower)
}

fn sha256(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Tower cache rooted at a directory.
pub struct TowerCache {
    dir: PathBuf,
}

impl TowerCache {
    pub fn new(dir: impl Into<PathBuf>) -> TowerCache {
        TowerCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn try_load(&self) -> Result<ObstructionTower, String> {
        let manifest = fs::read_to_string(self.dir.join(MANIFEST_FILE)).map_err(|e| format!("no manifest ({e})"))?;
        let manifest: Manifest = serde_json::from_str(&manifest).map_err(|e| format!("unreadable manifest ({e})"))?;
        if manifest.pipeline != pipeline_hash() {
            return Err("pipeline hash changed".into());
        }
        let text = fs::read_to_string(self.dir.join(TOWER_FILE)).map_err(|e| format!("no tower file ({e})"))?;
        if sha256(&text) != manifest.tower_sha256 {
            return Err("checksum mismatch".into());
        }
        deserialize(&text).map_err(|e| format!("invalid tower ({e})"))
    }

    /// Loads the cached tower if it is valid, rebuilding it otherwise.
    pub fn load_or_build(&self) -> Result<(ObstructionTower, CacheStatus), TowerError> {
        match self.try_load() {
            Ok(t) => Ok((t, CacheStatus::Hit)),
            Err(reason) => {
                let t = ObstructionTower::derive()?;
                self.store(&t)?;
                Ok((t, CacheStatus::Rebuilt { reason }))
            }
        }
    }

    /// Rebuilds unconditionally.
    pub fn rebuild(&self) -> Result<ObstructionTower, TowerError> {
        let t = ObstructionTower::derive()?;
        self.store(&t)?;
        Ok(t)
    }

    pub fn store(&self, t: &ObstructionTower) -> Result<(), TowerError> {
        fs::create_dir_all(&self.dir)?;
        let text = serialize(t);
        let manifest = Manifest {
            schema: 1,
            pipeline: pipeline_hash(),
            tower_sha256: sha256(&text),
            entries: text.lines().count(),
        };
        fs::write(self.dir.join(TOWER_FILE), &text)?;
        let json = serde_json::to_string_pretty(&manifest).map_err(|e| TowerError::Cache(e.to_string()))?;
        fs::write(self.dir.join(MANIFEST_FILE), json)?;
        Ok(())
    }
}
