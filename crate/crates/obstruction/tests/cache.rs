mod common;

use std::fs;

use common::tower;
use obstruction::cache::{deserialize, serialize, Manifest};
use obstruction::{CacheStatus, TowerCache};

#[test]
fn serialization_round_trip() {
    let t = tower();
    let text = serialize(t);
    assert_eq!(&deserialize(&text).unwrap(), t);
}

#[test]
fn cache_hits_after_a_build() {
    let dir = tempfile::tempdir().unwrap();
    let cache = TowerCache::new(dir.path());
    let (first, status) = cache.load_or_build().unwrap();
    assert!(matches!(status, CacheStatus::Rebuilt { .. }));
    let (second, status) = cache.load_or_build().unwrap();
    assert_eq!(status, CacheStatus::Hit);
    assert_eq!(first, second);
    assert_eq!(&second, tower());
    let manifest: Manifest =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.pipeline, obstruction::pipeline_hash());
}

#[test]
fn corrupted_cache_is_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let cache = TowerCache::new(dir.path());
    cache.load_or_build().unwrap();
    let path = dir.path().join("tower.txt");
    let text = fs::read_to_string(&path).unwrap().replacen("234", "233", 1);
    fs::write(&path, text).unwrap();
    let (t, status) = cache.load_or_build().unwrap();
    assert_eq!(status, CacheStatus::Rebuilt { reason: "checksum mismatch".into() });
    assert_eq!(&t, tower());
    assert_eq!(cache.load_or_build().unwrap().1, CacheStatus::Hit);
}

#[test]
fn stale_manifest_is_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let cache = TowerCache::new(dir.path());
    cache.store(tower()).unwrap();
    let path = dir.path().join("manifest.json");
    let json = fs::read_to_string(&path).unwrap();
    let mut manifest: Manifest = serde_json::from_str(&json).unwrap();
    manifest.pipeline = "0".repeat(64);
    fs::write(&path, serde_json::to_string(&manifest).unwrap()).unwrap();
    let (_, status) = cache.load_or_build().unwrap();
    assert_eq!(status, CacheStatus::Rebuilt { reason: "pipeline hash changed".into() });
}
