//! On-disk cache of exact expansions, keyed by a content hash.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Identity of a cached object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Key {
    pub kind: &'static str,
    /// The form `A` or discriminant `d`, as text.
    pub target: String,
    pub order: i64,
    pub prec: u32,
}

impl Key {
    fn text(&self) -> String {
        format!("{}|{}|{}|{}", self.kind, self.target, self.order, self.prec)
    }

    pub fn digest(&self) -> String {
        let h = Sha256::digest(self.text().as_bytes());
        h.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct Entry<T> {
    key: String,
    payload: T,
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<&Path>) -> std::io::Result<Self> {
        if let Some(d) = dir {
            std::fs::create_dir_all(d)?;
        }
        Ok(Cache { dir: dir.map(Path::to_path_buf) })
    }

    fn path(&self, key: &Key) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{}.json", key.digest())))
    }

    /// Cached payload; unreadable or mismatched entries count as misses.
    pub fn get<T: DeserializeOwned>(&self, key: &Key) -> Option<T> {
        let bytes = std::fs::read(self.path(key)?).ok()?;
        let e: Entry<T> = serde_json::from_slice(&bytes).ok()?;
        (e.key == key.text()).then_some(e.payload)
    }

    /// Writes to a temporary file in the cache directory, then renames it into place.
    pub fn put<T: Serialize>(&self, key: &Key, payload: &T) -> std::io::Result<()> {
        let (Some(dir), Some(path)) = (&self.dir, self.path(key)) else { return Ok(()) };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        serde_json::to_writer(&mut tmp, &Entry { key: key.text(), payload })?;
        tmp.flush()?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }

    /// Cached value or the result of `compute`, stored on a miss.
    pub fn fetch<T, E>(&self, key: &Key, compute: impl FnOnce() -> Result<T, E>) -> Result<(T, bool), E>
    where
        T: Serialize + DeserializeOwned,
    {
        if let Some(v) = self.get(key) {
            return Ok((v, true));
        }
        let v = compute()?;
        // a failed write only costs a recomputation next time
        if let Err(e) = self.put(key, &v) {
            eprintln!("warning: cache write failed: {e}");
        }
        Ok((v, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_key_separation() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(Some(dir.path())).unwrap();
        let k1 = Key { kind: "hecke", target: "[1,1,-1]".into(), order: 10, prec: 256 };
        let k2 = Key { order: 11, ..k1.clone() };
        assert_ne!(k1.digest(), k2.digest());
        let (v, hit) = c.fetch::<Vec<String>, ()>(&k1, || Ok(vec!["a".into()])).unwrap();
        assert!(!hit);
        let (w, hit) = c.fetch::<Vec<String>, ()>(&k1, || panic!("recomputed")).unwrap();
        assert!(hit);
        assert_eq!(v, w);
        assert!(c.get::<Vec<String>>(&k2).is_none());
        // no stray temporaries
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn disabled_cache_always_computes() {
        let c = Cache::new(None).unwrap();
        let k = Key { kind: "mock", target: "[1,1,-1]".into(), order: 25, prec: 256 };
        let (_, hit) = c.fetch::<u32, ()>(&k, || Ok(1)).unwrap();
        assert!(!hit);
        assert!(c.get::<u32>(&k).is_none());
    }
}
