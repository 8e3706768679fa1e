use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    /// Digest over the artifact files the entry describes.
    pub hash: String,
    pub params: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheManifest {
    pub format_version: u32,
    pub entries: BTreeMap<String, CacheEntry>,
}

impl Default for CacheManifest {
    fn default() -> Self {
        Self {
            format_version: FORMAT_VERSION,
            entries: BTreeMap::new(),
        }
    }
}

impl CacheManifest {
    /// Loads the manifest, or an empty one if it is absent or from another
    /// format version.
    pub fn load(cache_dir: &Path) -> Result<Self> {
        let path = cache_dir.join(MANIFEST_FILE);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Self::default()),
            Err(e) => return Err(e.into()),
        };
        match serde_json::from_str::<CacheManifest>(&text) {
            Ok(m) if m.format_version == FORMAT_VERSION => Ok(m),
            _ => Ok(Self::default()),
        }
    }

    pub fn save(&self, cache_dir: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        atomic_write(&cache_dir.join(MANIFEST_FILE), |w| {
            w.write_all(text.as_bytes())?;
            Ok(())
        })
    }

    /// The entry for `key`, if it was produced with exactly `params`.
    pub fn matching(&self, key: &str, params: &BTreeMap<String, String>) -> Option<&CacheEntry> {
        self.entries.get(key).filter(|e| &e.params == params)
    }
}

/// Writes through a temporary sibling file and renames it into place.
pub fn atomic_write<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<()>,
{
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut w = BufWriter::new(File::create(&tmp)?);
    body(&mut w)?;
    w.flush()?;
    w.into_inner()
        .map_err(|e| Error::Io(e.into_error()))?
        .sync_all()?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let mut hasher = Sha256::new();
    let mut f = File::open(path)?;
    io::copy(&mut f, &mut hasher)?;
    Ok(hex::encode(hasher.finalize()))
}

/// Digest over `(relative path, contents)` of each file, in the given order.
pub fn sha256_files(root: &Path, files: &[PathBuf]) -> Result<String> {
    let mut hasher = Sha256::new();
    for rel in files {
        let name = rel.to_string_lossy();
        hasher.update((name.len() as u64).to_le_bytes());
        hasher.update(name.as_bytes());
        let mut f = File::open(root.join(rel))?;
        hasher.update(f.metadata()?.len().to_le_bytes());
        io::copy(&mut f, &mut hasher)?;
    }
    Ok(hex::encode(hasher.finalize()))
}
