//! On-disk cache of spectra.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::output::to_json;
use crate::error::Result;
use crate::spectrum::Spectrum;

/// Bumping this invalidates every cached file.
pub const CACHE_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema_version: u32,
    pub code_version: String,
    pub n: usize,
    pub tau: f64,
    /// Weak-regime `alpha` the `tau` was derived from, if any.
    pub alpha: Option<f64>,
    pub build_route: String,
    pub lambdas: Vec<f64>,
    /// Hex SHA-256 over the version, `n`, the bits of `tau` and `alpha`,
    /// the route and the bits of every eigenvalue.
    pub checksum: String,
}

impl CacheEntry {
    pub fn new(s: &Spectrum, alpha: Option<f64>, route: &str) -> CacheEntry {
        let mut e = CacheEntry {
            schema_version: CACHE_SCHEMA_VERSION,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            n: s.n,
            tau: s.tau,
            alpha,
            build_route: route.to_string(),
            lambdas: s.lambdas.clone(),
            checksum: String::new(),
        };
        e.checksum = e.compute_checksum();
        e
    }

    pub fn compute_checksum(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.schema_version.to_le_bytes());
        h.update(self.code_version.as_bytes());
        h.update((self.n as u64).to_le_bytes());
        h.update(self.tau.to_bits().to_le_bytes());
        match self.alpha {
            Some(a) => h.update(a.to_bits().to_le_bytes()),
            None => h.update([0xff; 8]),
        }
        h.update(self.build_route.as_bytes());
        h.update((self.lambdas.len() as u64).to_le_bytes());
        for l in &self.lambdas {
            h.update(l.to_bits().to_le_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn is_valid(&self) -> bool {
        self.schema_version == CACHE_SCHEMA_VERSION
            && self.code_version == env!("CARGO_PKG_VERSION")
            && self.lambdas.len() == self.n
            && self.checksum == self.compute_checksum()
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        Spectrum::from_lambdas(self.n, self.tau, self.lambdas.clone())
    }
}

/// `spec_n{n}_tau{bits of tau in hex}_v{schema}.json`.
pub fn cache_file_name(n: usize, tau: f64) -> String {
    format!("spec_n{n}_tau{:016x}_v{CACHE_SCHEMA_VERSION}.json", tau.to_bits())
}

pub struct SpectrumCache {
    dir: PathBuf,
}

impl SpectrumCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<SpectrumCache> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(SpectrumCache { dir })
    }

    pub fn path(&self, n: usize, tau: f64) -> PathBuf {
        self.dir.join(cache_file_name(n, tau))
    }

    /// The cached spectrum, or `None` when absent, stale or corrupted.
    pub fn load(&self, n: usize, tau: f64, route: &str) -> Option<Spectrum> {
        let text = fs::read_to_string(self.path(n, tau)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        if !entry.is_valid() || entry.n != n || entry.tau.to_bits() != tau.to_bits() || entry.build_route != route {
            return None;
        }
        entry.spectrum().ok()
    }

    /// Writes to a temporary file in the cache directory and renames it
    /// into place.
    pub fn store(&self, s: &Spectrum, alpha: Option<f64>, route: &str) -> Result<PathBuf> {
        let entry = CacheEntry::new(s, alpha, route);
        let target = self.path(s.n, s.tau);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(to_json(&entry)?.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(&target).map_err(|e| e.error)?;
        Ok(target)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}
