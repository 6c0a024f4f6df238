//! On-disk cache of reference profiles, keyed by a hash of the parameters
//! that generate them.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use sha2::{Digest, Sha256};

use crate::CliError;

/// `u_0` of a reference run at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceProfile {
    pub t: f64,
    pub x: Vec<f64>,
    pub u0: Vec<f64>,
}

pub fn cache_key(canonical: &str) -> String {
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

pub struct ReferenceCache {
    dir: PathBuf,
}

impl ReferenceCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn path_for(&self, canonical: &str) -> PathBuf {
        self.dir.join(format!("{}.ref", cache_key(canonical)))
    }

    pub fn load(&self, canonical: &str) -> Option<Vec<ReferenceProfile>> {
        let text = fs::read_to_string(self.path_for(canonical)).ok()?;
        decode(&text, canonical)
    }

    /// Writes through a temporary file so readers never see a partial entry.
    pub fn store(&self, canonical: &str, profiles: &[ReferenceProfile]) -> Result<PathBuf, CliError> {
        fs::create_dir_all(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        let path = self.path_for(canonical);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, encode(canonical, profiles)).map_err(|e| CliError::io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}

fn encode(canonical: &str, profiles: &[ReferenceProfile]) -> String {
    let mut out = String::new();
    for line in canonical.lines() {
        let _ = writeln!(out, "# {line}");
    }
    for p in profiles {
        let _ = writeln!(out, "t {:.17e} {}", p.t, p.x.len());
        for (x, u) in p.x.iter().zip(&p.u0) {
            let _ = writeln!(out, "{x:.17e},{u:.17e}");
        }
    }
    out
}

fn decode(text: &str, canonical: &str) -> Option<Vec<ReferenceProfile>> {
    let mut lines = text.lines().peekable();
    for expected in canonical.lines() {
        if lines.next()? != format!("# {expected}") {
            return None;
        }
    }
    let mut out = Vec::new();
    while let Some(header) = lines.next() {
        let mut parts = header.strip_prefix("t ")?.split(' ');
        let t: f64 = parts.next()?.parse().ok()?;
        let n: usize = parts.next()?.parse().ok()?;
        let mut x = Vec::with_capacity(n);
        let mut u0 = Vec::with_capacity(n);
        for _ in 0..n {
            let (a, b) = lines.next()?.split_once(',')?;
            x.push(a.parse().ok()?);
            u0.push(b.parse().ok()?);
        }
        out.push(ReferenceProfile { t, x, u0 });
    }
    Some(out)
}
