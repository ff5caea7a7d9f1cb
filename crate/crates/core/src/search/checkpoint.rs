//! Resumable checkpoint files for the sharded searches.
//!
//! Layout (one shard per line, sorted by `k2`):
//!
//! ```text
//! # pillai-search mode=l3zero k_max=1000 p_min=5
//! k2=14 done=12 11:17:2:0
//! k2=15 done=13
//! sha256=<hex digest of every preceding line>
//! ```
//!
//! Each shard line carries the records found in that shard as
//! `k3:p:l2:l3` tokens. The file is replaced atomically by writing a sibling
//! temporary file and renaming it over the target.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::SearchRecord;
use crate::{Error, FibIndex, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShardEntry {
    /// Number of `(k2, k3)` pairs examined.
    pub done: u64,
    pub records: Vec<SearchRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    header: String,
    shards: BTreeMap<FibIndex, ShardEntry>,
}

fn corrupt(path: &Path, reason: impl Into<String>) -> Error {
    Error::Checkpoint {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

impl Checkpoint {
    pub fn new(header: impl Into<String>) -> Self {
        Checkpoint {
            header: header.into(),
            shards: BTreeMap::new(),
        }
    }

    pub fn header(&self) -> &str {
        &self.header
    }

    pub fn shards(&self) -> &BTreeMap<FibIndex, ShardEntry> {
        &self.shards
    }

    pub fn insert(&mut self, k2: FibIndex, entry: ShardEntry) {
        self.shards.insert(k2, entry);
    }

    fn body(&self) -> String {
        let mut out = format!("# {}\n", self.header);
        for (k2, entry) in &self.shards {
            out.push_str(&format!("k2={k2} done={}", entry.done));
            for r in &entry.records {
                out.push_str(&format!(" {}:{}:{}:{}", r.k3, r.p, r.l2, r.l3));
            }
            out.push('\n');
        }
        out
    }

    /// Hex SHA-256 of the canonical body.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.body().as_bytes()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = self.body();
        text.push_str(&format!("sha256={}\n", self.digest()));
        let tmp = temp_sibling(path);
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Load and validate a checkpoint. The header must equal `expected`
    /// (same search configuration) and the digest must match.
    pub fn load(path: &Path, expected: &str) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let mut lines: Vec<&str> = text.lines().collect();
        let digest = lines
            .pop()
            .and_then(|l| l.strip_prefix("sha256="))
            .ok_or_else(|| corrupt(path, "missing trailing sha256 line"))?;
        let header = lines
            .first()
            .and_then(|l| l.strip_prefix("# "))
            .ok_or_else(|| corrupt(path, "missing header line"))?;
        if header != expected {
            return Err(corrupt(
                path,
                format!("configuration mismatch: file has `{header}`, run wants `{expected}`"),
            ));
        }
        let mut cp = Checkpoint::new(header);
        for line in &lines[1..] {
            let (k2, entry) = parse_shard(line)
                .ok_or_else(|| corrupt(path, format!("malformed line `{line}`")))?;
            if cp.shards.insert(k2, entry).is_some() {
                return Err(corrupt(path, format!("duplicate shard k2={k2}")));
            }
        }
        if cp.digest() != digest {
            return Err(corrupt(path, "integrity hash mismatch"));
        }
        for (k2, entry) in &cp.shards {
            if let Some(bad) = entry.records.iter().find(|r| r.k2 != *k2 || !r.verify()) {
                return Err(corrupt(
                    path,
                    format!("record {bad} fails exact re-verification"),
                ));
            }
        }
        Ok(cp)
    }
}

fn temp_sibling(path: &Path) -> PathBuf {
    let mut name = path
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".tmp");
    path.with_file_name(name)
}

fn parse_shard(line: &str) -> Option<(FibIndex, ShardEntry)> {
    let mut parts = line.split_whitespace();
    let k2: FibIndex = parts.next()?.strip_prefix("k2=")?.parse().ok()?;
    let done: u64 = parts.next()?.strip_prefix("done=")?.parse().ok()?;
    let mut records = Vec::new();
    for tok in parts {
        let mut f = tok.split(':');
        let k3 = f.next()?.parse().ok()?;
        let p = f.next()?.parse().ok()?;
        let l2 = f.next()?.parse().ok()?;
        let l3 = f.next()?.parse().ok()?;
        if f.next().is_some() {
            return None;
        }
        records.push(SearchRecord { k2, k3, p, l2, l3 });
    }
    Some((k2, ShardEntry { done, records }))
}
