//! Persistence for the engine's memo table: one JSON record per line.
//!
//! Records carry the full query key (family tag, characteristic, weights
//! as decimal strings, residues) plus the dimension vector and its
//! reliability cutoff. Export is deterministic (keys sorted), import is
//! forgiving: corrupt or incompatible lines are skipped and counted, and
//! an optional paranoid mode recomputes every record from scratch and
//! refuses the whole file on any mismatch.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext_engine::{ExtEngine, ExtVector, QueryKey};
use crate::weights::Weight;

const VERSION: &str = "1";

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    version: String,
    family: String,
    p: u64,
    weights: Vec<String>,
    residues: Vec<u64>,
    dims: Vec<u64>,
    cutoff: usize,
}

impl Record {
    fn from_entry(key: &QueryKey, v: &ExtVector) -> Self {
        Record {
            version: VERSION.into(),
            family: key.family.clone(),
            p: key.p,
            weights: key.weights.iter().map(|w| w.to_string()).collect(),
            residues: key.residues.clone(),
            dims: v.dims().to_vec(),
            cutoff: v.cutoff(),
        }
    }

    fn into_entry(self) -> Result<(QueryKey, ExtVector)> {
        let weights = self
            .weights
            .iter()
            .map(|s| {
                Weight::from_str(s)
                    .map_err(|_| Error::InvalidInput(format!("bad weight `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let key = QueryKey {
            family: self.family,
            p: self.p,
            weights,
            residues: self.residues,
        };
        Ok((key, ExtVector::from_parts(self.dims, self.cutoff)))
    }
}

/// Serialize the engine's memo table, one record per line, sorted by key.
pub fn export_string(engine: &ExtEngine) -> String {
    let mut out = String::new();
    for (key, v) in engine.cache_entries() {
        let rec = Record::from_entry(&key, &v);
        out.push_str(&serde_json::to_string(&rec).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn export_file(engine: &ExtEngine, path: &Path) -> Result<usize> {
    let n = engine.cache_len();
    fs::write(path, export_string(engine))
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    Ok(n)
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct ImportReport {
    /// Records inserted into the memo table.
    pub imported: usize,
    /// Lines dropped: unparsable, wrong version, or wrong characteristic.
    pub skipped: usize,
    /// Records recomputed and confirmed (paranoid mode only).
    pub verified: usize,
}

/// Load records into the engine. With `paranoid`, every record is
/// recomputed from first principles and a mismatch fails the whole
/// import; without it, records are trusted as-is.
pub fn import_string(engine: &ExtEngine, text: &str, paranoid: bool) -> Result<ImportReport> {
    let mut report = ImportReport::default();
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: Option<(QueryKey, ExtVector)> = serde_json::from_str::<Record>(line)
            .ok()
            .filter(|r| r.version == VERSION && r.p == engine.characteristic())
            .and_then(|r| r.into_entry().ok());
        let Some((key, v)) = parsed else {
            report.skipped += 1;
            continue;
        };
        if paranoid {
            let fresh = engine.recompute(&key)?;
            if fresh.dims() != v.dims() {
                return Err(Error::InvalidInput(format!(
                    "cache record disagrees with recomputation for {key:?}: \
                     stored {:?}, fresh {:?}",
                    v.dims(),
                    fresh.dims()
                )));
            }
            report.verified += 1;
        }
        engine.insert_cache_entry(key, v);
        report.imported += 1;
    }
    Ok(report)
}

pub fn import_file(engine: &ExtEngine, path: &Path, paranoid: bool) -> Result<ImportReport> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    import_string(engine, &text, paranoid)
}
