//! JSON-lines chamber database with a resumable frontier sidecar.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ChamberRecord;
use crate::error::{Error, Result};

/// Environment variable naming the default database directory.
pub const DB_DIR_ENV: &str = "POLYSPACE_DB_DIR";

pub const FRONTIER_SCHEMA: &str = "polyspace.frontier/1";

/// `<dir>/chambers-<n>.jsonl`
pub fn db_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("chambers-{n}.jsonl"))
}

/// Sidecar next to the database: `chambers-<n>.jsonl.frontier`.
pub fn frontier_path(db: &Path) -> PathBuf {
    let mut name = db.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".frontier");
    db.with_file_name(name)
}

/// Progress of an interrupted search: the task split and which tasks have
/// already written their chambers to the database.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontierState {
    pub schema: String,
    pub n: usize,
    pub split_depth: usize,
    pub partial_lp: bool,
    pub tasks: usize,
    pub done: Vec<usize>,
}

impl FrontierState {
    pub fn load(path: &Path) -> Result<Option<Self>> {
        match fs::read_to_string(path) {
            Ok(text) => {
                let state: FrontierState = serde_json::from_str(&text)?;
                if state.schema != FRONTIER_SCHEMA {
                    return Err(Error::Malformed(format!("unknown frontier schema {:?}", state.schema)));
                }
                Ok(Some(state))
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Atomic replace through a temporary file.
    pub fn store(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("frontier.tmp");
        fs::write(&tmp, serde_json::to_vec_pretty(self)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

pub fn read_records(path: &Path) -> Result<Vec<ChamberRecord>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: ChamberRecord = serde_json::from_str(&line)
            .map_err(|e| Error::Malformed(format!("{}:{}: {e}", path.display(), k + 1)))?;
        out.push(record);
    }
    Ok(out)
}

pub fn write_records(path: &Path, records: &[ChamberRecord]) -> Result<()> {
    let tmp = path.with_extension("jsonl.tmp");
    {
        let mut w = BufWriter::new(File::create(&tmp)?);
        for r in records {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub(crate) fn append_records(path: &Path, records: &[ChamberRecord]) -> Result<()> {
    let mut w = BufWriter::new(OpenOptions::new().create(true).append(true).open(path)?);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}
