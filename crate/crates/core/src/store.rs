//! Canonical keys and the persistent memo cache (JSON lines).

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{AbsClass, AbsCurve, Family, Space};
use crate::key::{ClosedKey, Insertion, OpenKey};
use crate::rational::{parse_fraction, to_fraction_string, Rational};
use crate::ENGINE_VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Axiom,
    Seed,
    Wdvv,
    Owdvv,
    WallCrossing,
    OpenClosed,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Axiom => "axiom",
            Provenance::Seed => "seed",
            Provenance::Wdvv => "wdvv",
            Provenance::Owdvv => "owdvv",
            Provenance::WallCrossing => "wall-crossing",
            Provenance::OpenClosed => "open-closed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub k: String,
    pub v: String,
    pub prov: Provenance,
    pub ver: String,
}

pub enum KeyConstraints<'a> {
    Closed(&'a [AbsClass]),
    Open(&'a [Insertion]),
}

/// Canonical key from loose parts; `k` must be present exactly for open keys.
pub fn canonical_key(
    space: Space,
    beta: &[u32],
    k: Option<u32>,
    constraints: KeyConstraints<'_>,
    enhanced: bool,
) -> Result<String> {
    match (constraints, k) {
        (KeyConstraints::Closed(c), None) => {
            let beta = match (space.family(), beta) {
                (Family::QuadricSurface, [a, b]) => AbsCurve::Bidegree(*a, *b),
                (f, [d]) if f != Family::QuadricSurface => AbsCurve::Degree(*d),
                _ => return invalid("curve class does not match the space"),
            };
            if enhanced {
                return invalid("closed keys carry no enhancement flag");
            }
            Ok(ClosedKey::new(space, beta, c).canonical())
        }
        (KeyConstraints::Open(c), Some(k)) => match beta {
            [b] => Ok(OpenKey::new(space, *b, k, c, enhanced).canonical()),
            _ => invalid("open curve classes are single integers"),
        },
        _ => invalid("boundary count is required for open keys and forbidden for closed ones"),
    }
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct LoadReport {
    pub loaded: usize,
    pub stale: usize,
}

#[derive(Default)]
pub struct Store {
    map: RwLock<HashMap<String, (Rational, Provenance)>>,
}

impl Store {
    pub fn new() -> Store {
        Store::default()
    }

    pub fn get(&self, key: &str) -> Option<Rational> {
        self.map.read().get(key).map(|(v, _)| v.clone())
    }

    pub fn get_record(&self, key: &str) -> Option<(Rational, Provenance)> {
        self.map.read().get(key).cloned()
    }

    /// Inserting an equal value again is a no-op; a different value is an error.
    pub fn put(&self, key: &str, value: Rational, prov: Provenance) -> Result<()> {
        let mut map = self.map.write();
        if let Some((old, _)) = map.get(key) {
            if *old != value {
                return Err(Error::Conflict {
                    key: key.to_string(),
                    stored: to_fraction_string(old),
                    new: to_fraction_string(&value),
                });
            }
            return Ok(());
        }
        map.insert(key.to_string(), (value, prov));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.map.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn records(&self) -> Vec<CacheRecord> {
        let mut out: Vec<CacheRecord> = self
            .map
            .read()
            .iter()
            .map(|(k, (v, p))| CacheRecord {
                k: k.clone(),
                v: to_fraction_string(v),
                prov: *p,
                ver: ENGINE_VERSION.to_string(),
            })
            .collect();
        out.sort_by(|a, b| a.k.cmp(&b.k));
        out
    }

    /// Merge a cache file into memory. A missing file is an empty cache.
    pub fn load(&self, path: &Path) -> Result<LoadReport> {
        let mut report = LoadReport::default();
        if !path.exists() {
            return Ok(report);
        }
        let reader = BufReader::new(File::open(path)?);
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: CacheRecord = serde_json::from_str(&line)
                .map_err(|e| Error::Parse(format!("{}:{}: {e}", path.display(), lineno + 1)))?;
            if rec.ver != ENGINE_VERSION {
                log::warn!("ignoring cache record {} from engine version {}", rec.k, rec.ver);
                report.stale += 1;
                continue;
            }
            let v = parse_fraction(&rec.v)?;
            self.put(&rec.k, v, rec.prov)?;
            report.loaded += 1;
        }
        Ok(report)
    }

    /// Write every record, sorted by key, replacing the file.
    pub fn flush(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let mut w = BufWriter::new(File::create(&tmp)?);
            for rec in self.records() {
                let line = serde_json::to_string(&rec).map_err(|e| Error::Parse(e.to_string()))?;
                writeln!(w, "{line}")?;
            }
            w.flush()?;
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}
