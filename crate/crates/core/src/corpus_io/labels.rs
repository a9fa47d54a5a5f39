use std::collections::{BTreeSet, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus_io::SeedConfig;
use crate::error::{Error, Result};

/// An (aspect class, sentiment polarity) pair. Serialized as a two-element array.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LabelTuple(pub String, pub String);

impl LabelTuple {
    pub fn new(aspect: impl Into<String>, sentiment: impl Into<String>) -> Self {
        LabelTuple(aspect.into(), sentiment.into())
    }

    pub fn aspect(&self) -> &str {
        &self.0
    }

    pub fn sentiment(&self) -> &str {
        &self.1
    }
}

/// Labels for one sentence, used for both gold and predicted files.
///
/// The set keeps labels sorted by (aspect, sentiment), which fixes the byte
/// layout of written files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictionRecord {
    pub id: String,
    pub labels: BTreeSet<LabelTuple>,
}

#[derive(Deserialize)]
struct RawRecord {
    id: String,
    labels: Vec<LabelTuple>,
}

impl PredictionRecord {
    pub fn new(id: impl Into<String>, labels: impl IntoIterator<Item = LabelTuple>) -> Self {
        PredictionRecord {
            id: id.into(),
            labels: labels.into_iter().collect(),
        }
    }

    pub fn single(id: impl Into<String>, label: LabelTuple) -> Self {
        Self::new(id, [label])
    }

    /// Checks every label against the classes declared in `seeds`.
    pub fn check_against(&self, seeds: &SeedConfig) -> Result<()> {
        if self.labels.is_empty() {
            return Err(Error::InvalidLabels {
                id: self.id.clone(),
                message: "label set is empty".into(),
            });
        }
        for label in &self.labels {
            if !seeds.aspects.0.contains_key(label.aspect()) {
                return Err(Error::InvalidLabels {
                    id: self.id.clone(),
                    message: format!("unknown aspect class {:?}", label.aspect()),
                });
            }
            if !seeds.sentiments.0.contains_key(label.sentiment()) {
                return Err(Error::InvalidLabels {
                    id: self.id.clone(),
                    message: format!("unknown sentiment class {:?}", label.sentiment()),
                });
            }
        }
        Ok(())
    }
}

/// Reads a gold or prediction JSONL file.
///
/// Rejects empty label lists, repeated tuples within a record and repeated ids.
pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<PredictionRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawRecord = serde_json::from_str(&line).map_err(|e| Error::MalformedLine {
            path: path.to_path_buf(),
            line: lineno + 1,
            message: e.to_string(),
        })?;
        let n = raw.labels.len();
        let record = PredictionRecord::new(raw.id, raw.labels);
        if record.labels.is_empty() {
            return Err(Error::InvalidLabels {
                id: record.id,
                message: "label set is empty".into(),
            });
        }
        if record.labels.len() != n {
            return Err(Error::InvalidLabels {
                id: record.id,
                message: "duplicate label tuple".into(),
            });
        }
        if !seen.insert(record.id.clone()) {
            return Err(Error::DuplicateId(record.id));
        }
        records.push(record);
    }
    Ok(records)
}

pub fn write_records(path: impl AsRef<Path>, records: &[PredictionRecord]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Alias kept for call sites that write model output.
pub fn write_predictions(path: impl AsRef<Path>, records: &[PredictionRecord]) -> Result<()> {
    write_records(path, records)
}
