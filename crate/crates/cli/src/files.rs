//! File formats and canonical JSON I/O. Every format is JSON with exact
//! rationals as "p/q" strings; a loader also accepts a run report that
//! carries the wanted object under `results`, so commands pipe into each
//! other without manual unwrapping.

use std::fs;
use std::path::Path;

use alphacut::arrangement::ColoredLineArrangement;
use alphacut::geometry::{Hyperplane, Point};
use alphacut::separation::ColoredPointSet;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{command_error, CliError};

/// A colored point set on disk: `{"dimension": d, "classes": [[point]]}`
/// with each point an array of "p/q" strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub dimension: usize,
    pub classes: Vec<Vec<Point>>,
}

impl InstanceFile {
    pub fn from_points(p: &ColoredPointSet) -> InstanceFile {
        InstanceFile {
            dimension: p.dimension(),
            classes: p.classes().to_vec(),
        }
    }

    pub fn to_points(&self) -> Result<ColoredPointSet, CliError> {
        ColoredPointSet::new(self.dimension, self.classes.clone()).map_err(command_error)
    }
}

/// A colored line (more generally hyperplane) arrangement on disk:
/// `{"dimension": d, "classes": [[hyperplane]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinesFile {
    pub dimension: usize,
    pub classes: Vec<Vec<Hyperplane>>,
}

impl LinesFile {
    pub fn from_arrangement(a: &ColoredLineArrangement) -> LinesFile {
        LinesFile {
            dimension: a.dimension(),
            classes: a.classes().to_vec(),
        }
    }

    pub fn to_arrangement(&self) -> Result<ColoredLineArrangement, CliError> {
        ColoredLineArrangement::new(self.dimension, self.classes.clone()).map_err(command_error)
    }
}

/// A file's parsed payload together with the digest of its raw bytes.
pub struct Loaded<T> {
    pub value: T,
    pub digest: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

/// Reads a file into a JSON value plus the digest of its raw bytes.
pub fn read_value(path: &Path) -> Result<Loaded<serde_json::Value>, CliError> {
    let shown = path.display().to_string();
    let bytes = fs::read(path).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    let digest = sha256_hex(&bytes);
    let value = serde_json::from_slice(&bytes).map_err(|e| CliError::Parse {
        path: shown,
        message: e.to_string(),
    })?;
    Ok(Loaded { value, digest })
}

/// Deserializes `T` from the top level of a parsed file, or from inside
/// a run report under `results.<path>` for any of the given key paths;
/// the first location that deserializes wins. The error is the top-level
/// deserializer's complaint.
pub fn extract<T: DeserializeOwned>(
    value: &serde_json::Value,
    nested: &[&[&str]],
) -> Result<T, String> {
    let first_error = match T::deserialize(value.clone()) {
        Ok(v) => return Ok(v),
        Err(e) => e.to_string(),
    };
    if let Some(results) = value.get("results") {
        for keys in nested {
            let mut node = results;
            let mut present = true;
            for key in *keys {
                match node.get(key) {
                    Some(next) => node = next,
                    None => {
                        present = false;
                        break;
                    }
                }
            }
            if present {
                if let Ok(v) = T::deserialize(node.clone()) {
                    return Ok(v);
                }
            }
        }
    }
    Err(format!(
        "{first_error} (also tried the report locations {})",
        nested
            .iter()
            .map(|keys| format!("results.{}", keys.join(".")))
            .collect::<Vec<_>>()
            .join(", ")
    ))
}

/// Reads and parses one input file, report-unwrapping included.
pub fn load<T: DeserializeOwned>(path: &Path, nested: &[&[&str]]) -> Result<Loaded<T>, CliError> {
    let loaded = read_value(path)?;
    match extract(&loaded.value, nested) {
        Ok(value) => Ok(Loaded {
            value,
            digest: loaded.digest,
        }),
        Err(message) => Err(CliError::Parse {
            path: path.display().to_string(),
            message,
        }),
    }
}

/// Serializes a value to the canonical on-disk form: pretty-printed
/// JSON, object keys in a deterministic order, one trailing newline.
pub fn canonical_json(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    text
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}
