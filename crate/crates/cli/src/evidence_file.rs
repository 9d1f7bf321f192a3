//! The on-disk evidence format: a JSON object with a `frame` (ordered element
//! names) and `sources` (named mass functions). Mass keys are element names
//! comma-joined in frame order; values are `[re, im]` pairs. Omitted subsets
//! carry zero mass and the empty-set key is forbidden.
//!
//! Loading separates structural JSON problems (always exit 2) from semantic
//! key problems: `combine` and `export-qasm` refuse malformed keys outright
//! (exit 2 with the offending source and key named), while `validate` lists
//! them as findings next to the axiom violations (exit 3).

use std::collections::BTreeMap;
use std::path::Path;

use belieffuse::evidence::{Cbba, EvidenceError, Frame, SubsetCode};
use num_complex::Complex64;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
struct RawEvidence {
    frame: Vec<String>,
    sources: Vec<RawSource>,
}

#[derive(Debug, Deserialize)]
struct RawSource {
    name: String,
    masses: BTreeMap<String, [f64; 2]>,
}

#[derive(Debug, Clone)]
pub struct EvidenceSource {
    pub name: String,
    pub cbba: Cbba,
    /// Mass keys that did not parse, with the reason.
    pub key_errors: Vec<(String, EvidenceError)>,
}

#[derive(Debug, Clone)]
pub struct EvidenceFile {
    pub path: String,
    pub frame: Frame,
    pub sources: Vec<EvidenceSource>,
}

impl EvidenceFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let display = path.display().to_string();
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("{display}: cannot read: {e}")))?;
        let raw: RawEvidence =
            serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{display}: {e}")))?;
        let frame = Frame::new(raw.frame)
            .map_err(|e| CliError::Parse(format!("{display}: invalid frame: {e}")))?;
        if raw.sources.is_empty() {
            return Err(CliError::Parse(format!(
                "{display}: evidence file declares no sources"
            )));
        }
        let sources = raw
            .sources
            .into_iter()
            .map(|source| {
                let mut masses: BTreeMap<SubsetCode, Complex64> = BTreeMap::new();
                let mut key_errors = Vec::new();
                for (key, [re, im]) in &source.masses {
                    match frame.parse_subset_key(key) {
                        Ok(code) => {
                            masses.insert(code, Complex64::new(*re, *im));
                        }
                        Err(error) => key_errors.push((key.clone(), error)),
                    }
                }
                EvidenceSource {
                    name: source.name,
                    cbba: Cbba::new(frame.clone(), masses),
                    key_errors,
                }
            })
            .collect();
        Ok(Self {
            path: display,
            frame,
            sources,
        })
    }

    /// Refuse files with malformed mass keys (exit 2), naming the source and
    /// the key.
    pub fn require_parsed(&self) -> Result<(), CliError> {
        for (index, source) in self.sources.iter().enumerate() {
            if let Some((key, error)) = source.key_errors.first() {
                return Err(CliError::Parse(format!(
                    "{}: source {index} ({:?}): mass key {key:?}: {error}",
                    self.path, source.name
                )));
            }
        }
        Ok(())
    }

    /// All findings per source: malformed keys and violated axioms. Empty
    /// means clean.
    pub fn findings(&self) -> Vec<(&str, Vec<String>)> {
        self.sources
            .iter()
            .map(|source| {
                let mut notes: Vec<String> = source
                    .key_errors
                    .iter()
                    .map(|(key, error)| format!("mass key {key:?}: {error}"))
                    .collect();
                notes.extend(
                    source
                        .cbba
                        .validate()
                        .iter()
                        .map(|violation| violation.describe(&self.frame)),
                );
                (source.name.as_str(), notes)
            })
            .filter(|(_, notes)| !notes.is_empty())
            .collect()
    }

    /// Error out (exit code 3) unless every source passes validation.
    pub fn require_valid(&self) -> Result<(), CliError> {
        let findings = self.findings();
        if findings.is_empty() {
            return Ok(());
        }
        let mut message = String::from("evidence failed validation:");
        for (name, notes) in findings {
            for note in notes {
                message.push_str(&format!("\n  source {name:?}: {note}"));
            }
        }
        Err(CliError::Validation(message))
    }
}
