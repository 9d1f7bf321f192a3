//! Left-to-right pairwise folding of evidence sources through a selected
//! backend.

use belieffuse::evidence::{combine_cdrc, combine_drc, Cbba, EvidenceError, FusionResult, Mode};
use belieffuse::qdrc::{run_fusion, FusionError, QuantumBackend};

use crate::evidence_file::EvidenceSource;
use crate::CliError;

/// Backend selection as exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BackendArg {
    /// Classical Dempster rule over modulus-normalized masses.
    Classical,
    /// Classical complex-valued rule (phases participate).
    Cdrc,
    /// Hybrid pipeline: 2N qubits, classical intersection postprocess.
    Qadrc,
    /// Fully-quantum pipeline: 3N qubits, Toffoli intersection layer.
    Qdrc,
}

impl std::fmt::Display for BackendArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BackendArg::Classical => "classical",
            BackendArg::Cdrc => "cdrc",
            BackendArg::Qadrc => "qadrc",
            BackendArg::Qdrc => "qdrc",
        })
    }
}

/// SplitMix64 step: derives independent per-fold-step seeds from the master
/// seed. Step 0 uses the master seed itself, so a single pairwise fusion is
/// reproducible straight from the CLI arguments.
pub fn derive_seed(master: u64, step: u64) -> u64 {
    if step == 0 {
        return master;
    }
    let mut z = master.wrapping_add(step.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn map_evidence_error(e: EvidenceError) -> CliError {
    match e {
        EvidenceError::TotalConflict { .. } | EvidenceError::ConflictSingularity { .. } => {
            CliError::Conflict(e.to_string())
        }
        other => CliError::Other(other.to_string()),
    }
}

fn map_fusion_error(e: FusionError) -> CliError {
    match e {
        FusionError::Evidence(inner) => map_evidence_error(inner),
        other => CliError::Other(other.to_string()),
    }
}

/// Fold the sources pairwise, left to right, through the chosen backend.
/// In shots mode every fold step draws from its own derived seed.
pub fn fold_sources(
    sources: &[EvidenceSource],
    backend: BackendArg,
    mode: Mode,
) -> Result<FusionResult, CliError> {
    assert!(sources.len() >= 2, "caller enforces the two-source minimum");
    let mut accumulated: Cbba = sources[0].cbba.clone();
    let mut result = None;
    for (step, source) in sources[1..].iter().enumerate() {
        let step_mode = match mode {
            Mode::Exact => Mode::Exact,
            Mode::Shots { shots, seed } => Mode::Shots {
                shots,
                seed: derive_seed(seed, step as u64),
            },
        };
        let step_result = match backend {
            BackendArg::Classical => {
                let lhs = accumulated
                    .modulus_normalized()
                    .map_err(map_evidence_error)?;
                let rhs = source
                    .cbba
                    .modulus_normalized()
                    .map_err(map_evidence_error)?;
                combine_drc(&lhs, &rhs).map_err(map_evidence_error)?
            }
            BackendArg::Cdrc => {
                combine_cdrc(&accumulated, &source.cbba).map_err(map_evidence_error)?
            }
            BackendArg::Qadrc => {
                run_fusion(&accumulated, &source.cbba, QuantumBackend::Qadrc, step_mode)
                    .map_err(map_fusion_error)?
            }
            BackendArg::Qdrc => {
                run_fusion(&accumulated, &source.cbba, QuantumBackend::Qdrc, step_mode)
                    .map_err(map_fusion_error)?
            }
        };
        accumulated = step_result.combined.clone();
        result = Some(step_result);
    }
    Ok(result.expect("at least one fold step"))
}
