//! `belieffuse`: fuse multisource evidence files via Dempster's rule, run
//! classically or on the built-in quantum simulator, with cross-validated
//! reports, validation, scaling benchmarks, and OpenQASM export.

mod bench;
mod evidence_file;
mod fusion;
mod report;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use belieffuse::evidence::{FusionResult, Mode, SubsetCode};
use belieffuse::qdrc::{build_fusion_circuit, export_qasm, lower_circuit, QuantumBackend};
use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{run_bench, BenchConfig};
use crate::evidence_file::EvidenceFile;
use crate::fusion::{fold_sources, BackendArg};
use crate::report::{CrossCheck, CrossStatus, Report, REPORT_TOLERANCE};

/// CLI failure modes, each with its documented exit code: parse errors exit
/// 2, validation failures 3, total conflict 4, everything else 1.
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Validation(String),
    Conflict(String),
    Other(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Conflict(_) => 4,
            CliError::Other(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m)
            | CliError::Validation(m)
            | CliError::Conflict(m)
            | CliError::Other(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "belieffuse",
    version,
    about = "Multisource evidence fusion: classical Dempster combination and its quantum-circuit formulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Analytic measurement probabilities.
    Exact,
    /// Seeded finite-shot sampling.
    Shots,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QuantumBackendArg {
    Qadrc,
    Qdrc,
}

#[derive(Subcommand)]
enum Command {
    /// Fuse the sources of an evidence file and write a report.
    Combine {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        backend: BackendArg,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// Shot count (shots mode only).
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        /// Master seed; fold steps derive their own seeds from it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report destination (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check every source of an evidence file against the mass-function axioms.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Time the backends across frame sizes and emit a CSV scaling table.
    Bench {
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Export the two-source fusion circuit as OpenQASM 2.0.
    ExportQasm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        backend: QuantumBackendArg,
        #[arg(long)]
        output: PathBuf,
    },
}

fn main() {
    configure_thread_pool();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Combine {
            input,
            backend,
            mode,
            shots,
            seed,
            output,
        } => cmd_combine(&input, backend, mode, shots, seed, output.as_deref()),
        Command::Validate { input } => cmd_validate(&input),
        Command::Bench {
            n_min,
            n_max,
            trials,
            seed,
            output,
        } => cmd_bench(
            &BenchConfig {
                n_min,
                n_max,
                trials,
                seed,
            },
            &output,
        ),
        Command::ExportQasm {
            input,
            backend,
            output,
        } => cmd_export_qasm(&input, backend, &output),
    };
    if let Err(error) = outcome {
        eprintln!("error: {}", error.message());
        std::process::exit(error.exit_code());
    }
}

/// `BELIEFFUSE_THREADS` caps simulator/bench worker parallelism; 0 or unset
/// means automatic.
fn configure_thread_pool() {
    let Ok(raw) = std::env::var("BELIEFFUSE_THREADS") else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(0) => {}
        Ok(threads) => {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
        Err(_) => eprintln!("warning: ignoring unparseable BELIEFFUSE_THREADS={raw:?}"),
    }
}

/// Max |Δ| between two combined-mass maps over the union of their supports.
fn mass_discrepancy(a: &FusionResult, b: &FusionResult) -> f64 {
    let mut codes: Vec<SubsetCode> = a.combined.masses().keys().copied().collect();
    codes.extend(b.combined.masses().keys().copied());
    codes
        .into_iter()
        .map(|code| (a.combined.mass(code) - b.combined.mass(code)).norm())
        .fold(0.0, f64::max)
}

fn cmd_combine(
    input: &std::path::Path,
    backend: BackendArg,
    mode_arg: ModeArg,
    shots: u64,
    seed: u64,
    output: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let file = EvidenceFile::load(input)?;
    if file.sources.len() < 2 {
        return Err(CliError::Parse(format!(
            "{}: combine needs at least two sources, found {}",
            file.path,
            file.sources.len()
        )));
    }
    file.require_parsed()?;
    file.require_valid()?;
    let mode = match mode_arg {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Shots => {
            if matches!(backend, BackendArg::Classical | BackendArg::Cdrc) {
                return Err(CliError::Parse(format!(
                    "mode 'shots' applies only to quantum backends, not '{backend}'"
                )));
            }
            if shots == 0 {
                return Err(CliError::Parse("--shots must be at least 1".into()));
            }
            Mode::Shots { shots, seed }
        }
    };

    let mut timings: Vec<(&str, Duration)> = Vec::new();
    let started = Instant::now();
    let result = fold_sources(&file.sources, backend, mode)?;
    timings.push(("fold", started.elapsed()));

    // Cross-check against an independent exact backend. Quantum backends and
    // the classical rule must agree (modulus semantics); the complex rule is
    // reported without a gate, since phase interference is real divergence.
    let (reference_backend, label, gated) = match backend {
        BackendArg::Classical => (BackendArg::Qdrc, "qdrc (exact)", true),
        BackendArg::Cdrc => (
            BackendArg::Classical,
            "classical-drc (modulus semantics)",
            false,
        ),
        BackendArg::Qadrc | BackendArg::Qdrc => (
            BackendArg::Classical,
            "classical-drc (modulus semantics)",
            true,
        ),
    };
    let started = Instant::now();
    let reference = fold_sources(&file.sources, reference_backend, Mode::Exact);
    timings.push(("cross-check", started.elapsed()));
    let cross_check = match reference {
        Ok(reference) => {
            let delta = mass_discrepancy(&result, &reference);
            let status = if !gated {
                CrossStatus::Info("complex rule vs modulus semantics")
            } else if mode != Mode::Exact {
                CrossStatus::Info("sampling noise; not gated")
            } else if delta <= REPORT_TOLERANCE {
                CrossStatus::Ok
            } else {
                CrossStatus::Fail
            };
            CrossCheck {
                label: label.to_string(),
                outcome: Ok(delta),
                status,
            }
        }
        Err(error) => CrossCheck {
            label: label.to_string(),
            outcome: Err(error.message().to_string()),
            status: CrossStatus::Info("reference failed"),
        },
    };

    // For complex inputs, also print the classical complex rule next to the
    // selected backend's result.
    let any_complex = file.sources.iter().any(|s| !s.cbba.is_real());
    let cdrc_reference = if any_complex && backend != BackendArg::Cdrc {
        let started = Instant::now();
        let reference = fold_sources(&file.sources, BackendArg::Cdrc, Mode::Exact);
        timings.push(("cdrc-reference", started.elapsed()));
        Some(
            reference
                .map(|r| {
                    let delta = mass_discrepancy(&result, &r);
                    (r, delta)
                })
                .map_err(|e| e.message().to_string()),
        )
    } else {
        None
    };

    let report = Report {
        frame: file.frame.clone(),
        source_names: file.sources.iter().map(|s| s.name.clone()).collect(),
        backend,
        mode: mode.to_string(),
        result,
        cross_checks: vec![cross_check],
        cdrc_reference,
    };
    let text = report.render();
    match output {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| CliError::Other(format!("{}: cannot write: {e}", path.display())))?,
        None => print!("{text}"),
    }
    for (label, duration) in timings {
        eprintln!("timing: {label} = {duration:?}");
    }
    Ok(())
}

fn cmd_validate(input: &std::path::Path) -> Result<(), CliError> {
    let file = EvidenceFile::load(input)?;
    let findings = file.findings();
    if findings.is_empty() {
        println!(
            "OK: {} source(s) over frame {{{}}} pass validation",
            file.sources.len(),
            file.frame.elements().join(", ")
        );
        return Ok(());
    }
    let mut count = 0usize;
    for (name, notes) in &findings {
        for note in notes {
            println!("source {name:?}: {note}");
            count += 1;
        }
    }
    Err(CliError::Validation(format!(
        "{count} finding(s) across {} source(s)",
        findings.len()
    )))
}

fn cmd_bench(config: &BenchConfig, output: &std::path::Path) -> Result<(), CliError> {
    let csv = run_bench(config)?;
    std::fs::write(output, &csv)
        .map_err(|e| CliError::Other(format!("{}: cannot write: {e}", output.display())))?;
    eprintln!(
        "bench: N={}..={}, {} trial(s) per backend → {}",
        config.n_min,
        config.n_max,
        config.trials,
        output.display()
    );
    Ok(())
}

fn cmd_export_qasm(
    input: &std::path::Path,
    backend: QuantumBackendArg,
    output: &std::path::Path,
) -> Result<(), CliError> {
    let file = EvidenceFile::load(input)?;
    if file.sources.len() != 2 {
        return Err(CliError::Parse(format!(
            "{}: QASM export is pairwise only; file has {} sources",
            file.path,
            file.sources.len()
        )));
    }
    file.require_parsed()?;
    file.require_valid()?;
    let backend = match backend {
        QuantumBackendArg::Qadrc => QuantumBackend::Qadrc,
        QuantumBackendArg::Qdrc => QuantumBackend::Qdrc,
    };
    let circuit = build_fusion_circuit(&file.sources[0].cbba, &file.sources[1].cbba, backend)
        .and_then(|c| lower_circuit(&c))
        .map_err(|e| CliError::Other(e.to_string()))?;
    let text = export_qasm(&circuit).map_err(|e| CliError::Other(e.to_string()))?;
    std::fs::write(output, &text)
        .map_err(|e| CliError::Other(format!("{}: cannot write: {e}", output.display())))?;
    eprintln!(
        "exported {} qubits / {} gates → {}",
        circuit.n_qubits(),
        circuit.gate_count(),
        output.display()
    );
    Ok(())
}
