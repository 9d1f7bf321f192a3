//! Scaling benchmark: random full-support BBA pairs fused under each backend
//! across frame sizes, timed and reported as CSV. The classical rule walks
//! all focal-element pairs (4^N products); the quantum pipelines trade that
//! for qubit count and state-prep gates.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use belieffuse::evidence::{combine_drc, Bba, Frame, Mode, SubsetCode};
use belieffuse::qdrc::{build_fusion_circuit, lower_circuit, run_fusion, QuantumBackend};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fusion::derive_seed;
use crate::CliError;

pub struct BenchConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub trials: u64,
    pub seed: u64,
}

fn random_full_support_bba(frame: &Frame, rng: &mut ChaCha8Rng) -> Bba {
    let mut masses = BTreeMap::new();
    let mut total = 0.0;
    for bits in 1..frame.subset_count() {
        let w = rng.random::<f64>().max(1e-9);
        masses.insert(SubsetCode(bits), w);
        total += w;
    }
    for w in masses.values_mut() {
        *w /= total;
    }
    Bba::new(frame.clone(), masses)
}

/// Produce the CSV table: one row per (N, backend) with the mean wall time,
/// the lowered gate count, and the qubit count.
pub fn run_bench(config: &BenchConfig) -> Result<String, CliError> {
    if config.n_min < 1 || config.n_min > config.n_max || config.n_max > 8 {
        return Err(CliError::Parse(format!(
            "bench range {}..={} invalid: need 1 <= n-min <= n-max <= 8",
            config.n_min, config.n_max
        )));
    }
    if config.trials == 0 {
        return Err(CliError::Parse("bench needs at least one trial".into()));
    }

    let mut csv = String::from("N,backend,mean_ns,gate_count,qubit_count\n");
    for n in config.n_min..=config.n_max {
        let frame = Frame::new((0..n).map(|i| format!("e{i}")).collect::<Vec<_>>())
            .map_err(|e| CliError::Other(e.to_string()))?;
        let pairs: Vec<(Bba, Bba)> = (0..config.trials)
            .map(|trial| {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(derive_seed(config.seed, (n as u64) << 32 | trial));
                (
                    random_full_support_bba(&frame, &mut rng),
                    random_full_support_bba(&frame, &mut rng),
                )
            })
            .collect();

        // Full-support masses produce the maximal circuit, so gate counts are
        // the same for every trial; take them from the first pair.
        let (first_a, first_b) = (&pairs[0].0.to_cbba(), &pairs[0].1.to_cbba());
        let qdrc_circuit = lower_circuit(
            &build_fusion_circuit(first_a, first_b, QuantumBackend::Qdrc)
                .map_err(|e| CliError::Other(e.to_string()))?,
        )
        .map_err(|e| CliError::Other(e.to_string()))?;
        let qadrc_circuit = lower_circuit(
            &build_fusion_circuit(first_a, first_b, QuantumBackend::Qadrc)
                .map_err(|e| CliError::Other(e.to_string()))?,
        )
        .map_err(|e| CliError::Other(e.to_string()))?;

        let classical = time_ns(&pairs, |(m1, m2)| {
            combine_drc(m1, m2).map(|_| ()).map_err(|e| e.to_string())
        })?;
        let qadrc = time_ns(&pairs, |(m1, m2)| {
            run_fusion(
                &m1.to_cbba(),
                &m2.to_cbba(),
                QuantumBackend::Qadrc,
                Mode::Exact,
            )
            .map(|_| ())
            .map_err(|e| e.to_string())
        })?;
        let qdrc = time_ns(&pairs, |(m1, m2)| {
            run_fusion(
                &m1.to_cbba(),
                &m2.to_cbba(),
                QuantumBackend::Qdrc,
                Mode::Exact,
            )
            .map(|_| ())
            .map_err(|e| e.to_string())
        })?;

        let _ = writeln!(csv, "{n},classical,{classical},0,0");
        let _ = writeln!(
            csv,
            "{n},qadrc,{qadrc},{},{}",
            qadrc_circuit.gate_count(),
            qadrc_circuit.n_qubits()
        );
        let _ = writeln!(
            csv,
            "{n},qdrc,{qdrc},{},{}",
            qdrc_circuit.gate_count(),
            qdrc_circuit.n_qubits()
        );
    }
    Ok(csv)
}

fn time_ns<T>(pairs: &[T], mut op: impl FnMut(&T) -> Result<(), String>) -> Result<u128, CliError> {
    let start = Instant::now();
    for pair in pairs {
        op(pair).map_err(CliError::Other)?;
    }
    Ok(start.elapsed().as_nanos() / pairs.len() as u128)
}
