use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{SimError, StateVector};

/// Draw `shots` measurement outcomes of the listed qubits and return counts
/// per outcome (indexed like [`StateVector::marginal_probabilities`]).
///
/// Sampling is multinomial over the analytic marginal with an explicit seed;
/// the same `(state, qubits, shots, seed)` always yields the same counts.
/// Only outcomes with strictly positive probability can be drawn.
pub fn sample(
    state: &StateVector,
    qubits: &[usize],
    shots: u64,
    seed: u64,
) -> Result<Vec<u64>, SimError> {
    if shots == 0 {
        return Err(SimError::ZeroShots);
    }
    let probabilities = state.marginal_probabilities(qubits)?;
    Ok(sample_distribution(&probabilities, shots, seed))
}

/// Multinomial counts from an explicit distribution (entries may be a hair
/// off unit sum; draws are resolved against the cumulative support).
pub fn sample_distribution(probabilities: &[f64], shots: u64, seed: u64) -> Vec<u64> {
    // Cumulative sums over the support only, so zero-probability outcomes
    // can never be selected by the final clamp.
    let mut support: Vec<(usize, f64)> = Vec::new();
    let mut cumulative = 0.0;
    for (outcome, &p) in probabilities.iter().enumerate() {
        if p > 0.0 {
            cumulative += p;
            support.push((outcome, cumulative));
        }
    }
    let mut counts = vec![0u64; probabilities.len()];
    if support.is_empty() {
        return counts;
    }
    let total = support.last().unwrap().1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..shots {
        let u: f64 = rng.random::<f64>() * total;
        let slot = support.partition_point(|&(_, c)| c <= u);
        let (outcome, _) = support[slot.min(support.len() - 1)];
        counts[outcome] += 1;
    }
    counts
}
