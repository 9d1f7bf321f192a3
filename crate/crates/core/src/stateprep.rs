//! State preparation: converts a (complex) mass function into quantum-loadable
//! amplitudes and synthesizes a rotation circuit that prepares them from
//! |0…0⟩.
//!
//! The amplitude for subset A_i is √(|𝕄(A_i)| / Σ_j |𝕄(A_j)|): moduli only,
//! renormalized so the squared amplitudes form a distribution. Phases of
//! complex masses are discarded by construction: the quantum pipelines
//! operate on modulus-normalized belief, never on complex interference.
//!
//! Because the amplitudes are real and non-negative, preparation needs no
//! phase gates: a binary tree of Y-rotation angles, lowered to multiplexed
//! RY/CRY/CNOT sequences, reproduces the vector exactly.

use std::ops::Range;

use crate::evidence::{Cbba, EvidenceError};
use crate::qsim::Gate;

/// Errors from amplitude conversion and circuit synthesis.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PrepError {
    #[error("every mass has zero modulus; nothing to encode")]
    AllZeroMasses,
    #[error("amplitude vector length {0} is not a power of two (or is shorter than 2)")]
    BadLength(usize),
    #[error("amplitude {value} at index {index} is not a finite non-negative number")]
    InvalidAmplitude { index: usize, value: f64 },
    #[error("squared amplitudes sum to {norm_sqr}, expected 1 within 1e-9")]
    NotNormalized { norm_sqr: f64 },
    #[error("qubit range of length {range_len} does not match a {n_qubits}-qubit angle tree")]
    RangeMismatch { range_len: usize, n_qubits: usize },
    #[error(transparent)]
    Evidence(#[from] EvidenceError),
}

/// A unit-norm vector of non-negative real amplitudes over 2^N basis states.
/// When derived from a mass function, index 0 (the empty set) carries
/// amplitude 0.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector {
    n_qubits: usize,
    amps: Vec<f64>,
}

impl AmplitudeVector {
    pub fn new(amps: Vec<f64>) -> Result<Self, PrepError> {
        if amps.len() < 2 || !amps.len().is_power_of_two() {
            return Err(PrepError::BadLength(amps.len()));
        }
        for (index, &value) in amps.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(PrepError::InvalidAmplitude { index, value });
            }
        }
        let norm_sqr: f64 = amps.iter().map(|a| a * a).sum();
        if (norm_sqr - 1.0).abs() > 1e-9 {
            return Err(PrepError::NotNormalized { norm_sqr });
        }
        Ok(Self {
            n_qubits: amps.len().trailing_zeros() as usize,
            amps,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amps(&self) -> &[f64] {
        &self.amps
    }
}

/// Transform a mass function into loadable amplitudes:
/// `amps[i]` = √(|𝕄(A_i)| / Σ_j |𝕄(A_j)|), indexed by subset code.
pub fn p_transform(cbba: &Cbba) -> Result<AmplitudeVector, PrepError> {
    cbba.check_focal_elements()?;
    let moduli = cbba.modulus_mass();
    let total: f64 = moduli.values().sum();
    if total == 0.0 {
        return Err(PrepError::AllZeroMasses);
    }
    let mut amps = vec![0.0f64; cbba.frame().subset_count() as usize];
    for (code, modulus) in moduli {
        amps[code.bits() as usize] = (modulus / total).sqrt();
    }
    AmplitudeVector::new(amps)
}

/// The Y-rotation angles that prepare an amplitude vector, as a binary tree:
/// level `k` holds 2^k angles, one per prefix of the high qubit bits.
///
/// The node that splits a subvector into halves L (split bit 0) and R (split
/// bit 1) carries θ = 2·atan2(‖R‖₂, ‖L‖₂); a zero-norm node carries θ = 0.
/// All angles lie in [0, π].
#[derive(Debug, Clone, PartialEq)]
pub struct AngleTree {
    levels: Vec<Vec<f64>>,
}

impl AngleTree {
    pub fn n_qubits(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub fn total_angles(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }
}

/// Decompose a unit-norm amplitude vector into its rotation-angle tree.
pub fn build_angle_tree(amps: &AmplitudeVector) -> AngleTree {
    let n = amps.n_qubits();
    let mut levels = Vec::with_capacity(n);
    for level in 0..n {
        let nodes = 1usize << level;
        let block = 1usize << (n - level);
        let mut angles = Vec::with_capacity(nodes);
        for node in 0..nodes {
            let start = node * block;
            let half = block / 2;
            let left: f64 = amps.amps()[start..start + half]
                .iter()
                .map(|a| a * a)
                .sum::<f64>()
                .sqrt();
            let right: f64 = amps.amps()[start + half..start + block]
                .iter()
                .map(|a| a * a)
                .sum::<f64>()
                .sqrt();
            // atan2(0, 0) = 0: a dead branch needs no rotation.
            angles.push(2.0 * right.atan2(left));
        }
        levels.push(angles);
    }
    AngleTree { levels }
}

/// Lower an angle tree to gates on a contiguous qubit range.
///
/// Level `k` of the tree becomes a multiplexed RY on qubit
/// `range.start + N−1−k`, selected by the `k` qubits above it. Multiplexors
/// recurse by angle half-sums with CNOT conjugation; the single-control base
/// case is an RY/CRY chain. Identity rotations are skipped, so an already
/// prepared |0…0⟩ lowers to an empty gate list. The output never exceeds
/// 3·(2^N − 1) gates.
pub fn lower_to_gates(tree: &AngleTree, qubit_range: Range<usize>) -> Result<Vec<Gate>, PrepError> {
    let n = tree.n_qubits();
    if qubit_range.len() != n {
        return Err(PrepError::RangeMismatch {
            range_len: qubit_range.len(),
            n_qubits: n,
        });
    }
    let qubit = |k: usize| qubit_range.start + k;
    let mut gates = Vec::new();
    for (level, angles) in tree.levels.iter().enumerate() {
        let target = qubit(n - 1 - level);
        // Control for angle-index bit b is the qubit split at level (level-1-b):
        // the first split (highest qubit) selects the most significant bit.
        let controls: Vec<usize> = (0..level).map(|i| qubit(n - 1 - i)).collect();
        emit_multiplexed_ry(angles, &controls, target, &mut gates);
    }
    Ok(gates)
}

/// Emit RY(angles[j]) on `target` for every classical value `j` of the
/// control qubits (`controls[0]` is the most significant selector bit).
fn emit_multiplexed_ry(angles: &[f64], controls: &[usize], target: usize, out: &mut Vec<Gate>) {
    if angles.iter().all(|&theta| theta == 0.0) {
        return;
    }
    match controls {
        [] => out.push(Gate::Ry {
            target,
            theta: angles[0],
        }),
        [control] => {
            let (zero, one) = (angles[0], angles[1]);
            if zero != 0.0 {
                out.push(Gate::Ry {
                    target,
                    theta: zero,
                });
            }
            if one != zero {
                out.push(Gate::Cry {
                    control: *control,
                    target,
                    theta: one - zero,
                });
            }
        }
        [first, rest @ ..] => {
            // With A = angles under first=0 and B = under first=1:
            // MUX(A,B) = MUX((A+B)/2) · CX · MUX((A−B)/2) · CX,
            // because conjugating RY by X negates its angle.
            let half = angles.len() / 2;
            let (a, b) = angles.split_at(half);
            let sums: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x + y) / 2.0).collect();
            let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - y) / 2.0).collect();
            emit_multiplexed_ry(&sums, rest, target, out);
            if !diffs.iter().all(|&theta| theta == 0.0) {
                out.push(Gate::Cnot {
                    control: *first,
                    target,
                });
                emit_multiplexed_ry(&diffs, rest, target, out);
                out.push(Gate::Cnot {
                    control: *first,
                    target,
                });
            }
        }
    }
}

/// Convenience path: P-transformed amplitudes straight to a gate list on
/// qubits `start..start+N`.
pub fn prepare_register(amps: &AmplitudeVector, start: usize) -> Vec<Gate> {
    let tree = build_angle_tree(amps);
    lower_to_gates(&tree, start..start + amps.n_qubits())
        .expect("range derived from the tree cannot mismatch")
}
