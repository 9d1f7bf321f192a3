//! The two quantum fusion pipelines and the conversion of measurement
//! statistics back into combined mass functions.
//!
//! Both pipelines amplitude-encode the P-transformed sources into disjoint
//! registers. They differ in where set intersection happens:
//!
//! - The hybrid pipeline (2N qubits) measures the joint register pair and
//!   intersects each `(B, C)` outcome classically.
//! - The fully-quantum pipeline (3N qubits) adds one Toffoli per frame
//!   element: `Toffoli(reg1[k], reg2[k], reg_out[k])` writes the bitwise AND
//!   of the two subset codes (their intersection) into the output register,
//!   and only that register is measured.
//!
//! In both cases the all-zeros outcome is the empty intersection; its
//! probability is the conflict coefficient K, and discarding it before
//! renormalizing is exactly Dempster normalization by 1−K.

mod qasm;

use std::collections::BTreeMap;
use std::ops::Range;

use num_complex::Complex64;

use crate::evidence::{
    Backend, Cbba, EvidenceError, FusionResult, Mode, SubsetCode, CONFLICT_TOLERANCE,
};
use crate::qsim::{self, Circuit, Gate, Instruction, SimError};
use crate::stateprep::{p_transform, prepare_register, AmplitudeVector, PrepError};

pub use qasm::{export_qasm, parse_qasm, QasmParseError};

/// Errors from circuit construction, execution, and export.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FusionError {
    #[error(transparent)]
    Evidence(#[from] EvidenceError),
    #[error(transparent)]
    Prep(#[from] PrepError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("source registers span {n1} and {n2} qubits; they must match")]
    SizeMismatch { n1: usize, n2: usize },
    #[error(
        "probability {probability} observed on an empty-set source outcome \
         (B={b:#b}, C={c:#b}); input amplitudes at index 0 must be zero"
    )]
    EmptySourceOutcome { b: u32, c: u32, probability: f64 },
    #[error("circuit still contains an amplitude-load pseudo-instruction")]
    UnloweredLoad,
    #[error(transparent)]
    Qasm(#[from] QasmParseError),
}

/// Register layout of the fully-quantum pipeline: two N-qubit source
/// registers plus an N-qubit intersection output register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QdrcLayout {
    n: usize,
}

impl QdrcLayout {
    pub fn new(n: usize) -> Result<Self, FusionError> {
        // Circuit::new enforces the simulator's qubit budget.
        if n == 0 || 3 * n > qsim::MAX_QUBITS {
            return Err(SimError::UnsupportedQubitCount(3 * n).into());
        }
        Ok(Self { n })
    }

    pub fn frame_size(&self) -> usize {
        self.n
    }

    pub fn reg1(&self) -> Range<usize> {
        0..self.n
    }

    pub fn reg2(&self) -> Range<usize> {
        self.n..2 * self.n
    }

    pub fn reg_out(&self) -> Range<usize> {
        2 * self.n..3 * self.n
    }

    pub fn total_qubits(&self) -> usize {
        3 * self.n
    }
}

/// Register layout of the hybrid pipeline: just the two source registers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QadrcLayout {
    n: usize,
}

impl QadrcLayout {
    pub fn new(n: usize) -> Result<Self, FusionError> {
        if n == 0 || 2 * n > qsim::MAX_QUBITS {
            return Err(SimError::UnsupportedQubitCount(2 * n).into());
        }
        Ok(Self { n })
    }

    pub fn frame_size(&self) -> usize {
        self.n
    }

    pub fn reg1(&self) -> Range<usize> {
        0..self.n
    }

    pub fn reg2(&self) -> Range<usize> {
        self.n..2 * self.n
    }

    pub fn total_qubits(&self) -> usize {
        2 * self.n
    }
}

/// Which quantum pipeline to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantumBackend {
    Qadrc,
    Qdrc,
}

impl From<QuantumBackend> for Backend {
    fn from(backend: QuantumBackend) -> Backend {
        match backend {
            QuantumBackend::Qadrc => Backend::Qadrc,
            QuantumBackend::Qdrc => Backend::Qdrc,
        }
    }
}

/// Build the 3N-qubit circuit: load both sources, then one Toffoli per frame
/// element writing the intersection into the output register, which is the
/// only register measured.
pub fn build_qdrc_circuit(
    p1: &AmplitudeVector,
    p2: &AmplitudeVector,
) -> Result<Circuit, FusionError> {
    if p1.n_qubits() != p2.n_qubits() {
        return Err(FusionError::SizeMismatch {
            n1: p1.n_qubits(),
            n2: p2.n_qubits(),
        });
    }
    let layout = QdrcLayout::new(p1.n_qubits())?;
    let mut circuit = Circuit::new(layout.total_qubits())?;
    circuit.push_load(layout.reg1().start, p1.amps().to_vec())?;
    circuit.push_load(layout.reg2().start, p2.amps().to_vec())?;
    for k in 0..layout.frame_size() {
        circuit.push(Gate::Toffoli {
            control_a: layout.reg1().start + k,
            control_b: layout.reg2().start + k,
            target: layout.reg_out().start + k,
        })?;
    }
    circuit.set_measurements(layout.reg_out().collect())?;
    Ok(circuit)
}

/// Build the 2N-qubit hybrid circuit: loads only, no combination gates.
/// Measuring all qubits yields the joint product distribution; intersection
/// happens classically afterwards.
pub fn build_qadrc_circuit(
    p1: &AmplitudeVector,
    p2: &AmplitudeVector,
) -> Result<Circuit, FusionError> {
    if p1.n_qubits() != p2.n_qubits() {
        return Err(FusionError::SizeMismatch {
            n1: p1.n_qubits(),
            n2: p2.n_qubits(),
        });
    }
    let layout = QadrcLayout::new(p1.n_qubits())?;
    let mut circuit = Circuit::new(layout.total_qubits())?;
    circuit.push_load(layout.reg1().start, p1.amps().to_vec())?;
    circuit.push_load(layout.reg2().start, p2.amps().to_vec())?;
    circuit.set_measurements((0..layout.total_qubits()).collect())?;
    Ok(circuit)
}

/// P-transform two sources and build the chosen pipeline's circuit (with the
/// loads still in pseudo-instruction form).
pub fn build_fusion_circuit(
    m1: &Cbba,
    m2: &Cbba,
    backend: QuantumBackend,
) -> Result<Circuit, FusionError> {
    if m1.frame() != m2.frame() {
        return Err(EvidenceError::FrameMismatch.into());
    }
    let p1 = p_transform(m1)?;
    let p2 = p_transform(m2)?;
    match backend {
        QuantumBackend::Qdrc => build_qdrc_circuit(&p1, &p2),
        QuantumBackend::Qadrc => build_qadrc_circuit(&p1, &p2),
    }
}

/// Expand every amplitude-load pseudo-instruction into RY/CRY/CNOT state
/// preparation gates, leaving real gates and measurements untouched.
pub fn lower_circuit(circuit: &Circuit) -> Result<Circuit, FusionError> {
    let mut lowered = Circuit::new(circuit.n_qubits())?;
    for instruction in circuit.instructions() {
        match instruction {
            Instruction::Gate(gate) => lowered.push(gate.clone())?,
            Instruction::Load { start, amps } => {
                let vector = AmplitudeVector::new(amps.clone())?;
                for gate in prepare_register(&vector, *start) {
                    lowered.push(gate)?;
                }
            }
        }
    }
    lowered.set_measurements(circuit.measurements().to_vec())?;
    Ok(lowered)
}

/// Run a quantum fusion of two sources over the same frame.
///
/// Exact mode reads the simulator's analytic marginal; shots mode draws a
/// seeded multinomial sample first. Either way the empty-set outcome becomes
/// the conflict estimate K̂ and the remaining outcomes are renormalized by
/// 1−K̂ into the combined mass function. K̂ ≥ 1−1e-9 is the total-conflict
/// error.
pub fn run_fusion(
    m1: &Cbba,
    m2: &Cbba,
    backend: QuantumBackend,
    mode: Mode,
) -> Result<FusionResult, FusionError> {
    let circuit = build_fusion_circuit(m1, m2, backend)?;
    let state = circuit.run()?;
    let weights: Vec<f64> = match mode {
        Mode::Exact => state.marginal_probabilities(circuit.measurements())?,
        Mode::Shots { shots, seed } => qsim::sample(&state, circuit.measurements(), shots, seed)?
            .into_iter()
            .map(|count| count as f64)
            .collect(),
    };
    let n = m1.frame().len();
    let outcome_weights = match backend {
        QuantumBackend::Qdrc => weights,
        QuantumBackend::Qadrc => intersect_joint_outcomes(&weights, n)?,
    };

    let total: f64 = outcome_weights.iter().sum();
    let conflict = outcome_weights[0] / total;
    if conflict >= 1.0 - CONFLICT_TOLERANCE {
        return Err(EvidenceError::TotalConflict { k: conflict }.into());
    }
    let mut masses = BTreeMap::new();
    for (code, &weight) in outcome_weights.iter().enumerate().skip(1) {
        if weight > 0.0 {
            let mass = (weight / total) / (1.0 - conflict);
            masses.insert(SubsetCode(code as u32), Complex64::new(mass, 0.0));
        }
    }
    Ok(FusionResult {
        combined: Cbba::new(m1.frame().clone(), masses),
        conflict: Complex64::new(conflict, 0.0),
        backend: backend.into(),
        mode,
    })
}

/// Classical postprocess of the hybrid pipeline: fold the joint `(B, C)`
/// outcome weights into intersection buckets `B ∩ C`.
///
/// Outcomes where either source register reads the empty set cannot occur
/// (the loaded amplitude at index 0 is zero), so any weight there is an
/// invariant violation, not something to tolerate silently.
fn intersect_joint_outcomes(weights: &[f64], n: usize) -> Result<Vec<f64>, FusionError> {
    let mask = (1usize << n) - 1;
    let mut buckets = vec![0.0f64; 1 << n];
    for (joint, &weight) in weights.iter().enumerate() {
        if weight == 0.0 {
            continue;
        }
        let b = joint & mask;
        let c = joint >> n;
        if b == 0 || c == 0 {
            return Err(FusionError::EmptySourceOutcome {
                b: b as u32,
                c: c as u32,
                probability: weight,
            });
        }
        buckets[b & c] += weight;
    }
    Ok(buckets)
}
