//! Exact dense state-vector simulation of the fusion gate set, with marginal
//! probability extraction and seeded shot sampling.
//!
//! Everything here is deterministic: gate kernels may fan out over disjoint
//! amplitude partitions, but each amplitude pair is computed independently
//! and marginal reductions run in a fixed order, so results are bitwise
//! identical at any worker-thread count. Sampling draws from an explicit
//! caller-provided seed; there is no global RNG state.

mod circuit;
mod gate;
mod sample;
mod state;

pub use circuit::{Circuit, Instruction};
pub use gate::Gate;
pub use sample::{sample, sample_distribution};
pub use state::{StateVector, MAX_QUBITS};

/// Simulator errors: bad register sizes, bad qubit indices, and misuse of the
/// amplitude-load pseudo-instruction.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("qubit count {0} outside the supported range 1..={MAX_QUBITS}")]
    UnsupportedQubitCount(usize),
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("gate addresses qubit {0} more than once")]
    DuplicateQubit(usize),
    #[error("amplitude load of length {len} is not a power of two (or is shorter than 2)")]
    BadLoadLength { len: usize },
    #[error("amplitude load has squared norm {norm_sqr}, expected 1")]
    UnnormalizedLoad { norm_sqr: f64 },
    #[error("amplitude load onto qubits {start}..{end} that are no longer |0…0⟩")]
    LoadOnDirtyRegister { start: usize, end: usize },
    #[error("shot count must be at least 1")]
    ZeroShots,
}
