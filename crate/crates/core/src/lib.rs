//! BeliefFuse: multisource evidence fusion via Dempster's rule of combination,
//! executed three ways and cross-validated.
//!
//! The crate fuses basic belief assignments (real- or complex-valued) over a
//! shared frame of discernment:
//!
//! - [`evidence`] holds the frames, subset encoding, mass functions, and the
//!   classical combination rules that serve as exact oracles.
//! - [`qsim`] is a dense state-vector simulator for the small gate set the
//!   fusion circuits need (X, RY, CNOT, CRY, Toffoli).
//! - [`stateprep`] turns a mass function into a unit-norm amplitude vector and
//!   synthesizes the rotation circuit that prepares it from |0…0⟩.
//! - [`qdrc`] builds and runs the two quantum fusion pipelines: the hybrid
//!   scheme over 2N qubits with a classical intersection postprocess, and the
//!   fully-quantum scheme over 3N qubits where a Toffoli layer computes set
//!   intersection directly. It also exports circuits as OpenQASM 2.0.
//!
//! All combination paths agree: in exact mode the quantum pipelines reproduce
//! the classical rule to within 1e-9 per mass, and the empty-set probability
//! they discard is exactly the conflict coefficient K.

pub mod evidence;
pub mod qdrc;
pub mod qsim;
pub mod stateprep;
