use super::SimError;

/// The gate set the fusion circuits are built from: Pauli-X, Y-rotation,
/// CNOT, controlled Y-rotation, and the Toffoli (CCNOT) gate that flips its
/// target iff both controls are 1.
///
/// Rotation convention: RY(θ)|0⟩ = cos(θ/2)|0⟩ + sin(θ/2)|1⟩. Controlled
/// gates act as identity whenever any control bit is 0.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    X {
        target: usize,
    },
    Ry {
        target: usize,
        theta: f64,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    Cry {
        control: usize,
        target: usize,
        theta: f64,
    },
    Toffoli {
        control_a: usize,
        control_b: usize,
        target: usize,
    },
}

impl Gate {
    /// The qubits the gate touches, target last.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X { target } | Gate::Ry { target, .. } => vec![target],
            Gate::Cnot { control, target }
            | Gate::Cry {
                control, target, ..
            } => {
                vec![control, target]
            }
            Gate::Toffoli {
                control_a,
                control_b,
                target,
            } => vec![control_a, control_b, target],
        }
    }

    pub fn target(&self) -> usize {
        match *self {
            Gate::X { target }
            | Gate::Ry { target, .. }
            | Gate::Cnot { target, .. }
            | Gate::Cry { target, .. }
            | Gate::Toffoli { target, .. } => target,
        }
    }

    /// Indices must be distinct and within the register.
    pub fn validate(&self, n_qubits: usize) -> Result<(), SimError> {
        let qubits = self.qubits();
        for (i, &q) in qubits.iter().enumerate() {
            if q >= n_qubits {
                return Err(SimError::QubitOutOfRange { index: q, n_qubits });
            }
            if qubits[..i].contains(&q) {
                return Err(SimError::DuplicateQubit(q));
            }
        }
        Ok(())
    }
}
