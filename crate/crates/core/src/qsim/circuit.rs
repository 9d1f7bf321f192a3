use super::{Gate, SimError, StateVector, MAX_QUBITS};

/// One circuit step: a gate, or the amplitude-load pseudo-instruction that a
/// state-preparation pass lowers into rotation gates.
#[derive(Debug, Clone, PartialEq)]
pub enum Instruction {
    Gate(Gate),
    /// Load real unit-norm amplitudes onto the contiguous qubit range
    /// starting at `start`. Valid only while those qubits are still |0…0⟩.
    Load {
        start: usize,
        amps: Vec<f64>,
    },
}

/// An ordered gate list over a fixed qubit count, plus the qubits read out at
/// the end (in classical-bit order).
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    instructions: Vec<Instruction>,
    measurements: Vec<usize>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self, SimError> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(SimError::UnsupportedQubitCount(n_qubits));
        }
        Ok(Self {
            n_qubits,
            instructions: Vec::new(),
            measurements: Vec::new(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn measurements(&self) -> &[usize] {
        &self.measurements
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), SimError> {
        gate.validate(self.n_qubits)?;
        self.instructions.push(Instruction::Gate(gate));
        Ok(())
    }

    pub fn push_load(&mut self, start: usize, amps: Vec<f64>) -> Result<(), SimError> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(SimError::BadLoadLength { len });
        }
        let k = len.trailing_zeros() as usize;
        if start + k > self.n_qubits {
            return Err(SimError::QubitOutOfRange {
                index: start + k - 1,
                n_qubits: self.n_qubits,
            });
        }
        self.instructions.push(Instruction::Load { start, amps });
        Ok(())
    }

    /// Declare which qubits a terminal measurement reads, in classical-bit
    /// order (qubit `measurements[k]` fills bit `k` of an outcome).
    pub fn set_measurements(&mut self, qubits: Vec<usize>) -> Result<(), SimError> {
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.n_qubits {
                return Err(SimError::QubitOutOfRange {
                    index: q,
                    n_qubits: self.n_qubits,
                });
            }
            if qubits[..i].contains(&q) {
                return Err(SimError::DuplicateQubit(q));
            }
        }
        self.measurements = qubits;
        Ok(())
    }

    /// Number of real gates (load pseudo-instructions not counted).
    pub fn gate_count(&self) -> usize {
        self.instructions
            .iter()
            .filter(|i| matches!(i, Instruction::Gate(_)))
            .count()
    }

    pub fn toffoli_count(&self) -> usize {
        self.instructions
            .iter()
            .filter(|i| matches!(i, Instruction::Gate(Gate::Toffoli { .. })))
            .count()
    }

    /// True once every pseudo-instruction has been lowered to gates.
    pub fn is_lowered(&self) -> bool {
        self.instructions
            .iter()
            .all(|i| matches!(i, Instruction::Gate(_)))
    }

    /// Execute from |0…0⟩ and return the final state.
    pub fn run(&self) -> Result<StateVector, SimError> {
        let mut state = StateVector::new(self.n_qubits)?;
        for instruction in &self.instructions {
            match instruction {
                Instruction::Gate(gate) => state.apply(gate)?,
                Instruction::Load { start, amps } => state.load(*start, amps)?,
            }
        }
        Ok(state)
    }

    /// The analytic distribution a terminal measurement would observe.
    pub fn measurement_distribution(&self) -> Result<Vec<f64>, SimError> {
        self.run()?.marginal_probabilities(&self.measurements)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_applies_instructions_in_order() {
        let mut circuit = Circuit::new(2).unwrap();
        circuit.push_load(0, vec![0.6, 0.8]).unwrap();
        circuit
            .push(Gate::Cnot {
                control: 0,
                target: 1,
            })
            .unwrap();
        let state = circuit.run().unwrap();
        assert!((state.amplitudes()[0b00].re - 0.6).abs() < 1e-15);
        assert!((state.amplitudes()[0b11].re - 0.8).abs() < 1e-15);
    }

    #[test]
    fn push_validates_indices() {
        let mut circuit = Circuit::new(2).unwrap();
        assert!(circuit.push(Gate::X { target: 2 }).is_err());
        assert!(circuit.push_load(1, vec![0.0, 1.0, 0.0, 0.0]).is_err());
        assert!(circuit.set_measurements(vec![0, 0]).is_err());
    }

    #[test]
    fn lowered_flag_tracks_pending_loads() {
        let mut circuit = Circuit::new(1).unwrap();
        assert!(circuit.is_lowered());
        circuit.push_load(0, vec![1.0, 0.0]).unwrap();
        assert!(!circuit.is_lowered());
    }
}
