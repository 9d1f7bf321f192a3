use num_complex::Complex64;
use rayon::prelude::*;

use super::{Gate, SimError};

/// Hard cap on register width: a 26-qubit state is a 1 GiB amplitude array.
pub const MAX_QUBITS: usize = 26;

/// Amplitude arrays at least this long are processed with data parallelism.
/// Every kernel writes each amplitude pair independently, so the result is
/// bitwise identical at any thread count.
const PARALLEL_THRESHOLD: usize = 1 << 16;

/// A dense state vector over `n_qubits` qubits.
///
/// Indexing is little-endian: bit `k` of an amplitude index is the state of
/// qubit `k`. This matches the subset encoding, where bit `k` of a subset
/// code marks frame element `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros state |0…0⟩.
    pub fn new(n_qubits: usize) -> Result<Self, SimError> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(SimError::UnsupportedQubitCount(n_qubits));
        }
        let mut amps = vec![Complex64::ZERO; 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// |amplitude|² for every basis state, in index order.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Apply one gate in place. Norm is preserved to machine precision.
    pub fn apply(&mut self, gate: &Gate) -> Result<(), SimError> {
        gate.validate(self.n_qubits)?;
        match *gate {
            Gate::X { target } => {
                for_each_pair(&mut self.amps, target, |_, lo, hi| {
                    std::mem::swap(lo, hi);
                });
            }
            Gate::Ry { target, theta } => {
                let (sin, cos) = (theta / 2.0).sin_cos();
                for_each_pair(&mut self.amps, target, |_, lo, hi| {
                    let a = *lo;
                    let b = *hi;
                    *lo = cos * a - sin * b;
                    *hi = sin * a + cos * b;
                });
            }
            Gate::Cnot { control, target } => {
                for_each_pair(&mut self.amps, target, |index, lo, hi| {
                    if (index >> control) & 1 == 1 {
                        std::mem::swap(lo, hi);
                    }
                });
            }
            Gate::Cry {
                control,
                target,
                theta,
            } => {
                let (sin, cos) = (theta / 2.0).sin_cos();
                for_each_pair(&mut self.amps, target, |index, lo, hi| {
                    if (index >> control) & 1 == 1 {
                        let a = *lo;
                        let b = *hi;
                        *lo = cos * a - sin * b;
                        *hi = sin * a + cos * b;
                    }
                });
            }
            Gate::Toffoli {
                control_a,
                control_b,
                target,
            } => {
                for_each_pair(&mut self.amps, target, |index, lo, hi| {
                    if (index >> control_a) & 1 == 1 && (index >> control_b) & 1 == 1 {
                        std::mem::swap(lo, hi);
                    }
                });
            }
        }
        Ok(())
    }

    /// Load a unit-norm real amplitude vector onto the contiguous qubit range
    /// starting at `start` (the `initialize`-style pseudo-gate).
    ///
    /// The target register must still be in |0…0⟩: the state factors as
    /// |ψ⟩⊗|0…0⟩ and the load turns it into |ψ⟩⊗|φ⟩ exactly.
    pub fn load(&mut self, start: usize, amps: &[f64]) -> Result<(), SimError> {
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
        let norm_sqr: f64 = amps.iter().map(|a| a * a).sum();
        if (norm_sqr - 1.0).abs() > 1e-9 {
            return Err(SimError::UnnormalizedLoad { norm_sqr });
        }
        let register_mask = (len - 1) << start;
        if self
            .amps
            .iter()
            .enumerate()
            .any(|(i, a)| i & register_mask != 0 && *a != Complex64::ZERO)
        {
            return Err(SimError::LoadOnDirtyRegister {
                start,
                end: start + k,
            });
        }
        for base in 0..self.amps.len() {
            if base & register_mask != 0 {
                continue;
            }
            let v = self.amps[base];
            if v == Complex64::ZERO {
                continue;
            }
            for (j, &amp) in amps.iter().enumerate() {
                self.amps[base | (j << start)] = v * amp;
            }
        }
        Ok(())
    }

    /// Marginal distribution over the listed qubits: entry `j` sums |amp|²
    /// over every basis state whose listed-qubit bits spell `j` (qubit
    /// `qubits[k]` contributes bit `k`).
    ///
    /// The reduction runs in a fixed index order so results are bitwise
    /// reproducible regardless of worker-thread count.
    pub fn marginal_probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>, SimError> {
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
        let mut out = vec![0.0f64; 1 << qubits.len()];
        for (index, amp) in self.amps.iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let mut outcome = 0usize;
            for (k, &q) in qubits.iter().enumerate() {
                outcome |= ((index >> q) & 1) << k;
            }
            out[outcome] += p;
        }
        Ok(out)
    }
}

/// Visit every amplitude pair that differs only in `target`, passing the
/// pair's low index (target bit clear) plus mutable references to both
/// amplitudes. Pairs are disjoint, so the parallel path is race-free and
/// produces the same bits as the serial one.
fn for_each_pair<F>(amps: &mut [Complex64], target: usize, f: F)
where
    F: Fn(usize, &mut Complex64, &mut Complex64) + Sync,
{
    let stride = 1usize << target;
    let block = 2 * stride;
    let body = |(chunk_index, chunk): (usize, &mut [Complex64])| {
        let base = chunk_index * block;
        let (lo, hi) = chunk.split_at_mut(stride);
        for j in 0..stride {
            f(base + j, &mut lo[j], &mut hi[j]);
        }
    };
    if amps.len() >= PARALLEL_THRESHOLD {
        amps.par_chunks_mut(block).enumerate().for_each(body);
    } else {
        amps.chunks_mut(block).enumerate().for_each(body);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(n: usize, index: usize) -> StateVector {
        let mut st = StateVector::new(n).unwrap();
        for k in 0..n {
            if (index >> k) & 1 == 1 {
                st.apply(&Gate::X { target: k }).unwrap();
            }
        }
        st
    }

    fn assert_is_basis(st: &StateVector, index: usize) {
        for (i, a) in st.amplitudes().iter().enumerate() {
            let expected = if i == index { 1.0 } else { 0.0 };
            assert!(
                (a.re - expected).abs() < 1e-12 && a.im == 0.0,
                "amplitude {i} = {a} (expected basis state {index})"
            );
        }
    }

    #[test]
    fn init_state_examples() {
        for n in 1..=3 {
            let st = StateVector::new(n).unwrap();
            assert_eq!(st.amplitudes().len(), 1 << n);
            assert_is_basis(&st, 0);
        }
        assert!(StateVector::new(0).is_err());
        assert!(StateVector::new(MAX_QUBITS + 1).is_err());
    }

    #[test]
    fn x_flips_zero_to_one() {
        let mut st = StateVector::new(1).unwrap();
        st.apply(&Gate::X { target: 0 }).unwrap();
        assert_is_basis(&st, 1);
    }

    #[test]
    fn twenty_four_qubit_registers_are_supported() {
        // Three 8-element registers is the largest fusion layout.
        let mut st = StateVector::new(24).unwrap();
        st.apply(&Gate::X { target: 23 }).unwrap();
        st.apply(&Gate::Cnot {
            control: 23,
            target: 0,
        })
        .unwrap();
        let marginal = st.marginal_probabilities(&[0, 23]).unwrap();
        assert_eq!(marginal, vec![0.0, 0.0, 0.0, 1.0]);
        assert!((st.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ry_rotates_zero() {
        let theta = 0.7;
        let mut st = StateVector::new(1).unwrap();
        st.apply(&Gate::Ry { target: 0, theta }).unwrap();
        assert!((st.amplitudes()[0].re - (theta / 2.0).cos()).abs() < 1e-15);
        assert!((st.amplitudes()[1].re - (theta / 2.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn cnot_truth_table() {
        // Control set: |control=1, target=0⟩ → both set.
        let mut st = basis(2, 0b01); // qubit 0 = control, set
        st.apply(&Gate::Cnot {
            control: 0,
            target: 1,
        })
        .unwrap();
        assert_is_basis(&st, 0b11);

        // Control clear: identity.
        let mut st = basis(2, 0b10);
        st.apply(&Gate::Cnot {
            control: 0,
            target: 1,
        })
        .unwrap();
        assert_is_basis(&st, 0b10);
    }

    #[test]
    fn toffoli_truth_table() {
        // Both controls set: target flips.
        let mut st = basis(3, 0b011);
        st.apply(&Gate::Toffoli {
            control_a: 0,
            control_b: 1,
            target: 2,
        })
        .unwrap();
        assert_is_basis(&st, 0b111);

        // A single control set: identity.
        let mut st = basis(3, 0b001);
        st.apply(&Gate::Toffoli {
            control_a: 0,
            control_b: 1,
            target: 2,
        })
        .unwrap();
        assert_is_basis(&st, 0b001);
    }

    #[test]
    fn cry_acts_only_when_control_is_set() {
        let theta = 1.1;
        let mut with_control = basis(2, 0b01);
        with_control
            .apply(&Gate::Cry {
                control: 0,
                target: 1,
                theta,
            })
            .unwrap();
        let mut reference = basis(2, 0b01);
        reference.apply(&Gate::Ry { target: 1, theta }).unwrap();
        assert_eq!(with_control.amplitudes(), reference.amplitudes());

        let mut without_control = StateVector::new(2).unwrap();
        without_control
            .apply(&Gate::Cry {
                control: 0,
                target: 1,
                theta,
            })
            .unwrap();
        assert_is_basis(&without_control, 0);
    }

    #[test]
    fn bell_state_marginal_is_uniform() {
        // (|00⟩ + |11⟩)/√2 via RY(π/2) + CNOT.
        let mut st = StateVector::new(2).unwrap();
        st.apply(&Gate::Ry {
            target: 0,
            theta: std::f64::consts::FRAC_PI_2,
        })
        .unwrap();
        st.apply(&Gate::Cnot {
            control: 0,
            target: 1,
        })
        .unwrap();
        let marginal = st.marginal_probabilities(&[0]).unwrap();
        assert!((marginal[0] - 0.5).abs() < 1e-12);
        assert!((marginal[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn basis_state_marginal_selects_bits() {
        let st = basis(3, 0b101);
        let marginal = st.marginal_probabilities(&[0, 2]).unwrap();
        assert_eq!(marginal, vec![0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn two_amplitude_marginal() {
        // √0.3|00⟩ + √0.7|10⟩, marginal on qubit 1 → (0.3, 0.7).
        let mut st = StateVector::new(2).unwrap();
        st.load(0, &[0.3f64.sqrt(), 0.0, 0.7f64.sqrt(), 0.0])
            .unwrap();
        let marginal = st.marginal_probabilities(&[1]).unwrap();
        assert!((marginal[0] - 0.3).abs() < 1e-12);
        assert!((marginal[1] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn load_requires_clean_register() {
        let mut st = StateVector::new(2).unwrap();
        st.apply(&Gate::X { target: 1 }).unwrap();
        let err = st.load(1, &[0.6, 0.8]).unwrap_err();
        assert!(matches!(err, SimError::LoadOnDirtyRegister { .. }));

        // Loading a disjoint clean register is fine.
        let mut st = StateVector::new(2).unwrap();
        st.apply(&Gate::X { target: 1 }).unwrap();
        st.load(0, &[0.6, 0.8]).unwrap();
        assert!((st.amplitudes()[0b10].re - 0.6).abs() < 1e-15);
        assert!((st.amplitudes()[0b11].re - 0.8).abs() < 1e-15);
    }

    #[test]
    fn load_rejects_bad_vectors() {
        let mut st = StateVector::new(2).unwrap();
        assert!(matches!(
            st.load(0, &[1.0, 0.0, 0.0]),
            Err(SimError::BadLoadLength { len: 3 })
        ));
        assert!(matches!(
            st.load(0, &[0.5, 0.5]),
            Err(SimError::UnnormalizedLoad { .. })
        ));
        assert!(matches!(
            st.load(1, &[0.0, 1.0, 0.0, 0.0]),
            Err(SimError::QubitOutOfRange { .. })
        ));
    }

    #[test]
    fn marginal_rejects_bad_qubit_lists() {
        let st = StateVector::new(2).unwrap();
        assert!(matches!(
            st.marginal_probabilities(&[2]),
            Err(SimError::QubitOutOfRange { .. })
        ));
        assert!(matches!(
            st.marginal_probabilities(&[0, 0]),
            Err(SimError::DuplicateQubit(0))
        ));
    }
}
