//! Property tests for the state-vector simulator: unitarity, norm
//! preservation, involutions, rotation composition, and bitwise determinism
//! under data parallelism.

use belieffuse::qsim::{Gate, StateVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense matrix of a gate on an n-qubit register, built by applying it to
/// every computational basis state. Column j is U|j⟩.
fn dense_matrix(gate: &Gate, n: usize) -> Vec<Vec<Complex64>> {
    let dim = 1usize << n;
    let mut columns = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut state = StateVector::new(n).unwrap();
        for k in 0..n {
            if (j >> k) & 1 == 1 {
                state.apply(&Gate::X { target: k }).unwrap();
            }
        }
        state.apply(gate).unwrap();
        columns.push(state.amplitudes().to_vec());
    }
    columns
}

fn assert_unitary(gate: &Gate, n: usize) {
    let u = dense_matrix(gate, n);
    let dim = u.len();
    for i in 0..dim {
        for j in 0..dim {
            // (U†U)[i][j] = Σ_k conj(U[k][i])·U[k][j], with column-major u.
            let entry: Complex64 = u[i].iter().zip(&u[j]).map(|(a, b)| a.conj() * b).sum();
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!(
                (entry - expected).norm() <= 1e-12,
                "{gate:?}: U†U[{i}][{j}] = {entry}"
            );
        }
    }
}

fn random_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let mut state = StateVector::new(n).unwrap();
    for _ in 0..3 * n {
        state.apply(&random_gate(n, rng)).unwrap();
    }
    state
}

fn random_gate(n: usize, rng: &mut ChaCha8Rng) -> Gate {
    let theta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    // A gate kind only makes sense when the register has enough qubits.
    let max_kind = match n {
        1 => 2,
        2 => 4,
        _ => 5,
    };
    let kind = rng.random_range(0..max_kind);
    let mut pick = |exclude: &[usize]| loop {
        let q = rng.random_range(0..n);
        if !exclude.contains(&q) {
            return q;
        }
    };
    match kind {
        0 => Gate::X { target: pick(&[]) },
        1 => Gate::Ry {
            target: pick(&[]),
            theta,
        },
        2 => {
            let control = pick(&[]);
            Gate::Cnot {
                control,
                target: pick(&[control]),
            }
        }
        3 => {
            let control = pick(&[]);
            Gate::Cry {
                control,
                target: pick(&[control]),
                theta,
            }
        }
        _ => {
            let control_a = pick(&[]);
            let control_b = pick(&[control_a]);
            Gate::Toffoli {
                control_a,
                control_b,
                target: pick(&[control_a, control_b]),
            }
        }
    }
}

#[test]
fn all_five_gates_are_unitary() {
    assert_unitary(&Gate::X { target: 0 }, 1);
    for theta in [0.0, 0.37, 1.9, -2.4, std::f64::consts::PI] {
        assert_unitary(&Gate::Ry { target: 0, theta }, 1);
        assert_unitary(
            &Gate::Cry {
                control: 1,
                target: 0,
                theta,
            },
            2,
        );
    }
    assert_unitary(
        &Gate::Cnot {
            control: 0,
            target: 1,
        },
        2,
    );
    assert_unitary(
        &Gate::Toffoli {
            control_a: 0,
            control_b: 2,
            target: 1,
        },
        3,
    );
}

#[test]
fn random_100_gate_circuits_preserve_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2usize, 5, 10] {
        for _ in 0..5 {
            let mut state = StateVector::new(n).unwrap();
            for _ in 0..100 {
                state.apply(&random_gate(n, &mut rng)).unwrap();
            }
            assert!((state.norm_sqr() - 1.0).abs() <= 1e-9);
        }
    }
}

#[test]
fn self_inverse_gates_are_involutions_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let n = 4;
    let gates = [
        Gate::X { target: 2 },
        Gate::Cnot {
            control: 1,
            target: 3,
        },
        Gate::Toffoli {
            control_a: 0,
            control_b: 2,
            target: 1,
        },
    ];
    for gate in &gates {
        let original = random_state(n, &mut rng);
        let mut twice = original.clone();
        twice.apply(gate).unwrap();
        twice.apply(gate).unwrap();
        for (a, b) in original.amplitudes().iter().zip(twice.amplitudes()) {
            assert!((a - b).norm() <= 1e-12, "{gate:?} is not an involution");
        }
    }
}

#[test]
fn ry_angles_compose_additively() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let alpha = rng.random_range(-3.0..3.0);
        let beta = rng.random_range(-3.0..3.0);
        let mut split = random_state(3, &mut rng);
        let mut joint = split.clone();
        split
            .apply(&Gate::Ry {
                target: 1,
                theta: alpha,
            })
            .unwrap();
        split
            .apply(&Gate::Ry {
                target: 1,
                theta: beta,
            })
            .unwrap();
        joint
            .apply(&Gate::Ry {
                target: 1,
                theta: alpha + beta,
            })
            .unwrap();
        for (a, b) in split.amplitudes().iter().zip(joint.amplitudes()) {
            assert!((a - b).norm() <= 1e-12);
        }
    }
}

#[test]
fn marginals_are_bitwise_identical_across_thread_counts() {
    // 17 qubits crosses the internal parallelism threshold, so the kernels
    // really fan out; the marginal must not depend on the pool size.
    let n = 17;
    let build = || {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut state = StateVector::new(n).unwrap();
        for _ in 0..60 {
            state.apply(&random_gate(n, &mut rng)).unwrap();
        }
        state.marginal_probabilities(&[0, 5, 11, 16]).unwrap()
    };
    let mut results = Vec::new();
    for threads in [1usize, 2, 8] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        results.push(pool.install(build));
    }
    assert_eq!(results[0], results[1]);
    assert_eq!(results[0], results[2]);
}
