//! Seeded random-instance generators used by tests, benches and the demo.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::circuit::{Circuit, Role};
use crate::gate::Gate;

/// Uniformly random normalized one-qubit state (angles only; phases on the
/// Bloch sphere are all the expectation machinery cares about).
pub fn random_product_state(rng: &mut impl Rng) -> [Complex64; 2] {
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    [
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ]
}

fn random_clifford_gate(rng: &mut impl Rng, n: usize) -> Gate {
    let q = rng.gen_range(0..n);
    match rng.gen_range(0..7) {
        0 => Gate::h(q),
        1 => Gate::p(q),
        2 => Gate::r(q, -1, 2).expect("valid"),
        3 => Gate::z(q),
        4 => Gate::x(q),
        5 => {
            let mut r = rng.gen_range(0..n);
            while r == q {
                r = rng.gen_range(0..n);
            }
            Gate::cz(q, r)
        }
        _ => {
            let mut r = rng.gen_range(0..n);
            while r == q {
                r = rng.gen_range(0..n);
            }
            Gate::cnot(q, r)
        }
    }
}

/// A random Clifford circuit over `{H, P, P†, Z, X, CZ, CNOT}`.
pub fn random_clifford_circuit(rng: &mut impl Rng, n_qubits: usize, n_gates: usize) -> Circuit {
    let mut c = Circuit::new(n_qubits);
    for _ in 0..n_gates {
        c.push(random_clifford_gate(rng, n_qubits));
    }
    c
}

/// A random Clifford instance: mixed roles (inputs, |0⟩ ancillas, random
/// product ancillas including magic states), up to `max_outputs` output
/// qubits, plus matching random input bits.
pub fn random_clifford_instance(
    rng: &mut impl Rng,
    n_qubits: usize,
    n_gates: usize,
    max_outputs: usize,
) -> (Circuit, Vec<bool>) {
    let mut c = random_clifford_circuit(rng, n_qubits, n_gates);
    let mut input_bits = Vec::new();
    for q in 0..n_qubits {
        match rng.gen_range(0..5) {
            0 | 1 => input_bits.push(rng.gen()),
            2 => c.set_role(q, Role::Zero),
            3 => c.set_role(q, Role::Product(random_product_state(rng))),
            _ => c.set_role(q, Role::Product(crate::constructions::magic_state())),
        }
    }
    let l = rng.gen_range(1..=max_outputs.min(n_qubits));
    let mut qubits: Vec<usize> = (0..n_qubits).collect();
    qubits.shuffle(rng);
    c.set_outputs(qubits[..l].to_vec());
    (c, input_bits)
}

/// A random circuit over elementary/derived gates with phase levels up to
/// `max_level`.
pub fn random_elementary_circuit(
    rng: &mut impl Rng,
    n_qubits: usize,
    n_gates: usize,
    max_level: u32,
) -> Circuit {
    let mut c = Circuit::new(n_qubits);
    for _ in 0..n_gates {
        c.push(random_elementary_gate(rng, n_qubits, max_level));
    }
    c
}

fn random_elementary_gate(rng: &mut impl Rng, n: usize, max_level: u32) -> Gate {
    let q = rng.gen_range(0..n);
    let sign = if rng.gen() { 1 } else { -1 };
    let k = rng.gen_range(1..=max_level);
    match rng.gen_range(0..4) {
        0 => Gate::h(q),
        1 => Gate::r(q, sign, k).expect("valid"),
        2 => {
            if n < 2 {
                return Gate::h(q);
            }
            let mut r = rng.gen_range(0..n);
            while r == q {
                r = rng.gen_range(0..n);
            }
            Gate::cz(q, r)
        }
        _ => {
            if n < 2 {
                return Gate::r(q, sign, k).expect("valid");
            }
            let mut r = rng.gen_range(0..n);
            while r == q {
                r = rng.gen_range(0..n);
            }
            Gate::cnot(q, r)
        }
    }
}

/// A random small circuit on which depth-3 compression genuinely needs
/// three layers: four gates on up to three qubits, at least three of them
/// touching one designated wire. All qubits are declared outputs.
pub fn random_compressible_circuit(rng: &mut impl Rng) -> Circuit {
    let n = rng.gen_range(2..=3);
    let busy = rng.gen_range(0..n);
    let mut c = Circuit::new(n);
    let busy_slots: usize = 3;
    let total = 4;
    let mut slots: Vec<bool> = (0..total).map(|i| i < busy_slots).collect();
    slots.shuffle(rng);
    for on_busy in slots {
        let gate = if on_busy {
            match rng.gen_range(0..3) {
                0 => Gate::h(busy),
                1 => {
                    let sign = if rng.gen() { 1 } else { -1 };
                    Gate::r(busy, sign, rng.gen_range(1..=3)).expect("valid")
                }
                _ => {
                    let mut r = rng.gen_range(0..n);
                    while r == busy {
                        r = rng.gen_range(0..n);
                    }
                    if rng.gen() {
                        Gate::cz(busy, r)
                    } else {
                        Gate::cnot(busy, r)
                    }
                }
            }
        } else {
            random_elementary_gate(rng, n, 3)
        };
        c.push(gate);
    }
    c.set_outputs((0..n).collect());
    c
}

/// A random Z-diagonal circuit: phase shifts, controlled phases, CZ, and an
/// occasional explicit diagonal composite.
pub fn random_diagonal_circuit(
    rng: &mut impl Rng,
    n_qubits: usize,
    n_gates: usize,
    max_level: u32,
) -> Circuit {
    let mut c = Circuit::new(n_qubits);
    for _ in 0..n_gates {
        let q = rng.gen_range(0..n_qubits);
        let sign = if rng.gen() { 1 } else { -1 };
        let k = rng.gen_range(1..=max_level);
        match rng.gen_range(0..4) {
            0 => c.push(Gate::r(q, sign, k).expect("valid")),
            1 if n_qubits >= 2 => {
                let mut r = rng.gen_range(0..n_qubits);
                while r == q {
                    r = rng.gen_range(0..n_qubits);
                }
                c.push(Gate::cz(q, r));
            }
            2 if n_qubits >= 2 => {
                let mut r = rng.gen_range(0..n_qubits);
                while r == q {
                    r = rng.gen_range(0..n_qubits);
                }
                c.push(Gate::cr(q, r, sign, k).expect("valid"));
            }
            _ if n_qubits >= 2 => {
                let mut r = rng.gen_range(0..n_qubits);
                while r == q {
                    r = rng.gen_range(0..n_qubits);
                }
                let mut m = crate::linalg::eye(4);
                for d in 0..4 {
                    let s = if rng.gen() { 1 } else { -1 };
                    let level = rng.gen_range(0..=max_level);
                    m[(d, d)] = crate::phase::DyadicPhase::new(s, level)
                        .expect("valid")
                        .phase_factor();
                }
                c.push(Gate::composite(vec![q, r], m).expect("diagonal unitary"));
            }
            _ => c.push(Gate::r(q, sign, k).expect("valid")),
        }
    }
    c
}
