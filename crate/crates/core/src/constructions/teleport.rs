//! One-qubit teleportation over the elementary gate set.
//!
//! The gadget is a two-step chain teleport written with `H` and `ΛZ` only:
//! prepare the two ancillas with Hadamards and couple them with `ΛZ` (the
//! first half), then couple the input with `ΛZ` and rotate the two measured
//! wires with Hadamards (the second half). Conditioned on both measured
//! qubits reading 0, the third qubit carries the input state; each of the
//! four outcomes occurs with probability 1/4 regardless of the input.
//!
//! Keeping the halves in this `ΛZ` form matters downstream: conjugating a
//! two-qubit gate through a compressed circuit stays on at most five qubits
//! precisely because the diagonal `ΛZ` couplings commute away, which the
//! CNOT-shaped teleport does not guarantee.

use crate::circuit::{Circuit, Role};
use crate::gate::Gate;
use crate::linalg::{kron, CMat};

/// The 3-qubit teleportation fragment. Qubit 0 is the input, qubits 1 and 2
/// are |0⟩ ancillas; qubit 2 carries the output, qubits 0 and 1 are the
/// postselected measurement qubits.
pub fn teleport_gadget() -> Circuit {
    let mut c = Circuit::new(3);
    c.set_role(1, Role::Zero);
    c.set_role(2, Role::Zero);
    // First half: graph-state pair on the ancillas.
    c.push(Gate::h(1));
    c.push(Gate::h(2));
    c.push(Gate::cz(1, 2));
    // Second half: couple the input and rotate the measured wires.
    c.push(Gate::cz(0, 1));
    c.push(Gate::h(0));
    c.push(Gate::h(1));
    c.set_outputs(vec![2]);
    c.set_postselect(vec![0, 1]);
    c
}

/// First half as one two-qubit unit on (a1, a2): Hadamards on both, then ΛZ.
pub(crate) fn first_half_matrix() -> CMat {
    let h = Gate::h(0).unitary();
    Gate::cz(0, 1).unitary().dot(&kron(&h, &h))
}

/// Second half as one two-qubit unit on (wire, a1): ΛZ, then Hadamards on
/// both.
pub(crate) fn second_half_matrix() -> CMat {
    let h = Gate::h(0).unitary();
    kron(&h, &h).dot(&Gate::cz(0, 1).unitary())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevector;
    use num_complex::Complex64;

    fn plus_state() -> [Complex64; 2] {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        [Complex64::new(r, 0.0), Complex64::new(r, 0.0)]
    }

    #[test]
    fn zero_input_teleports_exactly() {
        let c = teleport_gadget();
        let cond =
            statevector::conditional_distribution(&c, &[false], &[0, 1], &[false, false], &[2])
                .unwrap();
        assert!((cond.distribution.prob(0) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn plus_input_stays_balanced() {
        let mut c = teleport_gadget();
        c.set_role(0, Role::Product(plus_state()));
        let cond =
            statevector::conditional_distribution(&c, &[], &[0, 1], &[false, false], &[2]).unwrap();
        assert!((cond.distribution.prob(0) - 0.5).abs() <= 1e-9);
        assert!((cond.distribution.prob(1) - 0.5).abs() <= 1e-9);
    }

    #[test]
    fn conditioned_state_equals_the_input_state() {
        // Check the full conditioned state (not just probabilities) on a
        // state with a nontrivial phase.
        let mut c = teleport_gadget();
        let input = [Complex64::new(0.6, 0.0), Complex64::from_polar(0.8, 1.234)];
        c.set_role(0, Role::Product(input));
        let state = statevector::run(&c, &[]).unwrap();
        let (prob, out) =
            statevector::extract_conditioned(&state, &[0, 1], &[false, false]).unwrap();
        assert!((prob - 0.25).abs() <= 1e-12);
        let overlap = out.amplitudes()[0].conj() * input[0] + out.amplitudes()[1].conj() * input[1];
        assert!((overlap.norm() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn success_probability_is_quarter_for_any_input() {
        for bit in [false, true] {
            let c = teleport_gadget();
            let cond =
                statevector::conditional_distribution(&c, &[bit], &[0, 1], &[false, false], &[2])
                    .unwrap();
            assert!((cond.probability - 0.25).abs() <= 1e-12);
        }
        let mut c = teleport_gadget();
        c.set_role(0, Role::Product(plus_state()));
        let cond =
            statevector::conditional_distribution(&c, &[], &[0, 1], &[false, false], &[2]).unwrap();
        assert!((cond.probability - 0.25).abs() <= 1e-12);
    }

    #[test]
    fn half_matrices_match_the_gadget_gates() {
        let mut first = Circuit::new(2);
        first.push(Gate::h(0));
        first.push(Gate::h(1));
        first.push(Gate::cz(0, 1));
        let direct = statevector::full_unitary(&first).unwrap();
        assert!(crate::linalg::max_abs_diff(&direct, &first_half_matrix()) <= 1e-12);

        let mut second = Circuit::new(2);
        second.push(Gate::cz(0, 1));
        second.push(Gate::h(0));
        second.push(Gate::h(1));
        let direct = statevector::full_unitary(&second).unwrap();
        assert!(crate::linalg::max_abs_diff(&direct, &second_half_matrix()) <= 1e-12);
    }
}
