//! OR reduction: maps `b` input bits onto `m = ⌈log₂(b+1)⌉` output qubits
//! that are all zero exactly when every input bit is zero.
//!
//! The plain variant sandwiches a block of controlled phase shifts between
//! Hadamard layers on the ancillas: input `j` controls an `R(2π/2^k)` on
//! ancilla `k`, so after the final Hadamards, ancilla `k` returns to |0⟩
//! only if the Hamming weight of the input is divisible by `2^k`. The
//! commuting variant absorbs the Hadamards into each controlled phase
//! shift, giving pairwise commuting two-qubit gates with the same overall
//! unitary.

use crate::circuit::{Circuit, Role};
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::linalg::{eye, kron};
use crate::phase::DyadicPhase;

/// `⌈log₂ x⌉` for `x ≥ 1`.
pub(crate) fn ceil_log2(x: usize) -> usize {
    assert!(x >= 1);
    (usize::BITS - (x - 1).leading_zeros()) as usize
}

/// Output-qubit count of the reduction: `m = ⌈log₂(b+1)⌉`.
pub fn or_output_count(b: usize) -> usize {
    ceil_log2(b + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrVariant {
    Plain,
    Commuting,
}

/// The controlled-phase block shared by both variants: every control qubit
/// drives `R(2π/2^k)` on target `k` (targets indexed from 1), emitted
/// control-major then level-major.
pub(crate) fn plain_or_gates(controls: &[usize], targets: &[usize]) -> Vec<Gate> {
    let mut gates = Vec::with_capacity(controls.len() * targets.len());
    for &c in controls {
        for (k, &t) in targets.iter().enumerate() {
            let phase = DyadicPhase::new(1, (k + 1) as u32).expect("small level");
            gates.push(Gate::CR {
                control: c,
                target: t,
                phase,
            });
        }
    }
    gates
}

/// The same block with each controlled phase shift conjugated by Hadamards
/// on its target, packaged as one two-qubit composite per gate.
pub(crate) fn commuting_or_gates(controls: &[usize], targets: &[usize]) -> Vec<Gate> {
    let h = Gate::h(0).unitary();
    let h_on_target = kron(&eye(2), &h);
    let mut gates = Vec::with_capacity(controls.len() * targets.len());
    for &c in controls {
        for (k, &t) in targets.iter().enumerate() {
            let phase = DyadicPhase::new(1, (k + 1) as u32).expect("small level");
            let cr = Gate::CR {
                control: 0,
                target: 1,
                phase,
            }
            .unitary();
            let matrix = h_on_target.dot(&cr).dot(&h_on_target);
            gates.push(Gate::composite(vec![c, t], matrix).expect("unitary by construction"));
        }
    }
    gates
}

/// The OR reduction circuit on `b` input qubits, ancillas as outputs.
pub fn or_reduction(b: usize, variant: OrVariant) -> Circuit {
    assert!(b >= 1);
    let m = or_output_count(b);
    let mut c = Circuit::new(b + m);
    let controls: Vec<usize> = (0..b).collect();
    let targets: Vec<usize> = (b..b + m).collect();
    for &t in &targets {
        c.set_role(t, Role::Zero);
    }
    match variant {
        OrVariant::Plain => {
            for &t in &targets {
                c.push(Gate::h(t));
            }
            c.extend(plain_or_gates(&controls, &targets));
            for &t in &targets {
                c.push(Gate::h(t));
            }
        }
        OrVariant::Commuting => {
            c.extend(commuting_or_gates(&controls, &targets));
        }
    }
    c.set_outputs(targets);
    c
}

/// The middle part of the plain reduction as a standalone circuit:
/// controls `0..b`, targets `b..b+m`, controlled phase shifts only.
pub fn or_middle(b: usize) -> Circuit {
    let m = or_output_count(b);
    let mut c = Circuit::new(b + m);
    let controls: Vec<usize> = (0..b).collect();
    let targets: Vec<usize> = (b..b + m).collect();
    for &t in &targets {
        c.set_role(t, Role::Zero);
    }
    c.extend(plain_or_gates(&controls, &targets));
    c
}

/// A fan-out: `targets` CNOTs sharing qubit 0 as control.
pub fn fanout(targets: usize) -> Circuit {
    let mut c = Circuit::new(1 + targets);
    for t in 1..=targets {
        c.set_role(t, Role::Zero);
        c.push(Gate::cnot(0, t));
    }
    c
}

/// Appends CNOTs copying `control` onto each target, which must be |0⟩
/// ancillas of `circuit`.
pub fn fanout_into(circuit: &mut Circuit, control: usize, targets: &[usize]) -> Result<()> {
    for &t in targets {
        if t >= circuit.n_qubits() || !matches!(circuit.role(t), Role::Zero) {
            return Err(Error::InvalidCircuit(format!(
                "fan-out target {t} is not a |0⟩ ancilla"
            )));
        }
        circuit.push(Gate::cnot(control, t));
    }
    Ok(())
}

/// Rewrites a circuit of controlled phase shifts so that they all land in a
/// single layer: every qubit carrying `d ≥ 2` gates is fanned out through a
/// doubling tree of CNOTs onto fresh |0⟩ copies, each gate acts on its own
/// copy pair, and the trees are undone in reverse. All trees share the same
/// depth, so in the greedy layering the phase gates occupy exactly one
/// layer; since the gates are diagonal, copies accumulate the same phases
/// as the original wires and the ancillas return to |0⟩.
pub fn decompose_fanout_or(middle: &Circuit) -> Result<Circuit> {
    let n = middle.n_qubits();
    let mut degree = vec![0usize; n];
    for (index, gate) in middle.gates().iter().enumerate() {
        match gate {
            Gate::CR { .. } | Gate::CZ(..) => {}
            _ => return Err(Error::NonDiagonal { index }),
        }
        for q in gate.qubits() {
            degree[q] += 1;
        }
    }
    let depth = degree
        .iter()
        .filter(|&&d| d >= 2)
        .map(|&d| ceil_log2(d))
        .max()
        .unwrap_or(0);

    let mut out = middle.clone();
    let mut endpoints: Vec<Vec<usize>> = (0..n).map(|q| vec![q]).collect();
    let mut tree_layers: Vec<Vec<Gate>> = vec![Vec::new(); depth];
    for q in 0..n {
        if degree[q] < 2 {
            continue;
        }
        for layer in tree_layers.iter_mut().take(depth) {
            let existing = endpoints[q].clone();
            for w in existing {
                let fresh = out.grow(1)[0];
                layer.push(Gate::cnot(w, fresh));
                endpoints[q].push(fresh);
            }
        }
    }

    let mut used = vec![0usize; n];
    let mut phase_layer = Vec::with_capacity(middle.gates().len());
    for gate in middle.gates() {
        let qs = gate.qubits();
        let (a, b) = (qs[0], qs[1]);
        let (ea, eb) = (endpoints[a][used[a]], endpoints[b][used[b]]);
        used[a] += 1;
        used[b] += 1;
        phase_layer.push(gate.remap(|q| if q == a { ea } else { eb }));
    }

    let fanout_gates: Vec<Gate> = tree_layers.into_iter().flatten().collect();
    let mut gates = fanout_gates.clone();
    gates.extend(phase_layer);
    gates.extend(fanout_gates.into_iter().rev());
    let mut result = Circuit::new(out.n_qubits());
    for q in 0..out.n_qubits() {
        result.set_role(q, out.role(q).clone());
    }
    result.set_outputs(middle.outputs().to_vec());
    result.set_postselect(middle.postselect().to_vec());
    result.extend(gates);
    Ok(result)
}

/// The plain OR reduction with its middle part in fan-out form.
pub fn or_reduction_fanout(b: usize) -> Result<Circuit> {
    let m = or_output_count(b);
    let decomposed = decompose_fanout_or(&or_middle(b))?;
    let mut c = Circuit::new(decomposed.n_qubits());
    for q in 0..decomposed.n_qubits() {
        c.set_role(q, decomposed.role(q).clone());
    }
    let targets: Vec<usize> = (b..b + m).collect();
    for &t in &targets {
        c.push(Gate::h(t));
    }
    c.extend(decomposed.gates().iter().cloned());
    for &t in &targets {
        c.push(Gate::h(t));
    }
    c.set_outputs(targets);
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits;
    use crate::statevector;

    #[test]
    fn shape_for_b3() {
        let c = or_reduction(3, OrVariant::Plain);
        assert_eq!(or_output_count(3), 2);
        assert_eq!(c.n_qubits(), 5);
        let crs = c
            .gates()
            .iter()
            .filter(|g| matches!(g, Gate::CR { .. }))
            .count();
        assert_eq!(crs, 6);
        let commuting = or_reduction(3, OrVariant::Commuting);
        assert_eq!(commuting.gates().len(), 6);
        assert!(commuting
            .gates()
            .iter()
            .all(|g| g.arity() == 2 && matches!(g, Gate::U { .. })));
    }

    #[test]
    fn all_zero_input_gives_all_zero_output() {
        for variant in [OrVariant::Plain, OrVariant::Commuting] {
            let c = or_reduction(3, variant);
            let d =
                statevector::output_distribution(&c, &[false, false, false], c.outputs()).unwrap();
            assert!((d.prob(0) - 1.0).abs() <= 1e-9, "{variant:?}");
        }
    }

    #[test]
    fn any_one_bit_kills_the_zero_outcome() {
        for variant in [OrVariant::Plain, OrVariant::Commuting] {
            for b in 1..=6usize {
                let c = or_reduction(b, variant);
                for x in 1..(1usize << b) {
                    let input = bits::bits_of(x, b);
                    let d = statevector::output_distribution(&c, &input, c.outputs()).unwrap();
                    assert!(
                        d.prob(0).abs() <= 1e-9,
                        "{variant:?} b={b} x={}",
                        bits::format_bits(&input)
                    );
                }
            }
        }
    }

    #[test]
    fn variants_have_equal_unitaries() {
        for b in 1..=4usize {
            let plain = statevector::full_unitary(&or_reduction(b, OrVariant::Plain)).unwrap();
            let commuting =
                statevector::full_unitary(&or_reduction(b, OrVariant::Commuting)).unwrap();
            assert!(
                crate::linalg::max_abs_diff(&plain, &commuting) <= 1e-9,
                "b = {b}"
            );
        }
    }

    #[test]
    fn fanout_is_plain_cnots() {
        let c = fanout(3);
        assert_eq!(c.gates().len(), 3);
        assert!(c
            .gates()
            .iter()
            .all(|g| matches!(g, Gate::Cnot { control: 0, .. })));
    }

    #[test]
    fn fanout_into_rejects_non_zero_targets() {
        let mut c = Circuit::new(3);
        assert!(fanout_into(&mut c, 0, &[1]).is_err());
        c.set_role(1, Role::Zero);
        assert!(fanout_into(&mut c, 0, &[1]).is_ok());
    }

    #[test]
    fn decomposed_middle_restores_original_action() {
        // On every basis state of the original qubits, the decomposed
        // middle acts like the original and parks the ancillas back at |0⟩.
        let b = 2;
        let middle = or_middle(b);
        let decomposed = decompose_fanout_or(&middle).unwrap();
        let n0 = middle.n_qubits();
        let n1 = decomposed.n_qubits();
        assert!(n1 > n0);
        for idx in 0..(1usize << n0) {
            let mut small = statevector::StateVector::basis(n0, idx);
            small.apply_circuit(&middle).unwrap();
            let mut big = statevector::StateVector::basis(n1, idx << (n1 - n0));
            big.apply_circuit(&decomposed).unwrap();
            for (i, &amp) in big.amplitudes().iter().enumerate() {
                let (orig, anc) = (i >> (n1 - n0), i & ((1 << (n1 - n0)) - 1));
                let want = if anc == 0 {
                    small.amplitudes()[orig]
                } else {
                    num_complex::Complex64::new(0.0, 0.0)
                };
                assert!((amp - want).norm() <= 1e-9, "idx {idx} entry {i}");
            }
        }
    }

    #[test]
    fn phase_gates_occupy_one_layer() {
        let decomposed = decompose_fanout_or(&or_middle(3)).unwrap();
        let layers = decomposed.layers();
        let mut phase_layers = std::collections::HashSet::new();
        for (li, layer) in layers.layers.iter().enumerate() {
            for &gi in layer {
                if matches!(decomposed.gates()[gi], Gate::CR { .. } | Gate::CZ(..)) {
                    phase_layers.insert(li);
                }
            }
        }
        assert_eq!(phase_layers.len(), 1);
    }
}
