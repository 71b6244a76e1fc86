//! Depth-3 compression by gate teleportation.
//!
//! Every wire segment between two consecutive gates on the same qubit is
//! rerouted through a teleportation: the first halves of all teleportations
//! form layer one, the original gates (rewired onto their segments) form
//! layer two, and the second halves form layer three. Conditioned on every
//! teleportation qubit measuring 0, the output distribution of the original
//! circuit is reproduced on the final segments. Segments with no gate on
//! either side are left alone, so wires that feed straight into a
//! measurement are not teleported.

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::Gate;

use super::teleport::{first_half_matrix, second_half_matrix};

/// Result of a compression pass.
#[derive(Clone, Debug)]
pub struct CompressedCircuit {
    /// The three-layer circuit. Its postselection list holds the original
    /// circuit's postselection qubits (relocated) followed by
    /// `teleport_qubits`.
    pub circuit: Circuit,
    /// Measured teleportation qubits, two per teleportation in creation
    /// order; all must read 0 for the compression to be faithful. The
    /// success probability is exactly `2^-b` for `b` qubits listed here.
    pub teleport_qubits: Vec<usize>,
    /// `origin_map[q]` is the wire that carries original qubit `q` at the
    /// end of the compressed circuit.
    pub origin_map: Vec<usize>,
}

/// Compresses a circuit of one- and two-qubit elementary/derived gates to
/// depth 3 (when some wire carries at least three gates; fewer gates per
/// wire need fewer layers).
pub fn compress_depth3(circuit: &Circuit) -> Result<CompressedCircuit> {
    circuit.validate()?;
    for (i, gate) in circuit.gates().iter().enumerate() {
        if matches!(gate, Gate::U { .. }) {
            return Err(Error::InvalidCircuit(format!(
                "gate {i}: compression expects elementary or derived gates, not composites"
            )));
        }
    }
    let n0 = circuit.n_qubits();
    let mut out = Circuit::new(n0);
    for q in 0..n0 {
        out.set_role(q, circuit.role(q).clone());
    }

    let mut current: Vec<usize> = (0..n0).collect();
    let mut busy = vec![false; n0];
    let mut first_halves = Vec::new();
    let mut rewired = Vec::new();
    let mut second_halves = Vec::new();
    let mut teleport_qubits = Vec::new();

    for gate in circuit.gates() {
        for q in gate.qubits() {
            if busy[q] {
                let fresh = out.grow(2);
                let (a1, a2) = (fresh[0], fresh[1]);
                first_halves.push(
                    Gate::composite(vec![a1, a2], first_half_matrix())
                        .expect("teleport half is unitary"),
                );
                second_halves.push(
                    Gate::composite(vec![current[q], a1], second_half_matrix())
                        .expect("teleport half is unitary"),
                );
                teleport_qubits.push(current[q]);
                teleport_qubits.push(a1);
                current[q] = a2;
                busy[q] = false;
            }
        }
        rewired.push(gate.remap(|q| current[q]));
        for q in gate.qubits() {
            busy[q] = true;
        }
    }

    out.extend(first_halves);
    out.extend(rewired);
    out.extend(second_halves);
    out.set_outputs(circuit.outputs().iter().map(|&q| current[q]).collect());
    let mut postselect: Vec<usize> = circuit.postselect().iter().map(|&q| current[q]).collect();
    postselect.extend(teleport_qubits.iter().copied());
    out.set_postselect(postselect);
    Ok(CompressedCircuit {
        circuit: out,
        teleport_qubits,
        origin_map: current,
    })
}

/// A compressed circuit rearranged for output folding: outputs become the
/// postselection qubits followed by the original outputs, so the last
/// output is the carried data qubit.
pub fn with_output_bookkeeping(compressed: &CompressedCircuit) -> Circuit {
    let mut c = compressed.circuit.clone();
    let mut outputs = c.postselect().to_vec();
    outputs.extend(compressed.circuit.outputs().iter().copied());
    c.set_outputs(outputs);
    c
}

/// A small two-qubit circuit with one output qubit (0) and one
/// postselection qubit (1). Three of its wire segments sit between
/// consecutive gates, so compression spends three teleportations: six
/// teleportation qubits plus the original postselection qubit.
pub fn demo_circuit() -> Circuit {
    let mut c = Circuit::new(2);
    c.push(Gate::h(0));
    c.push(Gate::cz(0, 1));
    c.push(Gate::r(1, 1, 2).expect("level 2 valid"));
    c.push(Gate::h(0));
    c.set_outputs(vec![0]);
    c.set_postselect(vec![1]);
    c
}
