//! Magic-state compilation: trading `R(π/4)` gates for Clifford gadgets.
//!
//! Each `R(π/4)` on a qubit is replaced by a CNOT onto a fresh ancilla
//! prepared in `(|0⟩ + e^{iπ/4}|1⟩)/√2`; conditioned on the ancilla
//! measuring 0 the phase shift has been applied, and each gadget succeeds
//! with probability exactly 1/2.

use num_complex::Complex64;

use crate::circuit::{Circuit, Role};
use crate::error::{Error, Result};
use crate::gate::Gate;

/// `R(π/4)·H|0⟩ = (|0⟩ + e^{iπ/4}|1⟩)/√2`.
pub fn magic_state() -> [Complex64; 2] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [
        Complex64::new(r, 0.0),
        Complex64::from_polar(r, std::f64::consts::FRAC_PI_4),
    ]
}

/// A Clifford circuit plus the gadget ancillas whose all-zero outcome
/// conditions the intended computation.
#[derive(Clone, Debug)]
pub struct MagicCompiled {
    pub circuit: Circuit,
    /// Fresh ancillas, one per replaced gate, in gate order. They are also
    /// appended to the circuit's postselection list.
    pub gadget_qubits: Vec<usize>,
}

fn is_clifford(gate: &Gate) -> bool {
    match gate {
        Gate::H(_) | Gate::X(_) | Gate::CZ(..) | Gate::Cnot { .. } => true,
        Gate::R { phase, .. } => matches!(phase.sign_level(), Some((_, 0..=2))),
        Gate::CR { phase, .. } => matches!(phase.sign_level(), Some((_, 0..=1))),
        Gate::U { .. } => false,
    }
}

fn is_quarter_phase(gate: &Gate) -> bool {
    matches!(
        gate,
        Gate::R { phase, .. } if phase.sign_level() == Some((1, 3))
    )
}

/// Replaces every `R(π/4)` by a magic-state gadget. Any other non-Clifford
/// gate is rejected.
pub fn magic_compile(circuit: &Circuit) -> Result<MagicCompiled> {
    circuit.validate()?;
    let mut out = Circuit::new(circuit.n_qubits());
    for q in 0..circuit.n_qubits() {
        out.set_role(q, circuit.role(q).clone());
    }
    let mut gadget_qubits = Vec::new();
    for (index, gate) in circuit.gates().iter().enumerate() {
        if is_clifford(gate) {
            out.push(gate.clone());
        } else if is_quarter_phase(gate) {
            let q = gate.qubits()[0];
            let ancilla = out.grow(1)[0];
            out.set_role(ancilla, Role::Product(magic_state()));
            out.push(Gate::cnot(q, ancilla));
            gadget_qubits.push(ancilla);
        } else {
            return Err(Error::NonClifford {
                index,
                reason: format!("{gate:?} cannot be compiled; only R(π/4) is supported"),
            });
        }
    }
    out.set_outputs(circuit.outputs().to_vec());
    let mut postselect = circuit.postselect().to_vec();
    postselect.extend(gadget_qubits.iter().copied());
    out.set_postselect(postselect);
    Ok(MagicCompiled {
        circuit: out,
        gadget_qubits,
    })
}
