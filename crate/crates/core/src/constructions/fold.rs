//! Output folding: reduce a circuit with `b+2` outputs (`b+1` postselection
//! qubits plus one data qubit) to `m+1 = ⌈log₂(b+2)⌉+1` outputs, and
//! conjugate the folding layer through the circuit to obtain an equivalent
//! commuting circuit of small composites.

use crate::analysis;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::{Gate, COMPOSITE_ARITY_CAP};
use crate::linalg::CMat;
use crate::statevector::StateVector;

use super::or_reduction::{
    ceil_log2, commuting_or_gates, decompose_fanout_or, or_middle, plain_or_gates,
};

/// Validated output bookkeeping of the folded circuit's input.
struct Bookkeeping {
    /// The `b+1` postselection qubits (the first outputs).
    post: Vec<usize>,
    /// The data output qubit (the last output).
    q_out: usize,
}

fn bookkeeping(a: &Circuit) -> Result<Bookkeeping> {
    let outs = a.outputs();
    if outs.len() < 2 {
        return Err(Error::InvalidCircuit(
            "output folding needs at least two outputs (postselection qubits then the data qubit)"
                .into(),
        ));
    }
    let post = outs[..outs.len() - 1].to_vec();
    if a.postselect() != post.as_slice() {
        return Err(Error::InvalidCircuit(
            "the leading outputs must be the circuit's postselection qubits, in order".into(),
        ));
    }
    Ok(Bookkeeping {
        post,
        q_out: *outs.last().unwrap(),
    })
}

/// Register extension shared by the folded circuits: one CNOT ancilla and
/// `m` OR-reduction ancillas.
struct Extension {
    circuit: Circuit,
    cnot_ancilla: usize,
    or_ancillas: Vec<usize>,
}

fn extend_register(a: &Circuit, book: &Bookkeeping) -> Extension {
    let m = ceil_log2(book.post.len() + 1);
    let mut circuit = a.clone();
    circuit.set_postselect(Vec::new());
    let cnot_ancilla = circuit.grow(1)[0];
    let or_ancillas = circuit.grow(m);
    let mut outputs = or_ancillas.clone();
    outputs.push(cnot_ancilla);
    circuit.set_outputs(outputs);
    Extension {
        circuit,
        cnot_ancilla,
        or_ancillas,
    }
}

/// The gates folded onto the extended register: a CNOT copying the data
/// qubit, then the commuting OR reduction over the postselection qubits.
/// All of them are pairwise commuting two-qubit gates.
pub fn middle_gates(a: &Circuit) -> Result<Vec<Gate>> {
    let book = bookkeeping(a)?;
    let ext = extend_register(a, &book);
    let mut gates = vec![Gate::cnot(book.q_out, ext.cnot_ancilla)];
    gates.extend(commuting_or_gates(&book.post, &ext.or_ancillas));
    Ok(gates)
}

/// Folds the outputs of `a`: run `a`, copy the data qubit onto a fresh
/// ancilla, OR-reduce the postselection qubits onto `m` fresh ancillas
/// (commuting variant), then undo `a`. The `m+1` fresh ancillas are the
/// outputs; measuring them `0^m·v` has exactly the probability that `a`
/// measures `0^{b+1}·v` on its own outputs. The trailing inverse does not
/// change the output distribution but makes the conjugated form below
/// well-defined.
pub fn en(a: &Circuit) -> Result<Circuit> {
    let book = bookkeeping(a)?;
    let mut ext = extend_register(a, &book);
    ext.circuit.push(Gate::cnot(book.q_out, ext.cnot_ancilla));
    ext.circuit
        .extend(commuting_or_gates(&book.post, &ext.or_ancillas));
    ext.circuit.extend(a.inverse().gates().iter().cloned());
    Ok(ext.circuit)
}

/// The Clifford-friendly variant: the plain OR reduction (Hadamard layers
/// around controlled phase shifts) and no trailing inverse.
pub fn en_prime(a: &Circuit) -> Result<Circuit> {
    let book = bookkeeping(a)?;
    let mut ext = extend_register(a, &book);
    ext.circuit.push(Gate::cnot(book.q_out, ext.cnot_ancilla));
    for &t in &ext.or_ancillas {
        ext.circuit.push(Gate::h(t));
    }
    ext.circuit
        .extend(plain_or_gates(&book.post, &ext.or_ancillas));
    for &t in &ext.or_ancillas {
        ext.circuit.push(Gate::h(t));
    }
    Ok(ext.circuit)
}

/// Like [`en_prime`] but with the controlled-phase block in fan-out form,
/// so every non-Clifford gate sits in one depth-1 layer of the block.
pub fn en_prime_fanout(a: &Circuit) -> Result<Circuit> {
    let book = bookkeeping(a)?;
    let mut ext = extend_register(a, &book);
    ext.circuit.push(Gate::cnot(book.q_out, ext.cnot_ancilla));
    for &t in &ext.or_ancillas {
        ext.circuit.push(Gate::h(t));
    }
    let b_plus_1 = book.post.len();
    let middle = or_middle(b_plus_1);
    let decomposed = decompose_fanout_or(&middle)?;
    let fresh = decomposed.n_qubits() - middle.n_qubits();
    let fresh_ids = ext.circuit.grow(fresh);
    let mut map: Vec<usize> = book.post.clone();
    map.extend(ext.or_ancillas.iter().copied());
    map.extend(fresh_ids);
    let embedded = decomposed.embed(&map, ext.circuit.n_qubits())?;
    ext.circuit.extend(embedded.gates().iter().cloned());
    for &t in &ext.or_ancillas {
        ext.circuit.push(Gate::h(t));
    }
    Ok(ext.circuit)
}

/// Conjugates each two-qubit gate of `middle` through `a`, returning one
/// composite per gate on its minimal support. The gates of `a` outside a
/// gate's backward light cone cancel between `a†` and `a`, so the
/// conjugate is evolved on the light-cone register only and then
/// restricted numerically.
pub fn conjugate_commuting(a: &Circuit, middle: &[Gate], n_total: usize) -> Result<Vec<Gate>> {
    let mut out = Vec::with_capacity(middle.len());
    for (mi, g) in middle.iter().enumerate() {
        let mut cone: Vec<usize> = g.qubits();
        cone.sort_unstable();
        let mut involved = Vec::new();
        for (ai, h) in a.gates().iter().enumerate().rev() {
            let hq = h.qubits();
            if hq.iter().any(|q| cone.binary_search(q).is_ok()) {
                involved.push(ai);
                for q in hq {
                    if let Err(pos) = cone.binary_search(&q) {
                        cone.insert(pos, q);
                    }
                }
            }
        }
        if cone.len() > COMPOSITE_ARITY_CAP {
            return Err(Error::InvalidCircuit(format!(
                "conjugate of middle gate {mi} spans {} qubits, over the composite cap {COMPOSITE_ARITY_CAP}",
                cone.len()
            )));
        }
        involved.reverse();
        let matrix = conjugate_on_register(a, &involved, g, &cone)?;
        let sup = analysis::support(&matrix, &cone, 1e-9)?;
        if sup.qubits.is_empty() {
            return Err(Error::Contract(format!(
                "conjugate of middle gate {mi} acts on no qubit"
            )));
        }
        out.push(Gate::composite(sup.qubits, sup.matrix)?);
    }
    if out.iter().any(|g| g.qubits().iter().any(|&q| q >= n_total)) {
        return Err(Error::InvalidCircuit(
            "conjugated gates exceed the register".into(),
        ));
    }
    Ok(out)
}

/// Evolves basis columns of the light-cone register through the involved
/// part of `a`, the middle gate, and the involved part of `a†`.
fn conjugate_on_register(
    a: &Circuit,
    involved: &[usize],
    g: &Gate,
    register: &[usize],
) -> Result<CMat> {
    let k = register.len();
    let local = |q: usize| register.binary_search(&q).expect("qubit in cone");
    let forward: Vec<Gate> = involved
        .iter()
        .map(|&i| a.gates()[i].remap(local))
        .collect();
    let g_local = g.remap(local);
    let dim = 1usize << k;
    let mut out = CMat::zeros((dim, dim));
    for col in 0..dim {
        let mut state = StateVector::basis(k, col);
        for gate in &forward {
            state.apply_gate_exec(gate, crate::exec::Parallelism::Sequential)?;
        }
        state.apply_gate_exec(&g_local, crate::exec::Parallelism::Sequential)?;
        for gate in forward.iter().rev() {
            state.apply_gate_exec(&gate.adjoint(), crate::exec::Parallelism::Sequential)?;
        }
        for (row, &amp) in state.amplitudes().iter().enumerate() {
            out[(row, col)] = amp;
        }
    }
    Ok(out)
}

/// The commuting equivalent of [`en`]: the same register and bookkeeping,
/// with the gate list replaced by the conjugated composites. Its output
/// distribution equals `en(a)`'s on every input.
pub fn commuting_equivalent(a: &Circuit) -> Result<Circuit> {
    let folded = en(a)?;
    let middle = middle_gates(a)?;
    let gates = conjugate_commuting(a, &middle, folded.n_qubits())?;
    // Same register and bookkeeping, conjugated gate list.
    let mut out = Circuit::new(folded.n_qubits());
    for q in 0..folded.n_qubits() {
        out.set_role(q, folded.role(q).clone());
    }
    out.set_outputs(folded.outputs().to_vec());
    out.set_postselect(folded.postselect().to_vec());
    out.extend(gates);
    Ok(out)
}
