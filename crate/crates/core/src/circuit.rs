//! Circuit IR: a register with per-qubit roles, an ordered gate list, and
//! output/postselection bookkeeping.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gate::Gate;

/// How a qubit enters the computation.
#[derive(Clone, Debug, PartialEq)]
pub enum Role {
    /// Carries one bit of the classical input.
    Input,
    /// Ancilla initialized to |0⟩.
    Zero,
    /// Ancilla initialized to the given normalized one-qubit state.
    Product([Complex64; 2]),
}

/// Greedy-left layering of a circuit: each layer holds gate indices acting
/// on pairwise disjoint qubits, and order across layers respects gate order.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerDecomposition {
    pub layers: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    roles: Vec<Role>,
    outputs: Vec<usize>,
    postselect: Vec<usize>,
    gates: Vec<Gate>,
}

impl Circuit {
    /// An empty circuit with every qubit in the `Input` role.
    pub fn new(n_qubits: usize) -> Circuit {
        Circuit {
            n_qubits,
            roles: vec![Role::Input; n_qubits],
            outputs: Vec::new(),
            postselect: Vec::new(),
            gates: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn role(&self, q: usize) -> &Role {
        &self.roles[q]
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn postselect(&self) -> &[usize] {
        &self.postselect
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) {
        self.gates.extend(gates);
    }

    pub fn set_role(&mut self, q: usize, role: Role) {
        self.roles[q] = role;
    }

    pub fn set_outputs(&mut self, outputs: Vec<usize>) {
        self.outputs = outputs;
    }

    pub fn set_postselect(&mut self, postselect: Vec<usize>) {
        self.postselect = postselect;
    }

    /// Appends `extra` fresh |0⟩ ancillas, returning their indices.
    pub fn grow(&mut self, extra: usize) -> Vec<usize> {
        let start = self.n_qubits;
        self.n_qubits += extra;
        self.roles.extend(std::iter::repeat_n(Role::Zero, extra));
        (start..self.n_qubits).collect()
    }

    /// Input-role qubits in ascending order.
    pub fn input_qubits(&self) -> Vec<usize> {
        (0..self.n_qubits)
            .filter(|&q| matches!(self.roles[q], Role::Input))
            .collect()
    }

    /// Structural validation: index ranges, distinctness, gate well-formedness,
    /// normalized product ancillas. Collects every problem found.
    pub fn validate(&self) -> Result<()> {
        let mut issues = Vec::new();
        if self.roles.len() != self.n_qubits {
            issues.push(format!(
                "{} roles for {} qubits",
                self.roles.len(),
                self.n_qubits
            ));
        }
        for (q, role) in self.roles.iter().enumerate() {
            if let Role::Product(state) = role {
                let norm = state[0].norm_sqr() + state[1].norm_sqr();
                if (norm - 1.0).abs() > 1e-12 {
                    issues.push(format!("product state on qubit {q} has norm² {norm}"));
                }
            }
        }
        for (name, list) in [("output", &self.outputs), ("postselect", &self.postselect)] {
            for &q in list {
                if q >= self.n_qubits {
                    issues.push(format!("{name} qubit {q} out of range"));
                }
            }
            let mut seen = list.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != list.len() {
                issues.push(format!("duplicate {name} qubit"));
            }
        }
        for (i, gate) in self.gates.iter().enumerate() {
            if let Err(e) = gate.check_well_formed() {
                issues.push(format!("gate {i}: {e}"));
            }
            for q in gate.qubits() {
                if q >= self.n_qubits {
                    issues.push(format!(
                        "gate {i} touches qubit {q}, register has {}",
                        self.n_qubits
                    ));
                }
            }
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidCircuit(issues.join("; ")))
        }
    }

    /// Greedy-left layering: each gate goes to the earliest layer with no
    /// qubit conflict. Every gate counts as one unit regardless of its
    /// elementary expansion.
    pub fn layers(&self) -> LayerDecomposition {
        let mut last = vec![0usize; self.n_qubits];
        let mut layers: Vec<Vec<usize>> = Vec::new();
        for (i, gate) in self.gates.iter().enumerate() {
            let layer = gate.qubits().iter().map(|&q| last[q]).max().unwrap_or(0) + 1;
            if layer > layers.len() {
                layers.push(Vec::new());
            }
            layers[layer - 1].push(i);
            for q in gate.qubits() {
                last[q] = layer;
            }
        }
        LayerDecomposition { layers }
    }

    pub fn depth(&self) -> usize {
        self.layers().layers.len()
    }

    /// Gates reversed and replaced by their adjoints; register bookkeeping
    /// is kept as is.
    pub fn inverse(&self) -> Circuit {
        let mut inv = self.clone();
        inv.gates = self.gates.iter().rev().map(Gate::adjoint).collect();
        inv
    }

    /// Runs `self` then `other` on a shared register. Roles must agree;
    /// outputs and postselection are taken from `self`.
    pub fn compose(&self, other: &Circuit) -> Result<Circuit> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::InvalidCircuit(format!(
                "compose: register sizes differ ({} vs {})",
                self.n_qubits, other.n_qubits
            )));
        }
        if self.roles != other.roles {
            return Err(Error::InvalidCircuit("compose: qubit roles differ".into()));
        }
        let mut out = self.clone();
        out.gates.extend(other.gates.iter().cloned());
        Ok(out)
    }

    /// Relabels the circuit into a larger register: qubit `q` maps to
    /// `map[q]`. Unmapped qubits of the new register become |0⟩ ancillas.
    pub fn embed(&self, map: &[usize], n_total: usize) -> Result<Circuit> {
        if map.len() != self.n_qubits {
            return Err(Error::InvalidCircuit(format!(
                "embed: map covers {} qubits, circuit has {}",
                map.len(),
                self.n_qubits
            )));
        }
        let mut seen = vec![false; n_total];
        for &t in map {
            if t >= n_total {
                return Err(Error::InvalidCircuit(format!(
                    "embed: target {t} out of range {n_total}"
                )));
            }
            if seen[t] {
                return Err(Error::InvalidCircuit(format!(
                    "embed: qubit collision on target {t}"
                )));
            }
            seen[t] = true;
        }
        let mut out = Circuit::new(n_total);
        out.roles = vec![Role::Zero; n_total];
        for (q, &t) in map.iter().enumerate() {
            out.roles[t] = self.roles[q].clone();
        }
        out.outputs = self.outputs.iter().map(|&q| map[q]).collect();
        out.postselect = self.postselect.iter().map(|&q| map[q]).collect();
        out.gates = self.gates.iter().map(|g| g.remap(|q| map[q])).collect();
        Ok(out)
    }
}
