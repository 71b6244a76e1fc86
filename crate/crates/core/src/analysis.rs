//! Verification passes: pairwise commutativity, numeric support extraction,
//! and c-locality certification.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::gate::Gate;
use crate::linalg::CMat;
use crate::statevector::StateVector;

/// Largest joint register a commutator check will materialize.
const PAIR_QUBIT_CAP: usize = 12;

/// Outcome of a pairwise-commutativity check.
#[derive(Clone, Debug)]
pub struct CommutationReport {
    pub pass: bool,
    /// First failing pair in lexicographic order, with its commutator's
    /// max-entry magnitude.
    pub witness: Option<CommutationWitness>,
    /// Largest commutator residual seen over all pairs.
    pub max_residual: f64,
    /// All unordered gate pairs; pairs on disjoint qubits commute
    /// identically and are not recomputed.
    pub pairs_checked: usize,
    pub tolerance: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct CommutationWitness {
    pub i: usize,
    pub j: usize,
    pub magnitude: f64,
}

/// The unitary of `gate` embedded on `register` (msb-first in register
/// order), built by evolving basis columns.
pub fn embed_unitary(gate: &Gate, register: &[usize]) -> Result<CMat> {
    let k = register.len();
    let local = |q: usize| -> usize {
        register
            .iter()
            .position(|&r| r == q)
            .expect("gate qubit inside register")
    };
    for q in gate.qubits() {
        if !register.contains(&q) {
            return Err(Error::Contract(format!(
                "gate qubit {q} missing from register {register:?}"
            )));
        }
    }
    let remapped = gate.remap(local);
    let dim = 1usize << k;
    let mut out = CMat::zeros((dim, dim));
    for col in 0..dim {
        let mut state = StateVector::basis(k, col);
        state.apply_gate_exec(&remapped, Parallelism::Sequential)?;
        for (row, &amp) in state.amplitudes().iter().enumerate() {
            out[(row, col)] = amp;
        }
    }
    Ok(out)
}

fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

/// Max-entry magnitude of `U_i·U_j - U_j·U_i` on the union of the two
/// gates' qubits, computed column by column.
fn commutator_residual(gi: &Gate, gj: &Gate) -> Result<f64> {
    let union = sorted_union(&gi.qubits(), &gj.qubits());
    if union.len() > PAIR_QUBIT_CAP {
        return Err(Error::ResourceLimit {
            what: "commutator register",
            needed: union.len(),
            cap: PAIR_QUBIT_CAP,
        });
    }
    let local = |q: usize| union.iter().position(|&r| r == q).unwrap();
    let a = gi.remap(local);
    let b = gj.remap(local);
    let dim = 1usize << union.len();
    let mut residual = 0.0f64;
    for col in 0..dim {
        let mut ab = StateVector::basis(union.len(), col);
        ab.apply_gate_exec(&b, Parallelism::Sequential)?;
        ab.apply_gate_exec(&a, Parallelism::Sequential)?;
        let mut ba = StateVector::basis(union.len(), col);
        ba.apply_gate_exec(&a, Parallelism::Sequential)?;
        ba.apply_gate_exec(&b, Parallelism::Sequential)?;
        for (x, y) in ab.amplitudes().iter().zip(ba.amplitudes()) {
            residual = residual.max((x - y).norm());
        }
    }
    Ok(residual)
}

pub fn check_pairwise_commuting(circuit: &Circuit, tol: f64) -> Result<CommutationReport> {
    check_pairwise_commuting_exec(
        circuit,
        tol,
        Parallelism::auto(circuit.gates().len().pow(2)),
    )
}

/// Checks every unordered gate pair. Gates on disjoint qubit sets commute
/// identically and are skipped; the rest are checked on the union of their
/// supports.
pub fn check_pairwise_commuting_exec(
    circuit: &Circuit,
    tol: f64,
    par: Parallelism,
) -> Result<CommutationReport> {
    let gates = circuit.gates();
    let mut pairs = Vec::new();
    for i in 0..gates.len() {
        for j in i + 1..gates.len() {
            let qi = gates[i].qubits();
            if gates[j].qubits().iter().any(|q| qi.contains(q)) {
                pairs.push((i, j));
            }
        }
    }
    let run = |&(i, j): &(usize, usize)| -> Result<(usize, usize, f64)> {
        commutator_residual(&gates[i], &gates[j])
            .map(|r| (i, j, r))
            .map_err(|e| match e {
                Error::ResourceLimit { needed, cap, .. } => Error::Contract(format!(
                    "commutator of gates {i} and {j} needs {needed} qubits, cap is {cap}"
                )),
                other => other,
            })
    };
    let results: Vec<Result<(usize, usize, f64)>> = {
        #[cfg(feature = "parallel")]
        if par.is_parallel() {
            pairs.par_iter().map(run).collect()
        } else {
            pairs.iter().map(run).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = par;
            pairs.iter().map(run).collect()
        }
    };
    let mut max_residual = 0.0f64;
    let mut witness = None;
    for res in results {
        let (i, j, r) = res?;
        max_residual = max_residual.max(r);
        if r > tol && witness.is_none() {
            witness = Some(CommutationWitness { i, j, magnitude: r });
        }
    }
    let n_gates = gates.len();
    Ok(CommutationReport {
        pass: witness.is_none(),
        witness,
        max_residual,
        pairs_checked: n_gates * n_gates.saturating_sub(1) / 2,
        tolerance: tol,
    })
}

/// Minimal qubit set on which an operator acts, with the restricted matrix.
#[derive(Clone, Debug)]
pub struct Support {
    /// Global qubit ids, ascending subsequence of the input register.
    pub qubits: Vec<usize>,
    /// The operator restricted to `qubits`.
    pub matrix: CMat,
    /// Max-entry deviation between the input and the re-embedded
    /// restriction.
    pub residual: f64,
}

/// Finds the minimal support of a unitary given on `register` (msb-first).
///
/// A qubit is outside the support iff the operator commutes with both `X`
/// and `Z` there within `tol`; purely global phases therefore do not count
/// as action. Minimality is confirmed by re-embedding the restriction.
pub fn support(matrix: &CMat, register: &[usize], tol: f64) -> Result<Support> {
    let k = register.len();
    let dim = 1usize << k;
    if matrix.dim() != (dim, dim) {
        return Err(Error::Contract(format!(
            "support: {:?} matrix for {k} qubits",
            matrix.dim()
        )));
    }
    let mut kept_positions = Vec::new();
    for p in 0..k {
        let mask = 1usize << (k - 1 - p);
        let mut x_resid = 0.0f64;
        let mut z_resid = 0.0f64;
        for r in 0..dim {
            for c in 0..dim {
                x_resid = x_resid.max((matrix[(r ^ mask, c)] - matrix[(r, c ^ mask)]).norm());
                if (r ^ c) & mask != 0 {
                    z_resid = z_resid.max(2.0 * matrix[(r, c)].norm());
                }
            }
        }
        if x_resid > tol || z_resid > tol {
            kept_positions.push(p);
        }
    }
    let kq = kept_positions.len();
    let compact = |idx: usize| -> usize {
        kept_positions
            .iter()
            .enumerate()
            .fold(0usize, |acc, (out_pos, &p)| {
                acc | (((idx >> (k - 1 - p)) & 1) << (kq - 1 - out_pos))
            })
    };
    let kept_mask: usize = kept_positions.iter().map(|&p| 1usize << (k - 1 - p)).sum();
    let place = |small: usize| -> usize {
        kept_positions
            .iter()
            .enumerate()
            .fold(0usize, |acc, (out_pos, &p)| {
                acc | (((small >> (kq - 1 - out_pos)) & 1) << (k - 1 - p))
            })
    };
    let small_dim = 1usize << kq;
    let mut restricted = CMat::zeros((small_dim, small_dim));
    for r in 0..small_dim {
        for c in 0..small_dim {
            restricted[(r, c)] = matrix[(place(r), place(c))];
        }
    }
    let mut residual = 0.0f64;
    for r in 0..dim {
        for c in 0..dim {
            let want = if r & !kept_mask == c & !kept_mask {
                restricted[(compact(r), compact(c))]
            } else {
                Complex64::new(0.0, 0.0)
            };
            residual = residual.max((matrix[(r, c)] - want).norm());
        }
    }
    Ok(Support {
        qubits: kept_positions.iter().map(|&p| register[p]).collect(),
        matrix: restricted,
        residual,
    })
}

/// Numeric support of a single gate.
pub fn gate_support(gate: &Gate, tol: f64) -> Result<Support> {
    let mut register = gate.qubits();
    register.sort_unstable();
    let matrix = embed_unitary(gate, &register)?;
    support(&matrix, &register, tol)
}

/// Per-gate support sizes against a locality bound.
#[derive(Clone, Debug)]
pub struct LocalityReport {
    pub pass: bool,
    pub bound: usize,
    pub sizes: Vec<usize>,
    /// Indices of gates whose support exceeds the bound.
    pub violations: Vec<usize>,
}

pub fn check_c_local(circuit: &Circuit, bound: usize) -> Result<LocalityReport> {
    let mut sizes = Vec::with_capacity(circuit.gates().len());
    let mut violations = Vec::new();
    for (i, gate) in circuit.gates().iter().enumerate() {
        let s = gate_support(gate, 1e-9)?;
        if s.qubits.len() > bound {
            violations.push(i);
        }
        sizes.push(s.qubits.len());
    }
    Ok(LocalityReport {
        pass: violations.is_empty(),
        bound,
        sizes,
        violations,
    })
}
