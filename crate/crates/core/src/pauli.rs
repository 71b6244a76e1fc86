//! Strong simulation of Clifford circuits with product-state inputs and few
//! outputs, by conjugating Pauli strings backwards through the circuit.
//!
//! The output probability of a Clifford circuit factors as an average over
//! all `2^l` subsets `S` of the output qubits: the projector onto `0^l` is
//! `(1/2^l)·Σ_S Z(S)`, each `Z(S)` stays a signed Pauli string under
//! conjugation, and the expectation of a Pauli string in a product state is
//! a product of one-qubit expectations. Cost is `O(2^l · gates · qubits)`,
//! so the method is exponential only in the number of outputs.

use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::circuit::{Circuit, Role};
use crate::error::{Error, Result};
use crate::exec::{tree_sum_by, Parallelism};
use crate::gate::Gate;

/// Output-count cap: the subset sum is 2^l terms.
pub const OUTPUT_CAP: usize = 20;

/// A signed Pauli string `i^phase · ⊗_q X^{x_q} Z^{z_q}`, packed two bits
/// per qubit. Registers are capped at 64 qubits, far beyond the dense
/// oracle's reach.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    /// Exponent of the global `i` factor, mod 4.
    phase: u8,
}

/// Pauli letter at one qubit position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl PauliString {
    pub fn identity(n: usize) -> PauliString {
        assert!(n <= 64, "Pauli strings support at most 64 qubits");
        PauliString {
            n,
            x: 0,
            z: 0,
            phase: 0,
        }
    }

    /// `Z` on each listed qubit, identity elsewhere.
    pub fn z_string(n: usize, qubits: &[usize]) -> PauliString {
        let mut p = PauliString::identity(n);
        for &q in qubits {
            p.z |= 1 << q;
        }
        p
    }

    pub fn from_letters(letters: &[Letter]) -> PauliString {
        let mut p = PauliString::identity(letters.len());
        for (q, letter) in letters.iter().enumerate() {
            match letter {
                Letter::I => {}
                Letter::X => p.x |= 1 << q,
                Letter::Z => p.z |= 1 << q,
                Letter::Y => {
                    // Y = i·XZ, so storing (x,z)=(1,1) needs one extra i.
                    p.x |= 1 << q;
                    p.z |= 1 << q;
                    p.phase = (p.phase + 1) % 4;
                }
            }
        }
        p
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn letter(&self, q: usize) -> Letter {
        match ((self.x >> q) & 1, (self.z >> q) & 1) {
            (0, 0) => Letter::I,
            (1, 0) => Letter::X,
            (0, 1) => Letter::Z,
            _ => Letter::Y,
        }
    }

    /// Coefficient in front of the Pauli-letter tensor product (the
    /// stored `i^phase` times one `-i` per `Y` to convert `XZ` back to `Y`).
    pub fn coefficient(&self) -> Complex64 {
        let ys = (self.x & self.z).count_ones() as u8;
        i_pow((self.phase + 3 * ys % 4) % 4)
    }

    fn add_phase(&mut self, quarter_turns: u8) {
        self.phase = (self.phase + quarter_turns) % 4;
    }

    fn bit(&self, mask: u64, q: usize) -> bool {
        mask >> q & 1 == 1
    }

    /// Conjugation `g†·p·g` by a Clifford gate, with exact integer phase
    /// bookkeeping. Accepts `H`, phase shifts of level ≤ 2 (`Z`, `P`, `P†`),
    /// `X`, `CZ` (also as `CR` at level 1) and `CNOT`.
    pub fn conjugate_gate(&self, gate: &Gate) -> Result<PauliString> {
        let step = classify(gate).ok_or_else(|| Error::NonClifford {
            index: 0,
            reason: format!("{gate:?}"),
        })?;
        let mut p = *self;
        p.apply_step(step);
        Ok(p)
    }

    fn apply_step(&mut self, step: CliffordStep) {
        match step {
            CliffordStep::Identity => {}
            CliffordStep::H(q) => {
                let x = self.bit(self.x, q);
                let z = self.bit(self.z, q);
                // H swaps X and Z; reordering Z^x X^z costs (-1)^{xz}.
                if x != z {
                    self.x ^= 1 << q;
                    self.z ^= 1 << q;
                }
                if x && z {
                    self.add_phase(2);
                }
            }
            CliffordStep::Z(q) => {
                if self.bit(self.x, q) {
                    self.add_phase(2);
                }
            }
            CliffordStep::X(q) => {
                if self.bit(self.z, q) {
                    self.add_phase(2);
                }
            }
            CliffordStep::S { q, adjoint } => {
                if self.bit(self.x, q) {
                    self.z ^= 1 << q;
                    self.add_phase(if adjoint { 1 } else { 3 });
                }
            }
            CliffordStep::Cz(a, b) => {
                let xa = self.bit(self.x, a);
                let xb = self.bit(self.x, b);
                if xa {
                    self.z ^= 1 << b;
                }
                if xb {
                    self.z ^= 1 << a;
                }
                if xa && xb {
                    self.add_phase(2);
                }
            }
            CliffordStep::Cnot { control, target } => {
                if self.bit(self.x, control) {
                    self.x ^= 1 << target;
                }
                if self.bit(self.z, target) {
                    self.z ^= 1 << control;
                }
            }
        }
    }
}

impl std::fmt::Display for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let coeff = self.coefficient();
        let sign = if (coeff - Complex64::ONE).norm() < 1e-12 {
            "+"
        } else if (coeff + Complex64::ONE).norm() < 1e-12 {
            "-"
        } else if coeff.im > 0.0 {
            "+i"
        } else {
            "-i"
        };
        write!(f, "{sign}")?;
        for q in 0..self.n {
            write!(
                f,
                "{}",
                match self.letter(q) {
                    Letter::I => 'I',
                    Letter::X => 'X',
                    Letter::Y => 'Y',
                    Letter::Z => 'Z',
                }
            )?;
        }
        Ok(())
    }
}

fn i_pow(e: u8) -> Complex64 {
    match e % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[derive(Clone, Copy, Debug)]
enum CliffordStep {
    Identity,
    H(usize),
    Z(usize),
    X(usize),
    S { q: usize, adjoint: bool },
    Cz(usize, usize),
    Cnot { control: usize, target: usize },
}

/// Maps a gate to its Clifford conjugation rule, if it has one.
fn classify(gate: &Gate) -> Option<CliffordStep> {
    match gate {
        Gate::H(q) => Some(CliffordStep::H(*q)),
        Gate::X(q) => Some(CliffordStep::X(*q)),
        Gate::CZ(a, b) => Some(CliffordStep::Cz(*a, *b)),
        Gate::Cnot { control, target } => Some(CliffordStep::Cnot {
            control: *control,
            target: *target,
        }),
        Gate::R { q, phase } => match phase.sign_level() {
            Some((_, 0)) => Some(CliffordStep::Identity),
            Some((_, 1)) => Some(CliffordStep::Z(*q)),
            Some((sign, 2)) => Some(CliffordStep::S {
                q: *q,
                adjoint: sign < 0,
            }),
            _ => None,
        },
        Gate::CR {
            control,
            target,
            phase,
        } => match phase.sign_level() {
            Some((_, 0)) => Some(CliffordStep::Identity),
            Some((_, 1)) => Some(CliffordStep::Cz(*control, *target)),
            _ => None,
        },
        Gate::U { .. } => None,
    }
}

/// Compiles a circuit into conjugation steps, or reports the first
/// non-Clifford gate by index.
fn compile_clifford(circuit: &Circuit) -> Result<Vec<CliffordStep>> {
    circuit
        .gates()
        .iter()
        .enumerate()
        .map(|(index, gate)| {
            classify(gate).ok_or_else(|| Error::NonClifford {
                index,
                reason: format!("{gate:?}"),
            })
        })
        .collect()
}

/// One-qubit state entering an expectation product.
#[derive(Clone, Copy, Debug)]
pub enum QubitState {
    Basis(bool),
    Pair([Complex64; 2]),
}

/// Initial one-qubit states of a circuit run, from roles and input bits.
pub fn qubit_states(circuit: &Circuit, input_bits: &[bool]) -> Result<Vec<QubitState>> {
    let inputs = circuit.input_qubits();
    if inputs.len() != input_bits.len() {
        return Err(Error::Contract(format!(
            "{} input bits for {} input qubits",
            input_bits.len(),
            inputs.len()
        )));
    }
    let mut next = 0usize;
    Ok((0..circuit.n_qubits())
        .map(|q| match circuit.role(q) {
            Role::Input => {
                let b = input_bits[next];
                next += 1;
                QubitState::Basis(b)
            }
            Role::Zero => QubitState::Basis(false),
            Role::Product(state) => QubitState::Pair(*state),
        })
        .collect())
}

fn single_expectation(state: QubitState, letter: Letter) -> Complex64 {
    match (state, letter) {
        (_, Letter::I) => Complex64::ONE,
        (QubitState::Basis(b), Letter::Z) => {
            if b {
                -Complex64::ONE
            } else {
                Complex64::ONE
            }
        }
        (QubitState::Basis(_), _) => Complex64::new(0.0, 0.0),
        (QubitState::Pair([a, b]), Letter::X) => a.conj() * b + b.conj() * a,
        (QubitState::Pair([a, b]), Letter::Z) => Complex64::new(a.norm_sqr() - b.norm_sqr(), 0.0),
        (QubitState::Pair([a, b]), Letter::Y) => {
            let v = b.conj() * a;
            // ⟨ψ|Y|ψ⟩ = i(β̄α − ᾱβ) = -2·Im(β̄α).
            Complex64::new(-2.0 * v.im, 0.0)
        }
    }
}

/// `⟨ψ₁|P₁|ψ₁⟩ ⋯ ⟨ψₙ|Pₙ|ψₙ⟩` times the string's coefficient. The value
/// must be real to 1e-12; a larger imaginary part is surfaced as an
/// internal-consistency error.
pub fn expectation_product(p: &PauliString, states: &[QubitState]) -> Result<f64> {
    if states.len() != p.n_qubits() {
        return Err(Error::Contract(format!(
            "{} states for a {}-qubit Pauli string",
            states.len(),
            p.n_qubits()
        )));
    }
    let mut acc = p.coefficient();
    for (q, &state) in states.iter().enumerate() {
        if acc == Complex64::new(0.0, 0.0) {
            return Ok(0.0);
        }
        acc *= single_expectation(state, p.letter(q));
    }
    if acc.im.abs() > 1e-12 {
        return Err(Error::NonRealExpectation { imag: acc.im });
    }
    Ok(acc.re)
}

fn check_outputs(circuit: &Circuit, subset: &[usize], y: &[bool]) -> Result<()> {
    if subset.len() != y.len() {
        return Err(Error::Contract(format!(
            "outcome has {} bits for {} qubits",
            y.len(),
            subset.len()
        )));
    }
    if subset.len() > OUTPUT_CAP {
        return Err(Error::ResourceLimit {
            what: "subset sum",
            needed: subset.len(),
            cap: OUTPUT_CAP,
        });
    }
    let mut seen = std::collections::HashSet::new();
    for &q in subset {
        if q >= circuit.n_qubits() {
            return Err(Error::Contract(format!("qubit {q} out of range")));
        }
        if !seen.insert(q) {
            return Err(Error::Contract(format!("duplicate qubit {q}")));
        }
    }
    Ok(())
}

fn subset_term(
    steps: &[CliffordStep],
    states: &[QubitState],
    subset: &[usize],
    y_mask: u64,
    n: usize,
    s_mask: u64,
) -> Result<f64> {
    // X_y Z(S) X_y = (-1)^{|S ∩ supp(y)|} Z(S), so the sweep starts from a
    // plain Z string with a sign.
    let mut p = PauliString::identity(n);
    for (j, &q) in subset.iter().enumerate() {
        if s_mask >> j & 1 == 1 {
            p.z |= 1 << q;
        }
    }
    if (s_mask & y_mask).count_ones() % 2 == 1 {
        p.add_phase(2);
    }
    for &step in steps.iter().rev() {
        p.apply_step(step);
    }
    expectation_product(&p, states)
}

/// Probability that measuring `subset` yields `y`, for a Clifford circuit.
/// Exact up to float rounding; agrees with the dense oracle to 1e-9.
pub fn strong_sim_marginal_exec(
    circuit: &Circuit,
    input_bits: &[bool],
    subset: &[usize],
    y: &[bool],
    par: Parallelism,
) -> Result<f64> {
    check_outputs(circuit, subset, y)?;
    let steps = compile_clifford(circuit)?;
    let states = qubit_states(circuit, input_bits)?;
    let n = circuit.n_qubits();
    let l = subset.len();
    let y_mask = y
        .iter()
        .enumerate()
        .fold(0u64, |m, (j, &b)| if b { m | (1 << j) } else { m });

    let terms: Vec<Result<f64>> = {
        let term = |s: usize| subset_term(&steps, &states, subset, y_mask, n, s as u64);
        #[cfg(feature = "parallel")]
        if par.is_parallel() {
            (0..1usize << l).into_par_iter().map(term).collect()
        } else {
            (0..1usize << l).map(term).collect()
        }
        #[cfg(not(feature = "parallel"))]
        (0..1usize << l).map(term).collect()
    };
    let mut values = Vec::with_capacity(terms.len());
    for t in terms {
        values.push(t?);
    }
    let sum = tree_sum_by(0, values.len(), par, &|i| values[i]);
    Ok(sum / (1u64 << l) as f64)
}

/// Per-subset audit of the sum behind [`strong_sim_marginal_exec`]: for each
/// subset mask, the conjugated string's expectation value.
pub fn strong_sim_terms(
    circuit: &Circuit,
    input_bits: &[bool],
    subset: &[usize],
    y: &[bool],
) -> Result<Vec<(u64, f64)>> {
    check_outputs(circuit, subset, y)?;
    let steps = compile_clifford(circuit)?;
    let states = qubit_states(circuit, input_bits)?;
    let n = circuit.n_qubits();
    let y_mask = y
        .iter()
        .enumerate()
        .fold(0u64, |m, (j, &b)| if b { m | (1 << j) } else { m });
    (0..1u64 << subset.len())
        .map(|s| Ok((s, subset_term(&steps, &states, subset, y_mask, n, s)?)))
        .collect()
}

pub fn strong_sim_marginal(
    circuit: &Circuit,
    input_bits: &[bool],
    subset: &[usize],
    y: &[bool],
) -> Result<f64> {
    let l = subset.len();
    strong_sim_marginal_exec(
        circuit,
        input_bits,
        subset,
        y,
        Parallelism::auto(1 << l.max(1)),
    )
}

/// Probability of the full outcome `y` on the circuit's output qubits.
pub fn strong_sim(circuit: &Circuit, input_bits: &[bool], y: &[bool]) -> Result<f64> {
    strong_sim_marginal(circuit, input_bits, circuit.outputs(), y)
}

pub fn strong_sim_exec(
    circuit: &Circuit,
    input_bits: &[bool],
    y: &[bool],
    par: Parallelism,
) -> Result<f64> {
    strong_sim_marginal_exec(circuit, input_bits, circuit.outputs(), y, par)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{self, CMat};
    use ndarray::Array2;

    fn letter_matrix(letter: Letter) -> CMat {
        let o = Complex64::new(0.0, 0.0);
        let one = Complex64::ONE;
        let i = Complex64::new(0.0, 1.0);
        let entries = match letter {
            Letter::I => vec![one, o, o, one],
            Letter::X => vec![o, one, one, o],
            Letter::Y => vec![o, -i, i, o],
            Letter::Z => vec![one, o, o, -one],
        };
        Array2::from_shape_vec((2, 2), entries).unwrap()
    }

    fn dense(p: &PauliString) -> CMat {
        let mut m = Array2::from_elem((1, 1), p.coefficient());
        for q in 0..p.n_qubits() {
            m = linalg::kron(&m, &letter_matrix(p.letter(q)));
        }
        m
    }

    const LETTERS: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];

    fn two_qubit_gates() -> Vec<Gate> {
        vec![
            Gate::cz(0, 1),
            Gate::cnot(0, 1),
            Gate::cnot(1, 0),
            Gate::cr(0, 1, 1, 1).unwrap(),
        ]
    }

    fn one_qubit_gates() -> Vec<Gate> {
        vec![
            Gate::h(0),
            Gate::z(0),
            Gate::x(0),
            Gate::p(0),
            Gate::r(0, -1, 2).unwrap(),
            Gate::r(0, 1, 0).unwrap(),
        ]
    }

    /// The conjugation tables are the oracle-checked core: every rule must
    /// reproduce g†·P·g computed densely.
    #[test]
    fn conjugation_matches_dense_matrices() {
        for gate in one_qubit_gates() {
            let u = gate.unitary();
            let ud = linalg::dagger(&u);
            for la in LETTERS {
                let p = PauliString::from_letters(&[la]);
                let got = dense(&p.conjugate_gate(&gate).unwrap());
                let want = ud.dot(&dense(&p)).dot(&u);
                assert!(
                    linalg::max_abs_diff(&got, &want) <= 1e-12,
                    "{gate:?} on {la:?}"
                );
            }
        }
        for gate in two_qubit_gates() {
            let u = match &gate {
                // Dense matrices below index qubit 0 as the top bit, which
                // matches the gate's own qubit order only for (0,1) gates.
                Gate::Cnot { control: 1, .. } => {
                    let mut c = Circuit::new(2);
                    c.push(gate.clone());
                    crate::statevector::full_unitary(&c).unwrap()
                }
                _ => gate.unitary(),
            };
            let ud = linalg::dagger(&u);
            for la in LETTERS {
                for lb in LETTERS {
                    let p = PauliString::from_letters(&[la, lb]);
                    let got = dense(&p.conjugate_gate(&gate).unwrap());
                    let want = ud.dot(&dense(&p)).dot(&u);
                    assert!(
                        linalg::max_abs_diff(&got, &want) <= 1e-12,
                        "{gate:?} on {la:?}⊗{lb:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn named_conjugation_examples() {
        let h = Gate::h(0);
        let x = PauliString::from_letters(&[Letter::X]);
        let z = PauliString::from_letters(&[Letter::Z]);
        assert_eq!(x.conjugate_gate(&h).unwrap(), z);
        assert_eq!(z.conjugate_gate(&h).unwrap(), x);
        // P maps X to Y (as g·X·g† = Y; the backward sweep uses g†·X·g = -Y).
        let p_dag = Gate::r(0, -1, 2).unwrap();
        let y = PauliString::from_letters(&[Letter::Y]);
        assert_eq!(x.conjugate_gate(&p_dag).unwrap(), y);
        // CZ maps X⊗I to X⊗Z.
        let xi = PauliString::from_letters(&[Letter::X, Letter::I]);
        let xz = PauliString::from_letters(&[Letter::X, Letter::Z]);
        assert_eq!(xi.conjugate_gate(&Gate::cz(0, 1)).unwrap(), xz);
    }

    #[test]
    fn conjugation_is_a_group_action() {
        for gate in one_qubit_gates().into_iter().chain(two_qubit_gates()) {
            let inv = gate.adjoint();
            for la in LETTERS {
                for lb in LETTERS {
                    let p = PauliString::from_letters(&[la, lb]);
                    let round = p
                        .conjugate_gate(&gate)
                        .unwrap()
                        .conjugate_gate(&inv)
                        .unwrap();
                    assert_eq!(round, p, "{gate:?} on {la:?}⊗{lb:?}");
                }
            }
        }
    }

    #[test]
    fn non_clifford_gates_are_rejected() {
        let t = Gate::r(0, 1, 3).unwrap();
        let p = PauliString::identity(1);
        assert!(p.conjugate_gate(&t).is_err());
        let mut c = Circuit::new(2);
        c.push(Gate::h(0));
        c.push(Gate::cr(0, 1, 1, 2).unwrap());
        c.set_outputs(vec![0]);
        match strong_sim(&c, &[false, false], &[false]) {
            Err(Error::NonClifford { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected non-Clifford error, got {other:?}"),
        }
    }

    #[test]
    fn expectation_examples() {
        let z = PauliString::from_letters(&[Letter::Z]);
        assert_eq!(
            expectation_product(&z, &[QubitState::Basis(false)]).unwrap(),
            1.0
        );
        assert_eq!(
            expectation_product(&z, &[QubitState::Basis(true)]).unwrap(),
            -1.0
        );
        let phi = crate::constructions::magic_state();
        assert!(
            expectation_product(&z, &[QubitState::Pair(phi)])
                .unwrap()
                .abs()
                < 1e-15
        );
        let x = PauliString::from_letters(&[Letter::X]);
        let got = expectation_product(&x, &[QubitState::Pair(phi)]).unwrap();
        assert!((got - std::f64::consts::FRAC_PI_4.cos()).abs() < 1e-12);
    }

    /// `(1/2^l)·Σ_S Z(S)` is the projector onto the all-zeros string.
    #[test]
    fn projector_identity_dense() {
        for l in 1..=3usize {
            let dim = 1 << l;
            let mut acc: CMat = Array2::zeros((dim, dim));
            for s in 0..1u64 << l {
                let qubits: Vec<usize> = (0..l).filter(|&j| s >> j & 1 == 1).collect();
                acc = acc + dense(&PauliString::z_string(l, &qubits));
            }
            acc.mapv_inplace(|v| v / dim as f64);
            let mut want: CMat = Array2::zeros((dim, dim));
            want[(0, 0)] = Complex64::ONE;
            assert!(linalg::max_abs_diff(&acc, &want) <= 1e-12, "l = {l}");
        }
    }

    #[test]
    fn identity_circuit_is_deterministic() {
        let mut c = Circuit::new(3);
        c.set_outputs(vec![0, 1, 2]);
        let x = [true, false, true];
        assert!((strong_sim(&c, &x, &x).unwrap() - 1.0).abs() < 1e-12);
        assert!(strong_sim(&c, &x, &[true, true, true]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn single_hadamard_splits_evenly() {
        let mut c = Circuit::new(1);
        c.push(Gate::h(0));
        c.set_outputs(vec![0]);
        assert!((strong_sim(&c, &[false], &[false]).unwrap() - 0.5).abs() < 1e-12);
        assert!((strong_sim(&c, &[false], &[true]).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_marginal_is_one() {
        let mut c = Circuit::new(2);
        c.push(Gate::h(0));
        c.push(Gate::cnot(0, 1));
        c.set_outputs(vec![0, 1]);
        assert!((strong_sim_marginal(&c, &[false, false], &[], &[]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_pair_marginal_is_half() {
        let mut c = Circuit::new(2);
        c.push(Gate::h(0));
        c.push(Gate::cnot(0, 1));
        c.set_outputs(vec![0, 1]);
        let p = strong_sim_marginal(&c, &[false, false], &[1], &[true]).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
    }

    #[test]
    fn parallel_subset_sum_is_bitwise_stable() {
        let mut c = Circuit::new(6);
        for q in 0..6 {
            c.push(Gate::h(q));
        }
        c.push(Gate::cnot(0, 5));
        c.push(Gate::cz(2, 3));
        c.push(Gate::p(4));
        c.set_outputs(vec![0, 2, 4, 5]);
        let x = [false; 6];
        let y = [false, true, false, true];
        let seq = strong_sim_exec(&c, &x, &y, Parallelism::Sequential).unwrap();
        let par = strong_sim_exec(&c, &x, &y, Parallelism::Rayon).unwrap();
        assert_eq!(seq.to_bits(), par.to_bits());
    }
}
