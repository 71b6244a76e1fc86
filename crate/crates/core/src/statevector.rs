//! Dense statevector simulation: the brute-force oracle that every
//! construction and every fast simulator is checked against.
//!
//! Qubit `q` of an `n`-qubit register owns bit `n-1-q` of the amplitude
//! index, so bitstrings read msb-first match qubit order.

use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::circuit::{Circuit, Role};
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::exec::{tree_sum_by, Parallelism};
use crate::gate::Gate;
use crate::linalg::CMat;

/// Resource guard for dense simulation.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_qubits: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_qubits: 24 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The computational basis state with the given packed index.
    pub fn basis(n: usize, index: usize) -> StateVector {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        let amps = &self.amps;
        tree_sum_by(0, amps.len(), Parallelism::auto(amps.len()), &|i| {
            amps[i].norm_sqr()
        })
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        assert_eq!(self.n, other.n);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        self.apply_gate_exec(gate, Parallelism::auto(self.amps.len()))
    }

    pub fn apply_gate_exec(&mut self, gate: &Gate, par: Parallelism) -> Result<()> {
        for q in gate.qubits() {
            if q >= self.n {
                return Err(Error::InvalidCircuit(format!(
                    "gate touches qubit {q}, state has {}",
                    self.n
                )));
            }
        }
        match gate {
            Gate::R { q, phase } => self.phase_on_mask(self.bit(*q), phase.phase_factor(), par),
            Gate::CZ(a, b) => self.phase_on_mask(self.bit(*a) | self.bit(*b), -Complex64::ONE, par),
            Gate::CR {
                control,
                target,
                phase,
            } => self.phase_on_mask(
                self.bit(*control) | self.bit(*target),
                phase.phase_factor(),
                par,
            ),
            Gate::H(q) => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                self.single_qubit(*q, [[h, h], [h, -h]], par)
            }
            Gate::X(q) => self.flip(*q, usize::MAX, par),
            Gate::Cnot { control, target } => self.flip(*target, self.bit(*control), par),
            Gate::U { qubits, matrix } => self.composite(qubits, matrix, par),
        }
        Ok(())
    }

    fn bit(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    /// Multiplies amplitudes whose index contains all bits of `mask`.
    fn phase_on_mask(&mut self, mask: usize, factor: Complex64, par: Parallelism) {
        let kernel = |(idx, amp): (usize, &mut Complex64)| {
            if idx & mask == mask {
                *amp *= factor;
            }
        };
        #[cfg(feature = "parallel")]
        if par.is_parallel() {
            self.amps.par_iter_mut().enumerate().for_each(kernel);
            return;
        }
        let _ = par;
        self.amps.iter_mut().enumerate().for_each(kernel);
    }

    /// Dense 2x2 gate on qubit `q`.
    fn single_qubit(&mut self, q: usize, m: [[Complex64; 2]; 2], par: Parallelism) {
        let stride = self.bit(q);
        let pair = move |lo: &mut Complex64, hi: &mut Complex64| {
            let a = *lo;
            let b = *hi;
            *lo = m[0][0] * a + m[0][1] * b;
            *hi = m[1][0] * a + m[1][1] * b;
        };
        #[cfg(feature = "parallel")]
        if par.is_parallel() {
            if self.amps.len() / (2 * stride) >= 8 {
                self.amps.par_chunks_mut(2 * stride).for_each(|chunk| {
                    let (lo, hi) = chunk.split_at_mut(stride);
                    lo.iter_mut()
                        .zip(hi.iter_mut())
                        .for_each(|(a, b)| pair(a, b));
                });
            } else {
                for chunk in self.amps.chunks_mut(2 * stride) {
                    let (lo, hi) = chunk.split_at_mut(stride);
                    lo.par_iter_mut()
                        .zip(hi.par_iter_mut())
                        .for_each(|(a, b)| pair(a, b));
                }
            }
            return;
        }
        let _ = par;
        for chunk in self.amps.chunks_mut(2 * stride) {
            let (lo, hi) = chunk.split_at_mut(stride);
            lo.iter_mut()
                .zip(hi.iter_mut())
                .for_each(|(a, b)| pair(a, b));
        }
    }

    /// Swaps the two halves of qubit `q` wherever `control_mask` is fully set.
    /// `usize::MAX` means unconditional (an X gate).
    fn flip(&mut self, q: usize, control_mask: usize, par: Parallelism) {
        let stride = self.bit(q);
        let swap = move |base: usize, lo: &mut [Complex64], hi: &mut [Complex64]| {
            for i in 0..lo.len() {
                let idx = base + i;
                if control_mask == usize::MAX || idx & control_mask == control_mask {
                    std::mem::swap(&mut lo[i], &mut hi[i]);
                }
            }
        };
        #[cfg(feature = "parallel")]
        if par.is_parallel() && self.amps.len() / (2 * stride) >= 8 {
            self.amps
                .par_chunks_mut(2 * stride)
                .enumerate()
                .for_each(|(c, chunk)| {
                    let (lo, hi) = chunk.split_at_mut(stride);
                    swap(c * 2 * stride, lo, hi);
                });
            return;
        }
        let _ = par;
        for (c, chunk) in self.amps.chunks_mut(2 * stride).enumerate() {
            let (lo, hi) = chunk.split_at_mut(stride);
            swap(c * 2 * stride, lo, hi);
        }
    }

    /// Dense gate over a gathered index group, out of place.
    fn composite(&mut self, qubits: &[usize], matrix: &CMat, par: Parallelism) {
        let k = qubits.len();
        let masks: Vec<usize> = qubits.iter().map(|&q| self.bit(q)).collect();
        let union: usize = masks.iter().sum();
        let amps = &self.amps;
        let value = |i: usize| -> Complex64 {
            let mut row = 0usize;
            for (j, &mask) in masks.iter().enumerate() {
                if i & mask != 0 {
                    row |= 1 << (k - 1 - j);
                }
            }
            let cleared = i & !union;
            let mut acc = Complex64::new(0.0, 0.0);
            for col in 0..(1 << k) {
                let mut src = cleared;
                for (j, &mask) in masks.iter().enumerate() {
                    if col & (1 << (k - 1 - j)) != 0 {
                        src |= mask;
                    }
                }
                acc += matrix[(row, col)] * amps[src];
            }
            acc
        };
        #[cfg(feature = "parallel")]
        if par.is_parallel() {
            let new: Vec<Complex64> = (0..amps.len()).into_par_iter().map(value).collect();
            self.amps = new;
            return;
        }
        let _ = par;
        let new: Vec<Complex64> = (0..amps.len()).map(value).collect();
        self.amps = new;
    }

    /// Applies a whole circuit, checking norm preservation after each gate.
    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        self.apply_circuit_exec(circuit, Parallelism::auto(self.amps.len()))
    }

    pub fn apply_circuit_exec(&mut self, circuit: &Circuit, par: Parallelism) -> Result<()> {
        for (index, gate) in circuit.gates().iter().enumerate() {
            self.apply_gate_exec(gate, par)?;
            let norm_sq = self.norm_sq();
            if (norm_sq - 1.0).abs() > 1e-9 {
                return Err(Error::NormDrift { index, norm_sq });
            }
        }
        Ok(())
    }
}

/// Initial state of a circuit: |x⟩ on the input qubits, |0⟩ on zero
/// ancillas, the declared state on product ancillas.
pub fn prepare(circuit: &Circuit, input_bits: &[bool]) -> Result<StateVector> {
    prepare_with(Limits::default(), circuit, input_bits)
}

pub fn prepare_with(limits: Limits, circuit: &Circuit, input_bits: &[bool]) -> Result<StateVector> {
    let n = circuit.n_qubits();
    if n > limits.max_qubits {
        return Err(Error::ResourceLimit {
            what: "statevector",
            needed: n,
            cap: limits.max_qubits,
        });
    }
    let inputs = circuit.input_qubits();
    if inputs.len() != input_bits.len() {
        return Err(Error::Contract(format!(
            "{} input bits for {} input qubits",
            input_bits.len(),
            inputs.len()
        )));
    }
    let mut next_input = 0usize;
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for q in 0..n {
        let (s0, s1) = match circuit.role(q) {
            Role::Input => {
                let bit = input_bits[next_input];
                next_input += 1;
                if bit {
                    (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
                } else {
                    (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
                }
            }
            Role::Zero => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            Role::Product(state) => (state[0], state[1]),
        };
        let mut next = vec![Complex64::new(0.0, 0.0); amps.len() * 2];
        for (i, &a) in amps.iter().enumerate() {
            next[2 * i] = a * s0;
            next[2 * i + 1] = a * s1;
        }
        amps = next;
    }
    Ok(StateVector { n, amps })
}

/// Prepares, runs and returns the final state.
pub fn run(circuit: &Circuit, input_bits: &[bool]) -> Result<StateVector> {
    circuit.validate()?;
    let mut state = prepare(circuit, input_bits)?;
    state.apply_circuit(circuit)?;
    Ok(state)
}

fn subset_outcome(n: usize, idx: usize, subset: &[usize]) -> usize {
    let mut out = 0usize;
    for &q in subset {
        out = (out << 1) | ((idx >> (n - 1 - q)) & 1);
    }
    out
}

fn check_subset(circuit: &Circuit, subset: &[usize]) -> Result<()> {
    let mut seen = vec![false; circuit.n_qubits()];
    for &q in subset {
        if q >= circuit.n_qubits() {
            return Err(Error::Contract(format!("qubit {q} out of range")));
        }
        if seen[q] {
            return Err(Error::Contract(format!("duplicate qubit {q} in subset")));
        }
        seen[q] = true;
    }
    Ok(())
}

/// Exact measurement distribution over a qubit subset; other qubits are
/// marginalized by summing squared magnitudes.
pub fn output_distribution(
    circuit: &Circuit,
    input_bits: &[bool],
    subset: &[usize],
) -> Result<Distribution> {
    check_subset(circuit, subset)?;
    let state = run(circuit, input_bits)?;
    let n = circuit.n_qubits();
    let mut probs = vec![0.0; 1 << subset.len()];
    for (idx, amp) in state.amplitudes().iter().enumerate() {
        probs[subset_outcome(n, idx, subset)] += amp.norm_sqr();
    }
    Distribution::new(subset.to_vec(), probs)
}

/// A conditioned measurement distribution together with the probability of
/// the condition itself.
#[derive(Clone, Debug)]
pub struct Conditional {
    pub probability: f64,
    pub distribution: Distribution,
}

/// Distribution over `target` given that measuring `cond_qubits` yielded
/// `cond_bits`, by exact projection and renormalization.
pub fn conditional_distribution(
    circuit: &Circuit,
    input_bits: &[bool],
    cond_qubits: &[usize],
    cond_bits: &[bool],
    target: &[usize],
) -> Result<Conditional> {
    check_subset(circuit, cond_qubits)?;
    check_subset(circuit, target)?;
    if cond_qubits.len() != cond_bits.len() {
        return Err(Error::Contract(
            "condition qubits and bits differ in length".into(),
        ));
    }
    let state = run(circuit, input_bits)?;
    let n = circuit.n_qubits();
    let want = crate::bits::index_of(cond_bits);
    let mut probability = 0.0;
    let mut probs = vec![0.0; 1 << target.len()];
    for (idx, amp) in state.amplitudes().iter().enumerate() {
        if subset_outcome(n, idx, cond_qubits) == want {
            let p = amp.norm_sqr();
            probability += p;
            probs[subset_outcome(n, idx, target)] += p;
        }
    }
    if probability <= 1e-12 {
        return Err(Error::Unconditionable { probability });
    }
    for p in &mut probs {
        *p /= probability;
    }
    Ok(Conditional {
        probability,
        distribution: Distribution::new(target.to_vec(), probs)?,
    })
}

/// Projects onto `cond_qubits = cond_bits` and returns the renormalized
/// state of the remaining qubits (ascending order).
pub fn extract_conditioned(
    state: &StateVector,
    cond_qubits: &[usize],
    cond_bits: &[bool],
) -> Result<(f64, StateVector)> {
    let n = state.n_qubits();
    let want = crate::bits::index_of(cond_bits);
    let rest: Vec<usize> = (0..n).filter(|q| !cond_qubits.contains(q)).collect();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << rest.len()];
    let mut probability = 0.0;
    for (idx, amp) in state.amplitudes().iter().enumerate() {
        if subset_outcome(n, idx, cond_qubits) == want {
            probability += amp.norm_sqr();
            amps[subset_outcome(n, idx, &rest)] += amp;
        }
    }
    if probability <= 1e-12 {
        return Err(Error::Unconditionable { probability });
    }
    let scale = probability.sqrt();
    for a in &mut amps {
        *a /= scale;
    }
    Ok((
        probability,
        StateVector {
            n: rest.len(),
            amps,
        },
    ))
}

/// Dense unitary of a whole circuit, built column by column. Guarded at 11
/// qubits; meant for desk-scale equivalence checks.
pub fn full_unitary(circuit: &Circuit) -> Result<CMat> {
    let n = circuit.n_qubits();
    if n > 11 {
        return Err(Error::ResourceLimit {
            what: "full unitary",
            needed: n,
            cap: 11,
        });
    }
    circuit.validate()?;
    let dim = 1usize << n;
    let mut out = CMat::zeros((dim, dim));
    for col in 0..dim {
        let mut state = StateVector::basis(n, col);
        for gate in circuit.gates() {
            state.apply_gate(gate)?;
        }
        for (row, &amp) in state.amplitudes().iter().enumerate() {
            out[(row, col)] = amp;
        }
    }
    Ok(out)
}
