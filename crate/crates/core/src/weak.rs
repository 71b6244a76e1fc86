//! Weak simulation of diagonal sandwich circuits `(F†⊗H^l)·D·(F⊗H^l)`.
//!
//! When `D` is diagonal in the Z basis it only attaches a phase `e^{if(z,w)}`
//! to each basis state `|z⟩|w⟩`, so the output distribution of the sandwich
//! factors into the output distribution of `F` and an `l`-qubit phase-state
//! measurement per branch `z`. Sampling therefore needs one call to an
//! `F`-sampler and one exact `2^l`-dimensional computation per shot, and a
//! sampler with per-outcome additive error `ε` induces at most `2^t·ε`
//! additive error on the sandwich.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::bits;
use crate::circuit::Circuit;
use crate::dist::{draw, Counts, Distribution};
use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::gate::Gate;
use crate::pauli::OUTPUT_CAP;
use crate::phase::DyadicPhase;
use crate::statevector;

/// Per-gate phase contributions of a Z-diagonal circuit. `f(bits)` is the
/// exact dyadic sum of the contributions picked out by each gate's bits.
#[derive(Clone, Debug)]
pub struct DiagonalPhaseTable {
    n_qubits: usize,
    gates: Vec<DiagGate>,
}

#[derive(Clone, Debug)]
enum DiagGate {
    /// Phase applied when the qubit reads 1.
    Bit { q: usize, phase: DyadicPhase },
    /// Phase applied when both qubits read 1.
    PairBits {
        a: usize,
        b: usize,
        phase: DyadicPhase,
    },
    /// Arbitrary diagonal composite: one phase per local basis index.
    Table {
        qubits: Vec<usize>,
        phases: Vec<DyadicPhase>,
    },
}

impl DiagonalPhaseTable {
    /// Compiles a circuit of Z-diagonal gates, naming the first offender
    /// otherwise. Composite diagonals must be diagonal to 1e-12 and their
    /// entries must sit on dyadic phases to 1e-9.
    pub fn new(d: &Circuit) -> Result<DiagonalPhaseTable> {
        let mut gates = Vec::with_capacity(d.gates().len());
        for (index, gate) in d.gates().iter().enumerate() {
            match gate {
                Gate::R { q, phase } => gates.push(DiagGate::Bit {
                    q: *q,
                    phase: *phase,
                }),
                Gate::CZ(a, b) => gates.push(DiagGate::PairBits {
                    a: *a,
                    b: *b,
                    phase: DyadicPhase::pi(),
                }),
                Gate::CR {
                    control,
                    target,
                    phase,
                } => gates.push(DiagGate::PairBits {
                    a: *control,
                    b: *target,
                    phase: *phase,
                }),
                Gate::U { qubits, matrix } => {
                    let dim = matrix.nrows();
                    for r in 0..dim {
                        for c in 0..dim {
                            if r != c && matrix[(r, c)].norm() > 1e-12 {
                                return Err(Error::NonDiagonal { index });
                            }
                        }
                    }
                    let mut phases = Vec::with_capacity(dim);
                    for r in 0..dim {
                        let entry = matrix[(r, r)];
                        if (entry.norm() - 1.0).abs() > 1e-9 {
                            return Err(Error::NonDiagonal { index });
                        }
                        let snapped =
                            DyadicPhase::snap(entry.arg(), 1e-9).ok_or_else(|| {
                                Error::Contract(format!(
                                    "gate {index}: diagonal entry {r} is not within 1e-9 of a dyadic phase"
                                ))
                            })?;
                        phases.push(snapped);
                    }
                    gates.push(DiagGate::Table {
                        qubits: qubits.clone(),
                        phases,
                    });
                }
                Gate::H(_) | Gate::X(_) | Gate::Cnot { .. } => {
                    return Err(Error::NonDiagonal { index })
                }
            }
        }
        Ok(DiagonalPhaseTable {
            n_qubits: d.n_qubits(),
            gates,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// The exact phase `f(bits)` of the diagonal entry at `bits`.
    pub fn phase(&self, bits: &[bool]) -> DyadicPhase {
        debug_assert_eq!(bits.len(), self.n_qubits);
        let mut acc = DyadicPhase::ZERO;
        for gate in &self.gates {
            match gate {
                DiagGate::Bit { q, phase } => {
                    if bits[*q] {
                        acc += *phase;
                    }
                }
                DiagGate::PairBits { a, b, phase } => {
                    if bits[*a] && bits[*b] {
                        acc += *phase;
                    }
                }
                DiagGate::Table { qubits, phases } => {
                    let mut idx = 0usize;
                    for &q in qubits {
                        idx = (idx << 1) | usize::from(bits[q]);
                    }
                    acc += phases[idx];
                }
            }
        }
        acc
    }
}

/// `f(z,w)`: the phase `D` attaches to `|z⟩|w⟩`, with `z` on the first
/// qubits and `w` on the rest.
pub fn phase_f(d: &Circuit, z: &[bool], w: &[bool]) -> Result<DyadicPhase> {
    if z.len() + w.len() != d.n_qubits() {
        return Err(Error::Contract(format!(
            "{}+{} bits for a {}-qubit diagonal circuit",
            z.len(),
            w.len(),
            d.n_qubits()
        )));
    }
    let table = DiagonalPhaseTable::new(d)?;
    let mut bits = z.to_vec();
    bits.extend_from_slice(w);
    Ok(table.phase(&bits))
}

/// In-place `H^{⊗l}` over a `2^l` vector.
fn walsh_hadamard(v: &mut [Complex64]) {
    let scale = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut h = 1;
    while h < v.len() {
        let mut base = 0;
        while base < v.len() {
            for i in base..base + h {
                let a = v[i];
                let b = v[i + h];
                v[i] = (a + b) * scale;
                v[i + h] = (a - b) * scale;
            }
            base += 2 * h;
        }
        h *= 2;
    }
}

fn branch_probs(table: &DiagonalPhaseTable, z0: &[bool], l: usize) -> Vec<f64> {
    let norm = 1.0 / ((1u64 << l) as f64).sqrt();
    let mut v: Vec<Complex64> = (0..1usize << l)
        .map(|w| {
            let mut bits = z0.to_vec();
            bits.extend(bits::bits_of(w, l));
            table.phase(&bits).phase_factor() * norm
        })
        .collect();
    walsh_hadamard(&mut v);
    v.iter().map(|a| a.norm_sqr()).collect()
}

/// Measurement distribution of the `l`-qubit state
/// `2^{-l/2}·Σ_w e^{if(z0,w)} H^{⊗l}|w⟩`, computed exactly in `2^l`
/// dimensions. The distribution is labeled with the last `l` qubits of `d`.
pub fn small_output_distribution(z0: &[bool], d: &Circuit, l: usize) -> Result<Distribution> {
    if l > OUTPUT_CAP {
        return Err(Error::ResourceLimit {
            what: "phase-state output",
            needed: l,
            cap: OUTPUT_CAP,
        });
    }
    if z0.len() + l != d.n_qubits() {
        return Err(Error::Contract(format!(
            "{} branch bits plus {l} outputs for a {}-qubit diagonal circuit",
            z0.len(),
            d.n_qubits()
        )));
    }
    let table = DiagonalPhaseTable::new(d)?;
    Distribution::new(
        (z0.len()..z0.len() + l).collect(),
        branch_probs(&table, z0, l),
    )
}

/// A sandwich circuit `(F†⊗H^l)·D·(F⊗H^l)`: `F` on its own register, `l`
/// fresh output ancillas, and a Z-diagonal `D` across `F`'s output qubits
/// and the ancillas.
#[derive(Clone, Debug)]
pub struct SandwichSpec {
    f: Circuit,
    d: Circuit,
    l: usize,
}

impl SandwichSpec {
    pub fn new(f: Circuit, d: Circuit, l: usize) -> Result<SandwichSpec> {
        f.validate()?;
        d.validate()?;
        if l > OUTPUT_CAP {
            return Err(Error::ResourceLimit {
                what: "sandwich outputs",
                needed: l,
                cap: OUTPUT_CAP,
            });
        }
        let t = f.outputs().len();
        if d.n_qubits() != t + l {
            return Err(Error::Contract(format!(
                "diagonal circuit has {} qubits, expected t+l = {}",
                d.n_qubits(),
                t + l
            )));
        }
        DiagonalPhaseTable::new(&d)?;
        Ok(SandwichSpec { f, d, l })
    }

    pub fn f(&self) -> &Circuit {
        &self.f
    }

    pub fn d(&self) -> &Circuit {
        &self.d
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// Number of `F` output qubits feeding `D`.
    pub fn t(&self) -> usize {
        self.f.outputs().len()
    }

    /// The output ancillas of the assembled circuit.
    pub fn output_ancillas(&self) -> Vec<usize> {
        let n = self.f.n_qubits();
        (n..n + self.l).collect()
    }

    /// The whole sandwich as one circuit: `F`, Hadamards on `l` fresh
    /// ancillas, `D` across `F`'s outputs and the ancillas, Hadamards
    /// again, then `F†`.
    pub fn assembled(&self) -> Circuit {
        let t = self.t();
        let mut c = self.f.clone();
        c.set_postselect(Vec::new());
        let ancillas = c.grow(self.l);
        for &q in &ancillas {
            c.push(Gate::h(q));
        }
        let mut map: Vec<usize> = self.f.outputs().to_vec();
        map.extend(ancillas.iter().copied());
        let embedded = self
            .d
            .embed(&map, c.n_qubits())
            .expect("d register fits by construction");
        debug_assert_eq!(self.d.n_qubits(), t + self.l);
        c.extend(embedded.gates().iter().cloned());
        for &q in &ancillas {
            c.push(Gate::h(q));
        }
        c.extend(self.f.inverse().gates().iter().cloned());
        c.set_outputs(ancillas);
        c
    }
}

/// Exact output distribution of the sandwich: the branch probabilities
/// `|α_{x,z}|²` come from the oracle marginal of `F`, each branch's output
/// distribution from the `2^l` phase-state computation.
pub fn sandwich_exact(spec: &SandwichSpec, x: &[bool]) -> Result<Distribution> {
    let t = spec.t();
    let branch = statevector::output_distribution(&spec.f, x, spec.f.outputs())?;
    let table = DiagonalPhaseTable::new(&spec.d)?;
    let mut probs = vec![0.0; 1 << spec.l];
    for z in 0..1usize << t {
        let pz = branch.prob(z);
        if pz == 0.0 {
            continue;
        }
        let q = branch_probs(&table, &bits::bits_of(z, t), spec.l);
        for (acc, qy) in probs.iter_mut().zip(q) {
            *acc += pz * qy;
        }
    }
    Distribution::new(spec.output_ancillas(), probs)
}

/// A sampler standing in for weak simulation of `F`: given input bits it
/// draws an outcome over `F`'s output qubits, promising per-outcome
/// additive accuracy [`FSampler::accuracy`].
pub trait FSampler: Sync {
    fn output_len(&self) -> usize;
    /// Declared per-outcome additive error bound (not verified here).
    fn accuracy(&self) -> f64;
    fn sample(&self, x: &[bool], rng: &mut ChaCha12Rng) -> Vec<bool>;
}

/// Exact sampler backed by the dense oracle, for one fixed input.
pub struct OracleSampler {
    x: Vec<bool>,
    t: usize,
    cdf: Vec<f64>,
}

impl OracleSampler {
    pub fn new(f: &Circuit, x: &[bool]) -> Result<OracleSampler> {
        let dist = statevector::output_distribution(f, x, f.outputs())?;
        Ok(OracleSampler {
            x: x.to_vec(),
            t: f.outputs().len(),
            cdf: dist.cdf(),
        })
    }
}

impl FSampler for OracleSampler {
    fn output_len(&self) -> usize {
        self.t
    }

    fn accuracy(&self) -> f64 {
        0.0
    }

    fn sample(&self, x: &[bool], rng: &mut ChaCha12Rng) -> Vec<bool> {
        debug_assert_eq!(x, self.x.as_slice());
        bits::bits_of(draw(&self.cdf, rng), self.t)
    }
}

struct ShotState {
    counts: Vec<u64>,
    cache: HashMap<usize, Vec<f64>>,
}

/// Samples the sandwich: per shot, draw `z0` from the `F`-sampler, compute
/// the branch's exact `l`-qubit distribution, draw the outcome from it.
/// Shots use independent derived streams of the master seed, so counts do
/// not depend on the thread schedule.
pub fn weak_sample(
    spec: &SandwichSpec,
    x: &[bool],
    sampler: &dyn FSampler,
    seed: u64,
    shots: u64,
) -> Result<Counts> {
    weak_sample_exec(
        spec,
        x,
        sampler,
        seed,
        shots,
        Parallelism::auto(shots as usize),
    )
}

pub fn weak_sample_exec(
    spec: &SandwichSpec,
    x: &[bool],
    sampler: &dyn FSampler,
    seed: u64,
    shots: u64,
    par: Parallelism,
) -> Result<Counts> {
    let t = spec.t();
    if sampler.output_len() != t {
        return Err(Error::Contract(format!(
            "sampler yields {} bits, sandwich needs t = {t}",
            sampler.output_len()
        )));
    }
    let table = DiagonalPhaseTable::new(&spec.d)?;
    let l = spec.l;

    let shot = |state: &mut ShotState, index: u64| -> Result<()> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(index.wrapping_add(1));
        let z0 = sampler.sample(x, &mut rng);
        if z0.len() != t {
            return Err(Error::Contract(format!(
                "sampler outcome has {} bits, expected {t}",
                z0.len()
            )));
        }
        let key = bits::index_of(&z0);
        let cdf = state.cache.entry(key).or_insert_with(|| {
            let probs = branch_probs(&table, &z0, l);
            let mut acc = 0.0;
            probs
                .iter()
                .map(|&p| {
                    acc += p;
                    acc
                })
                .collect()
        });
        state.counts[draw(cdf, &mut rng)] += 1;
        Ok(())
    };

    let fresh = || ShotState {
        counts: vec![0u64; 1 << l],
        cache: HashMap::new(),
    };
    let merged: Result<Vec<u64>> = {
        #[cfg(feature = "parallel")]
        if par.is_parallel() {
            (0..shots)
                .into_par_iter()
                .fold(
                    || Ok(fresh()),
                    |acc: Result<ShotState>, index| {
                        let mut state = acc?;
                        shot(&mut state, index)?;
                        Ok(state)
                    },
                )
                .map(|acc| acc.map(|s| s.counts))
                .reduce(
                    || Ok(vec![0u64; 1 << l]),
                    |a, b| {
                        let mut a = a?;
                        for (x, y) in a.iter_mut().zip(b?) {
                            *x += y;
                        }
                        Ok(a)
                    },
                )
        } else {
            let mut state = fresh();
            for index in 0..shots {
                shot(&mut state, index)?;
            }
            Ok(state.counts)
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = par;
            let mut state = fresh();
            for index in 0..shots {
                shot(&mut state, index)?;
            }
            Ok(state.counts)
        }
    };
    Ok(Counts::new(spec.output_ancillas(), merged?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Role;
    use crate::exec::Parallelism;

    fn all_hadamard_f(n: usize) -> Circuit {
        let mut f = Circuit::new(n);
        for q in 0..n {
            f.push(Gate::h(q));
        }
        f.set_outputs((0..n).collect());
        f
    }

    #[test]
    fn phase_f_of_cz() {
        let mut d = Circuit::new(2);
        d.push(Gate::cz(0, 1));
        for (z, w, want) in [
            (false, false, DyadicPhase::ZERO),
            (true, false, DyadicPhase::ZERO),
            (false, true, DyadicPhase::ZERO),
            (true, true, DyadicPhase::pi()),
        ] {
            assert_eq!(phase_f(&d, &[z], &[w]).unwrap(), want);
        }
    }

    #[test]
    fn phase_f_of_controlled_quarter() {
        let mut d = Circuit::new(2);
        d.push(Gate::cr(0, 1, 1, 2).unwrap());
        assert_eq!(
            phase_f(&d, &[true], &[true]).unwrap(),
            DyadicPhase::new(1, 2).unwrap()
        );
    }

    #[test]
    fn zero_branch_sees_no_controlled_phase() {
        let mut d = Circuit::new(3);
        d.push(Gate::cr(0, 2, 1, 3).unwrap());
        d.push(Gate::cr(1, 2, -1, 2).unwrap());
        for w in [false, true] {
            assert!(phase_f(&d, &[false, false], &[w]).unwrap().is_zero());
        }
    }

    #[test]
    fn composite_diagonals_are_snapped_exactly() {
        let mut m = crate::linalg::eye(4);
        m[(3, 3)] = DyadicPhase::new(1, 3).unwrap().phase_factor();
        let mut d = Circuit::new(2);
        d.push(Gate::composite(vec![0, 1], m).unwrap());
        assert_eq!(
            phase_f(&d, &[true], &[true]).unwrap(),
            DyadicPhase::new(1, 3).unwrap()
        );
        let mut h = Circuit::new(2);
        h.push(Gate::h(0));
        assert!(matches!(
            phase_f(&h, &[false], &[false]),
            Err(Error::NonDiagonal { index: 0 })
        ));
    }

    #[test]
    fn trivial_phase_concentrates_on_zero() {
        let d = Circuit::new(3);
        let dist = small_output_distribution(&[false], &d, 2).unwrap();
        assert!((dist.prob(0) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn pi_phase_flips_the_single_output() {
        // f(z0, 1) = π turns |+⟩ into |−⟩ before the final Hadamard.
        let mut d = Circuit::new(1);
        d.push(Gate::z(0));
        let dist = small_output_distribution(&[], &d, 1).unwrap();
        assert!(dist.prob(0).abs() <= 1e-12);
        assert!((dist.prob(1) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn branch_distributions_normalize() {
        let mut d = Circuit::new(4);
        d.push(Gate::cr(0, 2, 1, 3).unwrap());
        d.push(Gate::cr(1, 3, -1, 2).unwrap());
        d.push(Gate::cz(2, 3));
        d.push(Gate::r(3, 1, 3).unwrap());
        for z in 0..4usize {
            let dist = small_output_distribution(&bits::bits_of(z, 2), &d, 2).unwrap();
            let sum: f64 = dist.probs().iter().sum();
            assert!((sum - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn empty_diagonal_gives_all_zero_outputs() {
        let f = all_hadamard_f(3);
        let d = Circuit::new(3 + 2);
        let spec = SandwichSpec::new(f, d, 2).unwrap();
        let dist = sandwich_exact(&spec, &[true, false, true]).unwrap();
        assert!((dist.prob(0) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn sandwich_exact_matches_oracle_on_iqp_instance() {
        let f = all_hadamard_f(3);
        let mut d = Circuit::new(5);
        d.push(Gate::cr(0, 3, 1, 2).unwrap());
        d.push(Gate::cr(1, 4, 1, 3).unwrap());
        d.push(Gate::cz(2, 3));
        d.push(Gate::r(3, 1, 1).unwrap());
        d.push(Gate::cr(0, 4, -1, 2).unwrap());
        let spec = SandwichSpec::new(f, d, 2).unwrap();
        for x in 0..8usize {
            let input = bits::bits_of(x, 3);
            let exact = sandwich_exact(&spec, &input).unwrap();
            let assembled = spec.assembled();
            let oracle =
                statevector::output_distribution(&assembled, &input, assembled.outputs()).unwrap();
            assert!(exact.max_abs_diff(&oracle).unwrap() <= 1e-12, "x = {x}");
        }
    }

    #[test]
    fn deterministic_f_reduces_to_one_branch() {
        // F flips its single qubit, so z0 = x ⊕ 1 always.
        let mut f = Circuit::new(1);
        f.push(Gate::x(0));
        f.set_outputs(vec![0]);
        let mut d = Circuit::new(2);
        d.push(Gate::cr(0, 1, 1, 2).unwrap());
        let spec = SandwichSpec::new(f, d.clone(), 1).unwrap();
        let sampler = OracleSampler::new(spec.f(), &[false]).unwrap();
        let counts = weak_sample(&spec, &[false], &sampler, 11, 20_000).unwrap();
        let emp = counts.empirical().unwrap();
        let want = small_output_distribution(&[true], &d, 1).unwrap();
        assert!(emp.total_variation(&want).unwrap() <= 0.02);
    }

    #[test]
    fn weak_sampling_is_schedule_independent() {
        let f = all_hadamard_f(2);
        let mut d = Circuit::new(3);
        d.push(Gate::cr(0, 2, 1, 2).unwrap());
        d.push(Gate::cr(1, 2, 1, 1).unwrap());
        let spec = SandwichSpec::new(f, d, 1).unwrap();
        let sampler = OracleSampler::new(spec.f(), &[false, false]).unwrap();
        let seq = weak_sample_exec(
            &spec,
            &[false, false],
            &sampler,
            5,
            5_000,
            Parallelism::Sequential,
        )
        .unwrap();
        let par = weak_sample_exec(
            &spec,
            &[false, false],
            &sampler,
            5,
            5_000,
            Parallelism::Rayon,
        )
        .unwrap();
        assert_eq!(seq, par);
    }

    /// A sampler with a known per-outcome bias keeps the induced error
    /// under 2^t·ε; checked by exact enumeration of the corrupted mixture.
    #[test]
    fn corrupted_sampler_bound() {
        let f = all_hadamard_f(1);
        let mut d = Circuit::new(2);
        d.push(Gate::cr(0, 1, 1, 2).unwrap());
        let spec = SandwichSpec::new(f, d.clone(), 1).unwrap();
        let exact = sandwich_exact(&spec, &[false]).unwrap();
        let eps = 0.05;
        // True branch distribution is (1/2, 1/2); corrupt by ±ε.
        let corrupted = [0.5 + eps, 0.5 - eps];
        let mut mixture = [0.0; 2];
        for (z, &pz) in corrupted.iter().enumerate() {
            let q = small_output_distribution(&bits::bits_of(z, 1), &d, 1).unwrap();
            for (acc, &qy) in mixture.iter_mut().zip(q.probs()) {
                *acc += pz * qy;
            }
        }
        let bound = 2f64 * eps; // 2^t·ε with t = 1.
        for (y, &mixed) in mixture.iter().enumerate() {
            assert!((mixed - exact.prob(y)).abs() <= bound + 1e-12);
        }
    }

    #[test]
    fn phase_table_matches_dense_diagonal_entries() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(19);
        for _ in 0..8 {
            let d = crate::rand_circuits::random_diagonal_circuit(&mut rng, 3, 6, 3);
            let table = DiagonalPhaseTable::new(&d).unwrap();
            let u = statevector::full_unitary(&d).unwrap();
            for idx in 0..8usize {
                let got = table.phase(&bits::bits_of(idx, 3)).phase_factor();
                assert!(
                    (got - u[(idx, idx)]).norm() <= 1e-12,
                    "entry {idx}: {got} vs {}",
                    u[(idx, idx)]
                );
            }
        }
    }

    #[test]
    fn wrong_length_sampler_is_a_contract_error() {
        struct Bad;
        impl FSampler for Bad {
            fn output_len(&self) -> usize {
                2
            }
            fn accuracy(&self) -> f64 {
                0.0
            }
            fn sample(&self, _x: &[bool], _rng: &mut ChaCha12Rng) -> Vec<bool> {
                vec![false; 5]
            }
        }
        let f = all_hadamard_f(2);
        let d = Circuit::new(3);
        let spec = SandwichSpec::new(f, d, 1).unwrap();
        let err = weak_sample(&spec, &[false, false], &Bad, 1, 10).unwrap_err();
        assert!(matches!(err, Error::Contract(_)), "{err}");
    }

    #[test]
    fn accepted_circuits_are_dense_diagonal() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(17);
        for _ in 0..10 {
            let d = crate::rand_circuits::random_diagonal_circuit(&mut rng, 4, 8, 3);
            DiagonalPhaseTable::new(&d).unwrap();
            let u = statevector::full_unitary(&d).unwrap();
            for ((r, c), entry) in u.indexed_iter() {
                if r != c {
                    assert!(entry.norm() <= 1e-12, "off-diagonal at ({r},{c})");
                }
            }
        }
    }

    #[test]
    fn assembled_circuit_uses_fresh_output_ancillas() {
        let mut f = Circuit::new(2);
        f.set_role(1, Role::Zero);
        f.push(Gate::h(0));
        f.push(Gate::cnot(0, 1));
        f.set_outputs(vec![1, 0]);
        let mut d = Circuit::new(3);
        d.push(Gate::cr(1, 2, 1, 1).unwrap());
        let spec = SandwichSpec::new(f, d, 1).unwrap();
        let assembled = spec.assembled();
        assert_eq!(assembled.n_qubits(), 3);
        assert_eq!(assembled.outputs(), &[2]);
    }
}
