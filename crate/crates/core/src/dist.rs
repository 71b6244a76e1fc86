//! Output probability distributions over a designated qubit subset, plus
//! seeded sampling and total-variation distance.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};

/// Probabilities over the outcomes of Z-measurements on an ordered qubit
/// list. Outcome index bit `i` (msb first) is the measured value of
/// `qubits[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    qubits: Vec<usize>,
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(qubits: Vec<usize>, probs: Vec<f64>) -> Result<Distribution> {
        if probs.len() != 1 << qubits.len() {
            return Err(Error::Contract(format!(
                "{} probabilities for {} qubits",
                probs.len(),
                qubits.len()
            )));
        }
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|&p| !(-1e-9..=1.0 + 1e-9).contains(&p)) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Contract(format!(
                "probabilities out of range or not normalized (sum {sum})"
            )));
        }
        Ok(Distribution { qubits, probs })
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn n_bits(&self) -> usize {
        self.qubits.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, outcome: usize) -> f64 {
        self.probs[outcome]
    }

    pub fn prob_of_bits(&self, outcome: &[bool]) -> f64 {
        self.probs[bits::index_of(outcome)]
    }

    /// Nonzero outcomes as bitstring → probability.
    pub fn outcome_map(&self) -> BTreeMap<String, f64> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != 0.0)
            .map(|(i, &p)| (bits::format_index(i, self.qubits.len()), p))
            .collect()
    }

    /// Marginalizes onto a subset of this distribution's qubits.
    pub fn marginal(&self, keep: &[usize]) -> Result<Distribution> {
        let positions: Vec<usize> = keep
            .iter()
            .map(|q| {
                self.qubits
                    .iter()
                    .position(|x| x == q)
                    .ok_or_else(|| Error::Contract(format!("qubit {q} not in distribution")))
            })
            .collect::<Result<_>>()?;
        let l = self.qubits.len();
        let mut probs = vec![0.0; 1 << keep.len()];
        for (idx, &p) in self.probs.iter().enumerate() {
            let mut out = 0usize;
            for &pos in &positions {
                out = (out << 1) | ((idx >> (l - 1 - pos)) & 1);
            }
            probs[out] += p;
        }
        Ok(Distribution {
            qubits: keep.to_vec(),
            probs,
        })
    }

    /// Total variation distance `(1/2)·Σ|p-q|`. The two distributions must
    /// describe outcome strings of the same length.
    pub fn total_variation(&self, other: &Distribution) -> Result<f64> {
        if self.n_bits() != other.n_bits() {
            return Err(Error::Contract(format!(
                "total variation between {}-bit and {}-bit outcomes",
                self.n_bits(),
                other.n_bits()
            )));
        }
        Ok(self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(p, q)| (p - q).abs())
            .sum::<f64>()
            / 2.0)
    }

    /// Largest per-outcome probability difference.
    pub fn max_abs_diff(&self, other: &Distribution) -> Result<f64> {
        if self.n_bits() != other.n_bits() {
            return Err(Error::Contract("outcome lengths differ".into()));
        }
        Ok(self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max))
    }

    /// Draws `shots` outcomes with a deterministic seeded generator.
    pub fn sample(&self, seed: u64, shots: u64) -> Counts {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut counts = vec![0u64; self.probs.len()];
        let cdf = self.cdf();
        for _ in 0..shots {
            counts[draw(&cdf, &mut rng)] += 1;
        }
        Counts {
            qubits: self.qubits.clone(),
            counts,
        }
    }

    pub(crate) fn cdf(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.probs
            .iter()
            .map(|&p| {
                acc += p;
                acc
            })
            .collect()
    }
}

/// One draw by inverse-CDF; the final bucket absorbs rounding slack.
pub(crate) fn draw(cdf: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.gen();
    match cdf.binary_search_by(|probe| probe.partial_cmp(&u).unwrap()) {
        Ok(i) | Err(i) => i.min(cdf.len() - 1),
    }
}

/// Outcome tallies from a sampling run.
#[derive(Clone, Debug, PartialEq)]
pub struct Counts {
    qubits: Vec<usize>,
    counts: Vec<u64>,
}

impl Counts {
    pub fn new(qubits: Vec<usize>, counts: Vec<u64>) -> Counts {
        Counts { qubits, counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn outcome_map(&self) -> BTreeMap<String, u64> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (bits::format_index(i, self.qubits.len()), c))
            .collect()
    }

    /// Empirical distribution of the tallies.
    pub fn empirical(&self) -> Result<Distribution> {
        let total = self.total();
        if total == 0 {
            return Err(Error::Contract("no samples".into()));
        }
        Distribution::new(
            self.qubits.clone(),
            self.counts
                .iter()
                .map(|&c| c as f64 / total as f64)
                .collect(),
        )
    }
}

/// JSON form of a distribution: nonzero outcomes plus the qubit list.
#[derive(Serialize, Deserialize)]
pub struct DistributionDoc {
    pub outcomes: BTreeMap<String, f64>,
    pub qubits: Vec<usize>,
}

impl Distribution {
    pub fn to_doc(&self) -> DistributionDoc {
        DistributionDoc {
            outcomes: self.outcome_map(),
            qubits: self.qubits.clone(),
        }
    }

    pub fn from_doc(doc: &DistributionDoc) -> Result<Distribution> {
        let n = doc.qubits.len();
        let mut probs = vec![0.0; 1 << n];
        for (key, &p) in &doc.outcomes {
            let outcome = bits::parse_bits(key)?;
            if outcome.len() != n {
                return Err(Error::Contract(format!(
                    "outcome {key} has {} bits, expected {n}",
                    outcome.len()
                )));
            }
            probs[bits::index_of(&outcome)] = p;
        }
        Distribution::new(doc.qubits.clone(), probs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("distribution serializes")
    }

    pub fn from_json(text: &str) -> Result<Distribution> {
        let doc: DistributionDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Distribution::from_doc(&doc)
    }
}
