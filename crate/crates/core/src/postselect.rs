//! Classical postselection wrapper: turn samples over `b+2` output bits
//! into conditional-acceptance statistics.
//!
//! An outcome `y` is split by a three-case rule: the all-but-last bits
//! all zero marks a postselection hit (`post = 0`) and the last bit is the
//! answer; anything else sets `post = 1` (and the answer bit to 1, which
//! the conditioning discards).

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::dist::Distribution;
use crate::error::{Error, Result};

/// Filter verdict for one outcome. `post == false` means the postselection
/// measurement read 0, i.e. the sample counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PostselectOutcome {
    pub post: bool,
    pub out: bool,
}

/// The three-case rule on an outcome of length `b+2`.
pub fn filter(y: &[bool]) -> Result<PostselectOutcome> {
    if y.len() < 2 {
        return Err(Error::Contract(format!(
            "postselection filter needs at least 2 bits, got {}",
            y.len()
        )));
    }
    let (last, prefix) = y.split_last().expect("len >= 2");
    if prefix.iter().all(|&b| !b) {
        Ok(PostselectOutcome {
            post: false,
            out: *last,
        })
    } else {
        Ok(PostselectOutcome {
            post: true,
            out: true,
        })
    }
}

/// Exact conditional acceptance from a known distribution over `b+2` bits.
#[derive(Clone, Copy, Debug)]
pub enum ExactAcceptance {
    Value {
        /// `Pr[out = 1 | post = 0]`.
        acceptance: f64,
        /// `Pr[post = 0]`, the sum of the two all-zero-prefix outcomes.
        post_mass: f64,
    },
    NoPostselectionMass,
}

pub fn conditional_acceptance_exact(dist: &Distribution) -> Result<ExactAcceptance> {
    let n = dist.n_bits();
    if n < 2 {
        return Err(Error::Contract(
            "conditional acceptance needs at least 2 outcome bits".into(),
        ));
    }
    let p_one = dist.prob(1); // 0…01
    let p_zero = dist.prob(0); // 0…00
    let post_mass = p_one + p_zero;
    if post_mass == 0.0 {
        return Ok(ExactAcceptance::NoPostselectionMass);
    }
    Ok(ExactAcceptance::Value {
        acceptance: p_one / post_mass,
        post_mass,
    })
}

/// Sampled conditional acceptance with a Wilson 99% interval.
#[derive(Clone, Debug)]
pub enum Acceptance {
    Estimate {
        acceptance: f64,
        wilson_low: f64,
        wilson_high: f64,
        post_zero_events: u64,
        shots: u64,
    },
    /// No sample passed the postselection filter.
    NoPostselectionMass { shots: u64 },
}

/// Two-sided 99% Wilson score interval.
fn wilson_99(successes: u64, trials: u64) -> (f64, f64) {
    let z = 2.575_829_303_548_900_4_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Acceptance statistics from filtered tallies.
pub fn acceptance_from_counts(accepted: u64, post_zero: u64, shots: u64) -> Acceptance {
    if post_zero == 0 {
        return Acceptance::NoPostselectionMass { shots };
    }
    let (lo, hi) = wilson_99(accepted, post_zero);
    Acceptance::Estimate {
        acceptance: accepted as f64 / post_zero as f64,
        wilson_low: lo,
        wilson_high: hi,
        post_zero_events: post_zero,
        shots,
    }
}

/// Draws `shots` outcomes from `sample` (seeded) and filters them.
pub fn conditional_acceptance_sampled(
    mut sample: impl FnMut(&mut ChaCha12Rng) -> Vec<bool>,
    shots: u64,
    seed: u64,
) -> Result<Acceptance> {
    if shots == 0 {
        return Err(Error::Contract("need at least one shot".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut post_zero = 0u64;
    let mut accepted = 0u64;
    for _ in 0..shots {
        let y = sample(&mut rng);
        let verdict = filter(&y)?;
        if !verdict.post {
            post_zero += 1;
            if verdict.out {
                accepted += 1;
            }
        }
    }
    Ok(acceptance_from_counts(accepted, post_zero, shots))
}
