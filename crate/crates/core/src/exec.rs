//! Execution policy for the data-parallel kernels.
//!
//! Every parallel reduction in the crate uses a fixed pairwise tree, so the
//! sequential fallback and the rayon lane produce bitwise identical floats.

/// Whether a kernel may fan out across threads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    /// Use the rayon pool. Without the `parallel` feature this falls back
    /// to sequential execution.
    Rayon,
}

impl Parallelism {
    /// Picks the rayon lane when it is compiled in and the problem is big
    /// enough to amortize the fork cost.
    pub fn auto(work_items: usize) -> Parallelism {
        if cfg!(feature = "parallel") && work_items >= (1 << 14) {
            Parallelism::Rayon
        } else {
            Parallelism::Sequential
        }
    }

    pub fn is_parallel(self) -> bool {
        match self {
            Parallelism::Sequential => false,
            Parallelism::Rayon => cfg!(feature = "parallel"),
        }
    }
}

/// Caps the global thread pool (first call wins). Returns false when the
/// parallel lane is compiled out or the pool was already built.
pub fn configure_threads(n: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = n;
        false
    }
}

const TREE_LEAF: usize = 1 << 10;

/// Sum of `f(i)` for `i` in `lo..hi`, reduced over a fixed halving tree.
/// The split points depend only on the range, never on the thread schedule.
pub fn tree_sum_by<F>(lo: usize, hi: usize, par: Parallelism, f: &F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    if hi - lo <= TREE_LEAF {
        return (lo..hi).map(f).sum();
    }
    let mid = lo + (hi - lo) / 2;
    #[cfg(feature = "parallel")]
    if par.is_parallel() {
        let (a, b) = rayon::join(
            || tree_sum_by(lo, mid, par, f),
            || tree_sum_by(mid, hi, par, f),
        );
        return a + b;
    }
    tree_sum_by(lo, mid, par, f) + tree_sum_by(mid, hi, par, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_sum_is_lane_independent() {
        let f = |i: usize| ((i * 2654435761) % 1000) as f64 * 1e-3 + 0.1;
        let seq = tree_sum_by(0, 100_000, Parallelism::Sequential, &f);
        let par = tree_sum_by(0, 100_000, Parallelism::Rayon, &f);
        assert_eq!(seq.to_bits(), par.to_bits());
    }
}
