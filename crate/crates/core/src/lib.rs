//! Builders and classical simulators for commuting quantum circuits with
//! few output qubits.
//!
//! The crate has three layers:
//!
//! * a circuit IR over the elementary gate set `{H, R(±2π/2^k), ΛZ}` plus
//!   derived gates and explicit small-unitary composites, with exact dyadic
//!   phase bookkeeping, greedy layering, inversion and a JSON interchange
//!   format ([`gate`], [`circuit`], [`phase`], [`format`]);
//! * construction passes that produce the circuit families studied here:
//!   OR reduction in plain and commuting form, teleportation-based depth-3
//!   compression, output folding onto logarithmically many qubits,
//!   conjugation into a 5-local commuting circuit, magic-state compilation
//!   of phase gates, and a fan-out decomposition that isolates all
//!   non-Clifford work in one depth-1 layer ([`constructions`]);
//! * simulators and checkers: a dense statevector oracle that is the ground
//!   truth for everything else ([`statevector`]), strong simulation of
//!   Clifford circuits with product ancillas by Pauli-string conjugation
//!   ([`pauli`]), weak sampling of diagonal sandwich circuits ([`weak`]),
//!   commutativity/locality certification ([`analysis`]) and a classical
//!   postselection harness ([`postselect`]).
//!
//! With the default `parallel` feature the hot loops (amplitude kernels,
//! subset sums, sampling shots, pair checks) run on rayon; reductions use a
//! fixed pairwise tree so results are bitwise identical to the sequential
//! fallback.

pub mod analysis;
pub mod bits;
pub mod circuit;
pub mod constructions;
pub mod dist;
pub mod error;
pub mod exec;
pub mod format;
pub mod gate;
pub mod linalg;
pub mod pauli;
pub mod phase;
pub mod postselect;
pub mod rand_circuits;
pub mod statevector;
pub mod weak;

pub use circuit::{Circuit, LayerDecomposition, Role};
pub use dist::Distribution;
pub use error::{Error, Result};
pub use exec::Parallelism;
pub use gate::Gate;
pub use phase::DyadicPhase;
