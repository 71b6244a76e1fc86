//! Builders for the circuit families under study.

mod compress;
mod fold;
mod magic;
mod or_reduction;
mod teleport;

pub use compress::{compress_depth3, demo_circuit, with_output_bookkeeping, CompressedCircuit};
pub use fold::{
    commuting_equivalent, conjugate_commuting, en, en_prime, en_prime_fanout, middle_gates,
};
pub use magic::{magic_compile, magic_state, MagicCompiled};
pub use or_reduction::{
    decompose_fanout_or, fanout, fanout_into, or_middle, or_output_count, or_reduction,
    or_reduction_fanout, OrVariant,
};
pub use teleport::teleport_gadget;
