//! Executable simulations and reductions between #CSP problems.
//!
//! Each transformation produces ordinary [`Instance`](crate::Instance)s and
//! states how `Z` of the source relates to `Z` of what it builds, so every
//! step can be replayed against the brute-force oracle.

mod gadget;
mod interpolate;
mod mobius;
mod parity;
mod pinning;
mod project;

pub use gadget::{gram_instance, gram_matrix};
pub use interpolate::{interpolation_reduce, Interpolation};
pub use mobius::{
    mobius_pinning_reduce, mobius_table, partitions, symmetric_pinning_reduce_q, DisequalityInstance,
    MobiusTable, MobiusTerm, MobiusTrace, PartitionOfQ, SymmetricPinning, MAX_LATTICE_Q,
};
pub use parity::{
    extract_unary, extract_unary_iterated, parity_chain, symmetrize_parity, Extraction, ParityGadget,
    SymmetrizedParity,
};
pub use pinning::{pinning_reduce_boolean, BooleanPinning, PinningPath};
pub use project::{
    identify_positions, pin_coordinate, project, project_out, simulate_pinned_instance,
    simulate_projection_instance,
};

use crate::instance::Instance;

/// A catalog name not yet used in `instance`, derived from `base`.
pub(crate) fn fresh_name(instance: &Instance, base: &str) -> String {
    if !instance.functions().contains_key(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}_{i}"))
        .find(|n| !instance.functions().contains_key(n))
        .expect("unbounded search")
}
