//! Companion problems: graph-homomorphism partition functions `Z_H(G)` with
//! the Bulatov–Grohe tractability test, and weight enumerators of binary
//! linear codes with the cut-space identity linking them to the Ising model.

mod code;
mod graph;
mod hom;

pub use code::{incidence_code, verify_cut_identity, weight_enumerator, CutCheck, GeneratorMatrix};
pub use graph::Graph;
pub use hom::{
    bulatov_grohe_classify, eval_graph_hom, hom_instance, ising_direct, rank_one_closed_form, HomComponent,
    HomVerdict, TargetMatrix,
};
