//! Chapters of the guide, one module each, so `cargo test --doc` runs every
//! Rust snippet in the book against the current library.

#[doc = include_str!("src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("src/instances.md")]
pub mod instances {}
#[doc = include_str!("src/classification.md")]
pub mod classification {}
#[doc = include_str!("src/evaluation.md")]
pub mod evaluation {}
#[doc = include_str!("src/reductions.md")]
pub mod reductions {}
#[doc = include_str!("src/mobius.md")]
pub mod mobius {}
#[doc = include_str!("src/models.md")]
pub mod models {}
#[doc = include_str!("src/verification.md")]
pub mod verification {}
#[doc = include_str!("src/cli.md")]
pub mod cli {}
#[doc = include_str!("../README.md")]
pub mod readme {}
