//! Exact partition functions for weighted Boolean #CSP.
//!
//! The crate models weighted constraint satisfaction instances with
//! non-negative rational weights, decides whether a function family is of
//! product type, pure affine or hard, evaluates tractable instances in
//! polynomial time, and ships the standard simulations (projection, pinning,
//! interpolation, parity gadgets, Möbius inversion) as executable instance
//! transformations. A brute-force oracle backs every fast path.
//!
//! ```
//! use wcsp::{function::library, Instance, oracle};
//!
//! let mut inst = Instance::boolean(2);
//! inst.define("neq", library::disequality(2)).unwrap();
//! inst.constrain("neq", &[0, 1]).unwrap();
//! assert_eq!(oracle::brute_force_z(&inst, &Default::default()).unwrap(), wcsp::rational::int(2));
//! ```

pub mod classify;
pub mod error;
pub mod eval;
pub mod function;
pub mod gen;
pub mod gf2;
pub mod instance;
pub mod linalg;
pub mod models;
pub mod oracle;
pub mod rational;
pub mod reduce;
pub mod verify;

pub use error::{Error, Result};
pub use function::{Relation, WeightFunction};
pub use instance::{Constraint, Instance};
pub use rational::Rational;
