//! Polynomial-time evaluators for the two tractable regimes, and the
//! [`Evaluator`] abstraction reductions use to call back into them.

mod affine;
mod product;

pub use affine::{affine_system_of, count_gf2_solutions, eval_pure_affine};
pub use product::{class_decomposition, eval_product_type, ClassDecomposition, ClassWeights};

use std::time::{Duration, Instant};

use crate::classify::{classify_instance, FamilyVerdict};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::oracle::{brute_force_z, Budget};
use crate::rational::Rational;

/// Something that computes `Z(I)`.
pub trait Evaluator {
    fn evaluate(&self, instance: &Instance) -> Result<Rational>;
}

impl<F> Evaluator for F
where
    F: Fn(&Instance) -> Result<Rational>,
{
    fn evaluate(&self, instance: &Instance) -> Result<Rational> {
        self(instance)
    }
}

/// The brute-force oracle as an [`Evaluator`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Oracle {
    pub budget: Budget,
}

impl Evaluator for Oracle {
    fn evaluate(&self, instance: &Instance) -> Result<Rational> {
        brute_force_z(instance, &self.budget)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ProductType,
    PureAffine,
    Oracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ProductType => "product-type",
            Method::PureAffine => "pure-affine",
            Method::Oracle => "brute-force",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Evaluation {
    pub z: Rational,
    pub method: Method,
    pub elapsed: Duration,
}

/// Picks an evaluator from the classifier verdict, falling back to the oracle
/// for hard or non-Boolean instances (which refuses beyond its budget).
#[derive(Debug, Clone, Copy, Default)]
pub struct AutoEvaluator {
    pub budget: Budget,
    pub force_oracle: bool,
}

impl AutoEvaluator {
    pub fn run(&self, instance: &Instance) -> Result<Evaluation> {
        let start = Instant::now();
        let method = self.choose(instance)?;
        let z = match method {
            Method::ProductType => eval_product_type(instance)?,
            Method::PureAffine => eval_pure_affine(instance)?,
            Method::Oracle => brute_force_z(instance, &self.budget)?,
        };
        Ok(Evaluation {
            z,
            method,
            elapsed: start.elapsed(),
        })
    }

    pub fn choose(&self, instance: &Instance) -> Result<Method> {
        if self.force_oracle || instance.domain_size() != 2 {
            return Ok(Method::Oracle);
        }
        Ok(match classify_instance(instance)?.family {
            FamilyVerdict::ProductTypeFp => Method::ProductType,
            FamilyVerdict::PureAffineFp => Method::PureAffine,
            FamilyVerdict::Hard => Method::Oracle,
        })
    }
}

impl Evaluator for AutoEvaluator {
    fn evaluate(&self, instance: &Instance) -> Result<Rational> {
        Ok(self.run(instance)?.z)
    }
}

pub(crate) fn refuse(name: &str, what: &str) -> Error {
    Error::Precondition(format!(
        "function `{name}` is not {what}; use the brute-force oracle instead"
    ))
}
