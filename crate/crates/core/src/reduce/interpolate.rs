use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::function::library::unary_weight;
use crate::instance::{Constraint, Instance};
use crate::linalg::{evaluate_polynomial, interpolate};
use crate::rational::Rational;

use super::fresh_name;

/// Result of [`interpolation_reduce`].
#[derive(Debug, Clone)]
pub struct Interpolation {
    pub z: Rational,
    /// The weight `c` of the eliminated `U_c`.
    pub c: Rational,
    /// Coefficients of `Z(I; w)` in increasing degree; `m + 1` of them.
    pub coefficients: Vec<Rational>,
    /// `(w = λ^j, Z(I; w))` for `j = 0..=m`.
    pub points: Vec<(Rational, Rational)>,
}

/// Computes `Z(I)` for `I` over `F ∪ {U_c}` from evaluations over `F ∪ {U_λ}`.
///
/// With `m` occurrences of `U_c`, `Z(I; w)` (each `U_c` replaced by `U_w`) is
/// a polynomial of degree at most `m` in `w`. Replacing each `U_c` by `j`
/// copies of `U_λ` evaluates it at `w = λ^j`; the points `j = 0..=m` are
/// pairwise distinct for `λ ∉ {0, 1}`, so the Vandermonde system is regular.
pub fn interpolation_reduce(
    instance: &Instance,
    unary_name: &str,
    lambda: &Rational,
    evaluator: &dyn Evaluator,
) -> Result<Interpolation> {
    if !(lambda > &Rational::zero()) || lambda.is_one() {
        return Err(Error::Precondition(format!("λ must be positive and ≠ 1, got {lambda}")));
    }
    let uc = instance.function(unary_name)?;
    if uc.arity() != 1 || !uc.is_boolean() || !uc.at(0).is_one() {
        return Err(Error::Precondition(format!(
            "`{unary_name}` must be a Boolean unary U_c with U_c(0) = 1"
        )));
    }
    let c = uc.at(1).clone();

    let lambda_name = fresh_name(instance, "U_lambda");
    let mut base_functions = instance.functions().clone();
    base_functions.shift_remove(unary_name);
    base_functions.insert(lambda_name.clone(), unary_weight(lambda.clone()));

    let m = instance
        .constraints()
        .iter()
        .filter(|c| c.function == unary_name)
        .count();
    let mut points = Vec::with_capacity(m + 1);
    let mut w = Rational::one();
    for j in 0..=m {
        let mut constraints = Vec::new();
        for con in instance.constraints() {
            if con.function == unary_name {
                constraints.extend((0..j).map(|_| Constraint::new(lambda_name.clone(), con.scope.clone())));
            } else {
                constraints.push(con.clone());
            }
        }
        let mut inst = Instance::from_parts(
            instance.domain_size(),
            instance.num_variables(),
            base_functions.clone(),
            constraints,
        )?;
        inst.prune_catalog();
        points.push((w.clone(), evaluator.evaluate(&inst)?));
        w *= lambda;
    }

    let (xs, ys): (Vec<Rational>, Vec<Rational>) = points.iter().cloned().unzip();
    let coefficients = interpolate(&xs, &ys)?;
    let z = evaluate_polynomial(&coefficients, &c);
    Ok(Interpolation {
        z,
        c,
        coefficients,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::Oracle;
    use crate::function::library::*;
    use crate::oracle::{brute_force_z, Budget};
    use crate::rational::{int, ratio};

    fn with_unary(c: Rational, copies: usize) -> Instance {
        let mut inst = Instance::boolean(1);
        inst.define("uc", unary_weight(c)).unwrap();
        for _ in 0..copies {
            inst.constrain("uc", &[0]).unwrap();
        }
        inst
    }

    #[test]
    fn single_unary() {
        let out = interpolation_reduce(&with_unary(int(5), 1), "uc", &int(2), &Oracle::default()).unwrap();
        assert_eq!(out.coefficients, vec![int(1), int(1)]);
        assert_eq!(out.z, int(6));
    }

    #[test]
    fn repeated_unary() {
        let out = interpolation_reduce(&with_unary(int(3), 2), "uc", &int(2), &Oracle::default()).unwrap();
        assert_eq!(out.coefficients.len(), 3);
        assert_eq!(out.z, int(10));
    }

    #[test]
    fn unit_weight_is_deletion() {
        let mut inst = with_unary(int(1), 2);
        inst.define("neq", disequality(2)).unwrap();
        inst.add_variable();
        inst.constrain("neq", &[0, 1]).unwrap();
        let out = interpolation_reduce(&inst, "uc", &ratio(1, 2), &Oracle::default()).unwrap();
        let mut plain = inst.filter_constraints(|c| c.function != "uc");
        plain.prune_catalog();
        assert_eq!(out.z, brute_force_z(&plain, &Budget::default()).unwrap());
    }

    #[test]
    fn rejects_bad_lambda_and_non_unary() {
        let inst = with_unary(int(3), 1);
        assert!(interpolation_reduce(&inst, "uc", &int(1), &Oracle::default()).is_err());
        assert!(interpolation_reduce(&inst, "uc", &int(0), &Oracle::default()).is_err());
        let mut bad = Instance::boolean(1);
        bad.define("uc", WeightFunction::from_ints(1, &[2, 3]).unwrap()).unwrap();
        assert!(interpolation_reduce(&bad, "uc", &int(2), &Oracle::default()).is_err());
    }

    #[test]
    fn zero_weight_acts_as_pin() {
        let mut inst = with_unary(int(0), 1);
        inst.add_variable();
        inst.define("f", WeightFunction::from_ints(2, &[1, 3, 2, 6]).unwrap()).unwrap();
        inst.constrain("f", &[0, 1]).unwrap();
        let out = interpolation_reduce(&inst, "uc", &int(2), &Oracle::default()).unwrap();
        assert_eq!(out.z, int(4));
    }

    use crate::function::WeightFunction;
}
