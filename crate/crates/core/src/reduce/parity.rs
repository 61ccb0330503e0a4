use num_traits::{One, Zero};

use crate::classify::{has_affine_support, is_pure_affine};
use crate::error::{Error, Result};
use crate::function::library::{delta, not_parity, parity, unary_weight};
use crate::function::{bit, WeightFunction};
use crate::instance::Instance;
use crate::rational::{exact_sqrt, Rational};

use super::project::{pin_coordinate, project};

/// An instance over `{xor3, delta0}` whose solutions, restricted to the
/// primary variables, are exactly the tuples of `⊕_k`, each extended uniquely.
#[derive(Debug, Clone)]
pub struct ParityGadget {
    pub instance: Instance,
    /// The `k` primary variables, in argument order.
    pub primary: Vec<usize>,
}

/// Builds `x_1 ⊕ … ⊕ x_k = 1` from `⊕_3` and `δ_0`.
///
/// For `k > 3`, with `m = ⌈k/2⌉`, uses `x_1..x_m ⊕ y`, `x_{m+1}..x_k ⊕ z`,
/// `y ⊕ z ⊕ w` and `δ_0(w)`, recursing on the two shorter parities. `k = 1`
/// and `k = 2` pad a single `⊕_3` with `δ_0`-pinned variables.
pub fn parity_chain(k: usize) -> Result<ParityGadget> {
    if k == 0 {
        return Err(Error::Precondition("parity gadget needs k ≥ 1".into()));
    }
    let mut instance = Instance::boolean(k);
    instance.define("xor3", parity(3))?;
    instance.define("delta0", delta(2, 0))?;
    let primary: Vec<usize> = (0..k).collect();
    emit(&mut instance, &primary)?;
    Ok(ParityGadget { instance, primary })
}

fn emit(instance: &mut Instance, vars: &[usize]) -> Result<()> {
    match vars.len() {
        1 => {
            let z1 = instance.add_variable();
            let z2 = instance.add_variable();
            instance.constrain("xor3", &[vars[0], z1, z2])?;
            instance.constrain("delta0", &[z1])?;
            instance.constrain("delta0", &[z2])?;
        }
        2 => {
            let z = instance.add_variable();
            instance.constrain("xor3", &[vars[0], vars[1], z])?;
            instance.constrain("delta0", &[z])?;
        }
        3 => {
            instance.constrain("xor3", vars)?;
        }
        k => {
            let m = k.div_ceil(2);
            let y = instance.add_variable();
            let z = instance.add_variable();
            let w = instance.add_variable();
            let mut left = vars[..m].to_vec();
            left.push(y);
            let mut right = vars[m..].to_vec();
            right.push(z);
            emit(instance, &left)?;
            emit(instance, &right)?;
            instance.constrain("xor3", &[y, z, w])?;
            instance.constrain("delta0", &[w])?;
        }
    }
    Ok(())
}

/// Output of [`symmetrize_parity`].
#[derive(Debug, Clone)]
pub struct SymmetrizedParity {
    /// `f‴`, the product of `f″` over all six argument orders.
    pub symmetric: WeightFunction,
    /// True when the support is `¬⊕_3`, false for `⊕_3`.
    pub even_support: bool,
    pub c: Rational,
    /// `g = U_c ⊗ U_c ⊗ U_c · f‴`, pure affine.
    pub g: WeightFunction,
}

const ORDERS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Turns an arity-3 function supported on `⊕_3` or `¬⊕_3` into a pure affine one.
pub fn symmetrize_parity(f: &WeightFunction) -> Result<SymmetrizedParity> {
    if f.arity() != 3 || !f.is_boolean() {
        return Err(Error::Precondition("symmetrization needs a Boolean arity-3 function".into()));
    }
    let support = f.support();
    let even_support = if support == not_parity(3).support() {
        true
    } else if support == parity(3).support() {
        false
    } else {
        return Err(Error::Precondition("support is neither ⊕3 nor ¬⊕3".into()));
    };
    let symmetric = WeightFunction::from_fn(3, 2, |x| {
        ORDERS
            .iter()
            .map(|o| f.lookup(&[x[o[0]], x[o[1]], x[o[2]]]).expect("arity 3").clone())
            .product()
    })?;
    let at = |w: usize| symmetric.at(w).clone();
    // Tuple indices 0b000, 0b011 (weight 0, 2) and 0b001, 0b111 (weight 1, 3).
    let (low, high) = if even_support { (at(0), at(3)) } else { (at(1), at(7)) };
    let c = exact_sqrt(&(low / high)).ok_or_else(|| {
        Error::Internal("symmetrized weight ratio is not a rational square".into())
    })?;
    let g = WeightFunction::from_fn(3, 2, |x| {
        let ones = x.iter().filter(|&&b| b == 1).count() as i32;
        let idx = x[0] * 4 + x[1] * 2 + x[2];
        c.pow(ones) * symmetric.at(idx)
    })?;
    if !is_pure_affine(&g)? {
        return Err(Error::Internal("symmetrized function is not pure affine".into()));
    }
    Ok(SymmetrizedParity {
        symmetric,
        even_support,
        c,
        g,
    })
}

/// One step of unary extraction from a function with affine support.
#[derive(Debug, Clone, PartialEq)]
pub enum Extraction {
    /// `U_λ` with `λ ∉ {0, 1}`, obtained by projecting onto `column`.
    Unary {
        lambda: Rational,
        column: usize,
        function: WeightFunction,
    },
    /// `g` with `column` pinned to `value`: smaller arity, still not pure affine.
    Recurse {
        column: usize,
        value: usize,
        function: WeightFunction,
    },
}

/// Extracts a non-trivial unary weight, or a smaller non-pure-affine function.
///
/// Scans columns left to right for the first non-constant column `h` of
/// `R_g`. Pins `h` to 0 if the rows with `x_h = 0` carry two distinct values,
/// else to 1 likewise; otherwise both sides are constant, `w_0 ≠ w_1`, and the
/// projection onto `h` is proportional to `U_{w_1/w_0}`.
pub fn extract_unary(g: &WeightFunction) -> Result<Extraction> {
    if !g.is_boolean() {
        return Err(Error::Unsupported("unary extraction is Boolean only".into()));
    }
    if g.is_identically_zero() {
        return Err(Error::Precondition("g has empty support".into()));
    }
    if !has_affine_support(g)? {
        return Err(Error::Precondition("g does not have affine support".into()));
    }
    if is_pure_affine(g)? {
        return Err(Error::Precondition("g is pure affine; no unary weight to extract".into()));
    }
    let k = g.arity();
    let support = g.support();
    let h = (0..k)
        .find(|&i| {
            let mut values = support.indices().map(|x| bit(k, x, i));
            let first = values.next();
            values.any(|b| Some(b) != first)
        })
        .ok_or_else(|| Error::Internal("every column constant but g not pure affine".into()))?;

    let mut side_values: [Vec<&Rational>; 2] = [Vec::new(), Vec::new()];
    for x in support.indices() {
        let v = g.at(x);
        let side = &mut side_values[bit(k, x, h)];
        if !side.contains(&v) {
            side.push(v);
        }
    }
    for value in 0..2 {
        if side_values[value].len() >= 2 {
            return Ok(Extraction::Recurse {
                column: h,
                value,
                function: pin_coordinate(g, h, value)?,
            });
        }
    }
    let projected = project(g, &[h])?;
    let lambda = projected.at(1) / projected.at(0);
    if lambda.is_zero() || lambda.is_one() {
        return Err(Error::Internal(format!("extracted trivial weight {lambda}")));
    }
    Ok(Extraction::Unary {
        function: unary_weight(lambda.clone()),
        lambda,
        column: h,
    })
}

/// Repeats [`extract_unary`] until a unary weight appears; the last step is
/// always [`Extraction::Unary`].
pub fn extract_unary_iterated(g: &WeightFunction) -> Result<Vec<Extraction>> {
    let mut steps = Vec::new();
    let mut current = g.clone();
    loop {
        let step = extract_unary(&current)?;
        match &step {
            Extraction::Unary { .. } => {
                steps.push(step);
                return Ok(steps);
            }
            Extraction::Recurse { function, .. } => {
                if function.arity() >= current.arity() {
                    return Err(Error::Internal("extraction did not reduce arity".into()));
                }
                current = function.clone();
            }
        }
        steps.push(step);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::eval_pure_affine;
    use crate::function::library::not_parity;
    use crate::oracle::{brute_force_z, conditioned_z, Budget};
    use crate::rational::int;

    #[test]
    fn chain_counts_are_powers_of_two() {
        for k in 1..=10 {
            let gadget = parity_chain(k).unwrap();
            let expected = int(1 << (k - 1));
            assert_eq!(eval_pure_affine(&gadget.instance).unwrap(), expected, "k = {k}");
            if k <= 7 {
                assert_eq!(brute_force_z(&gadget.instance, &Budget::default()).unwrap(), expected);
            }
        }
        assert_eq!(parity_chain(3).unwrap().instance.num_variables(), 3);
        assert!(parity_chain(0).is_err());
    }

    #[test]
    fn chain_extends_each_odd_tuple_once() {
        let k = 5;
        let gadget = parity_chain(k).unwrap();
        for x in 0..1usize << k {
            let pins: Vec<(usize, usize)> = (0..k).map(|i| (i, bit(k, x, i))).collect();
            let z = conditioned_z(&gadget.instance, &pins, &Budget::default()).unwrap();
            let expected = i64::from(x.count_ones() % 2 == 1);
            assert_eq!(z, int(expected));
        }
    }

    #[test]
    fn symmetrize_indicator_is_identity() {
        let s = symmetrize_parity(&not_parity(3)).unwrap();
        assert_eq!(s.c, int(1));
        assert_eq!(s.g, not_parity(3));
        assert!(s.even_support);
    }

    #[test]
    fn symmetrize_weighted_even() {
        let mut t = [0i64; 8];
        t[0] = 2;
        t[3] = 1;
        t[5] = 1;
        t[6] = 1;
        let f = WeightFunction::from_ints(3, &t).unwrap();
        let s = symmetrize_parity(&f).unwrap();
        assert_eq!(s.symmetric.at(0), &int(64));
        assert_eq!(s.symmetric.at(3), &int(1));
        assert_eq!(s.c, int(8));
        assert!(s.g.support().indices().all(|x| s.g.at(x) == &int(64)));
    }

    #[test]
    fn symmetrize_weighted_odd() {
        let f = WeightFunction::from_ints(3, &[0, 1, 2, 0, 3, 0, 0, 5]).unwrap();
        let s = symmetrize_parity(&f).unwrap();
        assert!(!s.even_support);
        assert!(is_pure_affine(&s.g).unwrap());
        for x in 0..8usize {
            let p = [x >> 2 & 1, x >> 1 & 1, x & 1];
            let swapped = s.symmetric.lookup(&[p[1], p[0], p[2]]).unwrap();
            assert_eq!(s.symmetric.at(x), swapped);
        }
    }

    #[test]
    fn symmetrize_rejects_other_supports() {
        let f = WeightFunction::from_ints(3, &[1; 8]).unwrap();
        assert!(symmetrize_parity(&f).is_err());
    }

    #[test]
    fn extract_binary_diagonal() {
        let g = WeightFunction::from_ints(2, &[1, 0, 0, 3]).unwrap();
        match extract_unary(&g).unwrap() {
            Extraction::Unary { lambda, column, .. } => {
                assert_eq!(lambda, int(3));
                assert_eq!(column, 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn extract_refuses_pure_affine() {
        let g = WeightFunction::from_ints(2, &[5, 0, 0, 5]).unwrap();
        assert!(matches!(extract_unary(&g), Err(Error::Precondition(_))));
    }

    #[test]
    fn extract_recurses_on_mixed_side() {
        // ¬⊕3 support 000, 011, 101, 110 with values 1, 2, 1, 2.
        let g = WeightFunction::from_ints(3, &[1, 0, 0, 2, 0, 1, 2, 0]).unwrap();
        match extract_unary(&g).unwrap() {
            Extraction::Recurse { column, value, function } => {
                assert_eq!((column, value), (0, 0));
                assert_eq!(function.arity(), 2);
                assert!(!is_pure_affine(&function).unwrap());
            }
            other => panic!("unexpected {other:?}"),
        }
        let steps = extract_unary_iterated(&g).unwrap();
        assert!(matches!(steps.last(), Some(Extraction::Unary { .. })));
    }
}
