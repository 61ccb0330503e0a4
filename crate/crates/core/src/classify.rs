//! Which side of the Boolean dichotomy a function family falls on.
//!
//! A family is tractable if every function is of product type or if every
//! function is pure affine; otherwise it is hard, witnessed by a pair
//! `(f, g)` with `f` not of product type and `g` not pure affine.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::function::{bit, Relation, WeightFunction};
use crate::gf2::{span_basis, BitRow};
use crate::rational::{format_rational, Rational};

fn require_boolean(q: usize, what: &str) -> Result<()> {
    if q == 2 {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{what} is defined for q = 2 only (got q = {q})")))
    }
}

/// Index of the tuple `y` (arity `k-1`) with a bit `b` inserted at position `i`.
pub(crate) fn insert_bit(arity: usize, y: usize, i: usize, b: usize) -> usize {
    let low_width = arity - 1 - i;
    let low = y & ((1 << low_width) - 1);
    let high = y >> low_width;
    (high << (low_width + 1)) | (b << low_width) | low
}

/// The tuple at `index` as a bit row (position `i` of the tuple is bit `i`).
pub(crate) fn tuple_bits(arity: usize, index: usize) -> BitRow {
    let mut row = BitRow::zeros(arity);
    for i in 0..arity {
        if bit(arity, index, i) == 1 {
            row.set(i, true);
        }
    }
    row
}

pub fn underlying_relation(f: &WeightFunction) -> Relation {
    f.support()
}

/// True iff `R` is empty or a coset of a linear subspace of GF(2)^k.
///
/// Computed as `|R| = 2^dim span{x ⊕ x⁰ : x ∈ R}`: `R` always sits inside the
/// coset `x⁰ + span`, so equal size means equal sets.
pub fn is_affine_relation(relation: &Relation) -> Result<bool> {
    require_boolean(relation.domain_size(), "affine relation test")?;
    let k = relation.arity();
    let mut rows = relation.indices();
    let Some(x0) = rows.next() else {
        return Ok(true);
    };
    let basis = span_basis(rows.map(|x| tuple_bits(k, x ^ x0)));
    Ok(relation.len() == 1usize << basis.len())
}

pub fn has_affine_support(f: &WeightFunction) -> Result<bool> {
    is_affine_relation(&f.support())
}

/// Affine support and exactly one nonzero value. The zero function is not
/// pure affine.
pub fn is_pure_affine(f: &WeightFunction) -> Result<bool> {
    require_boolean(f.domain_size(), "pure affine test")?;
    Ok(f.nonzero_values().len() == 1 && has_affine_support(f)?)
}

/// Positions `i` (0-based) with some `y` such that `f(y↓i=0) > 0` and `f(y↓i=1) > 0`.
pub fn useful_indices(f: &WeightFunction) -> Result<Vec<usize>> {
    require_boolean(f.domain_size(), "useful index test")?;
    let k = f.arity();
    Ok((0..k)
        .filter(|&i| {
            (0..1usize << (k - 1)).any(|y| {
                !f.at(insert_bit(k, y, i, 0)).is_zero() && !f.at(insert_bit(k, y, i, 1)).is_zero()
            })
        })
        .collect())
}

/// Outcome of the product-like test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductLike {
    pub holds: bool,
    /// `λ_i` per position; `None` for positions that are not useful or whose
    /// ratio test failed.
    pub lambdas: Vec<Option<Rational>>,
}

/// For every useful index `i`, is there a `λ_i` with `f(y↓i=0) = λ_i·f(y↓i=1)` for all `y`?
pub fn product_like(f: &WeightFunction) -> Result<ProductLike> {
    let useful = useful_indices(f)?;
    let k = f.arity();
    let mut holds = true;
    let mut lambdas = vec![None; k];
    for i in useful {
        let rows = || (0..1usize << (k - 1)).map(|y| (f.at(insert_bit(k, y, i, 0)), f.at(insert_bit(k, y, i, 1))));
        // Useful implies some row has a nonzero denominator.
        let (num, den) = rows().find(|(_, d)| !d.is_zero()).expect("useful index");
        let lambda = num / den;
        if rows().all(|(a, b)| *a == &lambda * b) {
            lambdas[i] = Some(lambda);
        } else {
            holds = false;
        }
    }
    Ok(ProductLike { holds, lambdas })
}

/// One class of columns that are equal or complementary on the support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessClass {
    pub representative: usize,
    /// `(position, complementary)` for every member, representative included
    /// with `complementary = false`.
    pub members: Vec<(usize, bool)>,
    /// Unary weight of the class as a function of the representative's value.
    pub weights: [Rational; 2],
}

/// A decomposition of `f` into a constant, pinned columns (`δ_c` factors),
/// `χ=`/`χ≠` links to class representatives, and one unary per class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductTypeWitness {
    pub arity: usize,
    pub constant_columns: Vec<(usize, usize)>,
    pub classes: Vec<WitnessClass>,
    pub scale: Rational,
}

impl ProductTypeWitness {
    /// Multiplies the factors back together.
    pub fn reconstruct(&self) -> WeightFunction {
        WeightFunction::from_fn(self.arity, 2, |x| self.evaluate(x)).expect("witness values are non-negative")
    }

    pub fn evaluate(&self, x: &[usize]) -> Rational {
        if self.scale.is_zero() || self.constant_columns.iter().any(|&(i, v)| x[i] != v) {
            return Rational::zero();
        }
        let mut value = self.scale.clone();
        for class in &self.classes {
            let rep = x[class.representative];
            if class.members.iter().any(|&(j, comp)| x[j] != (rep ^ comp as usize)) {
                return Rational::zero();
            }
            value *= &class.weights[rep];
        }
        value
    }

    pub fn to_json(&self) -> Value {
        json!({
            "constant_columns": self.constant_columns,
            "classes": self.classes.iter().map(|c| json!({
                "representative": c.representative,
                "members": c.members.iter().map(|&(j, comp)| json!({
                    "index": j,
                    "polarity": if comp { "complementary" } else { "equal" },
                })).collect::<Vec<_>>(),
                "weights": [format_rational(&c.weights[0]), format_rational(&c.weights[1])],
            })).collect::<Vec<_>>(),
            "scale": format_rational(&self.scale),
        })
    }
}

/// Product-type test with a witness when it holds.
///
/// The test groups non-constant support columns into equal/complementary
/// classes, checks the support is complete on class representatives, and
/// checks the values factor through single-class flips of a base tuple.
pub fn product_type(f: &WeightFunction) -> Result<Option<ProductTypeWitness>> {
    require_boolean(f.domain_size(), "product type test")?;
    let k = f.arity();
    let support: Vec<usize> = f.support().indices().collect();
    let Some(&x0) = support.first() else {
        return Ok(Some(ProductTypeWitness {
            arity: k,
            constant_columns: Vec::new(),
            classes: Vec::new(),
            scale: Rational::zero(),
        }));
    };

    let mut constant_columns = Vec::new();
    let mut classes: Vec<WitnessClass> = Vec::new();
    let mut by_signature: HashMap<Vec<bool>, usize> = HashMap::new();
    for i in 0..k {
        let base = bit(k, x0, i);
        // Column normalized against the base row: equal or complementary
        // columns share a signature.
        let signature: Vec<bool> = support.iter().map(|&x| bit(k, x, i) != base).collect();
        if signature.iter().all(|&s| !s) {
            constant_columns.push((i, base));
            continue;
        }
        match by_signature.get(&signature) {
            Some(&c) => {
                let rep = classes[c].representative;
                let complementary = bit(k, x0, rep) != base;
                classes[c].members.push((i, complementary));
            }
            None => {
                by_signature.insert(signature, classes.len());
                classes.push(WitnessClass {
                    representative: i,
                    members: vec![(i, false)],
                    weights: [Rational::one(), Rational::one()],
                });
            }
        }
    }

    if classes.len() >= usize::BITS as usize || support.len() != 1usize << classes.len() {
        return Ok(None);
    }

    let scale = f.at(x0).clone();
    let mut flips = Vec::with_capacity(classes.len());
    for class in classes.iter_mut() {
        let mask = class.members.iter().fold(0usize, |m, &(j, _)| m | 1 << (k - 1 - j));
        let ratio = f.at(x0 ^ mask) / &scale;
        let rep_bit = bit(k, x0, class.representative);
        class.weights[1 - rep_bit] = ratio.clone();
        flips.push((mask, ratio));
    }
    for &x in &support {
        let mut expected = scale.clone();
        for (mask, ratio) in &flips {
            if (x ^ x0) & mask != 0 {
                expected *= ratio;
            }
        }
        if &expected != f.at(x) {
            return Ok(None);
        }
    }
    Ok(Some(ProductTypeWitness {
        arity: k,
        constant_columns,
        classes,
        scale,
    }))
}

pub fn is_product_type(f: &WeightFunction) -> Result<bool> {
    Ok(product_type(f)?.is_some())
}

/// Flags and witnesses for one function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionReport {
    pub name: String,
    pub has_affine_support: bool,
    pub is_pure_affine: bool,
    pub product_like: ProductLike,
    pub witness: Option<ProductTypeWitness>,
}

impl FunctionReport {
    pub fn analyze(name: &str, f: &WeightFunction) -> Result<Self> {
        Ok(FunctionReport {
            name: name.to_string(),
            has_affine_support: has_affine_support(f)?,
            is_pure_affine: is_pure_affine(f)?,
            product_like: product_like(f)?,
            witness: product_type(f)?,
        })
    }

    pub fn is_product_type(&self) -> bool {
        self.witness.is_some()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "is_product_type": self.is_product_type(),
            "is_pure_affine": self.is_pure_affine,
            "has_affine_support": self.has_affine_support,
            "is_product_like": self.product_like.holds,
            "lambdas": self.product_like.lambdas.iter()
                .map(|l| l.as_ref().map(format_rational))
                .collect::<Vec<_>>(),
            "witness": self.witness.as_ref().map(ProductTypeWitness::to_json),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyVerdict {
    ProductTypeFp,
    PureAffineFp,
    Hard,
}

impl FamilyVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyVerdict::ProductTypeFp => "PRODUCT_TYPE_FP",
            FamilyVerdict::PureAffineFp => "PURE_AFFINE_FP",
            FamilyVerdict::Hard => "HARD",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub functions: Vec<FunctionReport>,
    pub family: FamilyVerdict,
    /// For hard families: `(f, g)` with `f` not of product type and `g` not pure affine.
    pub hard_pair: Option<(String, String)>,
}

impl Verdict {
    pub fn to_json(&self) -> Value {
        json!({
            "functions": self.functions.iter().map(FunctionReport::to_json).collect::<Vec<_>>(),
            "family_verdict": self.family.as_str(),
            "hard_pair": self.hard_pair.as_ref().map(|(f, g)| json!({
                "not_product_type": f,
                "not_pure_affine": g,
            })),
        })
    }
}

/// Classifies a named family. Product type wins when both tractable cases apply.
pub fn classify_family<'a>(family: impl IntoIterator<Item = (&'a str, &'a WeightFunction)>) -> Result<Verdict> {
    let functions = family
        .into_iter()
        .map(|(name, f)| FunctionReport::analyze(name, f))
        .collect::<Result<Vec<_>>>()?;
    let not_product = functions.iter().find(|r| !r.is_product_type());
    let not_affine = functions.iter().find(|r| !r.is_pure_affine);
    let (family, hard_pair) = match (not_product, not_affine) {
        (None, _) => (FamilyVerdict::ProductTypeFp, None),
        (Some(_), None) => (FamilyVerdict::PureAffineFp, None),
        (Some(f), Some(g)) => (FamilyVerdict::Hard, Some((f.name.clone(), g.name.clone()))),
    };
    Ok(Verdict {
        functions,
        family,
        hard_pair,
    })
}

/// Classifies the functions an instance actually uses.
pub fn classify_instance(instance: &crate::Instance) -> Result<Verdict> {
    let used = instance.used_functions();
    classify_family(used.into_iter().map(|name| (name, &instance.functions()[name])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::library::*;
    use crate::rational::{int, ratio};

    fn f(arity: usize, t: &[i64]) -> WeightFunction {
        WeightFunction::from_ints(arity, t).unwrap()
    }

    #[test]
    fn insert_bit_positions() {
        // k = 3, y = (a, b) -> inserting at position 0 gives (bit, a, b).
        assert_eq!(insert_bit(3, 0b11, 0, 0), 0b011);
        assert_eq!(insert_bit(3, 0b11, 1, 0), 0b101);
        assert_eq!(insert_bit(3, 0b11, 2, 0), 0b110);
        assert_eq!(insert_bit(3, 0b00, 1, 1), 0b010);
    }

    #[test]
    fn relations() {
        assert_eq!(underlying_relation(&f(2, &[1, 3, 2, 6])).len(), 4);
        assert_eq!(underlying_relation(&delta(2, 0)).tuples().collect::<Vec<_>>(), vec![vec![0]]);
        assert!(underlying_relation(&f(2, &[0, 0, 0, 0])).is_empty());
    }

    #[test]
    fn affine_relation_examples() {
        let r = Relation::from_tuples(3, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0], &[1, 1, 1]]).unwrap();
        assert!(is_affine_relation(&r).unwrap());
        let r1 = Relation::from_tuples(2, &[&[0, 1], &[1, 0], &[1, 1]]).unwrap();
        assert!(!is_affine_relation(&r1).unwrap());
        assert!(is_affine_relation(&Relation::new(3, 2, []).unwrap()).unwrap());
        assert!(is_affine_relation(&Relation::complete(2, 3).unwrap()).is_err());
    }

    #[test]
    fn affine_support_examples() {
        assert!(has_affine_support(&parity(3)).unwrap());
        assert!(!has_affine_support(&f(2, &[1, 1, 1, 0])).unwrap());
        for t in [[0, 0], [0, 5], [2, 3], [1, 0]] {
            assert!(has_affine_support(&f(1, &t)).unwrap());
        }
    }

    #[test]
    fn pure_affine_examples() {
        assert!(is_pure_affine(&parity(3).scaled(&int(3)).unwrap()).unwrap());
        assert!(!is_pure_affine(&f(2, &[1, 0, 0, 3])).unwrap());
        assert!(is_pure_affine(&delta(2, 1)).unwrap());
        assert!(!is_pure_affine(&f(2, &[0, 0, 0, 0])).unwrap());
        assert!(is_pure_affine(&f(0, &[4])).unwrap());
    }

    #[test]
    fn useful_index_examples() {
        assert_eq!(useful_indices(&f(2, &[1, 3, 2, 6])).unwrap(), vec![0, 1]);
        assert!(useful_indices(&delta(2, 0)).unwrap().is_empty());
        // Each value of one argument of χ= admits a single partner, so no
        // context makes both values of a position positive.
        assert!(useful_indices(&equality(2)).unwrap().is_empty());
        assert!(useful_indices(&disequality(2)).unwrap().is_empty());
        assert_eq!(useful_indices(&f(3, &[0, 0, 1, 1, 0, 0, 1, 2])).unwrap(), vec![0, 2]);
    }

    #[test]
    fn product_like_examples() {
        let p = product_like(&f(2, &[1, 3, 2, 6])).unwrap();
        assert!(p.holds);
        assert_eq!(p.lambdas, vec![Some(ratio(1, 2)), Some(ratio(1, 3))]);
        assert!(!product_like(&f(2, &[1, 1, 1, 2])).unwrap().holds);
        let d = product_like(&delta(2, 0)).unwrap();
        assert!(d.holds);
        assert_eq!(d.lambdas, vec![None]);
    }

    #[test]
    fn product_type_examples() {
        let w = product_type(&f(2, &[1, 3, 2, 6])).unwrap().expect("product type");
        assert_eq!(w.classes.len(), 2);
        assert_eq!(w.classes[0].weights, [int(1), int(2)]);
        assert_eq!(w.classes[1].weights, [int(1), int(3)]);
        assert_eq!(w.reconstruct(), f(2, &[1, 3, 2, 6]));

        let w = product_type(&disequality(2)).unwrap().expect("product type");
        assert_eq!(w.classes.len(), 1);
        assert_eq!(w.classes[0].members, vec![(0, false), (1, true)]);
        assert_eq!(w.reconstruct(), disequality(2));

        assert!(product_type(&parity(3)).unwrap().is_none());
        assert!(is_product_type(&f(2, &[0, 0, 0, 0])).unwrap());
        assert_eq!(product_type(&f(3, &[0; 8])).unwrap().unwrap().reconstruct(), f(3, &[0; 8]));
    }

    #[test]
    fn constant_columns_become_pins() {
        // f(x1, x2, x3) = δ1(x1)·χ≠(x2, x3)·U_5(x2)
        let g = WeightFunction::from_fn(3, 2, |x| {
            if x[0] == 1 && x[1] != x[2] {
                if x[1] == 1 { int(5) } else { int(1) }
            } else {
                int(0)
            }
        })
        .unwrap();
        let w = product_type(&g).unwrap().unwrap();
        assert_eq!(w.constant_columns, vec![(0, 1)]);
        assert_eq!(w.reconstruct(), g);
    }

    #[test]
    fn family_examples() {
        let u = unary_weight(int(7));
        let fam = [
            ("d0", &delta(2, 0)),
            ("d1", &delta(2, 1)),
            ("eq", &equality(2)),
            ("neq", &disequality(2)),
            ("u", &u),
        ];
        assert_eq!(classify_family(fam).unwrap().family, FamilyVerdict::ProductTypeFp);

        let nx = not_parity(3).scaled(&int(5)).unwrap();
        let v = classify_family([("xor3", &parity(3)), ("nxor3", &nx)]).unwrap();
        assert_eq!(v.family, FamilyVerdict::PureAffineFp);

        let u2 = unary_weight(int(2));
        let v = classify_family([("xor3", &parity(3)), ("u2", &u2)]).unwrap();
        assert_eq!(v.family, FamilyVerdict::Hard);
        assert_eq!(v.hard_pair, Some(("xor3".into(), "u2".into())));
    }

    #[test]
    fn both_flags_prefer_product_type() {
        let v = classify_family([("d0", &delta(2, 0)), ("eq", &equality(2))]).unwrap();
        assert!(v.functions.iter().all(|r| r.is_product_type() && r.is_pure_affine));
        assert_eq!(v.family, FamilyVerdict::ProductTypeFp);
    }

    #[test]
    fn non_boolean_is_unsupported() {
        assert!(matches!(product_type(&disequality(3)), Err(Error::Unsupported(_))));
        assert!(matches!(is_pure_affine(&disequality(3)), Err(Error::Unsupported(_))));
    }
}
