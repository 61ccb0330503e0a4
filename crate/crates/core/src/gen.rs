//! Seeded random functions and instances for tests, the verification
//! harness and the `gen` command. Output depends only on the seed.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::function::library::{disequality, equality};
use crate::function::{bit, WeightFunction};
use crate::gf2::{BitRow, Gf2System};
use crate::instance::Instance;
use crate::models::{hom_instance, Graph, TargetMatrix};
use crate::rational::{int, ratio, Rational};

/// The deterministic generator used throughout.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    ProductType,
    PureAffine,
    Mixed,
    GraphHom,
}

impl Profile {
    pub const ALL: [Profile; 4] = [Profile::ProductType, Profile::PureAffine, Profile::Mixed, Profile::GraphHom];

    pub fn as_str(self) -> &'static str {
        match self {
            Profile::ProductType => "product-type",
            Profile::PureAffine => "pure-affine",
            Profile::Mixed => "mixed",
            Profile::GraphHom => "graph-hom",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Profile::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown profile `{s}`")))
    }
}

/// A small positive weight: 1, 2, 3, 1/2 or 2/3.
pub fn random_weight(rng: &mut impl Rng) -> Rational {
    [int(1), int(2), int(3), ratio(1, 2), ratio(2, 3)]
        .choose(rng)
        .expect("non-empty")
        .clone()
}

/// A weight that is zero with probability `p_zero`, else [`random_weight`].
pub fn random_weight_or_zero(rng: &mut impl Rng, p_zero: f64) -> Rational {
    if rng.gen_bool(p_zero) {
        Rational::zero()
    } else {
        random_weight(rng)
    }
}

/// A function with independent table entries drawn from `values`.
pub fn random_function(arity: usize, q: usize, values: &[Rational], rng: &mut impl Rng) -> WeightFunction {
    WeightFunction::from_fn(arity, q, |_| values.choose(rng).expect("non-empty").clone())
        .expect("values are non-negative")
}

/// A product of pinned columns, `χ=`/`χ≠` links to class representatives and
/// one unary weight per class, times a positive scale.
pub fn random_product_type(arity: usize, rng: &mut impl Rng) -> WeightFunction {
    #[derive(Clone)]
    enum Col {
        Pinned(usize),
        Linked(usize, usize),
    }
    let mut cols = Vec::with_capacity(arity);
    let mut classes = 0;
    for _ in 0..arity {
        if rng.gen_bool(0.15) {
            cols.push(Col::Pinned(rng.gen_range(0..2)));
        } else if classes > 0 && rng.gen_bool(0.4) {
            cols.push(Col::Linked(rng.gen_range(0..classes), rng.gen_range(0..2)));
        } else {
            cols.push(Col::Linked(classes, 0));
            classes += 1;
        }
    }
    let weights: Vec<[Rational; 2]> = (0..classes)
        .map(|_| [random_weight_or_zero(rng, 0.1), random_weight_or_zero(rng, 0.1)])
        .collect();
    let scale = random_weight(rng);
    WeightFunction::from_fn(arity, 2, |x| {
        let mut class_value: Vec<Option<usize>> = vec![None; classes];
        for (i, col) in cols.iter().enumerate() {
            match *col {
                Col::Pinned(v) if x[i] != v => return Rational::zero(),
                Col::Pinned(_) => {}
                Col::Linked(c, flip) => {
                    let v = x[i] ^ flip;
                    if *class_value[c].get_or_insert(v) != v {
                        return Rational::zero();
                    }
                }
            }
        }
        class_value
            .iter()
            .zip(&weights)
            .fold(scale.clone(), |acc, (v, w)| acc * &w[v.unwrap_or(0)])
    })
    .expect("weights are non-negative")
}

/// The solution set of a random consistent linear system over GF(2).
pub fn random_affine_support(arity: usize, rng: &mut impl Rng) -> Vec<usize> {
    loop {
        let mut system = Gf2System::new(arity);
        for _ in 0..rng.gen_range(0..=arity) {
            let bits: Vec<bool> = (0..arity).map(|_| rng.gen_bool(0.5)).collect();
            system.push(BitRow::from_bits(&bits), rng.gen_bool(0.5));
        }
        let tuples: Vec<usize> = (0..1usize << arity)
            .filter(|&x| {
                let bits: Vec<bool> = (0..arity).map(|i| bit(arity, x, i) == 1).collect();
                system.is_satisfied_by(&BitRow::from_bits(&bits))
            })
            .collect();
        if !tuples.is_empty() {
            return tuples;
        }
    }
}

/// A positive constant times the indicator of a random affine relation.
pub fn random_pure_affine(arity: usize, rng: &mut impl Rng) -> WeightFunction {
    let support = random_affine_support(arity, rng);
    let w = random_weight(rng);
    let mut table = vec![Rational::zero(); 1 << arity];
    for x in support {
        table[x] = w.clone();
    }
    WeightFunction::boolean(arity, table).expect("non-negative")
}

/// Random constraints over `catalog` on `n` variables. Scopes may repeat a
/// variable.
pub fn random_instance(
    q: usize,
    n: usize,
    constraints: usize,
    catalog: &[(String, WeightFunction)],
    rng: &mut impl Rng,
) -> Result<Instance> {
    let mut inst = Instance::new(q, n)?;
    for (name, f) in catalog {
        inst.define(name.clone(), f.clone())?;
    }
    if n == 0 {
        return Ok(inst);
    }
    for _ in 0..constraints {
        let (name, f) = catalog.choose(rng).expect("non-empty catalog");
        let scope: Vec<usize> = (0..f.arity()).map(|_| rng.gen_range(0..n)).collect();
        inst.constrain(name, &scope)?;
    }
    inst.prune_catalog();
    Ok(inst)
}

/// A catalog of `size` functions from `make`, named `f0, f1, …`.
pub fn random_catalog(
    size: usize,
    rng: &mut ChaCha8Rng,
    mut make: impl FnMut(usize, &mut ChaCha8Rng) -> WeightFunction,
) -> Vec<(String, WeightFunction)> {
    (0..size)
        .map(|i| {
            let arity = rng.gen_range(1..=3);
            (format!("f{i}"), make(arity, rng))
        })
        .collect()
}

/// A random instance for `profile` with `n` variables and about `constraints`
/// constraints.
pub fn generate(profile: Profile, n: usize, constraints: usize, seed: u64) -> Result<Instance> {
    let mut rng = rng(seed);
    match profile {
        Profile::ProductType => {
            let mut catalog = random_catalog(3, &mut rng, random_product_type);
            catalog.push(("eq".into(), equality(2)));
            catalog.push(("neq".into(), disequality(2)));
            random_instance(2, n, constraints, &catalog, &mut rng)
        }
        Profile::PureAffine => {
            let catalog = random_catalog(3, &mut rng, random_pure_affine);
            random_instance(2, n, constraints, &catalog, &mut rng)
        }
        Profile::Mixed => {
            let values = [int(0), int(1), int(2), ratio(1, 2)];
            let catalog = vec![
                ("p".to_string(), random_product_type(2, &mut rng)),
                ("a".to_string(), random_pure_affine(3, &mut rng)),
                ("r".to_string(), random_function(2, 2, &values, &mut rng)),
            ];
            random_instance(2, n, constraints, &catalog, &mut rng)
        }
        Profile::GraphHom => {
            let g = Graph::random_connected(n, 0.3, &mut rng);
            let q = rng.gen_range(2..=3);
            let mut rows = vec![vec![Rational::zero(); q]; q];
            for i in 0..q {
                for j in i..q {
                    let w = random_weight_or_zero(&mut rng, 0.2);
                    rows[i][j] = w.clone();
                    rows[j][i] = w;
                }
            }
            Ok(hom_instance(&TargetMatrix::new(rows)?, &g))
        }
    }
}

/// `a/b` with `0 ≤ a ≤ 6` and `1 ≤ b ≤ 3`.
pub fn random_small_rational(rng: &mut impl Rng) -> Rational {
    let num = rng.gen_range(0..=6);
    let den = rng.gen_range(1..=3);
    if num == 0 {
        Rational::zero()
    } else {
        Rational::new(num.into(), den.into())
    }
}
