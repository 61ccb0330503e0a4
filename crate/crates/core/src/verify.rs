//! Property suites that replay every fast path and reduction against the
//! brute-force oracle on seeded random inputs.

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::classify::product_type;
use crate::error::{Error, Result};
use crate::eval::{eval_product_type, eval_pure_affine, AutoEvaluator, Evaluator};
use crate::function::library::{all_distinct, delta, disequality, equality, unary_weight};
use crate::gen::{self, random_function, random_instance, random_pure_affine, random_product_type};
use crate::instance::Instance;
use crate::models::{hom_instance, incidence_code, weight_enumerator, Graph, TargetMatrix};
use crate::oracle::{brute_force_z, filtered_z, Budget};
use crate::rational::{format_rational, int, ratio, Rational};
use crate::reduce::{
    interpolation_reduce, mobius_pinning_reduce, parity_chain, pinning_reduce_boolean, project,
    simulate_projection_instance, DisequalityInstance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    OracleEquivalence,
    ReductionSoundness,
    CutIdentity,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 4] = ["oracle-equivalence", "reduction-soundness", "cut-identity", "all"];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::OracleEquivalence => Self::NAMES[0],
            Suite::ReductionSoundness => Self::NAMES[1],
            Suite::CutIdentity => Self::NAMES[2],
            Suite::All => Self::NAMES[3],
        }
    }

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle-equivalence" => Ok(Suite::OracleEquivalence),
            "reduction-soundness" => Ok(Suite::ReductionSoundness),
            "cut-identity" => Ok(Suite::CutIdentity),
            "all" => Ok(Suite::All),
            "" => Err(Error::Precondition("empty suite name".into())),
            other => Err(Error::Precondition(format!(
                "unknown suite `{other}` (expected one of {})",
                Self::NAMES.join(", ")
            ))),
        }
    }
}

/// Settings for [`run_suite`].
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    pub cases: usize,
    /// Name of a check whose fast side gets a corrupted table.
    pub inject_fault: Option<String>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            cases: 40,
            inject_fault: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub invariant: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.as_str(),
            "seed": self.seed,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "invariant": c.invariant,
                "cases": c.cases,
                "failures": c.failures,
                "passed": c.passed(),
                "first_failure": c.first_failure,
            })).collect::<Vec<_>>(),
        })
    }
}

type CaseFn = fn(&mut ChaCha8Rng, &Faults) -> Result<Option<String>>;

struct Check {
    name: &'static str,
    suite: Suite,
    invariant: &'static str,
    run: CaseFn,
}

/// Corrupts tables on the fast side of the check it is armed for.
struct Faults {
    armed: bool,
}

impl Faults {
    /// Adds 1 to the first table entry of every function in the catalog.
    fn apply(&self, instance: &Instance) -> Instance {
        if !self.armed {
            return instance.clone();
        }
        let mut functions = instance.functions().clone();
        for f in functions.values_mut() {
            let mut table = f.table().to_vec();
            if let Some(first) = table.first_mut() {
                *first += Rational::one();
            }
            *f = crate::WeightFunction::new(f.arity(), f.domain_size(), table).expect("still non-negative");
        }
        Instance::from_parts(
            instance.domain_size(),
            instance.num_variables(),
            functions,
            instance.constraints().to_vec(),
        )
        .expect("same shape")
    }

    fn oracle(&self, instance: &Instance) -> Result<Rational> {
        brute_force_z(&self.apply(instance), &Budget::default())
    }
}

const CHECKS: &[Check] = &[
    Check {
        name: "product-type-eval",
        suite: Suite::OracleEquivalence,
        invariant: "union-find evaluator equals brute force on product-type instances",
        run: case_product_type_eval,
    },
    Check {
        name: "pure-affine-eval",
        suite: Suite::OracleEquivalence,
        invariant: "GF(2) evaluator equals brute force on pure-affine instances",
        run: case_pure_affine_eval,
    },
    Check {
        name: "witness-reconstruction",
        suite: Suite::OracleEquivalence,
        invariant: "product-type witnesses multiply back to the original table",
        run: case_witness,
    },
    Check {
        name: "auto-eval",
        suite: Suite::OracleEquivalence,
        invariant: "classifier-driven evaluation equals brute force on mixed instances",
        run: case_auto_eval,
    },
    Check {
        name: "projection",
        suite: Suite::ReductionSoundness,
        invariant: "replacing g = project(f, J) by f with fresh variables preserves Z",
        run: case_projection,
    },
    Check {
        name: "boolean-pinning",
        suite: Suite::ReductionSoundness,
        invariant: "pinning reduction recovers Z from delta-free evaluations",
        run: case_pinning,
    },
    Check {
        name: "interpolation",
        suite: Suite::ReductionSoundness,
        invariant: "interpolating Z(I; w) at w = c recovers Z",
        run: case_interpolation,
    },
    Check {
        name: "parity-chain",
        suite: Suite::ReductionSoundness,
        invariant: "the parity gadget has 2^(k-1) solutions",
        run: case_parity,
    },
    Check {
        name: "mobius-pinning",
        suite: Suite::ReductionSoundness,
        invariant: "Möbius inversion over partitions equals distinctness-filtered enumeration",
        run: case_mobius,
    },
    Check {
        name: "cut-identity",
        suite: Suite::CutIdentity,
        invariant: "W_A(λ) = Z_H(G) / 2 for the incidence code and the Ising matrix",
        run: case_cut_identity,
    },
];

/// Names of every check, for `--inject-fault`.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.name).collect()
}

pub fn run_suite(suite: Suite, config: &VerifyConfig) -> Result<VerifyReport> {
    if let Some(name) = &config.inject_fault {
        if !CHECKS.iter().any(|c| c.name == name) {
            return Err(Error::Precondition(format!(
                "unknown check `{name}` (expected one of {})",
                check_names().join(", ")
            )));
        }
    }
    let mut checks = Vec::new();
    for (i, check) in CHECKS.iter().enumerate() {
        if !suite.includes(check.suite) {
            continue;
        }
        let faults = Faults {
            armed: config.inject_fault.as_deref() == Some(check.name),
        };
        let mut rng = gen::rng(config.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64));
        let mut failures = 0;
        let mut first_failure = None;
        for case in 0..config.cases {
            let outcome = (check.run)(&mut rng, &faults).unwrap_or_else(|e| Some(format!("error: {e}")));
            if let Some(detail) = outcome {
                failures += 1;
                first_failure.get_or_insert_with(|| format!("case {case}: {detail}"));
            }
        }
        checks.push(CheckOutcome {
            name: check.name,
            invariant: check.invariant,
            cases: config.cases,
            failures,
            first_failure,
        });
    }
    Ok(VerifyReport {
        suite,
        seed: config.seed,
        checks,
    })
}

fn compare(expected: &Rational, actual: &Rational, context: impl FnOnce() -> String) -> Option<String> {
    (expected != actual).then(|| {
        format!(
            "expected {}, got {} ({})",
            format_rational(expected),
            format_rational(actual),
            context()
        )
    })
}

fn product_type_instance(rng: &mut ChaCha8Rng) -> Result<Instance> {
    let mut catalog = gen::random_catalog(rng.gen_range(1..=3), rng, random_product_type);
    catalog.push(("eq".into(), equality(2)));
    catalog.push(("neq".into(), disequality(2)));
    let n = rng.gen_range(1..=10);
    let m = rng.gen_range(0..=12);
    random_instance(2, n, m, &catalog, rng)
}

fn pure_affine_instance(rng: &mut ChaCha8Rng) -> Result<Instance> {
    let catalog = gen::random_catalog(rng.gen_range(1..=3), rng, random_pure_affine);
    let n = rng.gen_range(1..=10);
    let m = rng.gen_range(0..=12);
    random_instance(2, n, m, &catalog, rng)
}

fn case_product_type_eval(rng: &mut ChaCha8Rng, faults: &Faults) -> Result<Option<String>> {
    let inst = product_type_instance(rng)?;
    let fast = eval_product_type(&faults.apply(&inst))?;
    Ok(compare(&brute_force_z(&inst, &Budget::default())?, &fast, || inst.to_json()))
}

fn case_pure_affine_eval(rng: &mut ChaCha8Rng, faults: &Faults) -> Result<Option<String>> {
    let inst = pure_affine_instance(rng)?;
    let fast = eval_pure_affine(&faults.apply(&inst))?;
    Ok(compare(&brute_force_z(&inst, &Budget::default())?, &fast, || inst.to_json()))
}

fn case_witness(rng: &mut ChaCha8Rng, faults: &Faults) -> Result<Option<String>> {
    let k = rng.gen_range(0..=5);
    let f = random_product_type(k, rng);
    let Some(w) = product_type(&f)? else {
        return Ok(Some(format!("generated product-type function rejected: {:?}", f.table())));
    };
    let mut rebuilt = Instance::boolean(0);
    rebuilt.define("w", w.reconstruct())?;
    let rebuilt = faults.apply(&rebuilt);
    let ok = rebuilt.function("w")? == &f;
    Ok((!ok).then(|| format!("witness does not reconstruct {:?}", f.table())))
}

fn case_auto_eval(rng: &mut ChaCha8Rng, faults: &Faults) -> Result<Option<String>> {
    let n = rng.gen_range(1..=10);
    let m = rng.gen_range(0..=12);
    let inst = gen::generate(gen::Profile::Mixed, n, m, rng.gen())?;
    let fast = AutoEvaluator::default().evaluate(&faults.apply(&inst))?;
    Ok(compare(&brute_force_z(&inst, &Budget::default())?, &fast, || inst.to_json()))
}

fn small_values() -> Vec<Rational> {
    vec![int(0), int(1), int(2), int(3), ratio(1, 2)]
}

fn case_projection(rng: &mut ChaCha8Rng, faults: &Faults) -> Result<Option<String>> {
    let k = rng.gen_range(1..=3);
    let f = random_function(k, 2, &small_values(), rng);
    let mut keep: Vec<usize> = (0..k).filter(|_| rng.gen_bool(0.5)).collect();
    if keep.is_empty() {
        keep.push(rng.gen_range(0..k));
    }
    let g = project(&f, &keep)?;
    let other = random_function(2, 2, &small_values(), rng);
    let catalog = vec![("g".to_string(), g), ("h".to_string(), other)];
    let n = rng.gen_range(1..=6);
    let inst = random_instance(2, n, rng.gen_range(1..=6), &catalog, rng)?;
    if inst.function("g").is_err() {
        return Ok(None);
    }
    let simulated = simulate_projection_instance(&inst, "g", "f", &f, &keep)?;
    let z = faults.oracle(&simulated)?;
    Ok(compare(&brute_force_z(&inst, &Budget::default())?, &z, || inst.to_json()))
}

fn case_pinning(rng: &mut ChaCha8Rng, faults: &Faults) -> Result<Option<String>> {
    let symmetric = rng.gen_bool(0.3);
    let f = if symmetric {
        let a = gen::random_weight_or_zero(rng, 0.2);
        let b = gen::random_weight_or_zero(rng, 0.2);
        crate::WeightFunction::boolean(2, vec![a.clone(), b.clone(), b, a])?
    } else {
        random_function(2, 2, &small_values(), rng)
    };
    let catalog = vec![
        ("f".to_string(), f),
        ("delta0".to_string(), delta(2, 0)),
        ("delta1".to_string(), delta(2, 1)),
    ];
    let n = rng.gen_range(1..=8);
    let inst = random_instance(2, n, rng.gen_range(1..=8), &catalog, rng)?;
    let evaluator = |i: &Instance| faults.oracle(i);
    let out = pinning_reduce_boolean(&inst, &evaluator)?;
    Ok(compare(&brute_force_z(&inst, &Budget::default())?, &out.z, || {
        format!("{:?} on {}", out.path, inst.to_json())
    }))
}

fn case_interpolation(rng: &mut ChaCha8Rng, faults: &Faults) -> Result<Option<String>> {
    let c = [int(0), ratio(1, 2), int(3), int(7)].choose(rng).expect("non-empty").clone();
    let lambda = [int(2), ratio(1, 2), int(3)].choose(rng).expect("non-empty").clone();
    let n = rng.gen_range(1..=6);
    let mut inst = random_instance(
        2,
        n,
        rng.gen_range(0..=5),
        &[("f".to_string(), random_function(2, 2, &small_values(), rng))],
        rng,
    )?;
    inst.define("uc", unary_weight(c))?;
    for _ in 0..rng.gen_range(1..=6) {
        inst.constrain("uc", &[rng.gen_range(0..n)])?;
    }
    let evaluator = |i: &Instance| faults.oracle(i);
    let out = interpolation_reduce(&inst, "uc", &lambda, &evaluator)?;
    Ok(compare(&brute_force_z(&inst, &Budget::default())?, &out.z, || inst.to_json()))
}

fn case_parity(rng: &mut ChaCha8Rng, faults: &Faults) -> Result<Option<String>> {
    let k = rng.gen_range(1..=7);
    let gadget = parity_chain(k)?;
    let z = faults.oracle(&gadget.instance)?;
    Ok(compare(&int(1 << (k - 1)), &z, || format!("k = {k}")))
}

fn case_mobius(rng: &mut ChaCha8Rng, faults: &Faults) -> Result<Option<String>> {
    let q = rng.gen_range(2..=3);
    let n = rng.gen_range(q..=q + 3);
    let values: Vec<Rational> = vec![int(0), int(1), int(2)];
    let catalog = vec![
        ("f".to_string(), random_function(2, q, &values, rng)),
        ("u".to_string(), random_function(1, q, &values, rng)),
    ];
    let base = random_instance(q, n, rng.gen_range(0..=5), &catalog, rng)?;
    let mut vars: Vec<usize> = (0..n).collect();
    vars.shuffle(rng);
    vars.truncate(q);
    let d = DisequalityInstance::new(base.clone(), vars.clone())?;
    let evaluator = |i: &Instance| faults.oracle(i);
    let trace = mobius_pinning_reduce(&d, &evaluator)?;
    let direct = filtered_z(&base, &Budget::default(), |s| {
        let mut seen = vec![false; q];
        vars.iter().all(|&v| !std::mem::replace(&mut seen[s[v]], true))
    })?;
    debug_assert_eq!(d.to_instance()?.function("alldiff")?, &all_distinct(q));
    Ok(compare(&direct, &trace.z, || base.to_json()))
}

fn case_cut_identity(rng: &mut ChaCha8Rng, faults: &Faults) -> Result<Option<String>> {
    let n = rng.gen_range(1..=7);
    let g = Graph::random_connected(n, 0.35, rng);
    let lambda = [int(0), ratio(1, 2), int(1), int(2), int(3)].choose(rng).expect("non-empty").clone();
    let w = weight_enumerator(&incidence_code(&g)?, &lambda, &Budget::default())?;
    let z = faults.oracle(&hom_instance(&TargetMatrix::ising(&lambda), &g))?;
    let twice_w = &w + &w;
    Ok(compare(&twice_w, &z, || format!("λ = {lambda}, graph {}", g.to_json())))
}
