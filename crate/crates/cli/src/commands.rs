use std::fmt;
use std::io::Read;
use std::path::Path;

use serde_json::{json, Value};
use wcsp::classify::classify_family;
use wcsp::eval::AutoEvaluator;
use wcsp::function::library::builtin;
use wcsp::gen::{generate, Profile};
use wcsp::models::{
    bulatov_grohe_classify, eval_graph_hom, incidence_code, ising_direct, rank_one_closed_form,
    verify_cut_identity, weight_enumerator, GeneratorMatrix, Graph, TargetMatrix,
};
use wcsp::oracle::{brute_force_z, Budget};
use wcsp::rational::{format_decimal, format_rational, parse_rational, parse_weight};
use wcsp::reduce::{
    interpolation_reduce, mobius_pinning_reduce, parity_chain, pinning_reduce_boolean,
    simulate_pinned_instance, simulate_projection_instance, symmetric_pinning_reduce_q, DisequalityInstance,
    PinningPath,
};
use wcsp::verify::{run_suite, Suite, VerifyConfig};
use wcsp::{Instance, Rational, WeightFunction};

pub enum CliError {
    Input(String),
    Library(wcsp::Error),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Library(e) if e.is_refusal() => 3,
            CliError::Library(e) if e.is_internal() => 1,
            CliError::Library(_) => 2,
            CliError::Verification(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Library(e) if e.is_refusal() => write!(f, "refused: {e}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<wcsp::Error> for CliError {
    fn from(e: wcsp::Error) -> Self {
        CliError::Library(e)
    }
}

type CliResult = Result<(), CliError>;

/// Settings shared by every command.
pub struct Context {
    pub budget: Budget,
}

impl Context {
    /// Reads `WCSP_BUDGET` (an integer or `2^k`) if set.
    pub fn from_env() -> Result<Self, CliError> {
        let budget = match std::env::var("WCSP_BUDGET") {
            Ok(text) => Budget::new(parse_budget(&text)?),
            Err(_) => Budget::default(),
        };
        Ok(Self { budget })
    }

    fn evaluator(&self, force_oracle: bool) -> AutoEvaluator {
        AutoEvaluator {
            budget: self.budget,
            force_oracle,
        }
    }

    fn oracle(&self, instance: &Instance) -> Result<Rational, CliError> {
        Ok(brute_force_z(instance, &self.budget)?)
    }
}

fn parse_budget(text: &str) -> Result<u128, CliError> {
    let bad = || CliError::Input(format!("WCSP_BUDGET: expected an integer or 2^k, got `{text}`"));
    let text = text.trim();
    if let Some(exp) = text.strip_prefix("2^") {
        let e: u32 = exp.parse().map_err(|_| bad())?;
        return 2u128.checked_pow(e).ok_or_else(bad);
    }
    text.parse().map_err(|_| bad())
}

fn read_text(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_instance(path: &Path) -> Result<Instance, CliError> {
    Instance::from_json(&read_text(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    Graph::parse(&read_text(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_lambda(text: &str) -> Result<Rational, CliError> {
    parse_weight(text).map_err(|e| CliError::Input(format!("--lambda: {e}")))
}

fn emit(value: &Value) {
    println!("{value}");
}

fn z_fields(z: &Rational) -> Value {
    json!({ "exact": format_rational(z), "decimal": format_decimal(z, 15) })
}

/// Reports a two-sided comparison on stderr; a mismatch becomes exit code 4.
fn check(label: &str, expected: &Rational, actual: &Rational) -> CliResult {
    let (e, a) = (format_rational(expected), format_rational(actual));
    if expected == actual {
        eprintln!("verify {label}: ok ({e} = {a})");
        Ok(())
    } else {
        eprintln!("verify {label}: MISMATCH ({e} != {a})");
        Err(CliError::Verification(format!("{label}: oracle {e}, reduction {a}")))
    }
}

/// Evaluates a source instance and its transform with the oracle and compares.
fn check_instances(ctx: &Context, label: &str, source: &Instance, transformed: &Instance) -> CliResult {
    check(label, &ctx.oracle(source)?, &ctx.oracle(transformed)?)
}

fn resolve_function(instance: &Instance, name: &str) -> Result<WeightFunction, CliError> {
    match instance.functions().get(name) {
        Some(f) => Ok(f.clone()),
        None => builtin(name, instance.domain_size())
            .map_err(|e| CliError::Input(format!("`{name}` is neither in the catalog nor a built-in: {e}"))),
    }
}

pub fn classify(_ctx: &Context, file: Option<&Path>, builtins: &[String]) -> CliResult {
    let mut catalog: Vec<(String, WeightFunction)> = Vec::new();
    if let Some(path) = file {
        let inst = read_instance(path)?;
        catalog.extend(inst.functions().iter().map(|(k, v)| (k.clone(), v.clone())));
    }
    for name in builtins {
        let f = builtin(name, 2).map_err(|e| CliError::Input(format!("--builtin: {e}")))?;
        catalog.push((name.clone(), f));
    }
    if catalog.is_empty() {
        return Err(CliError::Input("nothing to classify: give a file or --builtin".into()));
    }
    let verdict = classify_family(catalog.iter().map(|(n, f)| (n.as_str(), f)))?;
    emit(&json!({ "command": "classify", "verdict": verdict.to_json() }));
    Ok(())
}

pub fn eval(ctx: &Context, file: &Path, force_oracle: bool) -> CliResult {
    let inst = read_instance(file)?;
    let evaluator = ctx.evaluator(force_oracle);
    let method = evaluator.choose(&inst)?;
    eprintln!("evaluator: {}", method.as_str());
    let out = evaluator.run(&inst)?;
    emit(&json!({
        "command": "eval",
        "evaluator": out.method.as_str(),
        "z": z_fields(&out.z),
        "elapsed_ms": out.elapsed.as_secs_f64() * 1e3,
    }));
    Ok(())
}

pub fn reduce_project(ctx: &Context, file: &Path, g: &str, f: &str, keep: &[usize], verify: bool) -> CliResult {
    let inst = read_instance(file)?;
    let source = resolve_function(&inst, f)?;
    let out = simulate_projection_instance(&inst, g, f, &source, keep)?;
    println!("{}", out.to_json());
    if verify {
        check_instances(ctx, "project", &inst, &out)?;
    }
    Ok(())
}

pub fn reduce_pin(
    ctx: &Context,
    file: &Path,
    g: &str,
    f: &str,
    position: usize,
    value: usize,
    verify: bool,
) -> CliResult {
    let inst = read_instance(file)?;
    let source = resolve_function(&inst, f)?;
    let out = simulate_pinned_instance(&inst, g, f, &source, position, value)?;
    println!("{}", out.to_json());
    if verify {
        check_instances(ctx, "pin", &inst, &out)?;
    }
    Ok(())
}

pub fn reduce_pin_vars(ctx: &Context, file: &Path, force_oracle: bool, verify: bool) -> CliResult {
    let inst = read_instance(file)?;
    let out = pinning_reduce_boolean(&inst, &ctx.evaluator(force_oracle))?;
    let path = match &out.path {
        PinningPath::Contradiction => json!({ "kind": "contradiction" }),
        PinningPath::Unpinned => json!({ "kind": "unpinned" }),
        PinningPath::Symmetric => json!({ "kind": "symmetric" }),
        PinningPath::Asymmetric { function, tuple } => {
            json!({ "kind": "asymmetric", "function": function, "tuple": tuple })
        }
    };
    emit(&json!({
        "command": "reduce pin-vars",
        "z": z_fields(&out.z),
        "path": path,
        "calls": out.calls.iter().map(|(label, i, z)| json!({
            "label": label,
            "n": i.num_variables(),
            "constraints": i.constraints().len(),
            "z": format_rational(z),
        })).collect::<Vec<_>>(),
    }));
    if verify {
        check("pin-vars", &ctx.oracle(&inst)?, &out.z)?;
    }
    Ok(())
}

pub fn reduce_interpolate(
    ctx: &Context,
    file: &Path,
    unary: &str,
    lambda: &str,
    force_oracle: bool,
    verify: bool,
) -> CliResult {
    let inst = read_instance(file)?;
    let lambda = parse_rational(lambda).map_err(|e| CliError::Input(format!("--lambda: {e}")))?;
    let out = interpolation_reduce(&inst, unary, &lambda, &ctx.evaluator(force_oracle))?;
    emit(&json!({
        "command": "reduce interpolate",
        "z": z_fields(&out.z),
        "c": format_rational(&out.c),
        "degree_bound": out.coefficients.len() - 1,
        "coefficients": out.coefficients.iter().map(format_rational).collect::<Vec<_>>(),
        "points": out.points.iter().map(|(w, z)| json!([format_rational(w), format_rational(z)])).collect::<Vec<_>>(),
    }));
    if verify {
        check("interpolate", &ctx.oracle(&inst)?, &out.z)?;
    }
    Ok(())
}

pub fn reduce_parity_chain(ctx: &Context, k: usize, verify: bool) -> CliResult {
    let gadget = parity_chain(k)?;
    println!("{}", gadget.instance.to_json());
    eprintln!("primary variables: {:?}", gadget.primary);
    if verify {
        let expected = Rational::from_integer((1u128 << (k - 1)).into());
        check("parity-chain", &expected, &ctx.oracle(&gadget.instance)?)?;
    }
    Ok(())
}

pub fn reduce_mobius(ctx: &Context, file: &Path, constraint: Option<usize>, symmetric: bool, verify: bool) -> CliResult {
    let inst = read_instance(file)?;
    let evaluator = ctx.evaluator(false);
    let (z, trace) = if symmetric {
        let out = symmetric_pinning_reduce_q(&inst, &evaluator)?;
        (out.z, out.trace)
    } else {
        let d = DisequalityInstance::from_instance(&inst, constraint)?;
        let trace = mobius_pinning_reduce(&d, &evaluator)?;
        (trace.z.clone(), Some(trace))
    };
    emit(&json!({
        "command": "reduce mobius-pin",
        "z": z_fields(&z),
        "terms": trace.map(|t| t.terms.iter().map(|term| json!({
            "partition": term.partition.to_string(),
            "mu": term.mu,
            "z": format_rational(&term.z),
        })).collect::<Vec<_>>()),
    }));
    if verify {
        check("mobius-pin", &ctx.oracle(&inst)?, &z)?;
    }
    Ok(())
}

pub fn model_ising(ctx: &Context, graph: &Path, lambda: &str) -> CliResult {
    let g = read_graph(graph)?;
    let lambda = parse_lambda(lambda)?;
    let h = TargetMatrix::ising(&lambda);
    let z = eval_graph_hom(&h, &g, &ctx.budget)?;
    let direct = ising_direct(&g, &lambda, &ctx.budget)?;
    emit(&json!({
        "command": "model ising",
        "z": z_fields(&z),
        "classification": bulatov_grohe_classify(&h).to_json(),
    }));
    if z != direct {
        return Err(CliError::Verification(format!(
            "instance encoding gave {}, direct enumeration {}",
            format_rational(&z),
            format_rational(&direct)
        )));
    }
    Ok(())
}

pub fn model_evalh(ctx: &Context, graph: Option<&Path>, matrix: &Path) -> CliResult {
    let h = TargetMatrix::parse(&read_text(matrix)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", matrix.display())))?;
    let verdict = bulatov_grohe_classify(&h);
    let mut out = json!({
        "command": "model evalh",
        "matrix": h.to_json(),
        "classification": verdict.to_json(),
    });
    if let Some(path) = graph {
        let g = read_graph(path)?;
        out["z"] = z_fields(&eval_graph_hom(&h, &g, &ctx.budget)?);
        if let Ok(closed) = rank_one_closed_form(&h, &g) {
            out["closed_form"] = Value::String(format_rational(&closed));
        }
    }
    emit(&out);
    Ok(())
}

pub fn model_wenum(ctx: &Context, matrix: Option<&Path>, graph: Option<&Path>, lambda: &str) -> CliResult {
    let lambda = parse_lambda(lambda)?;
    let a = match (matrix, graph) {
        (Some(path), _) => GeneratorMatrix::parse(&read_text(path)?)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        (None, Some(path)) => incidence_code(&read_graph(path)?)?,
        (None, None) => return Err(CliError::Input("give --matrix or --graph".into())),
    };
    let w = weight_enumerator(&a, &lambda, &ctx.budget)?;
    emit(&json!({
        "command": "model wenum",
        "rank": a.rank(),
        "length": a.columns(),
        "w": z_fields(&w),
    }));
    Ok(())
}

pub fn model_cut_check(ctx: &Context, graph: &Path, lambda: &str) -> CliResult {
    let g = read_graph(graph)?;
    let lambda = parse_lambda(lambda)?;
    let out = verify_cut_identity(&g, &lambda, &ctx.budget)?;
    emit(&json!({ "command": "model cut-check", "lambda": format_rational(&lambda), "result": out.to_json() }));
    if !out.holds {
        return Err(CliError::Verification("W_A(λ) differs from Z_H(G) / 2".into()));
    }
    Ok(())
}

pub fn verify(suite: &str, seed: u64, cases: usize, inject_fault: Option<String>) -> CliResult {
    let suite: Suite = suite.parse().map_err(|e: wcsp::Error| CliError::Input(format!("--suite: {e}")))?;
    let config = VerifyConfig {
        seed,
        cases,
        inject_fault,
    };
    let report = run_suite(suite, &config).map_err(|e| CliError::Input(e.to_string()))?;
    for c in &report.checks {
        let status = if c.passed() { "pass" } else { "FAIL" };
        eprintln!("{status} {} ({}/{} failed): {}", c.name, c.failures, c.cases, c.invariant);
        if let Some(detail) = &c.first_failure {
            eprintln!("    {detail}");
        }
    }
    emit(&report.to_json());
    if !report.passed() {
        let failing: Vec<&str> = report.checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
        return Err(CliError::Verification(failing.join(", ")));
    }
    Ok(())
}

pub fn gen(profile: &str, seed: u64, n: usize, constraints: usize) -> CliResult {
    let profile: Profile = profile
        .parse()
        .map_err(|e: wcsp::Error| CliError::Input(format!("--profile: {e}")))?;
    let inst = generate(profile, n, constraints, seed)?;
    println!("{}", inst.to_json());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::Rng;

    #[test]
    fn budget_forms() {
        assert_eq!(parse_budget("1024").ok(), Some(1024));
        assert_eq!(parse_budget("2^20").ok(), Some(1 << 20));
        assert!(parse_budget("lots").is_err());
        assert!(parse_budget("2^200").is_err());
    }

    /// Perturbs one table entry of one catalog function, or appends a copy of a constraint.
    fn corrupt(inst: &Instance, rng: &mut impl Rng) -> Instance {
        let mut functions = inst.functions().clone();
        let mut constraints = inst.constraints().to_vec();
        if rng.gen_bool(0.5) && !constraints.is_empty() {
            let c = constraints.choose(rng).unwrap().clone();
            constraints.push(c);
        } else {
            let i = rng.gen_range(0..functions.len());
            let f = &mut functions[i];
            let mut table = f.table().to_vec();
            let j = rng.gen_range(0..table.len());
            table[j] += Rational::from_integer(rng.gen_range(1..3).into());
            *f = WeightFunction::new(f.arity(), f.domain_size(), table).unwrap();
        }
        Instance::from_parts(inst.domain_size(), inst.num_variables(), functions, constraints).unwrap()
    }

    #[test]
    fn verify_never_passes_a_corrupted_transform() {
        let ctx = Context { budget: Budget::default() };
        let mut rng = wcsp::gen::rng(11);
        let values = [wcsp::rational::int(0), wcsp::rational::int(1), wcsp::rational::int(2)];
        let mut caught = 0;
        for _ in 0..300 {
            let k = rng.gen_range(1..=3);
            let f = wcsp::gen::random_function(k, 2, &values, &mut rng);
            let keep: Vec<usize> = (0..k).filter(|_| rng.gen_bool(0.5)).collect();
            let keep = if keep.is_empty() { vec![0] } else { keep };
            let g = wcsp::reduce::project(&f, &keep).unwrap();
            let catalog = [("g".to_string(), g)];
            let inst = wcsp::gen::random_instance(2, rng.gen_range(1..=5), rng.gen_range(1..=4), &catalog, &mut rng)
                .unwrap();
            let out = simulate_projection_instance(&inst, "g", "f", &f, &keep).unwrap();
            assert!(check_instances(&ctx, "project", &inst, &out).is_ok());

            let bad = corrupt(&out, &mut rng);
            let differ = brute_force_z(&inst, &Budget::default()).unwrap() != brute_force_z(&bad, &Budget::default()).unwrap();
            match check_instances(&ctx, "project", &inst, &bad) {
                Ok(()) => assert!(!differ, "verification passed a differing transform"),
                Err(CliError::Verification(_)) => {
                    assert!(differ);
                    caught += 1;
                }
                Err(e) => panic!("unexpected error: {e}"),
            }
        }
        assert!(caught > 100, "only {caught} corruptions changed Z");
    }
}
