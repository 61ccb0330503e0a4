use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const SAMPLE: &str = r#"{"q":2,"n":3,"functions":{"xor3":{"arity":3,"table":["0","1","1","0","1","0","0","1"]}},"constraints":[{"f":"xor3","scope":[0,1,2]}]}"#;

fn wcsp(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wcsp"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    cmd.env_remove("WCSP_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn json_out(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write_tmp(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn eval_sample_reports_method_and_exact_value() {
    let out = wcsp(&["eval", "-"], Some(SAMPLE), &[]);
    assert_eq!(code(&out), 0);
    let v = json_out(&out);
    assert_eq!(v["z"]["exact"], "4");
    assert_eq!(v["evaluator"], "pure-affine");
    assert!(v["elapsed_ms"].is_number());
    let forced = json_out(&wcsp(&["eval", "--force-oracle", "-"], Some(SAMPLE), &[]));
    assert_eq!(forced["evaluator"], "brute-force");
    assert_eq!(forced["z"]["exact"], "4");
}

#[test]
fn classify_family_verdicts() {
    let neq = json_out(&wcsp(&["classify", "--builtin", "neq"], None, &[]));
    assert_eq!(neq["verdict"]["family_verdict"], "PRODUCT_TYPE_FP");
    let xor = json_out(&wcsp(&["classify", "--builtin", "xor3"], None, &[]));
    assert_eq!(xor["verdict"]["family_verdict"], "PURE_AFFINE_FP");
    let hard = json_out(&wcsp(&["classify", "--builtin", "xor3", "--builtin", "unary:2"], None, &[]));
    assert_eq!(hard["verdict"]["family_verdict"], "HARD");
    assert_eq!(hard["verdict"]["hard_pair"]["not_product_type"], "xor3");
    assert_eq!(hard["verdict"]["hard_pair"]["not_pure_affine"], "unary:2");
    let file = json_out(&wcsp(&["classify", "-"], Some(r#"{"q":2,"functions":{"d":{"builtin":"delta0"}}}"#), &[]));
    assert_eq!(file["verdict"]["family_verdict"], "PRODUCT_TYPE_FP");
}

#[test]
fn product_type_chain_of_a_thousand() {
    let n = 1000;
    let constraints: Vec<String> = (1..n).map(|v| format!(r#"{{"f":"neq","scope":[{},{v}]}}"#, v - 1)).collect();
    let doc = format!(
        r#"{{"q":2,"n":{n},"functions":{{"neq":{{"builtin":"neq"}},"u":{{"builtin":"unary:3"}}}},"constraints":[{},{{"f":"u","scope":[0]}}]}}"#,
        constraints.join(",")
    );
    let v = json_out(&wcsp(&["eval", "-"], Some(&doc), &[]));
    assert_eq!(v["evaluator"], "product-type");
    assert_eq!(v["z"]["exact"], "4");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&wcsp(&["eval", "-"], Some("{not json"), &[])), 2);
    let negative = r#"{"q":2,"n":1,"functions":{"u":{"arity":1,"table":["1","-2"]}},"constraints":[]}"#;
    let out = wcsp(&["eval", "-"], Some(negative), &[]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("functions.u.table[1]"));
    assert_eq!(code(&wcsp(&["eval", "/nonexistent/file.json"], None, &[])), 2);
    assert_eq!(code(&wcsp(&["eval", "--force-oracle", "-"], Some(SAMPLE), &[("WCSP_BUDGET", "4")])), 3);
    assert_eq!(code(&wcsp(&["eval", "-"], Some(SAMPLE), &[("WCSP_BUDGET", "many")])), 2);
    assert_eq!(code(&wcsp(&["frobnicate"], None, &[])), 2);
}

#[test]
fn hard_instance_over_budget_is_refused() {
    let doc = r#"{"q":2,"n":40,"functions":{"x":{"builtin":"xor3"},"u":{"builtin":"unary:2"}},"constraints":[{"f":"x","scope":[0,1,39]},{"f":"u","scope":[5]}]}"#;
    let out = wcsp(&["eval", "-"], Some(doc), &[]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("refused"));
}

#[test]
fn reduce_project_and_pin_verify() {
    let doc = r#"{"q":2,"n":2,"functions":{"g":{"arity":1,"table":["1","1"]},"h":{"arity":2,"table":["1","2","3","4"]}},"constraints":[{"f":"g","scope":[0]},{"f":"h","scope":[0,1]}]}"#;
    let path = write_tmp("project.json", doc);
    let out = wcsp(&["reduce", "project", path.to_str().unwrap(), "--g", "g", "--f", "neq", "--keep", "0", "--verify"], None, &[]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_out(&out);
    assert_eq!(v["n"], 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("verify project: ok"));

    let wrong = wcsp(&["reduce", "project", path.to_str().unwrap(), "--g", "g", "--f", "h", "--keep", "0"], None, &[]);
    assert_eq!(code(&wrong), 3);

    let pin_doc = r#"{"q":2,"n":1,"functions":{"g":{"arity":1,"table":["0","1"]}},"constraints":[{"f":"g","scope":[0]}]}"#;
    let out = wcsp(&["reduce", "pin", "-", "--g", "g", "--f", "neq", "--position", "0", "--value", "0", "--verify"], Some(pin_doc), &[]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn reduce_pin_vars_paths() {
    let sym = r#"{"q":2,"n":2,"functions":{"d0":{"builtin":"delta0"},"neq":{"builtin":"neq"}},"constraints":[{"f":"d0","scope":[0]},{"f":"neq","scope":[0,1]}]}"#;
    let v = json_out(&wcsp(&["reduce", "pin-vars", "-", "--verify"], Some(sym), &[]));
    assert_eq!(v["z"]["exact"], "1");
    assert_eq!(v["path"]["kind"], "symmetric");
    let asym = r#"{"q":2,"n":2,"functions":{"d0":{"builtin":"delta0"},"f":{"arity":2,"table":["1","3","2","6"]}},"constraints":[{"f":"d0","scope":[0]},{"f":"f","scope":[0,1]}]}"#;
    let v = json_out(&wcsp(&["reduce", "pin-vars", "-", "--verify"], Some(asym), &[]));
    assert_eq!(v["z"]["exact"], "4");
    assert_eq!(v["path"]["kind"], "asymmetric");
    assert_eq!(v["calls"].as_array().unwrap().len(), 4);
}

#[test]
fn reduce_interpolate_and_mobius() {
    let doc = r#"{"q":2,"n":1,"functions":{"uc":{"builtin":"unary:3"}},"constraints":[{"f":"uc","scope":[0]},{"f":"uc","scope":[0]}]}"#;
    let v = json_out(&wcsp(&["reduce", "interpolate", "-", "--unary", "uc", "--lambda", "2", "--verify"], Some(doc), &[]));
    assert_eq!(v["z"]["exact"], "10");
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 3);
    assert_eq!(code(&wcsp(&["reduce", "interpolate", "-", "--unary", "uc", "--lambda", "1"], Some(doc), &[])), 3);

    let q3 = r#"{"q":3,"n":3,"functions":{"ad":{"builtin":"alldiff"}},"constraints":[{"f":"ad","scope":[0,1,2]}]}"#;
    let v = json_out(&wcsp(&["reduce", "mobius-pin", "-", "--verify"], Some(q3), &[]));
    assert_eq!(v["z"]["exact"], "6");
    assert_eq!(v["terms"].as_array().unwrap().len(), 5);

    let sym = r#"{"q":3,"n":2,"functions":{"d2":{"builtin":"delta2"},"neq":{"builtin":"neq"}},"constraints":[{"f":"d2","scope":[0]},{"f":"neq","scope":[0,1]}]}"#;
    let v = json_out(&wcsp(&["reduce", "mobius-pin", "-", "--symmetric", "--verify"], Some(sym), &[]));
    assert_eq!(v["z"]["exact"], "2");
}

#[test]
fn parity_chain_counts() {
    for k in [3, 4, 5, 8] {
        let out = wcsp(&["reduce", "parity-chain", "--k", &k.to_string(), "--verify"], None, &[]);
        assert_eq!(code(&out), 0);
        let v = json_out(&out);
        let n = v["n"].as_u64().unwrap();
        assert!(n >= k as u64);
    }
}

#[test]
fn models() {
    let tri = write_tmp("tri.txt", "0 1\n1 2\n2 0\n");
    let tri = tri.to_str().unwrap();
    let v = json_out(&wcsp(&["model", "ising", "--graph", tri, "--lambda", "2"], None, &[]));
    assert_eq!(v["z"]["exact"], "26");
    assert_eq!(v["classification"]["verdict"], "HARD");
    let m = write_tmp("ones.txt", "1 1\n1 1\n");
    let v = json_out(&wcsp(&["model", "evalh", "--graph", tri, "--matrix", m.to_str().unwrap()], None, &[]));
    assert_eq!(v["z"]["exact"], "8");
    assert_eq!(v["closed_form"], "8");
    assert_eq!(v["classification"]["verdict"], "TRACTABLE");
    let a = write_tmp("gen.txt", "1 0\n0 1\n");
    let v = json_out(&wcsp(&["model", "wenum", "--matrix", a.to_str().unwrap(), "--lambda", "2"], None, &[]));
    assert_eq!(v["w"]["exact"], "9");
    let v = json_out(&wcsp(&["model", "cut-check", "--graph", tri, "--lambda", "1/2"], None, &[]));
    assert_eq!(v["result"]["holds"], true);
    let looped = write_tmp("loop.txt", "0 0\n");
    assert_eq!(code(&wcsp(&["model", "ising", "--graph", looped.to_str().unwrap(), "--lambda", "2"], None, &[])), 2);
}

#[test]
fn gen_is_reproducible() {
    for profile in ["product-type", "pure-affine", "mixed", "graph-hom"] {
        let a = wcsp(&["gen", "--profile", profile, "--seed", "9"], None, &[]);
        let b = wcsp(&["gen", "--profile", profile, "--seed", "9"], None, &[]);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout);
        let round = wcsp(&["eval", "--force-oracle", "-"], Some(std::str::from_utf8(&a.stdout).unwrap()), &[]);
        assert_eq!(code(&round), 0, "{profile}");
    }
    assert_eq!(code(&wcsp(&["gen", "--profile", "nope"], None, &[])), 2);
}

#[test]
fn verify_command() {
    let ok = wcsp(&["verify", "--seed", "0", "--cases", "5"], None, &[]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stderr));
    assert_eq!(json_out(&ok)["passed"], true);
    let bad = wcsp(&["verify", "--cases", "5", "--inject-fault", "projection"], None, &[]);
    assert_eq!(code(&bad), 4);
    let v = json_out(&bad);
    let failing: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, vec!["projection"]);
    assert_eq!(code(&wcsp(&["verify", "--suite", ""], None, &[])), 2);
}
