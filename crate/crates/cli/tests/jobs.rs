use pkernel::base_field::FieldDescriptor;
use pkernel::random::{instance_rng, random_element, PolyShape};
use pkernel_cli::job::Task;
use pkernel_cli::{parse_job, run_job};
use proptest::prelude::*;
use serde_json::{json, Value};

fn run(text: &str) -> Value {
    let job = parse_job(text).unwrap();
    let out = run_job(&job).unwrap();
    assert!(out.passed, "{}", out.report);
    out.report
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn pform_job_is_valid() {
    let job = parse_job(r#"{"p":2,"vars":["x","y"],"command":"pform","entries":["1","x"]}"#).unwrap();
    assert!(matches!(job.task, Task::PForm { .. }));
    let r = run_job(&job).unwrap().report;
    assert_eq!(r["result"]["entries"], json!(["1", "x"]));
    assert_eq!(r["result"]["norm_field"]["norm_degree"], json!(2));
}

#[test]
fn composite_characteristic_is_semantic_error() {
    let e = parse_job(r#"{"p":4,"vars":["x"],"command":"pform","entries":["1"]}"#).unwrap_err();
    assert_eq!(e.code(), "SemanticError");
}

#[test]
fn ann_job_is_valid() {
    let job = parse_job(r#"{"p":2,"vars":["x"],"command":"ann","sets":[["x"]],"n":1}"#).unwrap();
    assert!(matches!(job.task, Task::Ann { n: 1, .. }));
}

#[test]
fn kernel_of_two_independent_forms() {
    let r = run(r#"{"p":2,"vars":["x","y"],"command":"kernel","forms":[["1","x"],["1","y"]],"n":1}"#);
    assert_eq!(strings(&r["result"]["kernel"]["basis"]), ["dx", "dy"]);
    assert_eq!(r["result"]["s"], json!(2));
    assert_eq!(r["result"]["closed"]["agree"], json!(true));
    assert_eq!(strings(&r["result"]["closed"]["expanded"]["basis"]), ["dx", "dy"]);
}

#[test]
fn power_beyond_p_degree_is_full_space() {
    for (vars, n, dim) in [
        (vec!["x", "y"], 1, 2),
        (vec!["x", "y", "z"], 2, 3),
        (vec!["x", "y", "z", "w"], 2, 6),
    ] {
        let job = json!({"p":3,"vars":vars,"command":"ann","sets":[["x","y"]],"power":3,"n":n,"check":true});
        let r = run(&job.to_string());
        let k = &r["result"]["kernel"];
        assert_eq!(k["full_space"], json!(true));
        assert_eq!(k["dimension"], json!(dim));
        assert_eq!(r["result"]["check"]["agree"], json!(true));
    }
}

#[test]
fn witt_compositum_samples_verify() {
    let r = run(r#"{"p":2,"vars":["x","y"],"command":"witt","roots":["x"],"form":["1","y"],"budget":4}"#);
    let res = &r["result"];
    assert_eq!(res["case"]["case"], json!("compositum"));
    assert_eq!(res["case"]["l"], json!(1));
    let samples = res["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 8);
    assert!(samples.iter().all(|s| s["verified"] == json!(true)));
    assert!(samples.iter().any(|s| s["slots"] == json!(["x"])));
}

#[test]
fn witt_collapsed_norm_degree_is_rejected() {
    let job = parse_job(r#"{"p":2,"vars":["x"],"command":"witt","roots":["x"],"form":["1","x"]}"#).unwrap();
    assert_eq!(run_job(&job).unwrap_err().code(), "NormDegreeCollapsed");
}

#[test]
fn ann_falls_back_to_solver_without_closed_form() {
    // x and x*y^3 share p-degree with y, so neither closed form applies
    let r = run(r#"{"p":2,"vars":["x","y"],"command":"ann","sets":[["x","y"],["x","y"],["x","y"]],"n":1}"#);
    assert_eq!(r["result"]["case"], json!("none"));
    assert_eq!(r["result"]["generators"], Value::Null);
    assert_eq!(r["result"]["kernel"]["full_space"], json!(true));
}

#[test]
fn mixed_ann_matches_solver() {
    let r = run(r#"{"p":3,"vars":["x","y","z"],"command":"ann","sets":[["x"],["x","x*y","z"]],"n":2,"check":true}"#);
    assert_eq!(r["result"]["case"], json!("mixed"));
    assert_eq!(r["result"]["check"]["agree"], json!(true));
}

#[test]
fn compositum_kernel_with_check() {
    let r = run(r#"{"p":2,"vars":["x","y"],"command":"kernel","roots":["x"],"form":["1","x*y"],"n":1,"check":true}"#);
    assert_eq!(strings(&r["result"]["e"]), ["x*y"]);
    assert_eq!(strings(&r["result"]["kernel"]["basis"]), ["dx", "dy"]);
}

#[test]
fn crosscheck_campaigns_pass() {
    for name in ["ann-power", "tower-repeated-r<k", "compositum"] {
        let job = json!({"p":3,"vars":[],"command":"crosscheck","campaign":name,"count":6,"seed":11});
        let r = run(&job.to_string());
        assert_eq!(r["result"]["passed"], json!(6), "{name}");
    }
}

#[test]
fn crosscheck_uncovered_tower_is_hypothesis_error() {
    let job = parse_job(
        r#"{"p":2,"vars":["x","y","z"],"command":"crosscheck","forms":[["1","x","y"],["1","x","z"],["1","y","z"]],"n":1}"#,
    )
    .unwrap();
    assert_eq!(run_job(&job).unwrap_err().code(), "CaseNotCovered");
}

#[test]
fn rejects_unknown_and_misplaced_fields() {
    let e = parse_job(r#"{"p":2,"vars":["x"],"command":"pform","entries":["1"],"colour":"red"}"#).unwrap_err();
    assert_eq!(e.code(), "ParseError");
    let e = parse_job(r#"{"p":2,"vars":["x"],"command":"pform","entries":["1"],"n":2}"#).unwrap_err();
    assert_eq!(e.code(), "SemanticError");
    let e = parse_job(r#"{"p":2,"vars":["x"],"command":"kernel","n":1}"#).unwrap_err();
    assert_eq!(e.code(), "SemanticError");
}

#[test]
fn expression_errors_point_into_the_job_text() {
    let text = "{\"p\":2,\"vars\":[\"x\"],\n  \"command\":\"pform\",\"entries\":[\"1\",\"x+\"]}";
    match parse_job(text) {
        Err(pkernel::Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 39)),
        other => panic!("{other:?}"),
    }
    assert_eq!(
        parse_job(r#"{"p":2,"vars":["x"],"command":"pform","entries":["y"]}"#)
            .unwrap_err()
            .code(),
        "SemanticError"
    );
}

#[test]
fn same_job_and_seed_give_identical_reports() {
    let text = r#"{"p":2,"vars":["x","y","z"],"command":"witt","forms":[["1","x","y","z"]],"seed":5}"#;
    let a = serde_json::to_string(&run(text)).unwrap();
    let b = serde_json::to_string(&run(text)).unwrap();
    assert_eq!(a, b);
    let mut other = parse_job(text).unwrap();
    other.seed = Some(6);
    let c = serde_json::to_string(&run_job(&other).unwrap().report).unwrap();
    assert_ne!(a, c);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_jobs_round_trip(seed in any::<u64>(), pi in 0usize..3, len in 1usize..4) {
        let p = [2u32, 3, 5][pi];
        let f = FieldDescriptor::with_vars(p, &["x", "y"]);
        let mut rng = instance_rng(seed, 0);
        let entries: Vec<String> = (0..len)
            .map(|_| f.format(&random_element(&mut rng, p, 2, PolyShape::default())))
            .collect();
        let text = json!({"p":p,"vars":["x","y"],"command":"pform","entries":entries,"seed":seed}).to_string();
        let once = parse_job(&text).unwrap();
        let twice = parse_job(&once.to_json()).unwrap();
        prop_assert_eq!(once.to_json(), twice.to_json());
        prop_assert_eq!(&once.task, &twice.task);
        prop_assert_eq!(once.canonical().entries, Some(entries));
    }
}
