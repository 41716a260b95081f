use rootfan_cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String) {
    run(std::iter::once("rootfan").chain(args.iter().copied()))
}

fn ok(args: &[&str]) -> Value {
    let (code, out) = call(args);
    assert_eq!(code, 0, "{args:?} failed: {out}");
    serde_json::from_str(&out).unwrap()
}

const A2_DATA: &str = r#"{"pairs":[
    {"positive_root":[1,-1,0],"ratio":["1","1"]},
    {"positive_root":[1,0,-1],"ratio":["2","1"]},
    {"positive_root":[0,1,-1],"ratio":["2","1"]}]}"#;

const A2_CHAIN: &str = r#"{"n":2,"blocks":[[2],[1,3]],
    "coords":[{"i":1,"pos":["1","1"]},{"i":2,"pos":["3","1"]},{"i":3,"pos":["1","5"]}]}"#;

/// One invocation per verb; every library entry point is reachable from
/// at least one of them.
fn all_verbs() -> Vec<Vec<&'static str>> {
    vec![
        vec!["roots", "--factors", "A2xB2"],
        vec!["chambers", "--type", "G", "--rank", "2"],
        vec!["fan", "--type", "C", "--rank", "3"],
        vec!["lattice", "hnf", "--matrix", "[[1,3],[0,2]]"],
        vec!["lattice", "kernel", "--matrix", "[[1,2],[2,4]]"],
        vec!["lattice", "dual", "--matrix", "[[1,1],[0,1]]"],
        vec!["lattice", "equal", "--matrix", "[[1,0],[0,1]]", "--other", "[[1,1],[0,1]]"],
        vec!["morphism", "--type", "A", "--rank", "2", "--sub-roots", "[[1,-1,0]]"],
        vec!["embed", "--type", "A", "--rank", "2", "--target", "A1xA1xA1", "--mu", "[[1,0],[0,1],[1,1]]"],
        vec!["orbit", "--type", "A", "--rank", "2", "--cone", "[0]"],
        vec!["rdata", "validate", "--type", "A", "--rank", "2", "--data-json", A2_DATA],
        vec!["rdata", "to-point", "--type", "A", "--rank", "2", "--data-json", A2_DATA],
        vec![
            "rdata",
            "universal-at",
            "--type",
            "A",
            "--rank",
            "2",
            "--point-json",
            r#"{"chart":[[1,-1,0],[0,1,-1]],"coords":["2","0"]}"#,
        ],
        vec!["rdata", "verify-gen", "--type", "B", "--rank", "3"],
        vec!["rdata", "pattern", "--type", "A", "--rank", "2", "--vector", "[1,0]"],
        vec!["rdata", "roundtrip", "--type", "D", "--rank", "4", "--samples", "20"],
        vec!["betti", "--n", "3"],
        vec!["basis", "--n", "2"],
        vec!["reduce", "--class-json", r#"{"n":2,"terms":[{"chain":[[3]],"coeff":1}]}"#],
        vec!["multiply", "--n", "2", "--a", "[[1]]", "--b", "[[1]]"],
        vec!["primcol", "--n", "3"],
        vec!["nef", "--n", "3"],
        vec!["ample", "--n", "2", "--divisor-json", r#"{"coeffs":[{"subset":[1],"a":2}]}"#],
        vec!["polytope", "--n", "3"],
        vec!["sigma-delta", "--n", "3"],
        vec!["crepant", "--n", "3"],
        vec!["lm", "type", "--data-json", A2_DATA],
        vec!["lm", "from-data", "--data-json", A2_DATA],
        vec!["lm", "extract", "--chain-json", A2_CHAIN],
        vec!["lm", "contract", "--chain-json", A2_CHAIN, "--keep", "[1,3]"],
        vec!["lm", "membership", "--data-json", A2_DATA, "--z", r#"[["1","0"],["1","0"],["1","0"]]"#],
        vec!["lm", "universal", "--n", "2"],
        vec!["lm", "orbit-type", "--n", "3", "--chain", "[[2],[2,4]]"],
        vec!["lm", "roundtrip", "--n", "3", "--samples", "20"],
    ]
}

#[test]
fn every_verb_runs() {
    for args in all_verbs() {
        ok(&args);
    }
}

#[test]
fn every_subcommand_is_covered() {
    use clap::CommandFactory;
    let cmd = rootfan_cli::Cli::command();
    let verbs = all_verbs();
    for sub in cmd.get_subcommands() {
        let name = sub.get_name();
        let nested: Vec<&str> = sub.get_subcommands().map(|s| s.get_name()).collect();
        if nested.is_empty() {
            assert!(verbs.iter().any(|v| v[0] == name), "{name} not exercised");
        } else {
            for inner in nested {
                assert!(
                    verbs.iter().any(|v| v[0] == name && v[1] == inner),
                    "{name} {inner} not exercised"
                );
            }
        }
    }
}

#[test]
fn output_is_deterministic() {
    for args in all_verbs() {
        let with_seed: Vec<&str> = args.iter().copied().chain(["--seed", "11"]).collect();
        assert_eq!(call(&with_seed), call(&with_seed), "{args:?}");
    }
    let seq = call(&["lm", "roundtrip", "--n", "4", "--samples", "50", "--seed", "3", "--sequential"]);
    let par = call(&["lm", "roundtrip", "--n", "4", "--samples", "50", "--seed", "3"]);
    assert_eq!(seq, par);
}

#[test]
fn documented_examples() {
    let v = ok(&["fan", "--type", "A", "--rank", "3"]);
    assert_eq!(v["rays"].as_array().unwrap().len(), 14);
    let v = ok(&["betti", "--n", "3"]);
    assert_eq!(v["betti"], serde_json::json!([1, 11, 11, 1]));
    let v = ok(&["lm", "roundtrip", "--n", "4", "--samples", "100", "--seed", "7"]);
    assert_eq!(v, serde_json::json!({"ok": true, "samples": 100}));
}

#[test]
fn json_key_order_is_fixed() {
    let (_, out) = call(&["fan", "--type", "A", "--rank", "1"]);
    let rank = out.find("\"rank\"").unwrap();
    let rays = out.find("\"rays\"").unwrap();
    let cones = out.find("\"max_cones\"").unwrap();
    assert!(rank < rays && rays < cones);
}

#[test]
fn domain_errors_exit_one() {
    let (code, out) = call(&["fan", "--type", "E", "--rank", "6"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"], "UnsupportedFamily");
    assert!(v["detail"].is_string());
    let (code, out) = call(&["lm", "contract", "--chain-json", A2_CHAIN, "--keep", "[]"]);
    assert_eq!(code, 1);
    assert!(out.contains("EmptyKeep"));
    let (code, out) = call(&[
        "embed", "--type", "A", "--rank", "1", "--target", "A1", "--mu", "[[2]]",
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("NotSurjective"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&["no-such-verb"]).0, 2);
    assert_eq!(call(&["betti"]).0, 2);
    assert_eq!(call(&["betti", "--n", "x"]).0, 2);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let p = path.to_str().unwrap();
    let (code, out) = call(&["polytope", "--n", "2", "--output", p]);
    assert_eq!((code, out.as_str()), (0, ""));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(v["lattice_points"].as_array().unwrap().len(), 7);
}

#[test]
fn file_arguments() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("data.json");
    std::fs::write(&path, A2_DATA).unwrap();
    let arg = format!("@{}", path.display());
    let v = ok(&["rdata", "validate", "--type", "A", "--rank", "2", "--data-json", &arg]);
    assert_eq!(v["valid"], true);
}

#[test]
fn chain_roundtrip_through_json() {
    let d = ok(&["lm", "extract", "--chain-json", A2_CHAIN]);
    let c = ok(&["lm", "from-data", "--data-json", &d.to_string()]);
    assert_eq!(c["blocks"], serde_json::json!([[2], [1, 3]]));
    // s1 anchors its component, so it stays at (1:1).
    assert_eq!(c["coords"][0]["pos"], serde_json::json!(["1", "1"]));
}

#[test]
fn big_integers_are_strings() {
    let v = ok(&["lattice", "hnf", "--matrix", r#"[["123456789012345678901234567890"]]"#]);
    assert_eq!(v["hnf"][0][0], "123456789012345678901234567890");
}
