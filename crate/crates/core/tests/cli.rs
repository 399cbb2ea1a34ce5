//! CLI integration: determinism, exit codes, and JSON-schema validation of
//! every command's --json output against the shipped schema files.

use std::io::Write;
use std::path::PathBuf;

use genring::cli::run;

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut argv: Vec<String> = vec!["genring".into()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut buf = Vec::new();
    let code = run(&argv, &mut buf);
    (code, String::from_utf8(buf).expect("utf-8 output"))
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{name}.json"));
    let raw = std::fs::read_to_string(&path).expect("schema file");
    let doc: serde_json::Value = serde_json::from_str(&raw).expect("valid schema JSON");
    jsonschema::validator_for(&doc).expect("compilable schema")
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("genring-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    path
}

fn z_pres_file(name: &str, neg: &str, add: &str) -> PathBuf {
    write_temp(
        name,
        &format!(
            "base F1;\ngen {neg}/1, {add}/2;\n\
             rel {add}(x1,{neg}(x1)) = 0;\n\
             rel {add}(x1,0) = x1;\nrel {add}(0,x1) = x1;\n\
             rel {add}({add}(x1,x2),x3) = {add}(x1,{add}(x2,x3));\n\
             rel {add}(x1,x2) = {add}(x2,x1);\n"
        ),
    )
}

#[test]
fn json_outputs_validate_against_schemas() {
    let p1 = z_pres_file("zu.pres", "u", "s");
    let p2 = z_pres_file("zv.pres", "v", "t");
    let poly = write_temp("circle.poly", "T1^2 + T2^2 - 1\n");
    let p1s = p1.to_str().unwrap();
    let p2s = p2.to_str().unwrap();
    let polys = poly.to_str().unwrap();
    let cases: Vec<(&str, Vec<&str>)> = vec![
        (
            "classify",
            vec!["classify", "AN:2", "--arity", "3", "--json"],
        ),
        ("classify", vec!["classify", "Fempty", "--json"]),
        (
            "commute",
            vec!["commute", "Z", "--left", "1,1", "--right", "-1", "--json"],
        ),
        ("spec", vec!["spec", "AN:2", "--bound", "10", "--json"]),
        ("spec", vec!["spec", "F1", "--json"]),
        (
            "topology",
            vec![
                "topology",
                "hat:6",
                "--closure",
                "5",
                "--complement",
                "2,3,inf",
                "--json",
            ],
        ),
        (
            "stalk",
            vec!["stalk", "hat:6", "5", "--probe", "3/5", "--json"],
        ),
        ("stalk", vec!["stalk", "hat", "inf", "--json"]),
        ("tensor", vec!["tensor", p1s, p2s, "--json"]),
        (
            "prove",
            vec![
                "prove",
                p1s,
                "--lhs",
                "s(x1,0)",
                "--rhs",
                "x1",
                "--depth",
                "1",
                "--countermodel",
                "2",
                "--json",
            ],
        ),
        ("proj-count", vec!["proj-count", "4", "--json"]),
        (
            "proj-verify",
            vec!["proj-verify", "2", "--bound", "20", "--json"],
        ),
        ("pic", vec!["pic", "12", "--element", "3/2", "--json"]),
        (
            "sections",
            vec!["sections", "--body", "oct:1", "--dim", "2", "--json"],
        ),
        (
            "minkowski",
            vec!["minkowski", "--body", "box:21/20,21/20", "--json"],
        ),
        ("product-formula", vec!["product-formula", "6/5", "--json"]),
        ("model", vec!["model", polys, "--json"]),
        ("parse", vec![("parse"), p1s, "--json"]),
    ];
    for (schema_name, args) in cases {
        let (code, out) = run_cli(&args);
        assert_eq!(code, 0, "{args:?} failed:\n{out}");
        let value: serde_json::Value =
            serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: bad JSON {e}\n{out}"));
        let validator = schema(schema_name);
        if let Err(err) = validator.validate(&value) {
            panic!("{args:?}: schema violation: {err}\n{out}");
        }
    }
}

#[test]
fn identical_invocations_produce_identical_bytes() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["classify", "AN:3", "--json"],
        vec!["spec", "hat:6", "--bound", "30", "--json"],
        vec!["proj-verify", "2", "--bound", "20", "--seed", "7", "--json"],
        vec!["pic", "360", "--json"],
        vec!["sections", "--body", "box:2,2", "--json"],
    ];
    for args in cases {
        let (c1, o1) = run_cli(&args);
        let (c2, o2) = run_cli(&args);
        assert_eq!(c1, 0);
        assert_eq!(c1, c2);
        assert_eq!(o1, o2, "non-deterministic output for {args:?}");
    }
}

#[test]
fn exit_codes() {
    // Success.
    assert_eq!(run_cli(&["proj-count", "1"]).0, 0);
    // Usage errors: unknown verb, bad monad id, malformed element.
    assert_eq!(run_cli(&["no-such-verb"]).0, 2);
    assert_eq!(run_cli(&["classify", "WAT"]).0, 2);
    assert_eq!(
        run_cli(&["commute", "Z", "--left", "x", "--right", "1"]).0,
        2
    );
    // Domain errors: a point missing from a space, valuation at zero.
    assert_eq!(run_cli(&["stalk", "Z", "inf"]).0, 1);
    assert_eq!(run_cli(&["product-formula", "0"]).0, 1);
}

#[test]
fn golden_lines() {
    let (code, out) = run_cli(&["proj-count", "1"]);
    assert_eq!((code, out.as_str()), (0, "3\n"));
    let (code, out) = run_cli(&["proj-count", "2"]);
    assert_eq!((code, out.as_str()), (0, "7\n"));
    let (_, out) = run_cli(&["classify", "AN:2", "--arity", "3"]);
    assert!(out.contains("hypoadditive   oui"));
    assert!(out.contains("hyperadditive  non"));
}

#[test]
fn budget_env_caps_enumeration() {
    // Exercise GENRING_BUDGET in a subprocess so the env mutation cannot
    // race the other tests; an extreme value is clamped, not honored.
    let bin = env!("CARGO_BIN_EXE_genring");
    let out = std::process::Command::new(bin)
        .args(["proj-count", "3"])
        .env("GENRING_BUDGET", "17")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "15\n");
}
