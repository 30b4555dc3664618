use std::path::Path;

use eginoe::cli::run;
use serde_json::Value;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["eginoe"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let s: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

fn assert_valid(name: &str, doc: &Value) {
    let v = schema(name);
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}\n{doc:#}");
}

fn json_ok(args: &[&str]) -> Value {
    let (code, out, err) = invoke(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn every_subcommand_matches_its_schema() {
    let cases: &[(&str, &[&str])] = &[
        ("matrix", &["matrix", "--n", "3", "--tau", "0.5"]),
        ("matrix", &["matrix", "--n", "3", "--tau", "-0.5", "--route", "hypergeometric"]),
        ("matrix", &["matrix", "--n", "2", "--tau", "1"]),
        ("probs", &["probs", "--n", "4", "--tau", "0.25"]),
        ("traces", &["traces", "--n", "5", "--tau", "0", "--m-max", "4"]),
        ("traces", &["traces", "--n", "3", "--tau", "1"]),
        ("cumulants", &["cumulants", "--n", "6", "--tau", "0.5"]),
        ("cumulants", &["cumulants", "--n", "2", "--tau", "1"]),
        ("ldp", &["ldp", "--regime", "strong", "--param", "0.5", "--n-grid", "4,8"]),
        ("ldp", &["ldp", "--regime", "weak", "--param", "1", "--n-grid", "10", "--k", "20"]),
        ("genfun", &["genfun", "--n", "4,8", "--tau", "0", "--x-grid", "0.5,1,1.5"]),
        ("mc", &["mc", "--N", "4", "--tau", "0.5", "--samples", "500", "--seed", "3"]),
        ("mc", &["mc", "--N", "4", "--tau", "0", "--samples", "50", "--no-exact", "--sampler", "correlated-pairs"]),
        ("identities", &["identities"]),
    ];
    for (name, args) in cases {
        let doc = json_ok(args);
        assert_valid(name, &doc);
    }
}

#[test]
fn probabilities_of_four_by_four() {
    let doc = json_ok(&["probs", "--n", "2", "--tau", "0"]);
    let p0 = doc["probs"][0].as_f64().unwrap();
    let want = (18.0 - 11.0 * 2f64.sqrt()) / 16.0;
    assert!(((p0 - want) / want).abs() < 1e-12, "{p0}");
}

#[test]
fn identity_matrix_at_tau_one() {
    let doc = json_ok(&["matrix", "--n", "2", "--tau", "1"]);
    let e: Vec<Vec<f64>> = serde_json::from_value(doc["entries"].clone()).unwrap();
    assert_eq!(e, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
}

#[test]
fn monte_carlo_output_is_byte_identical() {
    let args = ["mc", "--N", "2", "--tau", "0", "--samples", "100000", "--seed", "7"];
    let (c1, a, _) = invoke(&args);
    let (c2, b, _) = invoke(&args);
    let mut with_workers = args.to_vec();
    with_workers.extend_from_slice(&["--workers", "4"]);
    let (c3, c, _) = invoke(&with_workers);
    assert_eq!((c1, c2, c3), (0, 0, 0));
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn errors_are_json_on_stderr() {
    let v = schema("error");
    for (args, code) in [
        (vec!["probs", "--n", "0", "--tau", "0"], 2),
        (vec!["probs", "--n", "2", "--tau", "1.5"], 2),
        (vec!["mc", "--N", "3", "--tau", "0"], 2),
        (vec!["frobnicate"], 2),
        (vec!["genfun", "--n", "4", "--tau", "0", "--x-grid", "2.0"], 2),
    ] {
        let (c, out, err) = invoke(&args);
        assert_eq!(c, code, "{args:?}");
        assert!(out.is_empty());
        let doc: Value = serde_json::from_str(&err).unwrap();
        assert!(v.is_valid(&doc), "{err}");
    }
}

#[test]
fn csv_has_header_and_lf() {
    let (code, out, _) = invoke(&["probs", "--n", "2", "--tau", "0", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(!out.contains('\r'));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "k,prob,log_prob");
    assert_eq!(lines.len(), 4);
    let p0: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((p0 - 0.15272817586849752).abs() < 1e-15);
}

#[test]
fn floats_carry_seventeen_digits() {
    let (_, out, _) = invoke(&["probs", "--n", "1", "--tau", "0"]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    let p = doc["probs"][0].as_f64().unwrap();
    assert!((p - (1.0 - 0.5f64.sqrt())).abs() < 1e-15);
    assert!(out.contains(&format!("{p:.16e}")));
}

#[test]
fn cache_round_trip_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let first = json_ok(&["--cache-dir", d, "probs", "--n", "12", "--tau", "0.5"]);
    let file = dir.path().join(eginoe::cli::cache_file_name(12, 0.5));
    assert!(file.exists());
    let entry: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_valid("cache_entry", &entry);
    let second = json_ok(&["--cache-dir", d, "probs", "--n", "12", "--tau", "0.5"]);
    assert_eq!(first, second);

    // a corrupted entry is rebuilt, not trusted
    std::fs::write(&file, "{ not json").unwrap();
    let third = json_ok(&["--cache-dir", d, "probs", "--n", "12", "--tau", "0.5"]);
    assert_eq!(first, third);
    let entry: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_valid("cache_entry", &entry);
}

#[test]
fn strict_profile_builds_small_matrices() {
    let doc = json_ok(&["--tolerance-profile", "strict", "probs", "--n", "20", "--tau", "-0.5"]);
    assert!((doc["total"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}
