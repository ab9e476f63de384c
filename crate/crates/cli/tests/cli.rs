use jsonschema::JSONSchema;
use serde_json::Value;
use squaremap_cli::{run, Output, EXIT_BOUND, EXIT_INVALID, EXIT_OK};

fn schema() -> JSONSchema {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/report.schema.json");
    let text = std::fs::read_to_string(path).expect("schema file");
    let value: Value = serde_json::from_str(&text).expect("schema parses");
    JSONSchema::compile(&value).expect("schema compiles")
}

fn squaremap(args: &[&str]) -> Output {
    run(std::iter::once("squaremap").chain(args.iter().copied()))
}

fn validated(args: &[&str]) -> (Output, Value) {
    let out = squaremap(args);
    let doc: Value = serde_json::from_str(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: stdout is not JSON ({e}):\n{}", out.stdout));
    let schema = schema();
    if let Err(errors) = schema.validate(&doc) {
        let msgs: Vec<String> = errors.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("{args:?} violates the schema:\n{}\n{}", msgs.join("\n"), out.stdout);
    }
    (out, doc)
}

const NEG_I2: &str = r#"{"entries":[{"poly":"1,1","partition":"1^2"}]}"#;

#[test]
fn sqrt_count_of_minus_identity() {
    let (out, doc) = validated(&["sqrt-count", "--group", "gl", "--n", "2", "--q", "3", "--class", NEG_I2]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(doc["payload"]["count"], "6");
    assert_eq!(doc["payload"]["has_square_root"], true);
    // the printed closed form disagrees here and says so
    assert!(!doc["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn real_classes_by_murray_sambale() {
    let (out, doc) = validated(&["real-classes", "--n", "2", "--q", "3", "--method", "ms"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(doc["payload"]["real_classes"], "6");
    assert_eq!(doc["payload"]["s2"], "288");
}

#[test]
fn classify_x_plus_one() {
    let (out, doc) = validated(&["classify-poly", "--q", "3", "--poly", "1,1", "--m", "2"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(doc["payload"]["classification"], "skew-2-power");
    assert_eq!(doc["payload"]["f_of_x2"], "1,0,1");
    assert_eq!(doc["payload"]["butler_agrees_with_factorization"], true);
}

#[test]
fn classify_over_square_field_reports_tilde_family() {
    let (_, doc) = validated(&["classify-poly", "--q", "9", "--poly", "2,1"]);
    assert_eq!(doc["payload"]["self_conjugate"], true);
    assert_eq!(doc["payload"]["tilde_classification"], "2~-power");
}

#[test]
fn every_verb_validates() {
    let cases: &[&[&str]] = &[
        &["classes", "--n", "2", "--q", "5"],
        &["sqrt-count", "--group", "u", "--n", "1", "--q", "3", "--class", r#"{"entries":[{"poly":"2,1","partition":"1^1"}]}"#],
        &["sqrt-count", "--group", "sp", "--n", "2", "--q", "3", "--class", NEG_I2],
        &["audit-squares", "--n", "2", "--q", "3", "--oracle"],
        &["audit-squares", "--n", "2", "--q", "3", "--group", "sp"],
        &["audit-squares", "--n", "2", "--q", "3", "--group", "u"],
        &["real-classes", "--n", "2", "--q", "3", "--method", "direct"],
        &["real-classes", "--n", "2", "--q", "3", "--method", "theorem"],
        &["real-classes", "--n", "2", "--q", "3", "--method", "gf-audit"],
        &["real-classes", "--n", "2", "--q", "3", "--oracle"],
        &["oracle", "--kind", "gl", "--n", "2", "--q", "3", "--report", "fibers"],
        &["oracle", "--kind", "sp", "--n", "2", "--q", "3", "--report", "classes"],
        &["oracle", "--kind", "u", "--n", "2", "--q", "3", "--report", "real"],
        &["oracle", "--kind", "o-", "--n", "2", "--q", "3", "--report", "s2"],
        &["oracle", "--kind", "o0", "--n", "3", "--q", "3", "--report", "s2"],
    ];
    for args in cases {
        let (out, _) = validated(args);
        assert_eq!(out.code, EXIT_OK, "{args:?}: {}", out.stderr);
    }
}

#[test]
fn audit_flags_printed_formula_but_exits_zero() {
    let (out, doc) = validated(&["audit-squares", "--n", "2", "--q", "3", "--oracle"]);
    assert_eq!(out.code, EXIT_OK);
    let cmp = &doc["payload"]["summary"]["comparisons"];
    assert_eq!(cmp["count_square_roots=oracle_fiber"]["mismatches"], "0");
    assert_eq!(cmp["count_square_roots=oracle_fiber"]["matches"], "8");
    assert_ne!(cmp["paper_count_formula=count_square_roots"]["mismatches"], "0");
    assert!(!doc["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        &["classes", "--n", "2", "--q", "4"][..],
        &["classes", "--n", "2", "--q", "6"],
        &["classify-poly", "--q", "3", "--poly", "1,2,1"],
        &["classify-poly", "--q", "3", "--poly", "1,x"],
        &["sqrt-count", "--n", "2", "--q", "3", "--class", "{not json"],
        &["sqrt-count", "--n", "3", "--q", "3", "--class", NEG_I2],
        &["sqrt-count", "--n", "2", "--q", "3", "--class", r#"{"entries":[{"poly":"1,1","partition":"1^0"}]}"#],
        &["oracle", "--kind", "e8", "--n", "2", "--q", "3", "--report", "fibers"],
        &["classes", "--n", "2", "--q", "3", "--format", "xml"],
        &["classify-poly", "--q", "3", "--poly", "1,1", "--format", "csv"],
        &["frobnicate"],
    ] {
        let (out, doc) = validated(args);
        assert_eq!(out.code, EXIT_INVALID, "{args:?}");
        assert_eq!(doc["payload"]["error"]["kind"], "invalid_input", "{args:?}");
    }
}

#[test]
fn bound_rejection_exits_three() {
    for args in [
        &["classes", "--n", "40", "--q", "3"][..],
        &["oracle", "--kind", "gl", "--n", "4", "--q", "5", "--report", "fibers"],
        &["oracle", "--kind", "gl", "--n", "3", "--q", "3", "--report", "fibers", "--order-limit", "100"],
    ] {
        let (out, doc) = validated(args);
        assert_eq!(out.code, EXIT_BOUND, "{args:?}");
        assert_eq!(doc["payload"]["error"]["kind"], "bound");
    }
}

#[test]
fn csv_tables() {
    let out = squaremap(&["classes", "--n", "2", "--q", "3", "--format", "csv"]);
    assert_eq!(out.code, EXIT_OK);
    let mut reader = csv::Reader::from_reader(out.stdout.as_bytes());
    let header = reader.headers().unwrap().clone();
    assert_eq!(&header[0], "index");
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 8);
    let size_col = header.iter().position(|h| h == "size").unwrap();
    let total: u64 = rows.iter().map(|r| r[size_col].parse::<u64>().unwrap()).sum();
    assert_eq!(total, 48);

    let out = squaremap(&["audit-squares", "--n", "2", "--q", "3", "--format", "csv"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.stdout.lines().count(), 9);
    let out = squaremap(&["oracle", "--kind", "sp", "--n", "2", "--q", "3", "--report", "fibers", "--format", "csv"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.stdout.lines().count(), 8);
}

#[test]
fn output_independent_of_thread_count() {
    let args: &[&[&str]] = &[
        &["audit-squares", "--n", "3", "--q", "3", "--oracle"],
        &["real-classes", "--n", "2", "--q", "5", "--oracle"],
        &["oracle", "--kind", "sp", "--n", "2", "--q", "5", "--report", "classes"],
    ];
    for a in args {
        let mut one = vec!["--threads", "1"];
        one.extend_from_slice(a);
        let mut four = a.to_vec();
        four.extend_from_slice(&["--threads", "4"]);
        let x = squaremap(&one);
        let y = squaremap(&four);
        assert_eq!(x.code, EXIT_OK);
        assert_eq!(x, y, "{a:?}");
        assert_eq!(x, squaremap(a), "{a:?}");
    }
}

#[test]
fn timestamp_only_when_asked() {
    let (_, doc) = validated(&["real-classes", "--n", "1", "--q", "3", "--timestamp"]);
    assert!(doc["timestamp"].is_string());
    let (_, doc) = validated(&["real-classes", "--n", "1", "--q", "3"]);
    assert!(doc["timestamp"].is_null());
}

#[test]
fn oracle_cache_round_trip() {
    let dir = std::env::temp_dir().join(format!("squaremap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sp23.sqf");
    let p = path.to_str().unwrap();
    let args = ["oracle", "--kind", "sp", "--n", "2", "--q", "3", "--report", "s2", "--cache", p];
    let first = squaremap(&args);
    assert_eq!(first.code, EXIT_OK, "{}", first.stderr);
    assert!(path.exists());
    let second = squaremap(&args);
    assert_eq!(first, second);
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(&bytes[..4], b"SQF1");
    std::fs::remove_dir_all(&dir).unwrap();
}
