use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_photonic-bell-lab"))
        .args(args)
        .env_remove("PBL_THREADS")
        .output()
        .expect("spawn cli")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn scalar(v: &Value, key: &str) -> f64 {
    v["scalars"][key].as_f64().unwrap_or_else(|| panic!("scalar {key} missing"))
}

fn rows<'a>(v: &'a Value, table: &str) -> &'a Vec<Value> {
    v["tables"][table]["rows"].as_array().expect("table rows")
}

fn event_row<'a>(v: &'a Value, table: &str, event: [u64; 4]) -> &'a Vec<Value> {
    rows(v, table)
        .iter()
        .map(|r| r.as_array().unwrap())
        .find(|r| (0..4).all(|i| r[i].as_u64() == Some(event[i])))
        .unwrap_or_else(|| panic!("row {event:?} missing"))
}

#[test]
fn prob_twc_zero_event() {
    let v = json(&["prob", "twc", "--alpha2", "0.3", "--theta12", "1.5708", "--cutoff", "6"]);
    let row = event_row(&v, "probabilities", [1, 1, 0, 0]);
    assert_eq!(row[4].as_f64(), Some(0.0));
    assert_eq!(row[5].as_f64(), Some(0.0));
    assert!(scalar(&v, "max_abs_diff") < 1e-12);
}

#[test]
fn prob_gpy_flags_tabulated_rows() {
    let v = json(&["prob", "gpy", "--alpha2", "0.3", "--gamma", "0.1", "--theta-sum", "0"]);
    let flag = |e| event_row(&v, "probabilities", e)[7].as_str().unwrap().to_owned();
    assert_eq!(flag([0, 1, 0, 1]), "closed-form");
    assert_eq!(flag([1, 2, 1, 0]), "closed-form");
    assert_eq!(flag([0, 0, 0, 1]), "oracle-only");
    assert_eq!(flag([0, 0, 0, 0]), "oracle-only");
    assert!(scalar(&v, "max_abs_diff") < 1e-9);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for fmt in ["json", "csv"] {
        let files: Vec<_> = (0..2)
            .map(|i| {
                let path = dir.path().join(format!("run{i}.{fmt}"));
                let p = path.to_str().unwrap();
                let out = run(&["lhv", "sample", "--setup", "twc", "--alpha2", "0.3", "--n", "20000", "--seed", "3", "--format", fmt, "--out", p]);
                assert!(out.status.success());
                assert!(out.stdout.is_empty());
                std::fs::read(&path).unwrap()
            })
            .collect();
        assert_eq!(files[0], files[1]);
    }
}

#[test]
fn lhv_verify_reproduces_quantum() {
    let v = json(&["lhv", "verify", "--setup", "twc", "--alpha2", "0.3025", "--theta12", "0.7"]);
    assert!(scalar(&v, "max_deviation") < 1e-9);
    let g = json(&["lhv", "verify", "--setup", "gpy", "--alpha2", "0.2", "--gamma", "0.2", "--theta-sum", "0.4"]);
    assert!(scalar(&g, "max_deviation") < 1e-9);
    assert_eq!(rows(&g, "uncovered").len(), 9);
}

#[test]
fn lhv_verify_outside_validity_exits_3() {
    let out = run(&["lhv", "verify", "--setup", "twc", "--alpha2", "0.9"]);
    assert_eq!(out.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("0.875867"), "threshold not printed: {msg}");
}

#[test]
fn lhv_threshold_twc() {
    let v = json(&["lhv", "threshold", "--setup", "twc"]);
    let t = scalar(&v, "alpha2_threshold");
    assert!((t - scalar(&v, "alpha2_threshold_bisection")).abs() < 1e-9);
    assert!(t < scalar(&v, "alpha2_exact_delta_zero"));
    assert!((t - 0.87).abs() <= 0.005, "threshold {t} outside 0.87 ± 0.005");
}

#[test]
fn lhv_threshold_gpy_curve() {
    let v = json(&["lhv", "threshold", "--setup", "gpy"]);
    assert!((scalar(&v, "alpha2_threshold_diagonal") - 0.58).abs() < 0.01);
    let curve = rows(&v, "boundary");
    assert_eq!(curve.len(), 20);
    assert!(curve[19][1].is_null());
}

#[test]
fn lhv_sample_z_scores() {
    let v = json(&["lhv", "sample", "--setup", "twc", "--alpha2", "0.3", "--n", "1000000", "--seed", "7"]);
    assert!(scalar(&v, "max_abs_z") < 5.0);
    let total: i64 = rows(&v, "counts").iter().map(|r| r[4].as_i64().unwrap()).sum::<i64>()
        + v["scalars"]["tail_count"].as_i64().unwrap();
    assert_eq!(total, 1_000_000);
}

#[test]
fn ch_optimize_matches_reported_extrema() {
    let t = json(&["bell", "ch", "optimize", "--setup", "twc"]);
    assert!((scalar(&t, "value") + 1.010).abs() <= 0.001);
    assert_eq!(t["scalars"]["violated"], Value::Bool(true));
    assert_eq!(t["tables"]["grid"]["columns"].as_array().unwrap().len(), 3);
    let g = json(&["bell", "ch", "optimize", "--setup", "gpy"]);
    assert!((scalar(&g, "value") - 0.0027).abs() <= 0.0003);
}

#[test]
fn cglmp_at_lambda_limit() {
    let v = json(&["bell", "cglmp", "eval", "--lambda", "0.4"]);
    assert!((scalar(&v, "value") - 2.0).abs() < 1e-15);
    assert_eq!(v["scalars"]["violated"], Value::Bool(false));
    let o = json(&["bell", "cglmp", "optimize"]);
    assert!((scalar(&o, "gamma_crossing") - 0.544).abs() < 0.01);
}

#[test]
fn chsh_eval_and_optimize() {
    let e = json(&["bell", "chsh", "eval", "--alpha2", "0.2"]);
    assert!(scalar(&e, "value") > 2.0);
    let o = json(&["bell", "chsh", "optimize", "--alpha2", "0.6"]);
    assert!(scalar(&o, "value") <= 2.0);
    assert_eq!(rows(&o, "correlation_curve").len(), 181);
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        &["prob", "twc", "--alpha2", "-1"][..],
        &["prob", "gpy", "--alpha2", "0.3", "--gamma", "1.5"],
        &["prob", "twc", "--alpha2", "0.3", "--cutoff", "0"],
        &["prob", "twc"],
        &["lhv", "sample", "--setup", "gpy", "--alpha2", "0.3", "--gamma", "0.1"],
        &["bell", "ch", "eval", "--setup", "twc", "--alpha2", "0.3", "--transmittivity", "2"],
        &["bell", "cglmp", "eval", "--lambda", "1.5"],
        &["nonsense"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = Command::new(env!("CARGO_BIN_EXE_photonic-bell-lab"))
        .args(["bell", "cglmp", "eval", "--lambda", "0.1"])
        .env("PBL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["bell", "chsh", "optimize", "--alpha2", "0.3", "--cutoff", "6"];
    let outputs: Vec<_> = ["1", "3"]
        .iter()
        .map(|n| {
            Command::new(env!("CARGO_BIN_EXE_photonic-bell-lab"))
                .args(args)
                .env("PBL_THREADS", n)
                .output()
                .unwrap()
                .stdout
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
}

type CsvTables = Vec<(String, Vec<Vec<String>>)>;

fn parse_csv(text: &str) -> (Vec<(String, String)>, CsvTables) {
    let mut meta = Vec::new();
    let mut tables: CsvTables = Vec::new();
    let mut lines = text.lines().peekable();
    while let Some(line) = lines.next() {
        if let Some(name) = line.strip_prefix("# table: ") {
            let mut block = String::new();
            while let Some(l) = lines.peek() {
                if l.starts_with("# table: ") {
                    break;
                }
                block.push_str(lines.next().unwrap());
                block.push('\n');
            }
            let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(block.as_bytes());
            let recs = rdr.records().map(|r| r.unwrap().iter().map(str::to_owned).collect()).collect();
            tables.push((name.to_owned(), recs));
        } else if let Some(rest) = line.strip_prefix("# ") {
            let (k, v) = rest.split_once(" = ").unwrap();
            meta.push((k.to_owned(), v.to_owned()));
        }
    }
    (meta, tables)
}

fn same_cell(json: &Value, csv: &str) -> bool {
    match json {
        Value::Null => csv.is_empty(),
        Value::Bool(b) => csv == b.to_string(),
        Value::Number(n) if n.is_i64() || n.is_u64() => csv == n.to_string(),
        Value::Number(n) => csv.parse::<f64>().ok() == n.as_f64(),
        Value::String(s) => csv == s,
        _ => false,
    }
}

#[test]
fn csv_and_json_encode_the_same_data() {
    let base = ["lhv", "verify", "--setup", "gpy", "--alpha2", "0.25", "--gamma", "0.3", "--theta1", "0.4", "--theta2", "-1.1"];
    let j = json(&base);
    let mut csv_args = base.to_vec();
    csv_args.extend(["--format", "csv"]);
    let out = run(&csv_args);
    assert!(out.status.success());
    let (meta, tables) = parse_csv(std::str::from_utf8(&out.stdout).unwrap());

    for (k, v) in &meta {
        let cell = if let Some(p) = k.strip_prefix("parameter ") {
            &j["parameters"][p]
        } else if let Some(s) = k.strip_prefix("scalar ") {
            &j["scalars"][s]
        } else {
            &j[k.as_str()]
        };
        assert!(same_cell(cell, v), "{k}: json {cell} vs csv {v}");
    }
    let jt = j["tables"].as_object().unwrap();
    assert_eq!(jt.len(), tables.len());
    for (name, recs) in &tables {
        let t = &jt[name];
        let cols: Vec<_> = t["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
        assert_eq!(recs[0], cols);
        let jrows = t["rows"].as_array().unwrap();
        assert_eq!(jrows.len(), recs.len() - 1);
        for (jr, cr) in jrows.iter().zip(&recs[1..]) {
            for (a, b) in jr.as_array().unwrap().iter().zip(cr) {
                assert!(same_cell(a, b), "{name}: json {a} vs csv {b}");
            }
        }
    }
}

#[test]
fn output_matches_schema_shape() {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas/result_record.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let props = schema["properties"].as_object().unwrap();
    for args in [
        &["prob", "twc", "--alpha2", "0.2", "--cutoff", "4"][..],
        &["lhv", "threshold", "--setup", "gpy"],
        &["bell", "cglmp", "eval", "--alpha2", "0.3", "--gamma", "0.3", "--timing"],
    ] {
        let v = json(args);
        let obj = v.as_object().unwrap();
        for key in schema["required"].as_array().unwrap() {
            assert!(obj.contains_key(key.as_str().unwrap()), "{args:?} lacks {key}");
        }
        assert!(obj.keys().all(|k| props.contains_key(k)));
        assert_eq!(v["schema_version"], schema["properties"]["schema_version"]["const"]);
        for table in v["tables"].as_object().unwrap().values() {
            let width = table["columns"].as_array().unwrap().len();
            assert!(table["rows"].as_array().unwrap().iter().all(|r| r.as_array().unwrap().len() == width));
        }
        let cells = v["parameters"].as_object().unwrap().values().chain(v["scalars"].as_object().unwrap().values());
        assert!(cells.into_iter().all(|c| !c.is_array() && !c.is_object()));
    }
    let timed = json(&["bell", "cglmp", "eval", "--lambda", "0.2", "--timing"]);
    assert!(timed["duration_seconds"].as_f64().unwrap() >= 0.0);
}
