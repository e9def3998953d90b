use std::path::Path;
use std::process::{Command, Output};

use hecke4::cli::run;
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke4")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&v).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value) {
    let errs: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errs.is_empty(), "{errs:?}\n{doc}");
}

fn json_lines(s: &str) -> Vec<Value> {
    s.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(bin(&["--q", "1", "gen-complex"]).status.code(), Some(2));
    assert_eq!(bin(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(bin(&["classify", "--lambda", "1", "2"]).status.code(), Some(2));
    assert_eq!(bin(&["classify", "--z", "1", "1", "1", "2"]).status.code(), Some(2));
    assert_eq!(bin(&["count-stabilizers", "--vertex", "1,2,0"]).status.code(), Some(2));
    assert_eq!(bin(&["export-operator", "--i", "4"]).status.code(), Some(2));
    assert_eq!(bin(&["--eps", "0.7", "weyl-test", "--family", "Family2"]).status.code(), Some(2));
    assert_eq!(bin(&["--out", "/no/such/dir/x.json", "gen-complex"]).status.code(), Some(2));
    assert_eq!(run(["hecke4", "--help"]), 0);
}

#[test]
fn gen_complex_json() {
    let o = bin(&["--radius", "2", "gen-complex"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid(&schema("gen_complex"), &doc);
    let vs = doc["vertices"].as_array().unwrap();
    assert_eq!(vs.len(), 10);
    assert_eq!(vs[0]["vertex"], serde_json::json!([0, 0, 0]));
    assert_eq!(vs[0]["weight"], "1/315");
    let vertex = schema("vertex");
    for v in vs {
        assert_valid(&vertex, &v["vertex"]);
    }
}

#[test]
fn gen_complex_csv() {
    let o = bin(&["--radius", "1", "--format", "csv", "gen-complex"]);
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next().unwrap(), "ell,m,n,class,color,weight,step,to_ell,to_m,to_n,coeff");
    assert_eq!(lines.next().unwrap(), "0,0,0,Origin,0,1/315,1,1,0,0,15");
}

#[test]
fn count_stabilizers_records() {
    let o = bin(&["count-stabilizers"]);
    assert_eq!(o.status.code(), Some(0));
    let recs = json_lines(&stdout(&o));
    assert_eq!(recs.len(), 8);
    let s = schema("count_stabilizers");
    for r in &recs {
        assert_valid(&s, r);
        assert_eq!(r["match"], true);
    }
    assert_eq!(recs[0]["formula_order"], "20160");
    let o = bin(&["--q", "3", "count-stabilizers", "--vertex", "(2,1,0)", "--budget", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json_lines(&stdout(&o))[0];
    assert_valid(&s, r);
    assert!(r["brute_force_order"].is_null());
    assert_eq!(r["match"], false);
}

#[test]
fn classify_points() {
    let s = schema("classify");
    let fam = schema("family_tag");
    let o = bin(&["classify", "--lambda", "15", "35", "15"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid(&s, &v);
    assert_eq!(v["family"], "Trivial");
    assert_eq!(v["k"], 0);
    let tag = serde_json::json!({ "family": v["family"], "params": v["params"], "degenerate": v["degenerate"] });
    assert_valid(&fam, &tag);
    assert_valid(&schema("spectral_point"), &v["z"]);

    let o = bin(&["classify", "--z", "qe^{i pi/5}", "e^{i pi/5}", "e^{-i 3pi/5}", "q^-1 e^{i pi/5}"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid(&s, &v);
    assert_eq!(v["family"], "Family2");

    let o = bin(&["classify", "--z", "2", "0.5", "e^{i pi/3}", "e^{-i pi/3}"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid(&s, &v);
    assert_eq!(v["family"], "NotInSpectrum");
    assert!(!v["evidence"]["failing_conditions"].as_array().unwrap().is_empty());
}

#[test]
fn residual_sweep_csv() {
    let o = bin(&["--radius", "10", "residual-sweep", "--count", "2", "--boundary"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "family,seed,q,L,max_residual_i1,max_residual_i2,max_residual_i3,status");
    assert_eq!(lines.len(), 1 + 5 * 2 + 12);
    for l in &lines[1..] {
        let cells: Vec<&str> = l.split(',').collect();
        assert_eq!(cells.len(), 8);
        assert_eq!(cells[7], "pass", "{l}");
        assert!(cells[4].parse::<f64>().unwrap() <= 1e-9);
    }
}

#[test]
fn report_lines_validate() {
    let rl = schema("report_line");
    let o = bin(&["--radius", "40", "weyl-test", "--family", "Tempered", "--params", "0.3,1.1,-2.0"]);
    let lines = json_lines(&stdout(&o));
    assert_eq!(lines.len(), 2);
    for l in &lines {
        assert_valid(&rl, l);
    }
    let o = bin(&["appendix-b", "--family", "Family4", "--perturbations", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&stdout(&o));
    assert_eq!(lines.len(), 3);
    for l in &lines {
        assert_valid(&rl, l);
        assert_ne!(l["status"], "fail");
    }
    let o = bin(&["--format", "json", "residual-sweep", "--family", "Family3", "--count", "1"]);
    for l in json_lines(&stdout(&o)) {
        assert_valid(&rl, &l);
    }
}

#[test]
fn eigenfunction_csv() {
    let o = bin(&["--radius", "3", "eigenfunction", "--lambda", "15", "35", "15"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "ell,m,n,re,im");
    assert_eq!(lines.len(), 21);
    for l in &lines[1..] {
        let cells: Vec<&str> = l.split(',').collect();
        let re: f64 = cells[3].parse().unwrap();
        assert!((re - 1.0).abs() < 1e-9);
        let mantissa = cells[3].split('e').next().unwrap().replace(['.', '-'], "");
        assert_eq!(mantissa.len(), 17, "{l}");
    }
}

#[test]
fn export_operator_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a2.txt");
    let out_s = out.to_str().unwrap();
    assert_eq!(run(["hecke4", "--radius", "4", "--q", "3", "--out", out_s, "export-operator", "--i", "2"]), 0);
    let header: Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{out_s}.header.json")).unwrap()).unwrap();
    assert_valid(&schema("sparse_header"), &header);
    assert_eq!(header["L"], 4);
    assert_eq!(header["vertex_index_map"].as_array().unwrap().len(), 35);
    let body = std::fs::read_to_string(&out).unwrap();
    for l in body.lines() {
        let cells: Vec<u64> = l.split(' ').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells.len(), 4);
        assert!(cells[0] < 20 && cells[1] < 35 && cells[2] > 0 && cells[3] > 0);
    }
    let o = bin(&["--radius", "2", "export-operator"]);
    let s = stdout(&o);
    let first = s.lines().next().unwrap();
    let header: Value = serde_json::from_str(first.strip_prefix("% ").unwrap()).unwrap();
    assert_valid(&schema("sparse_header"), &header);
}

#[test]
fn seeded_runs_are_deterministic() {
    let a = bin(&["--seed", "7", "--radius", "8", "residual-sweep", "--count", "1"]);
    let b = bin(&["--seed", "7", "--radius", "8", "residual-sweep", "--count", "1"]);
    assert_eq!(a.stdout, b.stdout);
    let c = bin(&["--seed", "8", "--radius", "8", "residual-sweep", "--count", "1"]);
    assert_ne!(a.stdout, c.stdout);
    let x = bin(&["--seed", "3", "classify", "--family", "Family3"]);
    let y = bin(&["--seed", "3", "classify", "--family", "Family3"]);
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn spectrum_figure_rows() {
    let o = bin(&["spectrum-figure", "--grid", "4"]);
    let s = stdout(&o);
    // 4 trivial, 4 + 8 + 16 family points, 64 tempered.
    assert_eq!(s.lines().count(), 1 + 4 + 4 + 8 + 16 + 64);
    assert!(s.lines().skip(1).all(|l| l.split(',').count() == 3));
}
