use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn lensurg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lensurg")).args(args).output().expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = lensurg(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn graph_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_owned()).collect()
}

#[test]
fn lens_all_labels() {
    let v = json_ok(&["dinv", "lens", "5", "1", "--all"]);
    let d: Vec<&str> = v["results"]["values"].as_array().unwrap().iter().map(|x| x["d"].as_str().unwrap()).collect();
    assert_eq!(d, ["1", "1/5", "-1/5", "-1/5", "1/5"]);
    assert_eq!(v["provenance"][0], "closed-form");
}

#[test]
fn lens_trivial_and_bad() {
    let v = json_ok(&["dinv", "lens", "1", "1"]);
    assert_eq!(v["results"]["values"][0]["d"], "0");
    let out = lensurg(&["dinv", "lens", "4", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gcd"));
}

#[test]
fn lens_self_conjugate() {
    let v = json_ok(&["dinv", "lens", "7", "3", "--self-conjugate"]);
    let labels: Vec<u64> = v["results"]["values"].as_array().unwrap().iter().map(|x| x["label"].as_u64().unwrap()).collect();
    // (7+3-1)/2 is not an integer; (3-1)/2 = 1
    assert_eq!(labels, [1]);
}

#[test]
fn plumbing_files() {
    let one = graph_file(r#"{"vertices":[{"id":0,"weight":-2}],"edges":[]}"#);
    let v = json_ok(&["dinv", "plumbing", one.path().to_str().unwrap()]);
    assert_eq!(strings(&v["results"]["values"]), ["-1/4", "1/4"]);
    assert_eq!(v["results"]["missing_classes"], "0");

    let chain = graph_file(r#"{"vertices":[{"id":0,"weight":-2},{"id":1,"weight":-2}],"edges":[[0,1]]}"#);
    let path = chain.path().to_str().unwrap();
    let v = json_ok(&["dinv", "plumbing", path, "--all"]);
    assert_eq!(strings(&v["results"]["values"]), ["-1/6", "-1/6", "1/2"]);
    let v = json_ok(&["dinv", "plumbing", path, "--class", "0,0"]);
    assert_eq!(v["results"]["d"], "1/2");
    let v = json_ok(&["dinv", "plumbing", path, "--class", "2,-2"]);
    assert_eq!(v["results"]["d"], "-1/6");
    let pruned = json_ok(&["dinv", "plumbing", path, "--prune"]);
    assert_eq!(pruned["results"]["values"], v_values(path));
    let oracle = json_ok(&["dinv", "plumbing", path, "--prune", "--oracle"]);
    assert_eq!(oracle["inputs"]["prune"], false);
}

fn v_values(path: &str) -> Value {
    json_ok(&["dinv", "plumbing", path])["results"]["values"].clone()
}

#[test]
fn plumbing_errors() {
    let pos = graph_file(r#"{"vertices":[{"id":0,"weight":3}],"edges":[]}"#);
    let out = lensurg(&["dinv", "plumbing", pos.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("negative definite"));

    let garbage = graph_file("not json");
    assert_eq!(lensurg(&["dinv", "plumbing", garbage.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(lensurg(&["dinv", "plumbing", "/nonexistent/graph.json"]).status.code(), Some(2));

    let chain = graph_file(r#"{"vertices":[{"id":0,"weight":-2},{"id":1,"weight":-2}],"edges":[[0,1]]}"#);
    let out = lensurg(&["dinv", "plumbing", chain.path().to_str().unwrap(), "--class", "1,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seifert_routes() {
    let v = json_ok(&["dinv", "seifert", "9", "3", "0", "--route", "both"]);
    assert_eq!(v["results"]["closed"]["tm"], "0");
    assert_eq!(v["results"]["algorithm"]["tm"], "0");
    assert_eq!(v["results"]["agreement"], "AGREE");

    let v = json_ok(&["dinv", "seifert", "9", "2", "-1", "--route", "closed"]);
    assert_eq!(v["results"]["closed"]["tm"], "1");
    assert!(v["results"].get("algorithm").is_none());

    assert_eq!(lensurg(&["dinv", "seifert", "9", "2", "4"]).status.code(), Some(2));
    assert_eq!(lensurg(&["dinv", "seifert", "8", "2", "-1"]).status.code(), Some(2));
}

#[test]
fn seifert_emit_graph_round_trips() {
    let out = lensurg(&["dinv", "seifert", "9", "2", "-1", "--emit-graph"]);
    assert_eq!(out.status.code(), Some(0));
    let f = graph_file(std::str::from_utf8(&out.stdout).unwrap());
    let v = json_ok(&["dinv", "plumbing", f.path().to_str().unwrap()]);
    // |H_1| = k² - nm = 13
    assert_eq!(v["results"]["det"], "13");
    assert_eq!(v["results"]["classes"].as_array().unwrap().len(), 13);
}

#[test]
fn obstruct_signs() {
    let v = json_ok(&["obstruct", "13", "3", "2", "-1"]);
    assert_eq!(v["results"]["s"], -17);
    assert_eq!(v["results"]["kind"], "Inconclusive");
    for sign in ["-", "-1"] {
        assert_eq!(json_ok(&["obstruct", "13", "3", "2", sign]), v);
    }
    let plus = json_ok(&["obstruct", "9", "2", "-3", "+"]);
    assert_eq!(plus, json_ok(&["obstruct", "9", "2", "-3", "1"]));
    assert_eq!(lensurg(&["obstruct", "9", "2", "-3", "2"]).status.code(), Some(2));
    assert_eq!(lensurg(&["obstruct", "9", "3", "1", "+1"]).status.code(), Some(2));
}

fn classified(n: &str) -> Vec<i64> {
    let v = json_ok(&["classify", n]);
    v["results"][0]["s"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect()
}

#[test]
fn classify_rows() {
    assert_eq!(classified("9"), [-5, -1, 1, 5, 8, 9, 10, 13]);
    assert_eq!(classified("5"), [-9, -5, -1, 1, 4, 5, 6, 9]);
    assert_eq!(lensurg(&["classify", "8"]).status.code(), Some(2));
}

#[test]
fn classify_range_csv() {
    let out = lensurg(&["classify", "--range", "4:25", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap(), vec!["n", "s", "status", "provenance", "citation"]);
    let mut rows: std::collections::BTreeMap<i64, Vec<i64>> = Default::default();
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let n: i64 = rec[0].parse().unwrap();
        let entry = rows.entry(n).or_default();
        if &rec[2] != "pruned" {
            entry.push(rec[1].parse().unwrap());
        }
    }
    assert_eq!(rows.len(), 11);
    for (n, mut s) in rows {
        s.sort();
        let mut want = vec![-1, 1, n - 4, n - 1, n, n + 1, n + 4];
        if n == 5 {
            want.extend([-5, -9]);
        }
        if n == 9 {
            want.push(-5);
        }
        want.sort();
        want.dedup();
        assert_eq!(s, want, "n = {n}");
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["classify", "--range", "5:15", "--format", "csv"][..],
        &["dinv", "seifert", "11", "4", "-1"],
        &["oracle", "maximisers", "9", "3", "-2"],
    ] {
        let first = lensurg(args).stdout;
        assert_eq!(first, lensurg(args).stdout, "{args:?}");
        let mut jobs = vec!["--jobs", "1"];
        jobs.extend_from_slice(args);
        assert_eq!(first, lensurg(&jobs).stdout, "{args:?}");
        jobs[1] = "3";
        assert_eq!(first, lensurg(&jobs).stdout, "{args:?}");
    }
}

#[test]
fn oracle_maximisers_agree() {
    let v = json_ok(&["oracle", "maximisers", "11", "4", "-1"]);
    assert_eq!(v["results"]["agreement"], "AGREE");
    assert_eq!(v["results"]["brute_force_count"], 27);
    assert_eq!(lensurg(&["oracle", "maximisers", "7", "2", "-1"]).status.code(), Some(2));
}
