use std::process::{Command, Output};

use serde_json::Value;

fn k3lat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3lat"))
        .args(args)
        .env_remove("K3LAT_DATA")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let o = k3lat(&all);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).expect("json output"))
}

#[test]
fn normal_count_of_c2_4() {
    let o = k3lat(&["groups", "normal-count", "--group", "C2^4", "--index", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "15");
}

#[test]
fn bundled_relation_holds() {
    let o = k3lat(&["fibration", "relation", "--spec", "data/mp108.json", "--relation", "data/ex2_2.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("true"));
    let (code, v) = json(&["fibration", "relation", "--relation", "ex2_2.json"]);
    assert_eq!(code, 0);
    assert_eq!(v["holds"], true);
}

#[test]
fn cover_equation_solutions() {
    let o = k3lat(&["lemma13"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(2,8,K3) (2,16,ab) (3,6,K3) (3,9,ab) (5,4,K3) (7,3,K3)");
    let (_, v) = json(&["lemma13"]);
    assert_eq!(v.as_array().unwrap().len(), 6);
}

#[test]
fn classify_examples() {
    let (code, v) = json(&["classify", "k3", "--p", "2", "--c", "8", "--facts", "nonprimitive"]);
    assert_eq!(code, 0);
    assert_eq!(v["row"]["number"], 2);
    let (code, v) = json(&["classify", "enriques", "--p", "5", "--c", "2", "--w", "primitive", "--cover", "nonprimitive"]);
    assert_eq!(code, 0);
    assert_eq!(v["row"]["number"], 25);
    let (code, v) = json(&["classify", "enriques", "--p", "2", "--c", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["row"]["number"], 15);
}

#[test]
fn classify_rejects_bad_facts() {
    assert_eq!(k3lat(&["classify", "k3", "--p", "2", "--c", "12"]).status.code(), Some(2));
    assert_eq!(k3lat(&["classify", "enriques", "--p", "2", "--c", "9"]).status.code(), Some(2));
    assert_eq!(k3lat(&["classify", "k3", "--p", "2", "--c", "8", "--facts", "bogus"]).status.code(), Some(2));
}

#[test]
fn table_row_lookup() {
    let (code, v) = json(&["table", "1", "--row", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["number"], 8);
    assert_eq!(k3lat(&["table", "1", "--row", "99"]).status.code(), Some(2));
    assert_eq!(k3lat(&["table", "3"]).status.code(), Some(2));
}

#[test]
fn lattice_commands() {
    let (code, v) = json(&["lattice", "snf", "--matrix", "[[2,4],[6,8]]"]);
    assert_eq!(code, 0);
    assert_eq!(v["diagonal"], serde_json::json!([2, 4]));
    let (_, v) = json(&["lattice", "disc", "--lattice", "A2"]);
    assert_eq!(v["order"], 3);
    let (code, v) = json(&["lattice", "closure", "--lattice", "E8", "--basis", "[[2,0,0,0,0,0,0,0]]"]);
    assert_eq!(code, 0);
    assert_eq!(v["index"], 2);
}

#[test]
fn config_predicates() {
    assert_eq!(k3lat(&["config", "primitive", "--config", "enriques_p3.json"]).status.code(), Some(1));
    let (code, v) = json(&["config", "divisible", "--config", "enriques_p5.json"]);
    assert_eq!(code, 0);
    assert_eq!(v.as_array().unwrap().len(), 1);
}

#[test]
fn geometry_commands() {
    let (code, v) = json(&["geometry", "kummer"]);
    assert_eq!(code, 0);
    assert_eq!(v.as_array().unwrap().len(), 31);
    let (code, v) = json(&["geometry", "hyperplanes", "--space", "ag23"]);
    assert_eq!(code, 0);
    assert_eq!(v["hyperplanes"].as_array().unwrap().len(), 12);
    assert_eq!(k3lat(&["geometry", "lemma16"]).status.code(), Some(0));
    assert_eq!(k3lat(&["geometry", "ag23"]).status.code(), Some(0));
    assert_eq!(k3lat(&["geometry", "hyperplanes", "--space", "ag33"]).status.code(), Some(2));
}

#[test]
fn fibration_and_groups() {
    assert_eq!(k3lat(&["fibration", "validate", "--spec", "mp9.json"]).status.code(), Some(0));
    let (_, v) = json(&["fibration", "height", "--spec", "mp108.json", "--section", "P1"]);
    assert_eq!(v["height"], "0");
    let (_, v) = json(&["groups", "build", "--group", "S3xC3"]);
    assert_eq!(v["order"], 18);
    assert_eq!(k3lat(&["groups", "iso", "--group", "D8", "--other", r#"{"gens":["r","s"],"rels":["r4","s2","srsr"]}"#]).status.code(), Some(0));
    assert_eq!(k3lat(&["groups", "iso", "--group", "C4", "--other", "C2^2"]).status.code(), Some(1));
}

#[test]
fn thread_count_does_not_change_results() {
    let one = stdout(&k3lat(&["--threads", "1", "geometry", "kummer", "--json"]));
    let four = stdout(&k3lat(&["--threads", "4", "geometry", "kummer", "--json"]));
    assert_eq!(one, four);
    assert_eq!(k3lat(&["--threads", "0", "lemma13"]).status.code(), Some(2));
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(k3lat(&["bogus"]).status.code(), Some(2));
    assert_eq!(k3lat(&["lattice", "snf"]).status.code(), Some(2));
    let o = k3lat(&["lattice", "snf", "--matrix", "[[1,2],\n[3"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(k3lat(&["groups", "build", "--group", "NoSuchGroup"]).status.code(), Some(2));
}

#[test]
fn search_guard_is_enforced() {
    let o = k3lat(&["--max-candidates", "1", "config", "divisible", "--config", "enriques_p3.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn data_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    let bundled = |name: &str| k3lat::data::read(name).unwrap();
    std::fs::write(dir.path().join("mp108.json"), bundled("mp108.json")).unwrap();
    let broken = bundled("ex2_2.json").replacen("\"P0\": \"1\"", "\"P0\": \"2\"", 1);
    std::fs::write(dir.path().join("ex2_2.json"), broken).unwrap();
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_k3lat"))
            .args(args)
            .env("K3LAT_DATA", dir.path())
            .output()
            .unwrap()
    };
    let o = run(&["fibration", "relation", "--relation", "data/ex2_2.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["fibration", "validate", "--spec", "mp9.json"]).status.code(), Some(2));
}

#[test]
fn library_entry_point() {
    let r = k3lat_cli::run(["k3lat", "groups", "normal-count", "--group", "C2^4", "--index", "2"]);
    assert_eq!((r.status, r.payload.as_u64()), (0, Some(15)));
    let help = k3lat_cli::run(["k3lat", "--help"]);
    assert_eq!(help.status, 0);
    assert!(help.human.contains("selftest"));
}
