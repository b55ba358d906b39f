use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pogroup"))
        .args(args)
        .env_remove("POGROUP_CACHE_DIR")
        .output()
        .unwrap()
}

fn spec(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../specs")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.pog");
    std::fs::write(&bad, "group G = ???").unwrap();
    assert_eq!(run(&["validate", "--spec", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["validate", "--spec", "/nonexistent.pog"]).status.code(), Some(1));
    let h = spec("heisenberg.pog");
    assert_eq!(run(&["compare", "--spec", &h, "--order", "nope", "a", "b"]).status.code(), Some(3));
    let out = run(&["sigma", "--spec", &spec("figure1.pog"), "--order", "tree", "--radius", "9", "--budget", "1000"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(run(&["validate", "--spec", &h]).status.code(), Some(0));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = run(&["census", "--spec", &spec("heisenberg.pog"), "--group", "Z", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"nontrivial_orders\": 2"));
    assert!(text.contains("\"schema_version\": 1"));
}

#[test]
fn figure_formats() {
    let f = spec("figure1.pog");
    let dot = run(&["figure", "--spec", &f, "--order", "plane", "--radius", "2"]);
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("graph cayley"));
    let svg = run(&["figure", "--spec", &f, "--order", "tree", "--radius", "3", "--format", "svg"]);
    assert!(String::from_utf8(svg.stdout).unwrap().starts_with("<svg"));
}

#[test]
fn cache_dir_is_populated() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_pogroup"))
        .args(["sigma", "--spec", &spec("figure1.pog"), "--order", "plane", "--radius", "3"])
        .env("POGROUP_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert_eq!(names.len(), 1);
    assert!(names[0].ends_with(".ball"));
}
