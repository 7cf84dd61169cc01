//! End-to-end runs of the `braidlab` binary against golden files in
//! `tests/golden`. Set `BRAIDLAB_UPDATE_GOLDEN=1` to rewrite them.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use braidlab::adjacency::{AdjacencyCertificate, Verdict};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_braidlab"));
    c.env("BRAIDLAB_NO_COLOR", "1");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str, args: &[&str], code: i32) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text, stdout(&run(args)), "{args:?} is not deterministic");
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("BRAIDLAB_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(text, want, "{args:?} differs from {}", path.display());
}

#[test]
fn golden_invariants() {
    golden("invariants_3_4.txt", &["invariants", "3", "4"], 0);
    golden("invariants_3_7.json", &["invariants", "3", "7", "--json"], 0);
    golden("invariants_mirror_2_5.txt", &["invariants", "2", "5", "--mirror"], 0);
}

#[test]
fn golden_upsilon() {
    golden("upsilon_3_7.txt", &["upsilon", "3", "7", "--breakpoints"], 0);
    golden("upsilon_4_7.json", &["--json", "upsilon", "4", "7"], 0);
    golden("upsilon_2_5_samples.txt", &["upsilon", "2", "5", "--samples", "8"], 0);
}

#[test]
fn golden_distance() {
    golden("distance_2_7_3_4.txt", &["distance", "2,7", "3,4"], 0);
    golden("distance_2_13_3_7.json", &["distance", "2,13", "3,7", "--json"], 0);
    golden("distance_mirror.txt", &["distance", "-2,5", "3,4"], 0);
}

#[test]
fn golden_render() {
    golden("render_trefoil.txt", &["render", "s:2 w:1,1,1"], 0);
    golden("render_3.txt", &["render", "s:4 w:1,3,2,1"], 0);
}

#[test]
fn invariants_example_values() {
    let out = stdout(&run(&["invariants", "3", "4"]));
    assert!(out.contains("g=3\n") && out.contains("τ=-3\n") && out.contains("υ=-2\n"), "{out}");
    let out = stdout(&run(&["distance", "2,7", "3,4"]));
    assert!(out.starts_with("d(T(2,7), T(3,4)) = 1\n"), "{out}");
}

#[test]
fn json_outputs_parse() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&run(&["--json", "distance", "2,7", "3,4"]))).unwrap();
    assert_eq!(v["distance"], 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&run(&["--json", "invariants", "3", "4"]))).unwrap();
    assert_eq!((v["genus"].as_i64(), v["tau"].as_i64(), v["upsilon"].as_i64()), (Some(3), Some(-3), Some(-2)));
    let v: serde_json::Value = serde_json::from_str(&stdout(&run(&["--json", "upsilon", "3", "4"]))).unwrap();
    assert_eq!(v[0]["to"], "2/3");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["invariants", "4", "6"]).status.code(), Some(1));
    assert_eq!(run(&["distance", "4,5", "3,7"]).status.code(), Some(1));
    assert_eq!(run(&["adjacency", "grid", "--n", "5", "--m", "2", "--a", "4", "--b", "3"]).status.code(), Some(1));
    assert_eq!(run(&["invariants", "three", "4"]).status.code(), Some(64));
    assert_eq!(run(&[]).status.code(), Some(64));
    assert_eq!(run(&["verify"]).status.code(), Some(64));
    let err = String::from_utf8(run(&["distance", "4,5", "3,7"]).stderr).unwrap();
    assert!(err.contains("lower bound"), "{err}");
}

fn write_cert(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut full = vec!["adjacency"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", path.to_str().unwrap()]);
    let out = run(&full);
    assert_eq!(out.status.code(), Some(0), "{full:?}");
    path
}

#[test]
fn adjacency_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_cert(dir.path(), "i3.json", &["index3", "--m", "7"]);
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "Valid\n");

    let out = run(&["--json", "verify", path.to_str().unwrap()]);
    let v: Verdict = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v, Verdict::Valid);

    let piped = run(&["adjacency", "square", "--m", "5"]);
    let cert: AdjacencyCertificate = serde_json::from_slice(&piped.stdout).unwrap();
    assert_eq!((cert.source.p, cert.source.q), (2, 13));
}

#[test]
fn verify_reports_tampering_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_cert(dir.path(), "i4.json", &["index4", "--m", "5"]);
    let mut cert: AdjacencyCertificate = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    cert.source.q += 2;
    std::fs::write(&path, cert.to_json()).unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).starts_with("EndpointMismatch (source)"), "{}", stdout(&out));
    assert!(!stdout(&out).contains('\x1b'));

    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(run(&["verify", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn batch_verify() {
    let dir = tempfile::tempdir().unwrap();
    write_cert(dir.path(), "a.json", &["index3", "--m", "5"]);
    write_cert(dir.path(), "b.json", &["grid", "--n", "3", "--m", "4", "--a", "5", "--b", "6"]);
    write_cert(dir.path(), "c.json", &["staircase", "--m", "4"]);
    let out = run(&["verify", "--batch", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().all(|l| l.ends_with(": Valid")), "{text}");

    let path = dir.path().join("b.json");
    let mut cert: AdjacencyCertificate = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    cert.steps.pop();
    std::fs::write(&path, cert.to_json()).unwrap();
    let out = run(&["verify", "--batch", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
