use std::io::Write;
use std::process::{Command, Output, Stdio};

fn rectrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rectrep")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_perm_verdicts() {
    assert_eq!(stdout(&rectrep(&["check-perm", "[2,5,7,6,1,3,8,4]"])), "plane\n");
    assert_eq!(stdout(&rectrep(&["check-perm", "[2,1,4,3]"])), "not-plane\n");
    assert_eq!(stdout(&rectrep(&["check-perm", "[2,4,1,3]", "--biplane"])), "biplane\n");
}

#[test]
fn enum_counts() {
    assert_eq!(stdout(&rectrep(&["enum", "plane", "--n", "4", "--count-only"])), "4\t23\n");
    assert_eq!(stdout(&rectrep(&["enum", "biplane", "--n", "4", "--count-only", "--pruned"])), "4\t22\n");
    let listed = stdout(&rectrep(&["enum", "plane", "--n", "3"]));
    assert_eq!(listed.lines().count(), 6);
    assert_eq!(listed.lines().next(), Some("[1,2,3]"));
}

#[test]
fn exit_codes() {
    assert_eq!(rectrep(&["check-perm", "[1,"]).status.code(), Some(2));
    assert_eq!(rectrep(&["check-perm", "no-such-file.json"]).status.code(), Some(2));
    assert_eq!(rectrep(&["check-perm", "[1,1]"]).status.code(), Some(3));
    assert_eq!(rectrep(&["construct", "[3,4,1,2]"]).status.code(), Some(3));
    let overlap = r#"{"n":2,"rects":[{"id":1,"xmin":0,"ymin":0,"xmax":1,"ymax":1},{"id":2,"xmin":0,"ymin":0,"xmax":1,"ymax":1}]}"#;
    assert_eq!(rectrep(&["extract", overlap]).status.code(), Some(3));
    let dims = r#"{"widths":[1,1,1,1,1,1,1],"heights":[1,1,1,1,1,1,1]}"#;
    assert_eq!(rectrep(&["solve", dims, "--objective", "area"]).status.code(), Some(3));
}

#[test]
fn reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rectrep"))
        .args(["badquartet", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(br#"{"pi":[1,2,3,4],"rho":[1,2,3,4]}"#).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out), "none\n");
}

#[test]
fn construct_writes_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let out = rectrep(&["construct", "[2,4,1,3]", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    let cert: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("p.cert.json")).unwrap()).unwrap();
    assert_eq!(cert["verified"], true);
    assert_eq!(cert["pi"], serde_json::json!([2, 4, 1, 3]));
    // The written placement round-trips through extract.
    let extracted = rectrep(&["extract", path.to_str().unwrap()]);
    assert!(extracted.status.success());
}

#[test]
fn verify_suite_passes() {
    let out = rectrep(&["verify", "--suite", "all", "--n", "5", "--samples", "100", "--seed", "1"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).lines().all(|l| !l.starts_with("FAIL")));
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.svg");
    assert!(rectrep(&["render", "[2,1,3]", "-o", path.to_str().unwrap()]).status.success());
    assert!(std::fs::read_to_string(path).unwrap().starts_with("<svg"));
}
