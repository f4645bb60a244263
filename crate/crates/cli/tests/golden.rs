use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_realtree"));
    cmd.env_remove("RTREE_UNFOLD_CAP");
    for a in args {
        if a.ends_with(".rt") || a.ends_with(".iso") {
            cmd.arg(data(a));
        } else {
            cmd.arg(a);
        }
    }
    cmd.output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn distances() {
    assert_eq!(stdout(&["dist", "c0.rt", "c7_2.rt"]), "7/2\n");
    assert_eq!(stdout(&["dist", "E1.rt", "E2.rt"]), "2\n");
    assert_eq!(stdout(&["dist", "E1.rt", "E3.rt"]), "4\n");
    assert_eq!(stdout(&["--format", "json", "dist", "E1.rt", "E2.rt"]), "{\"dist\":\"2\"}\n");
}

#[test]
fn wedges_and_order() {
    assert_eq!(stdout(&["wedge", "E1.rt", "E2.rt"]), "(alphabet finite 3)\n(elem :rho 0 :jumps [])\n");
    assert_eq!(stdout(&["wedge", "E1.rt", "E3.rt"]), "(alphabet finite 3)\n(elem :rho -1 :jumps [])\n");
    assert_eq!(stdout(&["leq", "c0.rt", "E1.rt"]), "true\n");
    assert_eq!(stdout(&["leq", "E1.rt", "E2.rt"]), "false\n");
}

#[test]
fn ranks() {
    assert_eq!(stdout(&["rank", "c0.rt"]), "0\n");
    assert_eq!(stdout(&["rank", "E1.rt"]), "1\n");
    assert_eq!(stdout(&["rank", "E3.rt"]), "2\n");
    assert_eq!(stdout(&["complexity", "E3.rt"]), "2\n");
    assert_eq!(stdout(&["member", "E3.rt", "--alpha", "1"]), "false\n");
    assert_eq!(stdout(&["member", "E3.rt", "--alpha", "2"]), "true\n");
}

#[test]
fn witness_round_trip() {
    let dir = std::env::temp_dir().join(format!("realtree-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (alpha, rank) in [("3", "3\n"), ("w+1", "w + 1\n"), ("w*2+2", "w*2 + 2\n")] {
        let w = stdout(&["witness", "--alpha", alpha]);
        let path = dir.join("w.rt");
        std::fs::write(&path, &w).unwrap();
        let p = path.to_str().unwrap();
        assert_eq!(stdout(&["rank", p]), rank);
        // writing back what was read is the identity
        assert_eq!(stdout(&["wedge", p, p]), w);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn dot_output() {
    assert_eq!(
        stdout(&["dot", "c0.rt", "E1.rt", "E3.rt"]),
        "graph hull {\n  p0 [label=\"c0\", shape=ellipse];\n  p1 [label=\"E1\", shape=ellipse];\n  p2 [label=\"E3\", shape=ellipse];\n  w0 [label=\"rho -1\", shape=point];\n  w0 -- p0 [label=\"1\"];\n  p0 -- p1 [label=\"1\"];\n  w0 -- p2 [label=\"2\"];\n}\n"
    );
    assert_eq!(stdout(&["--format", "dot", "dot", "c0.rt", "c7_2.rt"]).matches(" -- ").count(), 1);
}

#[test]
fn isometries() {
    assert_eq!(stdout(&["apply", "swap12.iso", "E1.rt"]), "(alphabet finite 3)\n(elem :rho 1 :jumps [(step 0 2)])\n");
    let phi = stdout(&["two-point", "c0.rt", "E1.rt", "c0.rt", "E2.rt"]);
    let dir = std::env::temp_dir().join(format!("realtree-iso-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("phi.iso");
    std::fs::write(&path, phi).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(stdout(&["apply", p, "E1.rt"]), stdout(&["wedge", "E2.rt", "E2.rt"]));
    assert_eq!(stdout(&["apply", p, "c0.rt"]), stdout(&["wedge", "c0.rt", "c0.rt"]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn directions() {
    let out = stdout(&["directions", "E1.rt"]);
    assert_eq!(out.lines().count(), 4);
    assert!(out.starts_with("down\t"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["dist", "c0.rt", "d0.rt"]), 2);
    assert_eq!(code(&["rank", "bad_label.rt"]), 2);
    assert_eq!(code(&["rank", "missing.rt"]), 2);
    assert_eq!(code(&["--cap", "0", "rank", "c0.rt"]), 2);
    assert_eq!(code(&["--format", "dot", "dist", "c0.rt", "E1.rt"]), 2);
    assert_eq!(code(&["check", "nonsense"]), 2);
    assert_eq!(code(&["check", "metric", "--cases", "50"]), 0);
    let mismatch = run(&["dist", "c0.rt", "d0.rt"]);
    assert!(String::from_utf8_lossy(&mismatch.stderr).contains("alphabet mismatch"));
}

#[test]
fn escape_demo_json() {
    let out = stdout(&["escape-demo", "--alpha", "w", "--kappa", "3", "--steps", "6"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["limit_complexity"], "w + 1");
    assert_eq!(v["member_alpha"], false);
    assert_eq!(v["member_alpha_plus_one"], true);
    assert_eq!(v["verified"], true);
}

#[test]
fn undecided_exit() {
    let dir = std::env::temp_dir().join(format!("realtree-cap-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("w.rt");
    std::fs::write(&path, stdout(&["witness", "--alpha", "w*2+2"])).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(code(&["--cap", "1", "dist", p, p]), 3);
    let out = Command::new(env!("CARGO_BIN_EXE_realtree"))
        .env("RTREE_UNFOLD_CAP", "2")
        .args(["dist", p, p])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("undecided"));
    assert_eq!(stdout(&["dist", p, p]), "0\n");
    std::fs::remove_dir_all(&dir).unwrap();
}
