//! The `tritile` binary end to end: exit codes and reproducible output.

use std::path::Path;
use std::process::{Command, Output};

fn tritile(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tritile"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let gen = tritile(
        d,
        &[
            "generate",
            "periodic",
            "--b",
            "1",
            "--c",
            "2",
            "--window",
            "-15:15:-15:15",
            "-o",
            "p.tiling",
        ],
    );
    assert_eq!(code(&gen), 0, "{}", String::from_utf8_lossy(&gen.stderr));
    let v = tritile(d, &["verify", "p.tiling", "--delta", "1"]);
    assert_eq!(code(&v), 0, "{}", stdout(&v));
    let out = stdout(&v);
    assert!(out.contains("hypotheses.defect=0/1:0/1\n"));
    assert!(out.ends_with("result=pass\n"));

    assert_eq!(
        code(&tritile(
            d,
            &["generate", "lattice", "--s", "1", "--window", "0:8:0:8", "-o", "l.tiling"]
        )),
        0
    );
    let v = tritile(d, &["verify", "l.tiling", "--delta", "1", "--checks", "hypotheses"]);
    assert_eq!(code(&v), 1);
    assert!(stdout(&v).contains("hypotheses.no_shared_side=fail\n"));

    assert_eq!(code(&tritile(d, &["verify", "p.tiling", "--delta", "1", "--bogus"])), 2);
    assert_eq!(
        code(&tritile(
            d,
            &["verify", "p.tiling", "--delta", "1", "--checks", "lemma11"]
        )),
        2
    );
    assert_eq!(code(&tritile(d, &["verify", "missing.tiling", "--delta", "1"])), 2);
    assert_eq!(code(&tritile(d, &["verify", "p.tiling", "--delta", "0"])), 2);
}

#[test]
fn spiral_fails_structure_checks_but_keeps_hypotheses() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = [
        "generate", "spiral", "--px", "0", "--py", "0", "--ax", "1", "--ay", "0", "--imin", "-30", "--imax", "30",
    ];
    let mut args = args.to_vec();
    args.extend(["-o", "s.tiling"]);
    assert_eq!(code(&tritile(d, &args)), 0);
    let v = tritile(d, &["verify", "s.tiling", "--delta", "1e-6", "--interior", "local"]);
    assert_eq!(code(&v), 1);
    let out = stdout(&v);
    assert!(out.contains("hypotheses=pass\n"), "{out}");
    assert!(out.contains("lemma7=fail\n"));
    assert!(out.contains("conclusions.at_most_three=fail\n"));
}

#[test]
fn walk_and_render_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let gen = [
        "generate",
        "periodic",
        "--b",
        "2",
        "--c",
        "3",
        "--window",
        "-20:20:-20:20",
        "-o",
        "p.tiling",
    ];
    assert_eq!(code(&tritile(d, &gen)), 0);
    let walk = [
        "walk", "p.tiling", "--steps", "200", "--trials", "50", "--seed", "7", "--csv", "w.csv",
    ];
    let first = tritile(d, &walk);
    assert_eq!(code(&first), 0);
    let csv = std::fs::read(d.join("w.csv")).unwrap();
    let second = tritile(d, &walk);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(csv, std::fs::read(d.join("w.csv")).unwrap());
    let out = stdout(&first);
    assert!(out.contains("martingale_deviation=0/1:0/1\n"));
    assert!(out.contains("mode=lattice\n"));
    assert!(out.contains("expected_size_at_stop=5/1:0/1\n"));

    for name in ["a.svg", "b.svg"] {
        assert_eq!(code(&tritile(d, &["render", "p.tiling", "-o", name, "--labels"])), 0);
    }
    let a = std::fs::read(d.join("a.svg")).unwrap();
    assert_eq!(a, std::fs::read(d.join("b.svg")).unwrap());
    assert!(String::from_utf8(a).unwrap().contains(r#"class="large""#));
}

#[test]
fn walk_on_a_lattice_reports_no_graph() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(
        code(&tritile(
            d,
            &["generate", "lattice", "--s", "1", "--window", "0:6:0:6", "--float", "-o", "l.tiling"]
        )),
        0
    );
    let w = tritile(
        d,
        &["walk", "l.tiling", "--steps", "10", "--trials", "2", "--seed", "1"],
    );
    assert_eq!(code(&w), 1);
    assert!(stdout(&w).starts_with("graph=fail\n"));
}

#[test]
fn classify_json_counts_every_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let gen = [
        "generate",
        "periodic",
        "--b",
        "1",
        "--c",
        "1",
        "--window",
        "-8:8:-8:8",
        "-o",
        "p.tiling",
    ];
    assert_eq!(code(&tritile(d, &gen)), 0);
    let c = tritile(d, &["classify", "p.tiling", "--json"]);
    assert_eq!(code(&c), 0);
    let doc: serde_json::Value = serde_json::from_slice(&c.stdout).unwrap();
    let n = doc["triangles"].as_array().unwrap().len() as u64;
    let total: u64 = doc["counts"]
        .as_object()
        .unwrap()
        .values()
        .map(|v| v.as_u64().unwrap())
        .sum();
    assert_eq!(n, total);
    assert!(doc["counts"]["large"].as_u64().unwrap() > 0);
    assert!(doc["counts"].get("improper").is_none());
}
