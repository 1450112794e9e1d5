//! End-to-end tests of the `aspherix` binary: subcommand output, file
//! formats, exit codes, and byte stability.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn aspherix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aspherix"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

#[test]
fn homology_report_for_torus() {
    let file = path_str(&corpus_dir().join("torus.pres"));
    let v = stdout_json(&aspherix(&["homology", &file]));
    assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["cd2_asserted"], false);
    let hom = &v["report"]["homology"];
    assert_eq!(hom["h1_free_rank"], 2);
    assert_eq!(hom["h2_rank"], 1);
    assert_eq!(hom["euler"], 0);
}

#[test]
fn snf_of_csv_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    std::fs::write(&path, "2,4\n6,8\n").unwrap();
    let v = stdout_json(&aspherix(&["snf", &path_str(&path)]));
    assert_eq!(v["report"]["divisors"], serde_json::json!([2, 4]));
    assert_eq!(v["report"]["rank"], 2);

    // JSON input form gives the same answer
    let jpath = dir.path().join("m.json");
    std::fs::write(&jpath, "[[2,4],[6,8]]").unwrap();
    let w = stdout_json(&aspherix(&["snf", &path_str(&jpath)]));
    assert_eq!(w["report"]["divisors"], v["report"]["divisors"]);
}

#[test]
fn aspherical_verdicts_and_exit_codes() {
    let dir = corpus_dir();
    let torus = path_str(&dir.join("torus.pres"));
    let torus_e = path_str(&dir.join("torus.e.json"));
    let v = stdout_json(&aspherix(&[
        "aspherical",
        &torus,
        "--idempotent",
        &torus_e,
        "--assert-cd2",
    ]));
    assert_eq!(v["report"]["verdict"], "aspherical");
    assert_eq!(v["report"]["sigma_rank"], 0);
    assert_eq!(v["report"]["validation"]["idempotency_checked"], true);

    // not_aspherical still exits 0
    let sphere = path_str(&dir.join("sphere.pres"));
    let sphere_e = path_str(&dir.join("sphere.e.json"));
    let out = aspherix(&[
        "aspherical",
        &sphere,
        "--idempotent",
        &sphere_e,
        "--assert-cd2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["verdict"], "not_aspherical");
    assert_eq!(v["report"]["h2g"]["free_rank"], 0);

    // without the dimension assertion the verdict degrades
    let v = stdout_json(&aspherix(&["aspherical", &torus, "--idempotent", &torus_e]));
    assert_eq!(v["report"]["verdict"], "inconclusive");

    // Klein bottle needs no idempotent
    let klein = path_str(&dir.join("klein.pres"));
    let v = stdout_json(&aspherix(&["aspherical", &klein, "--assert-cd2"]));
    assert_eq!(v["report"]["verdict"], "aspherical");
    assert_eq!(v["report"]["validation"]["e_provided"], false);
}

#[test]
fn bad_inputs_use_the_right_exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    // unreadable file: usage error, exit 2
    let out = aspherix(&["homology", &path_str(&dir.path().join("missing.pres"))]);
    assert_eq!(out.status.code(), Some(2));

    // malformed presentation: exit 2 with a position in the message
    let bad = dir.path().join("bad.pres");
    std::fs::write(&bad, "gens: a\nrel: a c\n").unwrap();
    let out = aspherix(&["homology", &path_str(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    // a non-idempotent matrix: domain error, exit 1
    let sphere = dir.path().join("sphere.pres");
    std::fs::write(&sphere, "gens: a\nrel:\n").unwrap();
    let e = dir.path().join("sphere.e.json");
    std::fs::write(
        &e,
        r#"{"model":{"kind":"free","rank":1,"names":["a"]},"scalar":"int","rows":1,"cols":1,"entries":[[[["",2]]]]}"#,
    )
    .unwrap();
    let out = aspherix(&[
        "aspherical",
        &path_str(&sphere),
        "--idempotent",
        &path_str(&e),
        "--assert-cd2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("idempotent"));

    // unknown flag: clap usage error, exit 2
    let out = aspherix(&["homology", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn jacobian_json_round_trips_into_the_loader() {
    let torus = path_str(&corpus_dir().join("torus.pres"));
    let out = aspherix(&["jacobian", &torus]);
    let v = stdout_json(&out);
    assert_eq!(v["rows"], 2);
    assert_eq!(v["cols"], 1);
    let (m, names) =
        aspherix::group_ring::matrix_from_json::<aspherix::scalar::Int>(&v).unwrap();
    assert_eq!(names, vec!["a".to_string(), "b".to_string()]);
    assert_eq!(m.rows(), 2);

    // augmented CSV form
    let out = aspherix(&["jacobian", &torus, "--augmented", "--csv"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "0\n0");
}

#[test]
fn rank_check_reports_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let e = dir.path().join("proj.json");
    std::fs::write(
        &e,
        r#"{"model":{"kind":"free","rank":2,"names":["a","b"]},"scalar":"int","rows":2,"cols":2,
            "entries":[[[["",1]],[]],[[],[]]]}"#,
    )
    .unwrap();
    let v = stdout_json(&aspherix(&["rank-check", &path_str(&e), "--group", "free:2"]));
    assert_eq!(v["report"]["t_rank"], 1);
    assert_eq!(v["report"]["eps_rank"], 1);
    assert_eq!(v["report"]["agree"], true);
    assert_eq!(v["report"]["counterexample"], serde_json::Value::Null);

    // mismatched --group spec is a usage error
    let out = aspherix(&["rank-check", &path_str(&e), "--group", "free:3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tietze_output_reparses_and_round_trips() {
    let torus = path_str(&corpus_dir().join("torus.pres"));
    let out = aspherix(&["tietze", &torus, "stabilize", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let p = aspherix::words::Presentation::parse(&text).unwrap();
    assert_eq!(p.gen_count(), 4);
    assert_eq!(p.relator_count(), 3);

    let out = aspherix(&[
        "tietze", &torus, "transvect", "0", "0", "--conjugator", "a",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn corpus_summary_counts() {
    let dir = path_str(&corpus_dir());
    let v = stdout_json(&aspherix(&[
        "corpus",
        &dir,
        "--assert-cd2",
        "--check-tietze",
        "--seed",
        "17",
    ]));
    let s = &v["report"];
    assert_eq!(s["files"], 8);
    assert_eq!(s["errors"], 0);
    assert_eq!(s["aspherical"], 6);
    assert_eq!(s["not_aspherical"], 2);
    assert_eq!(s["inconclusive"], 0);
    assert_eq!(s["contradictions"], 0);
    assert_eq!(s["rank_disagreements"], 0);
    assert_eq!(s["tietze_violations"], 0);
}

#[test]
fn corpus_flags_one_corrupted_file_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("good.pres"), "gens: a\nrel: a\n").unwrap();
    std::fs::write(dir.path().join("bad.pres"), "not a presentation\n").unwrap();
    let v = stdout_json(&aspherix(&["corpus", &path_str(dir.path()), "--assert-cd2"]));
    assert_eq!(v["report"]["files"], 2);
    assert_eq!(v["report"]["errors"], 1);
    assert_eq!(v["report"]["ok"], 1);

    // empty directory gives an empty summary
    let empty = tempfile::tempdir().unwrap();
    let v = stdout_json(&aspherix(&["corpus", &path_str(empty.path())]));
    assert_eq!(v["report"]["files"], 0);
}

#[test]
fn output_is_byte_stable() {
    let dir = path_str(&corpus_dir());
    let torus = path_str(&corpus_dir().join("torus.pres"));
    for args in [
        vec!["homology", torus.as_str()],
        vec!["corpus", dir.as_str(), "--assert-cd2", "--check-tietze", "--seed", "5"],
    ] {
        let a = aspherix(&args);
        let b = aspherix(&args);
        assert_eq!(a.stdout, b.stdout, "non-deterministic output for {args:?}");
    }
}
