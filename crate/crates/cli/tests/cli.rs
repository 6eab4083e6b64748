use std::process::{Command, Output};

use ybmap_core::catalog::Registry;

fn ybmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ybmap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn list_describes_maps() {
    let o = ybmap(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.contains("adler-yamilov dim=4 params=2 lax=yes poisson=yes"),
        "{text}"
    );
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn list_json_is_an_array_of_summaries() {
    let o = ybmap(&["list", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 10);
    let dnls4 = rows.iter().find(|r| r["name"] == "dnls4").unwrap();
    assert_eq!(dnls4["dim"], 4);
    assert_eq!(dnls4["casimirs"], serde_json::json!(["C1", "C2"]));
}

#[test]
fn list_on_empty_registry() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = ybmap_cli::run(["ybmap", "list"], &Registry::empty(), &mut out, &mut err);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let code = ybmap_cli::run(
        ["ybmap", "list", "--format", "json"],
        &Registry::empty(),
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap().trim(), "[]");
}

#[test]
fn eval_prints_exact_images() {
    let o = ybmap(&[
        "eval",
        "adler-yamilov",
        "--x",
        "1,0",
        "--y",
        "0,0",
        "--a",
        "2",
        "--b",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "u = (-1, 0); v = (1, 0)");

    let o = ybmap(&[
        "eval", "--map", "dnls4", "--x", "1,1", "--y", "1,1", "--a", "2", "--b", "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "u = (0, 1/2); v = (2, 3/2)");
}

#[test]
fn eval_on_singular_locus_exits_one() {
    let o = ybmap(&[
        "eval",
        "adler-yamilov",
        "--x",
        "1,0",
        "--y",
        "0,-1",
        "--a",
        "2",
        "--b",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("singular locus: 1+x1*y2 = 0"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn eval_usage_errors_exit_two() {
    for args in [
        &[
            "eval",
            "adler-yamilov",
            "--x",
            "1,abc",
            "--y",
            "0,0",
            "--a",
            "2",
            "--b",
            "1",
        ][..],
        &[
            "eval",
            "adler-yamilov",
            "--x",
            "1,0,3",
            "--y",
            "0,0",
            "--a",
            "2",
            "--b",
            "1",
        ],
        &["eval", "adler-yamilov", "--x", "1,0", "--y", "0,0"],
        &[
            "eval",
            "adler-yamilov",
            "--x",
            "0.1e-3,0",
            "--y",
            "0,0",
            "--a",
            "2",
            "--b",
            "1",
        ],
        &["eval", "nls6", "--x", "1,0", "--y", "0,0"],
        &["eval", "--x", "1,0", "--y", "0,0"],
        &["frobnicate"],
    ] {
        let o = ybmap(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn eval_float_modes() {
    let args = [
        "eval",
        "adler-yamilov",
        "--x",
        "0.1e-3,0",
        "--y",
        "0,0",
        "--a",
        "2",
        "--b",
        "1",
    ];
    let o = ybmap(&[&args[..], &["--float"]].concat());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(
        stdout(&o).starts_with("u = (-0.0001, 0.0)"),
        "{}",
        stdout(&o)
    );
    let o = ybmap(&[&args[..], &["--float=wide"]].concat());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn eval_implicit_map() {
    let o = ybmap(&[
        "eval",
        "dnls4-implicit",
        "--x",
        "1/2,0",
        "--y",
        "0,-1/4",
        "--a",
        "3/4",
        "--b",
        "3/2",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["X"], 0.75);
    assert_eq!(v["consistent"], true);
}

#[test]
fn verify_passes_for_catalog_maps() {
    let o = ybmap(&["verify", "adler-yamilov", "--trials", "100", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = ybmap(&[
        "verify",
        "dihedral6",
        "--checks",
        "yb,invariants",
        "--trials",
        "50",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_json_records_conventions() {
    let o = ybmap(&[
        "verify",
        "vector-nls:1",
        "--trials",
        "20",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["vector_nls_convention"]["selected"], "adler-yamilov");
    assert_eq!(v["maps"][0]["name"], "vector-nls:1");
    let pairings = v["leaf_pairings"].as_array().unwrap();
    assert!(pairings
        .iter()
        .all(|p| p["selected"] == serde_json::json!(["straight"])));
}

#[test]
fn verify_implicit_map() {
    let o = ybmap(&[
        "verify",
        "dihedral4-implicit",
        "--trials",
        "50",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = v["maps"][0]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"] == "yb-residual"));
}

#[test]
fn verify_usage_errors_exit_two() {
    for args in [
        &["verify", "unknown-map"][..],
        &["verify", "adler", "--checks", "yb,bogus"],
        &["verify", "adler", "--trials", "0"],
        &["verify", "adler", "--tolerance", "0"],
        &["verify"],
    ] {
        let o = ybmap(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn report_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.json"), dir.path().join("b.json")];
    for p in &paths {
        let o = ybmap(&[
            "report",
            "--all",
            "--trials",
            "5",
            "--seed",
            "3",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());

    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["seed"], 3);
    assert_eq!(v["trials"], 5);
    let maps = v["maps"].as_array().unwrap();
    let names: Vec<&str> = maps.iter().map(|m| m["name"].as_str().unwrap()).collect();
    for m in Registry::standard().maps() {
        let base = m.name.split(':').next().unwrap();
        assert!(
            names.iter().any(|n| n.split(':').next() == Some(base)),
            "{base} missing"
        );
    }
    for m in maps {
        for c in m["checks"].as_array().unwrap() {
            assert!(c["name"].is_string() && c["trials"].is_u64() && c["failures"].is_u64());
            if c["status"] == "skipped" {
                assert!(c["reason"].is_string(), "silent skip in {}", m["name"]);
            }
        }
    }
}

#[test]
fn report_to_unwritable_path_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("report.json");
    let o = ybmap(&[
        "report",
        "--map",
        "adler",
        "--trials",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cannot write"));
}

#[test]
fn orbit_csv_and_exact_drift() {
    let o = ybmap(&[
        "orbit",
        "adler-yamilov",
        "--x",
        "1/3,1/5",
        "--y",
        "1/7,1/2",
        "--a",
        "2",
        "--b",
        "1",
        "--steps",
        "20",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("step,x1,x2,y1,y2,I1,I2,drift_I1,drift_I2")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 21);
    assert!(rows.iter().all(|r| r.ends_with(",0.0,0.0")));
}

#[test]
fn orbit_abort_exits_one() {
    let o = ybmap(&[
        "orbit",
        "adler",
        "--x",
        "1",
        "--y",
        "-0.9999999999999",
        "--a",
        "2",
        "--b",
        "1",
        "--float",
        "--steps",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("after step 0"), "{}", stderr(&o));
}
