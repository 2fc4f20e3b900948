use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn ballmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ballmap")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad report ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("error report is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Writes the example map into `dir` and returns its path.
fn example(dir: &TempDir, s1: &str, s2: &str) -> PathBuf {
    let path = dir.path().join(format!("example_{s1}_{s2}.json"));
    let out = ballmap(&["construct", "example", "--sigma1", s1, "--sigma2", s2, "--emit", path_str(&path)]);
    assert_eq!(out.status.code(), Some(0));
    path
}

#[test]
fn example_map_verifies() {
    let dir = TempDir::new().unwrap();
    let map = example(&dir, "0.3", "0.4");
    let out = ballmap(&["verify", path_str(&map)]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["proper"], true);
    assert_eq!(report["normal_form"], true);
    assert_eq!(report["degree"], 4);
    assert_eq!(report["dims"]["n"], 2);
    assert_eq!(report["dims"]["N"], 7);
    let sigma: Vec<f64> = serde_json::from_value(report["sigma"].clone()).unwrap();
    assert!((sigma[0] - 0.3).abs() < 1e-12 && (sigma[1] - 0.4).abs() < 1e-12);
    assert!(matches!(report["lowest_terms"].as_str(), Some("likely" | "certified")));
}

#[test]
fn scaled_map_fails_verification() {
    let dir = TempDir::new().unwrap();
    let map = example(&dir, "0.3", "0.4");
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&map).unwrap()).unwrap();
    for comp in v["numerator"].as_array_mut().unwrap() {
        for term in comp["terms"].as_array_mut().unwrap() {
            term["re"] = Value::from(term["re"].as_f64().unwrap() * 1.5);
            term["im"] = Value::from(term["im"].as_f64().unwrap() * 1.5);
        }
    }
    let scaled = dir.path().join("scaled.json");
    fs::write(&scaled, serde_json::to_string(&v).unwrap()).unwrap();
    let out = ballmap(&["verify", path_str(&scaled)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["proper"], false);
}

#[test]
fn malformed_input_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"n\": 2, \"N\": ").unwrap();
    let out = ballmap(&["verify", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["code"], "parse");
    let missing = ballmap(&["verify", path_str(&dir.path().join("missing.json"))]);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(stderr_json(&missing)["error"]["code"], "io");
}

#[test]
fn large_sigma_reports_the_safe_range() {
    let out = ballmap(&["construct", "even-quartic", "--sigma", "0.9,0.95"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_json(&out);
    assert_eq!(err["error"]["code"], "not_positive_semidefinite");
    assert!(err["error"]["message"].as_str().unwrap().contains("1/sqrt(n) = 0.7071"));
}

#[test]
fn even_quartic_group_is_plus_minus_identity() {
    let dir = TempDir::new().unwrap();
    let map = dir.path().join("quartic.json");
    let out = ballmap(&["construct", "even-quartic", "--sigma", "0.01,0.02", "--emit", path_str(&map)]);
    assert_eq!(out.status.code(), Some(0));
    for family in ["sign-diagonal", "signed-permutation"] {
        let out = ballmap(&["groups", path_str(&map), "--group", "g", "--enumerate", family]);
        assert_eq!(out.status.code(), Some(0));
        let report = stdout_json(&out);
        assert_eq!(report["count"], 2);
        assert_eq!(report["closed"], true);
        let diagonals: Vec<(f64, f64)> = report["members"]
            .as_array()
            .unwrap()
            .iter()
            .map(|u| (u["rows"][0][0]["re"].as_f64().unwrap(), u["rows"][1][1]["re"].as_f64().unwrap()))
            .collect();
        assert!(diagonals.contains(&(1.0, 1.0)) && diagonals.contains(&(-1.0, -1.0)));
    }
}

#[test]
fn single_unitary_membership() {
    let dir = TempDir::new().unwrap();
    let map = example(&dir, "0.3", "0.4");
    let u = dir.path().join("u.json");
    fs::write(&u, r#"{"n": 2, "rows": [[{"re": -1, "im": 0}, {"re": 0, "im": 0}], [{"re": 0, "im": 0}, {"re": -1, "im": 0}]]}"#)
        .unwrap();
    let out = ballmap(&["groups", path_str(&map), "--group", "gamma", "--unitary", path_str(&u)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"]["member"], true);
    // A needs a target unitary
    let out = ballmap(&["groups", path_str(&map), "--group", "a", "--unitary", path_str(&u)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["code"], "missing_target");
}

#[test]
fn audit_and_structure() {
    let dir = TempDir::new().unwrap();
    let map = example(&dir, "0.3", "0.4");
    let out = ballmap(&["groups", path_str(&map), "--audit", "signed-permutation"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["clean"], true);
    let out = ballmap(&["groups", path_str(&map), "--structure"]);
    assert_eq!(stdout_json(&out)["structure"], "O(1) x O(1)");
}

#[test]
fn normalize_recovers_sigma_of_a_moved_map() {
    let dir = TempDir::new().unwrap();
    let map = example(&dir, "0.3", "0.4");
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&map).unwrap()).unwrap();
    // swap the source variables: sigma is unchanged but g_2 becomes 0.4 z1^2 + 0.3 z2^2
    let flip = |poly: &mut Value| {
        for term in poly["terms"].as_array_mut().unwrap() {
            let e = term["e"].as_array_mut().unwrap();
            e.swap(0, 1);
        }
    };
    for comp in v["numerator"].as_array_mut().unwrap() {
        flip(comp);
    }
    flip(&mut v["denominator"]);
    let moved = dir.path().join("moved.json");
    fs::write(&moved, serde_json::to_string(&v).unwrap()).unwrap();
    let before = stdout_json(&ballmap(&["verify", path_str(&moved)]));
    assert_eq!(before["normal_form"], false);

    let emitted = dir.path().join("normal.json");
    let out = ballmap(&["normalize", path_str(&moved), "--emit", path_str(&emitted)]);
    assert_eq!(out.status.code(), Some(0));
    let sigma: Vec<f64> = serde_json::from_value(stdout_json(&out)["sigma"].clone()).unwrap();
    assert!((sigma[0] - 0.3).abs() < 1e-6 && (sigma[1] - 0.4).abs() < 1e-6);
    let after = ballmap(&["verify", path_str(&emitted)]);
    assert_eq!(after.status.code(), Some(0));
    assert_eq!(stdout_json(&after)["normal_form"], true);
}

#[test]
fn emitted_maps_reverify() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.json");
    fs::write(&g, r#"{"n": 2, "terms": [{"e": [2, 0], "re": 1, "im": 0}, {"e": [0, 3], "re": 1, "im": 0}]}"#).unwrap();
    let spec = dir.path().join("spec.json");
    let forms = r#"{"n": 2, "forms": [{"n": 2, "d": 1, "entries": [{"a": [1, 0], "b": [1, 0], "re": 1, "im": 0}]},
                                     {"n": 2, "d": 1, "entries": [{"a": [0, 1], "b": [0, 1], "re": 1, "im": 0}]}]}"#;
    fs::write(&spec, forms).unwrap();
    let h = dir.path().join("h.json");
    fs::write(&h, r#"[{"n": 2, "terms": [{"e": [1, 0], "re": 1, "im": 0}]}, {"n": 2, "terms": [{"e": [0, 1], "re": 1, "im": 0}]}]"#)
        .unwrap();
    let base = example(&dir, "0.2", "0.25");
    let runs: Vec<Vec<String>> = vec![
        vec!["construct".into(), "denom".into(), "--G".into(), path_str(&g).into(), "--d".into(), "4".into()],
        vec!["construct".into(), "denom".into(), "--G".into(), path_str(&g).into(), "--d".into(), "4".into(), "--dilate".into()],
        vec!["construct".into(), "even-quartic".into(), "--sigma".into(), "0.01,0.02,0.03".into()],
        vec!["construct".into(), "invariant".into(), "--spec".into(), path_str(&spec).into()],
        vec!["tensor".into(), path_str(&base).into(), "--indices".into(), "0,2".into(), "--power".into(), "2".into()],
        vec!["tensor".into(), path_str(&base).into(), "--indices".into(), "1".into(), "--with".into(), path_str(&h).into()],
        vec!["normalize".into(), path_str(&base).into()],
    ];
    for (k, mut args) in runs.into_iter().enumerate() {
        let emitted = dir.path().join(format!("emitted_{k}.json"));
        args.push("--emit".into());
        args.push(path_str(&emitted).into());
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = ballmap(&refs);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let check = ballmap(&["verify", path_str(&emitted)]);
        assert_eq!(check.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout_json(&check)["proper"], true);
    }
}

#[test]
fn tensor_rejects_bad_factor() {
    let dir = TempDir::new().unwrap();
    let base = example(&dir, "0.3", "0.4");
    let h = dir.path().join("h.json");
    fs::write(&h, r#"[{"n": 2, "terms": [{"e": [1, 0], "re": 1, "im": 0}]}]"#).unwrap();
    let out = ballmap(&["tensor", path_str(&base), "--indices", "0", "--with", path_str(&h)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["code"], "norm_identity");
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let map = example(&dir, "0.3", "0.4");
    for args in [
        vec!["verify", path_str(&map), "--seed", "5"],
        vec!["normalize", path_str(&map)],
        vec!["groups", path_str(&map), "--enumerate", "torus", "--seed", "9"],
        vec!["construct", "even-quartic", "--sigma", "0.01,0.02"],
    ] {
        let a = ballmap(&args);
        let b = ballmap(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    ballmap(&["verify", path_str(&map), "--out", path_str(&out_a)]);
    ballmap(&["verify", path_str(&map), "--out", path_str(&out_b)]);
    assert_eq!(fs::read(&out_a).unwrap(), fs::read(&out_b).unwrap());
}
