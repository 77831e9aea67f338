use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn agcode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agcode"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn construct_fermat() {
    let out = agcode(&["construct", "--family", "fermat", "--q", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        (
            v["n"].as_u64(),
            v["k"].as_u64(),
            v["distance_bound"].as_i64()
        ),
        (Some(16), Some(3), Some(12))
    );
    assert_eq!(v["matrix"].as_array().unwrap().len(), 3);
    assert_eq!(v["group_order"], 16);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("[16, 3]"), "{stderr}");
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("code{i}.json"));
        let out = agcode(&[
            "construct",
            "--family",
            "bf",
            "--q",
            "2",
            "-o",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
        texts.push(fs::read(&path).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
    let a = agcode(&["verify", "--family", "projline", "--q", "7"]);
    let b = agcode(&["verify", "--family", "projline", "--q", "7"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_reports_checks() {
    let out = agcode(&["verify", "--family", "fermat", "--q", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["passed"] == true));
    assert!(checks.iter().any(|c| c["condition"] == "faithful"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[PASS] b:"));
}

#[test]
fn projline_parity_error() {
    let out = agcode(&["verify", "--family", "projline", "--q", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["code"], "parity");
}

#[test]
fn distance_projline() {
    let out = agcode(&["distance", "--family", "projline", "--q", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        (v["distance_exact"].as_u64(), v["distance_bound"].as_i64()),
        (Some(5), Some(5))
    );
}

#[test]
fn distance_with_multiplier() {
    let out = agcode(&["distance", "--family", "projline", "--q", "7", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        (v["k"].as_u64(), v["distance_exact"].as_u64()),
        (Some(3), Some(5))
    );
}

#[test]
fn fermat_q2_precondition() {
    let out = agcode(&["construct", "--family", "fermat", "--q", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["code"], "no_valid_qprime");
}

#[test]
fn automorphisms() {
    let out = agcode(&["automorphisms", "--family", "bf", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["faithfulness"]["image_order"], 144);
}

#[test]
fn failed_condition_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    assert_eq!(
        agcode(&[
            "export",
            "--family",
            "fermat",
            "--q",
            "3",
            "-o",
            inst.to_str().unwrap()
        ])
        .status
        .code(),
        Some(0)
    );
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&inst).unwrap()).unwrap();
    // G2 := G1 breaks condition (b)
    v["groups"][1] = v["groups"][0].clone();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let out = agcode(&["construct", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "check_failed");
    let out = agcode(&["verify", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn export_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let inst_s = inst.to_str().unwrap();
    assert_eq!(
        agcode(&["export", "--family", "projline", "--q", "9", "-o", inst_s])
            .status
            .code(),
        Some(0)
    );

    let again = dir.path().join("inst2.json");
    assert_eq!(
        agcode(&["export", "--input", inst_s, "-o", again.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(fs::read(&inst).unwrap(), fs::read(&again).unwrap());

    let from_file = agcode(&["construct", "--family", "custom", "--input", inst_s]);
    let builtin = agcode(&["construct", "--family", "projline", "--q", "9"]);
    let (a, b) = (json(&from_file), json(&builtin));
    assert_eq!(a["matrix"], b["matrix"]);
    assert_eq!(a["points"], b["points"]);

    let code = dir.path().join("code.json");
    assert_eq!(
        agcode(&["construct", "--input", inst_s, "-o", code.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let code2 = dir.path().join("code2.json");
    assert_eq!(
        agcode(&[
            "export",
            "--input",
            code.to_str().unwrap(),
            "-o",
            code2.to_str().unwrap()
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(fs::read(&code).unwrap(), fs::read(&code2).unwrap());
}

#[test]
fn bad_input_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("junk.json");
    fs::write(&path, "{\"working_field\": 3}").unwrap();
    let out = agcode(&["construct", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["code"], "bad_input");
    let out = agcode(&["construct", "--input", "/nonexistent/file.json"]);
    assert_eq!(
        (out.status.code(), json(&out)["code"].as_str()),
        (Some(2), Some("io"))
    );
}
