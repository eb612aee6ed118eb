use std::process::Command;

use serde_json::Value;

fn tagrot(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_tagrot"))
        .args(args)
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap() + &String::from_utf8(out.stderr).unwrap();
    (text, out.status.code().unwrap())
}

#[test]
fn order_prints_integer() {
    assert_eq!(
        tagrot(&["order", "--surface", "0,1:[8],0"]),
        ("8\n".to_string(), 0)
    );
    assert_eq!(tagrot(&["order", "--surface", "0,1:[5],1"]).0, "10\n");
}

#[test]
fn verify_suites_pass() {
    for suite in [
        "source-flip",
        "genus-replay",
        "canonical-sweep",
        "commutation",
    ] {
        let (out, code) = tagrot(&["verify", "--suite", suite, "--max-rank", "8"]);
        assert_eq!(code, 0, "{suite}: {out}");
    }
}

#[test]
fn explore_pentagon() {
    let (out, code) = tagrot(&["explore", "--surface", "0,1:[5],0", "--emit", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"]["vertices"].as_array().unwrap().len(), 5);
    let (dot, _) = tagrot(&["explore", "--surface", "0,1:[5],0", "--emit", "dot"]);
    assert!(dot.starts_with("graph exchange {"));
    assert_eq!(dot.matches(" -- ").count(), 5);
}

#[test]
fn triangulation_files_round_trip() {
    let dir = std::env::temp_dir().join(format!("tagrot-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (out, code) = tagrot(&["triangulate", "--surface", "0,1:[4],1", "--emit", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let path = dir.join("t.json");
    std::fs::write(&path, v["result"]["triangulation"].to_string()).unwrap();
    let p = path.to_str().unwrap();
    let (out, code) = tagrot(&[
        "rotate",
        "--surface",
        "0,1:[4],1",
        "--triangulation",
        p,
        "--power",
        "4",
        "--emit",
        "json",
    ]);
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(r["result"]["b"], v["result"]["b"]);
    let (_, code) = tagrot(&[
        "flip",
        "--surface",
        "0,1:[4],1",
        "--triangulation",
        p,
        "--arc",
        "2",
    ]);
    assert_eq!(code, 0);
    let (_, code) = tagrot(&[
        "greenseq",
        "--surface",
        "0,1:[4],1",
        "--triangulation",
        p,
        "--max-len",
        "6",
    ]);
    assert_eq!(code, 0);
    let (_, code) = tagrot(&[
        "flip",
        "--surface",
        "0,1:[5],1",
        "--triangulation",
        p,
        "--arc",
        "1",
    ]);
    assert_eq!(code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(tagrot(&[]).1, 2);
    assert_eq!(tagrot(&["order", "--surface", "0,1:[2],0"]).1, 2);
    assert_eq!(
        tagrot(&["orbit", "--surface", "0,1:[5],0", "--arc", "7"]).1,
        2
    );
    assert_eq!(
        tagrot(&[
            "greenseq",
            "--surface",
            "0,1:[5],0",
            "--triangulation",
            "/no/such/file"
        ])
        .1,
        3
    );
    assert_eq!(tagrot(&["surface", "--surface", "1,2:[1,1],0"]).1, 0);
}

#[test]
fn json_output_is_byte_identical() {
    let args = [
        "verify",
        "--suite",
        "commutation",
        "--seed",
        "7",
        "--emit",
        "json",
    ];
    let (a, _) = tagrot(&args);
    let (b, _) = tagrot(&args);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["result"]["seed"], 7);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true));
}
