use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ddlift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddlift")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn builds_are_byte_identical() {
    let a = ddlift(&["build", "nrc-lift", "--q", "3", "--t", "3", "--c", "1"]);
    let b = ddlift(&["build", "nrc-lift", "--q", "3", "--t", "3", "--c", "1"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn build_then_verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("w12.json");
    let o = ddlift(&["build", "witt12-lift", "--c", "1", "--out", path_str(&doc)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&doc).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["params"], serde_json::json!({"t": 5, "s": 3, "k": 6, "lambda": 1}));
    assert_eq!(v["points"].as_array().unwrap().len(), 36);
    assert_eq!(v["provenance"]["method"], "matrix_lift");

    let o = ddlift(&["verify", path_str(&doc), "--hypersimple", "--s-expected", "1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["verification"]["pass"], true);
    assert_eq!(report["verification"]["counts"]["transversal_subsets"], 192456);
    assert_eq!(report["hypersimple"]["pass"], true);
}

#[test]
fn tampered_document_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("nrc.json");
    assert_eq!(code(&ddlift(&["build", "nrc-lift", "--q", "3", "--t", "3", "--c", "1", "--out", path_str(&doc)])), 0);
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&doc).unwrap()).unwrap();
    // Move the last point of block 0 to another point of the same class.
    let block = v["blocks"][0].as_array_mut().unwrap();
    let last = block.last().unwrap().as_u64().unwrap();
    let moved = if last % 3 == 2 { last - 1 } else { last + 1 };
    *block.last_mut().unwrap() = moved.into();
    fs::write(&doc, serde_json::to_string(&v).unwrap()).unwrap();

    let o = ddlift(&["verify", path_str(&doc)]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["verification"]["pass"], false);
    assert_eq!(report["verification"]["axiom_c"]["witness"]["kind"], "wrong_lambda");
}

#[test]
fn unsorted_block_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("fano.json");
    assert_eq!(code(&ddlift(&["build", "product", "--base", "fano", "--w", "1", "--out", path_str(&doc)])), 0);
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&doc).unwrap()).unwrap();
    v["blocks"][3].as_array_mut().unwrap().reverse();
    fs::write(&doc, serde_json::to_string(&v).unwrap()).unwrap();
    let o = ddlift(&["verify", path_str(&doc)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("blocks[3]"));
}

#[test]
fn params_witt12_lift_c2() {
    let o = ddlift(&["params", "witt12-lift", "--c", "2", "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let blocks = 132u64 * 3u64.pow(10);
    assert_eq!(v, serde_json::json!({"t": 5, "s": 9, "k": 6, "lambda": 1, "v": 108, "block_count": blocks}));
}

#[test]
fn params_nrc_lift_c2() {
    let o = ddlift(&["params", "nrc-lift", "--q", "3", "--t", "3", "--c", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // Four conic points of PG(2,3), each lifted to 9; blocks 3^{2*3}.
    assert_eq!(v, serde_json::json!({"t": 3, "s": 9, "k": 4, "lambda": 1, "v": 36, "block_count": 729}));
}

#[test]
fn params_agree_with_built_design() {
    for args in [
        &["quadric", "--q", "3", "--c", "1"][..],
        &["affine-poly", "--q", "3", "--t", "2", "--c", "1", "--m", "2"][..],
        &["trivial-lift", "--base", "witt12", "--c", "1"][..],
        &["sections", "--q", "2", "--t", "3", "--c", "1"][..],
    ] {
        let mut p = vec!["params"];
        p.extend_from_slice(args);
        p.push("--json");
        let predicted: serde_json::Value = serde_json::from_slice(&ddlift(&p).stdout).unwrap();
        let mut b = vec!["build"];
        b.extend_from_slice(args);
        let built = ddlift(&b);
        assert_eq!(code(&built), 0, "{args:?}: {}", String::from_utf8_lossy(&built.stderr));
        let doc: serde_json::Value = serde_json::from_slice(&built.stdout).unwrap();
        let params = &doc["params"];
        for key in ["t", "s", "k", "lambda"] {
            assert_eq!(params[key], predicted[key], "{args:?} {key}");
        }
        assert_eq!(doc["points"].as_array().unwrap().len() as u64, predicted["v"].as_u64().unwrap());
        assert_eq!(doc["blocks"].as_array().unwrap().len() as u64, predicted["block_count"].as_u64().unwrap());
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&ddlift(&["build", "no-such-thing"])), 2);
    assert_eq!(code(&ddlift(&["build", "witt12", "--c", "1"])), 2);
    assert_eq!(code(&ddlift(&["build", "nrc-lift", "--q", "3"])), 2);
    assert_eq!(code(&ddlift(&["verify"])), 2);
    assert_eq!(code(&ddlift(&["build", "witt12-lift", "--c", "1", "--max-blocks", "1000"])), 3);
    let o = ddlift(&["build", "nrc-lift", "--q", "5", "--t", "3", "--c", "1", "--max-subsets", "10"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn witt24_discrepancy_goes_to_stderr() {
    let o = ddlift(&["build", "witt24"]);
    assert_eq!(code(&o), 0);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("759") && err.contains("758"), "{err}");
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["blocks"].as_array().unwrap().len(), 759);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"construction": "product", "base": "fano", "w": 3}"#).unwrap();
    let o = ddlift(&["params", "--config", path_str(&cfg), "--w", "2", "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["block_count"], 56);
    fs::write(&cfg, r#"{"construction": "product", "colour": 1}"#).unwrap();
    assert_eq!(code(&ddlift(&["params", "--config", path_str(&cfg)])), 2);
}

#[test]
fn code_from_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("hamming.txt");
    fs::write(&m, "# [7,4] Hamming parity checks\n1 0 0 1 1 0 1\n0 1 0 1 0 1 1\n0 0 1 0 1 1 1\n").unwrap();
    let o = ddlift(&["build", "code", "--q", "2", "--t", "2", "--c", "1", "--input", path_str(&m)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["params"], serde_json::json!({"t": 2, "s": 2, "k": 7, "lambda": 2}));
}

#[test]
fn export_and_fingerprint() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("p.json");
    assert_eq!(code(&ddlift(&["build", "product", "--base", "fano", "--w", "2", "--out", path_str(&doc)])), 0);
    let original = fs::read(&doc).unwrap();
    let o = ddlift(&["export", path_str(&doc)]);
    assert_eq!(o.stdout, original);
    let o = ddlift(&["export", path_str(&doc), "--format", "blocks"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 56);
    let o = ddlift(&["fingerprint", path_str(&doc)]);
    let fp: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(fp["lambda"], 2);
    let o = ddlift(&["fingerprint", path_str(&doc), "--attach"]);
    let with: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(with["fingerprint"], fp);
}
