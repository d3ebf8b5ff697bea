use std::fs;
use std::path::Path;
use std::process::Command;

use proptest::prelude::*;

use anosov_cli::{exit, run, sha256_hex, RunManifest, MANIFEST};

fn anosov(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_anosov")).args(args).output().expect("binary runs").status.code().expect("exit code")
}

fn manifest(dir: &Path) -> RunManifest {
    RunManifest::from_json(&fs::read_to_string(dir.join(MANIFEST)).expect("manifest written")).expect("manifest parses")
}

fn s(p: &Path) -> String {
    p.display().to_string()
}

#[test]
fn build_writes_rep_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b");
    assert_eq!(anosov(&["build", "--name", "thm41_pattern", "--param", "n=5", "--param", "s=-3", "--out", &s(&out)]), exit::PASS);
    let rep: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("rep.json")).unwrap()).unwrap();
    assert_eq!(rep["dim"], 15);
    let m = manifest(&out);
    assert_eq!(m.construction.as_deref(), Some("thm41_pattern"));
    assert_eq!(m.params["s"], -3.0);
    assert_eq!(m.seed, Some(0));
    for o in &m.outputs {
        assert_eq!(o.sha256, sha256_hex(&fs::read(out.join(&o.path)).unwrap()));
    }
}

#[test]
fn gate_and_input_errors_exit_2_with_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let gate = dir.path().join("gate");
    assert_eq!(anosov(&["build", "--name", "thm1ii_d12", "--param", "x=2", "--seed", "7", "--out", &s(&gate)]), exit::INPUT);
    let m = manifest(&gate);
    assert!(m.message.unwrap().contains("x³ > |λ|/μ²"));
    assert!(m.outputs.is_empty());
    let unknown = dir.path().join("unknown");
    assert_eq!(anosov(&["reproduce", "thm9_nothing", "--out", &s(&unknown)]), exit::INPUT);
    assert!(unknown.join(MANIFEST).exists());
    assert_eq!(anosov(&["build", "--name", "thm41_pattern", "--param", "bogus=1", "--out", &s(&unknown)]), exit::INPUT);
    assert_eq!(anosov(&["build", "--name", "thm41_pattern", "--param", "n", "--out", &s(&unknown)]), exit::INPUT);
    assert_eq!(anosov(&["diagnose", "--name", "prop42_sl4", "--out", &s(&unknown)]), exit::INPUT);
}

#[test]
fn obstruct_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("b");
    assert_eq!(anosov(&["build", "--name", "prop42_sl4", "--out", &s(&b)]), exit::PASS);
    let (rep, pres) = (s(&b.join("rep.json")), s(&b.join("presentation.json")));
    let o = dir.path().join("o");
    assert_eq!(anosov(&["obstruct", "--rep", &rep, "--presentation", &pres, "--out", &s(&o)]), exit::INPUT);
    assert!(manifest(&o).message.unwrap().contains("no witnesses"));
    let o = dir.path().join("o2");
    assert_eq!(anosov(&["obstruct", "--rep", &rep, "--presentation", &pres, "--witness", "a1 a1", "--witness", "a2 a2", "--out", &s(&o)]), exit::PASS);
    let cert: serde_json::Value = serde_json::from_str(&fs::read_to_string(o.join("certificate.json")).unwrap()).unwrap();
    assert_eq!(cert["uncovered"], serde_json::json!([]));
    assert_eq!(manifest(&o).inputs.len(), 2);
    // Only one witness: index 2 stays uncovered, a verified failure.
    let o = dir.path().join("o3");
    assert_eq!(anosov(&["obstruct", "--rep", &rep, "--presentation", &pres, "--witness", "a1 a1", "--out", &s(&o)]), exit::FAIL);
}

#[test]
fn identity_rep_covers_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("id.json");
    let id = serde_json::json!({
        "alphabet": ["a1", "b1"],
        "dim": 4,
        "images": { "a1": [[1.0,0.0,0.0,0.0],[0.0,1.0,0.0,0.0],[0.0,0.0,1.0,0.0],[0.0,0.0,0.0,1.0]],
                    "b1": [[1.0,0.0,0.0,0.0],[0.0,1.0,0.0,0.0],[0.0,0.0,1.0,0.0],[0.0,0.0,0.0,1.0]] },
        "provenance": { "name": "identity", "params": {}, "seed": 0 }
    });
    fs::write(&rep, id.to_string()).unwrap();
    let o = dir.path().join("o");
    assert_eq!(anosov(&["obstruct", "--rep", &s(&rep), "--witness", "a1 b1 a1^-1 b1^-1", "--out", &s(&o)]), exit::FAIL);
    let cert: serde_json::Value = serde_json::from_str(&fs::read_to_string(o.join("certificate.json")).unwrap()).unwrap();
    assert_eq!(cert["failures"], serde_json::json!([]));
    let d = dir.path().join("d");
    assert_eq!(anosov(&["diagnose", "--rep", &s(&rep), "--qi", "--radius", "3", "--out", &s(&d)]), exit::FAIL);
}

#[test]
fn diagnose_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d");
    assert_eq!(anosov(&["diagnose", "--name", "thm1i_d6", "--gap", "1", "--radius", "4", "--out", &s(&d)]), exit::PASS);
    let csv = fs::read_to_string(d.join("profile.csv")).unwrap();
    assert!(csv.starts_with("length,min_log_gap,max_log_gap\n"));
    assert_eq!(csv.lines().count(), 5);
    let j: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("profile.json")).unwrap()).unwrap();
    assert_eq!(j["verdict"], "pass");
    assert_eq!(j["label"], "finite-scale diagnostic, not a proof");
    // A rotation block makes σ1 = σ2 on ψ(a1): a flat envelope.
    let d = dir.path().join("d1");
    assert_eq!(anosov(&["diagnose", "--name", "prop42_sl4", "--gap", "1", "--radius", "4", "--out", &s(&d)]), exit::FAIL);
    // A budget below the ball size truncates to inconclusive.
    let d = dir.path().join("d2");
    assert_eq!(anosov(&["diagnose", "--name", "prop42_sl4", "--gap", "1", "--radius", "4", "--max-words", "50", "--out", &s(&d)]), exit::INDETERMINATE);
}

#[test]
fn replay_detects_a_changed_input() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("b");
    assert_eq!(anosov(&["build", "--name", "thm41_pattern", "--out", &s(&b)]), exit::PASS);
    let o = dir.path().join("o");
    let rep = b.join("rep.json");
    assert_eq!(anosov(&["obstruct", "--rep", &s(&rep), "--witness", "a1 b1 a1^-1 b1^-1", "--index", "2", "--out", &s(&o)]), exit::PASS);
    assert_eq!(anosov(&["replay", &s(&o.join(MANIFEST))]), exit::PASS);
    assert!(o.join("replay").join("certificate.json").exists());
    let text = fs::read_to_string(&rep).unwrap();
    fs::write(&rep, text.replacen("\"thm41_pattern\"", "\"edited\"", 1)).unwrap();
    assert_eq!(anosov(&["replay", &s(&o.join(MANIFEST)), "--out", &s(&dir.path().join("r2"))]), exit::INPUT);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn builds_replay_to_identical_digests(s_val in -8.0f64..-2.0, seed in 0u64..100) {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("b");
        let param = format!("s={s_val}");
        let seed = seed.to_string();
        let code = run(["anosov", "build", "--name", "thm41_pattern", "--param", &param, "--seed", &seed, "--out", &s(&out)]);
        prop_assert_eq!(code, exit::PASS);
        let again = dir.path().join("again");
        prop_assert_eq!(run(["anosov", "replay", &s(&out.join(MANIFEST)), "--out", &s(&again)]), exit::PASS);
        prop_assert_eq!(manifest(&out).outputs, manifest(&again).outputs);
    }
}
