use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command as Process, Output};

use arrcoh::report::{DecompositionReport, ModuleNode, PosetReport, VerifyReport};
use arrcoh::{run, Command, Format, RunConfig};
use arrcoh_core::verify::{CheckResult, Status};
use proptest::prelude::*;
use tempfile::TempDir;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(format!("{name}.json"))
}

fn arrcoh(args: &[&str], input: &Path) -> Output {
    Process::new(env!("CARGO_BIN_EXE_arrcoh"))
        .args(args)
        .arg(input)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

#[test]
fn zero_normal_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "bad.json", r#"{"dim": 2, "hyperplanes": [{"normal": ["0", "0"], "offset": "1"}]}"#);
    let out = arrcoh(&["poset"], &path);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("hyperplanes[0].normal"), "{err}");
}

#[test]
fn malformed_inputs_name_the_field() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (r#"{"dim": 2, "hyperplanes": [{"normal": ["1"], "offset": "0"}]}"#, "hyperplanes[0].normal"),
        (r#"{"dim": 1, "hyperplanes": [{"normal": ["1/0"], "offset": "0"}]}"#, "hyperplanes[0].normal[0]"),
        (r#"{"dim": 1, "hyperplanes": [{"normal": ["1"], "offset": "x"}]}"#, "hyperplanes[0].offset"),
        (r#"{"dim": 1, "hyperplanes": [{"normal": ["1"], "offset": "0"}, {"normal": ["2"], "offset": "0"}]}"#, "hyperplanes[1]"),
        (r#"{"dim": 1, "hyperplanes": [], "extra": 1}"#, "extra"),
    ];
    for (i, (body, field)) in cases.iter().enumerate() {
        let path = write(&dir, &format!("bad{i}.json"), body);
        let out = arrcoh(&["poset"], &path);
        assert_eq!(out.status.code(), Some(1), "{body}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(field), "{body}: {err}");
    }
    assert_eq!(arrcoh(&["poset"], &dir.path().join("missing.json")).status.code(), Some(1));
}

#[test]
fn cap_exceeded_exits_2() {
    let out = arrcoh(&["poset", "--max-hyperplanes", "3"], &corpus("generic4_c2"));
    assert_eq!(out.status.code(), Some(2));
    let out = arrcoh(&["chambers", "--max-nerve-size", "2"], &corpus("generic3_c2"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_corpus_passes() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let out = arrcoh(&["verify"], &dir);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(!text.contains("FAIL"));
    assert!(text.contains("9 arrangements"));
    let out = arrcoh(&["verify", "--format", "json"], &dir);
    let reports: Vec<VerifyReport> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(reports.len(), 9);
    assert!(reports.iter().all(|r| r.passed));
}

#[test]
fn output_is_byte_stable() {
    for command in ["poset", "invariants", "beta", "nerve", "chambers", "decompose", "verify"] {
        for format in ["text", "json"] {
            let first = arrcoh(&[command, "--format", format], &corpus("generic4_c2"));
            let second = arrcoh(&[command, "--format", format], &corpus("generic4_c2"));
            assert_eq!(first.status.code(), Some(0), "{command} {format}");
            assert_eq!(first.stdout, second.stdout, "{command} {format}");
        }
    }
}

#[test]
fn reports_round_trip() {
    for entry in fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")).unwrap() {
        let path = entry.unwrap().path();
        let poset = stdout(&arrcoh(&["poset", "--format", "json"], &path));
        let parsed: PosetReport = serde_json::from_str(&poset).unwrap();
        assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", poset);
        let decomposition = stdout(&arrcoh(&["decompose", "--format", "json"], &path));
        let parsed: DecompositionReport = serde_json::from_str(&decomposition).unwrap();
        assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", decomposition);
    }
}

#[test]
fn two_points_decomposition_json() {
    let out = arrcoh(&["decompose", "--format", "json"], &corpus("two_points_c1"));
    let r: DecompositionReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((r.degree, r.free_rank, r.summands.len()), (1, 1, 3));
    assert!(r.graded);
    assert_eq!(r.summands[0].module, ModuleNode::Free { rank: 1 });
    for s in &r.summands[1..] {
        assert_eq!(s.flat.dim, 0);
        match &s.module {
            ModuleNode::Induced { whole_group: false, inner, .. } => {
                assert!(matches!(**inner, ModuleNode::TensorTrivial { .. }), "{inner:?}")
            }
            m => panic!("unexpected module {m:?}"),
        }
    }
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["summands"][1]["module"]["kind"], "INDUCED");
    assert_eq!(value["summands"][0]["module"]["kind"], "FREE");
}

#[test]
fn text_reports() {
    let boolean = stdout(&arrcoh(&["decompose"], &corpus("boolean_c2")));
    assert!(boolean.contains("concentrated in degree 2"), "{boolean}");
    assert!(boolean.contains("at {x1 = 0, x2 = 0}"), "{boolean}");
    assert!(boolean.contains("trivial module Z"), "{boolean}");
    let empty = stdout(&arrcoh(&["decompose"], &corpus("empty_c1")));
    assert!(empty.contains("degree 0") && empty.contains("H^0 = Z"), "{empty}");
    let empty_json: DecompositionReport =
        serde_json::from_slice(&arrcoh(&["decompose", "--format", "json"], &corpus("empty_c1")).stdout).unwrap();
    assert_eq!((empty_json.degree, empty_json.free_rank), (0, 1));
    let two = stdout(&arrcoh(&["decompose"], &corpus("two_points_c1")));
    assert!(two.contains("induced from the trivial module Z") && two.contains("l2"), "{two}");
}

#[test]
fn verify_report_marks_failures() {
    let results = [
        CheckResult { name: "a", status: Status::Pass, detail: String::new() },
        CheckResult { name: "b", status: Status::Fail, detail: "1 vs 2".into() },
    ];
    let r = VerifyReport::new("x.json", &results);
    assert!(!r.passed);
    assert!(r.text().lines().any(|l| l.contains("FAIL") && l.contains("1 vs 2")));
    let r = VerifyReport::new("x.json", &results[..1]);
    assert!(r.passed);
    assert!(!r.text().contains("FAIL"));
}

fn arrangement_json() -> impl Strategy<Value = String> {
    (1usize..=3).prop_flat_map(|n| {
        proptest::collection::vec((proptest::collection::vec(-2i64..=2, n), -2i64..=2), 0..=4).prop_map(move |rows| {
            let mut seen = Vec::new();
            let mut planes = Vec::new();
            for (normal, b) in rows {
                if normal.iter().all(|&v| v == 0) {
                    continue;
                }
                // Skip rows proportional to an earlier one.
                let mut row = normal.clone();
                row.push(b);
                let lead = *row.iter().find(|&&v| v != 0).unwrap();
                let key: Vec<(i64, i64)> = row.iter().map(|&v| (v * lead.signum(), lead.abs())).collect();
                let key: Vec<i64> = key.iter().map(|&(v, d)| v * 120 / d).collect();
                if seen.contains(&key) {
                    continue;
                }
                seen.push(key);
                let normal: Vec<String> = normal.iter().map(|v| format!("\"{v}\"")).collect();
                planes.push(format!("{{\"normal\": [{}], \"offset\": \"{b}\"}}", normal.join(", ")));
            }
            format!("{{\"dim\": {n}, \"hyperplanes\": [{}]}}", planes.join(", "))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn verify_exit_code_tracks_fail_lines(body in arrangement_json()) {
        let dir = TempDir::new().unwrap();
        let path = write(&dir, "a.json", &body);
        let mut out = Vec::new();
        let code = run(&RunConfig::new(Command::Verify, &path, Format::Text), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let has_fail = text.lines().any(|l| l.contains("FAIL"));
        prop_assert_eq!(code == 3, has_fail);
        prop_assert!(code == 0 || code == 3);
        prop_assert_eq!(code, 0, "{}", text);
    }

    #[test]
    fn decompose_json_round_trips(body in arrangement_json()) {
        let dir = TempDir::new().unwrap();
        let path = write(&dir, "a.json", &body);
        let mut out = Vec::new();
        run(&RunConfig::new(Command::Decompose, &path, Format::Json), &mut out).unwrap();
        let parsed: DecompositionReport = serde_json::from_slice(&out).unwrap();
        prop_assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", String::from_utf8(out).unwrap());
    }
}
