//! End-to-end runs of the `diffseq` binary: exit codes, determinism, and
//! every JSON output checked against its schema in docs/schemas and
//! round-tripped through the library types.

use std::path::PathBuf;
use std::process::{Command, Output};

use diffseq_cli::repro::ReproReport;
use diffseq_core::colorings::{Coloring, RleColoring};
use diffseq_core::construct::AlphaCertificate;
use diffseq_core::pipeline::PipelineResult;
use diffseq_core::search::{ChromaticResult, DeltaResult};
use diffseq_core::verify::ScanResult;
use diffseq_core::gapsets::GapSetSpec;
use diffseq_core::Certificate;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

const G4: &str = r#"{"kind":"geometric","base":4}"#;
const FIB: &str = r#"{"kind":"fibonacci"}"#;
const V3: &str = r#"{"kind":"nonmultiples","m":3}"#;

fn diffseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffseq"))
        .args(args)
        .env_remove("DIFFSEQ_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn schema_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../docs/schemas/{name}.schema.json"))
}

fn check_schema(name: &str, instance: &Value) {
    let text = std::fs::read_to_string(schema_path(name)).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let v = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = v.iter_errors(instance).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{name}: {errors:#?}");
}

/// Schema check plus parse into `T` and back to the same JSON.
fn round_trip<T: Serialize + DeserializeOwned>(name: &str, text: &str) -> T {
    let v: Value = serde_json::from_str(text).unwrap();
    check_schema(name, &v);
    let t: T = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(serde_json::to_value(&t).unwrap(), v, "{name} does not round-trip");
    t
}

#[test]
fn alpha_trace() {
    let o = diffseq(&["alpha", "--set-json", G4, "--steps", "20"]);
    assert_eq!(code(&o), 0);
    let cert: AlphaCertificate = round_trip("alpha_certificate", &stdout(&o));
    assert_eq!(cert.z[..4], [0, 1, 5, 21].map(num_bigint::BigInt::from));
    assert_eq!(cert.intervals[3].to_string(), "[169/512, 43/128]");
}

#[test]
fn pipeline_examples() {
    let o = diffseq(&["pipeline", "--set-json", G4, "-N", "20000"]);
    assert_eq!(code(&o), 0);
    let res: PipelineResult = round_trip("pipeline_result", &stdout(&o));
    assert!(res.certificate.passed());
    assert!(res.forbidden_length <= 6);

    let o = diffseq(&["pipeline", "--set-json", FIB, "--delta", "1/2", "--steps", "10", "-N", "100"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("growth") && err.contains("index 1"), "{err}");

    let o = diffseq(&["pipeline", "--set-json", r#"{"kind":"geometric","base":8}"#, "-r", "3", "--steps", "12", "-N", "5000"]);
    assert_eq!(code(&o), 0);
    let res: PipelineResult = round_trip("pipeline_result", &stdout(&o));
    assert_eq!(res.alpha.r, 3);
}

#[test]
fn set_file_and_inline_agree() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("set.json");
    std::fs::write(&file, r#"{"kind":"union","of":[{"kind":"explicit","elements":[1,2,3]},{"kind":"geometric","base":5}]}"#).unwrap();
    let a = diffseq(&["set", "--set", file.to_str().unwrap(), "--bound", "200"]);
    let b = diffseq(&[
        "set",
        "--set-json",
        r#"{"kind":"union","of":[{"kind":"explicit","elements":[1,2,3]},{"kind":"geometric","base":5}]}"#,
        "--bound",
        "200",
    ]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    check_schema("set_view", &v);
    assert_eq!(v["elements"], serde_json::json!([1, 2, 3, 5, 25, 125]));
    let spec: GapSetSpec = serde_json::from_value(v["spec"].clone()).unwrap();
    check_schema("gapset_spec", &serde_json::to_value(&spec).unwrap());
}

#[test]
fn bad_inputs_exit_2() {
    for args in [
        vec!["set", "--set-json", "{\"kind\":\"geometric\",\"base\":1}", "--bound", "10"],
        vec!["set", "--set-json", "not json", "--bound", "10"],
        vec!["set", "--set", "/nonexistent/set.json", "--bound", "10"],
        vec!["alpha", "--set-json", G4, "--delta", "0.5"],
        vec!["scan", "--coloring", "nosuchpreset", "--set-json", FIB],
        vec!["scan", "--coloring", "sqrt5over8", "--set-json", FIB],
        vec!["delta", "--set-json", V3, "-k", "2", "--budget", "5", "--threads", "0"],
        vec!["reproduce", "--override", "golden=1/3"],
        vec!["color"],
    ] {
        let o = diffseq(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn scan_assertions() {
    let base = ["scan", "--coloring", "sqrt5over8", "-N", "5000", "--set-json", FIB, "--structure", "ap"];
    let o = diffseq(&[&base[..], &["--max-k", "5"]].concat());
    assert_eq!(code(&o), 0);
    let res: ScanResult = round_trip("scan_result", &stdout(&o));
    assert_eq!(res.length, 5);
    let o = diffseq(&[&base[..], &["--max-k", "4"]].concat());
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).trim().is_empty(), false, "JSON is still printed");
}

#[test]
fn color_exports_reload() {
    let dir = tempfile::tempdir().unwrap();
    let rle = dir.path().join("c.json");
    let digits = dir.path().join("c.txt");
    for (path, fmt) in [(&rle, "rle"), (&digits, "digits")] {
        let o = diffseq(&["color", "frac:0,1/8:2", "-N", "3000", "--format", fmt, "-o", path.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    let text = std::fs::read_to_string(&rle).unwrap();
    let r: RleColoring = round_trip("rle_coloring", &text);
    let c = Coloring::from_rle(&r).unwrap();
    let d = std::fs::read_to_string(&digits).unwrap();
    assert_eq!(d.trim(), c.to_digits().unwrap());

    // The same scan from the preset, the RLE file and the digit file.
    let scans: Vec<String> = ["sqrt5over8", rle.to_str().unwrap(), digits.to_str().unwrap()]
        .iter()
        .map(|src| stdout(&diffseq(&["scan", "--coloring", src, "-N", "3000", "--set-json", FIB])))
        .collect();
    assert_eq!(scans[0], scans[1]);
    assert_eq!(scans[0], scans[2]);
}

#[test]
fn delta_witness_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let pow2 = r#"{"kind":"geometric","base":2}"#;
    let args = ["delta", "--set-json", pow2, "-k", "3", "-r", "2", "--budget", "60"];
    let seq = diffseq(&[&args[..], &["--threads", "1", "--emit-witness", w.to_str().unwrap()]].concat());
    assert_eq!(code(&seq), 0);
    let res: DeltaResult = round_trip("delta_result", &stdout(&seq));
    let par = Command::new(env!("CARGO_BIN_EXE_diffseq"))
        .args(args)
        .env("DIFFSEQ_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(stdout(&seq), stdout(&par), "thread count changed the output");

    let witness: RleColoring = round_trip("rle_coloring", &std::fs::read_to_string(&w).unwrap());
    assert_eq!(Coloring::from_rle(&witness).unwrap().word(), res.witness.as_slice());
    let o = diffseq(&["scan", "--coloring", w.to_str().unwrap(), "--set-json", pow2, "--max-k", "2"]);
    assert_eq!(code(&o), 0, "witness must avoid 3-term chains");

    let o = diffseq(&["delta", "--set-json", V3, "-k", "2", "--budget", "10", "--stats"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    check_schema("delta_result", &v);
    assert_eq!(v["verdict"], serde_json::json!({"kind": "delta", "n": 3}));
    assert!(v["elapsed_ms"].is_number());
}

#[test]
fn chromatic_and_complexity() {
    let o = diffseq(&["chromatic", "--set-json", V3, "-N", "12", "--exact-limit", "12"]);
    assert_eq!(code(&o), 0);
    let res: ChromaticResult = round_trip("chromatic_result", &stdout(&o));
    assert!(res.exact && res.upper == 3);
    let o = diffseq(&["chromatic", "--set-json", r#"{"kind":"geometric","base":2}"#, "-N", "9"]);
    let res: ChromaticResult = round_trip("chromatic_result", &stdout(&o));
    assert!(res.lower >= 3);

    let o = diffseq(&["complexity", "golden", "-N", "10000", "--assert-sturmian"]);
    assert_eq!(code(&o), 0);
    check_schema("complexity", &serde_json::from_str(&stdout(&o)).unwrap());
}

#[test]
fn reproduce_quick() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("report.json");
    let a = diffseq(&["reproduce", "--json", file.to_str().unwrap()]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    let report: ReproReport = round_trip("repro_report", &stdout(&a));
    assert!(report.pass && report.claims.len() == 11);
    assert_eq!(std::fs::read_to_string(&file).unwrap(), stdout(&a));
    let table = String::from_utf8_lossy(&a.stderr);
    assert_eq!(table.lines().filter(|l| l.starts_with("PASS")).count(), 11);

    // Bit-for-bit reproducible without timings.
    let b = diffseq(&["reproduce"]);
    assert_eq!(stdout(&a), stdout(&b));

    let t = diffseq(&["reproduce", "--timings"]);
    let report: ReproReport = round_trip("repro_report", &stdout(&t));
    assert!(report.claims.iter().all(|c| c.elapsed_ms.is_some()));
}

#[test]
fn reproduce_negative_control() {
    let o = diffseq(&["reproduce", "--override", "oneplusphiover4=1/3"]);
    assert_eq!(code(&o), 1);
    let report: ReproReport = round_trip("repro_report", &stdout(&o));
    assert!(!report.pass);
    let failed: Vec<&str> = report
        .claims
        .iter()
        .filter(|c| c.verdict == diffseq_core::Verdict::Fail)
        .map(|c| c.id.as_str())
        .collect();
    assert!(!failed.is_empty() && failed.iter().all(|id| id.starts_with("oneplusphiover4")), "{failed:?}");
}

#[test]
fn certificate_schema_covers_composites() {
    let o = diffseq(&["pipeline", "--set-json", G4, "-N", "2000", "--steps", "8"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let cert: Certificate = round_trip("certificate", &v["certificate"].to_string());
    assert!(!cert.parts.is_empty());
}
