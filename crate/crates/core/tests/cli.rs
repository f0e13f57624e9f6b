use std::path::Path;
use std::process::{Command, Output};

use chaoscope::mapfile::load_map;
use chaoscope::rational::{int, parse_rat};
use chaoscope::report::{verify_report, AnalysisReport, Verdict};
use chaoscope::DEFAULT_NODE_BUDGET;

fn chaoscope(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chaoscope"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn remark1_needs_a_power() {
    let dir = tempfile::tempdir().unwrap();
    let out = chaoscope(
        &["analyze", "--map", "remark1", "--out", "r.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let report =
        AnalysisReport::from_json(&std::fs::read_to_string(dir.path().join("r.json")).unwrap())
            .unwrap();
    assert_eq!(report.verdict, Verdict::NotTurbulent);
    assert!(report.hint.unwrap().contains("--power 2"));
}

#[test]
fn missing_map_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = chaoscope(&["analyze", "--map", "nope.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("load map"));
}

#[test]
fn tent_report_is_deterministic_and_reverifies() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str, jobs: &'static str| {
        vec![
            "analyze",
            "--map",
            "tent",
            "--depth",
            "30",
            "--horizon",
            "300",
            "--tol",
            "1/64",
            "--jobs",
            jobs,
            "--out",
            out,
        ]
    };
    assert_eq!(
        chaoscope(&args("a.json", "1"), dir.path()).status.code(),
        Some(0)
    );
    assert_eq!(
        chaoscope(&args("b.json", "4"), dir.path()).status.code(),
        Some(0)
    );
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b);
    let report = AnalysisReport::from_json(std::str::from_utf8(&a).unwrap()).unwrap();
    assert_eq!(report.verdict, Verdict::Turbulent);
    assert_eq!(report.sample.as_ref().unwrap().certificates.len(), 36);
    assert!(verify_report(&report, DEFAULT_NODE_BUDGET)
        .unwrap()
        .is_empty());
}

#[test]
fn tampered_report_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let out = chaoscope(
        &[
            "analyze",
            "--map",
            "tent",
            "--depth",
            "20",
            "--horizon",
            "100",
            "--tol",
            "1/16",
            "--out",
            "r.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("r.json")).unwrap();
    let mut report = AnalysisReport::from_json(&text).unwrap();
    let cert = &mut report.sample.as_mut().unwrap().certificates[0].certificate;
    cert.min_gap = int(7);
    assert_eq!(
        verify_report(&report, DEFAULT_NODE_BUDGET).unwrap().len(),
        1
    );
}

#[test]
fn lift_through_the_square() {
    let dir = tempfile::tempdir().unwrap();
    let out = chaoscope(
        &[
            "analyze",
            "--map",
            "remark1",
            "--power",
            "2",
            "--depth",
            "20",
            "--horizon",
            "400",
            "--tol",
            "1/16",
            "--out",
            "r.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("r.json")).unwrap();
    let report = AnalysisReport::from_json(&text).unwrap();
    let lifted = report.lifted.as_ref().expect("lifted certificates");
    assert_eq!(lifted.power, 2);
    assert!(lifted.empirical_delta > int(0));
    assert!(verify_report(&report, DEFAULT_NODE_BUDGET)
        .unwrap()
        .is_empty());
}

#[test]
fn orbit_csv_for_the_tent() {
    let dir = tempfile::tempdir().unwrap();
    let out = chaoscope(
        &["orbit", "--map", "tent", "--x", "1/3", "--n", "3"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let xs: Vec<String> = rows.records().map(|r| r.unwrap()[1].to_string()).collect();
    assert_eq!(xs, ["1/3", "2/3", "2/3", "2/3"]);
}

#[test]
fn square_root_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = chaoscope(&["sqroot", "--map", "tent", "--out", "F.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let path = dir.path().join("F.json");
    let (big, _) = load_map(path.to_str().unwrap()).unwrap();
    let square = big.power(2, DEFAULT_NODE_BUDGET).unwrap();
    let tent = chaoscope::builtins::tent();
    for x in ["0", "1/5", "1/2", "3/4", "1"] {
        let x = parse_rat(x).unwrap();
        assert_eq!(square.eval(&x).unwrap(), tent.eval(&x).unwrap());
    }
    let pair = chaoscope(
        &[
            "analyze",
            "--map",
            "F.json",
            "--pair",
            "1/3",
            "7/3",
            "--horizon",
            "200",
        ],
        dir.path(),
    );
    assert_eq!(pair.status.code(), Some(0));
    let report = AnalysisReport::from_json(&stdout(&pair)).unwrap();
    assert_eq!(report.verdict, Verdict::PairOnly);
    assert!(report.pair.unwrap().certificate.proximities.is_empty());
}

#[test]
fn stefan_and_sigma2_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let out = chaoscope(
        &[
            "stefan", "--map", "stefan:2", "--point", "1", "--period", "5",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let report = AnalysisReport::from_json(&stdout(&out)).unwrap();
    assert_eq!(report.verdict, Verdict::Stefan);
    assert!(
        report
            .stefan
            .unwrap()
            .turbulence
            .unwrap()
            .square_witness
            .strict
    );

    let seed = chaoscope(&["sigma2", "seed", "--word", "11"], dir.path());
    assert_eq!(seed.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&seed)).unwrap();
    assert_eq!(v["offset"], 8);

    let bad = chaoscope(
        &["orbit", "--map", "tent", "--x", "7", "--n", "2"],
        dir.path(),
    );
    assert_eq!(bad.status.code(), Some(1));
}
