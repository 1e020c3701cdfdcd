//! End-to-end tests of the `modone` binary: command-line parsing, file
//! formats, summary JSON, determinism, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_modone"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should launch")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be UTF-8")
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .collect()
}

fn summary(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout_str(out)).expect("stdout should be a JSON summary")
}

#[test]
fn generate_sqrt_row_count_is_exact() {
    // sqrt points for 1 <= n <= T, perfect squares removed:
    // 200000 - floor(sqrt(200000)) = 199553
    let out = run(&["generate", "--kind", "sqrt", "--tmax", "200000"]);
    assert!(out.status.success(), "{}", stderr_str(&out));
    assert_eq!(data_lines(&stdout_str(&out)).len(), 199_553);
}

#[test]
fn generate_is_deterministic() {
    let args = ["generate", "--kind", "iud", "--n", "10", "--seed", "1"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same config must give identical bytes");
    assert_eq!(data_lines(&stdout_str(&a)).len(), 10);
}

#[test]
fn generate_directions_count_tracks_disc_area() {
    let out = run(&[
        "generate",
        "--kind",
        "directions",
        "--T",
        "200",
        "--xi",
        "0.2,0.3",
    ]);
    assert!(out.status.success(), "{}", stderr_str(&out));
    let n = data_lines(&stdout_str(&out)).len() as f64;
    let area = std::f64::consts::PI * 200.0 * 200.0;
    assert!(
        (n - area).abs() / area < 0.02,
        "{n} points vs disc area {area}"
    );
}

#[test]
fn generate_rejects_unknown_kind() {
    let out = run(&["generate", "--kind", "fibonacci", "--n", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("error"));
}

#[test]
fn generate_requires_kind_parameters() {
    // sqrt without --tmax is a usage error
    let out = run(&["generate", "--kind", "sqrt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generate_gnuplot_style_has_two_columns() {
    let out = run(&[
        "generate", "--kind", "iud", "--n", "5", "--seed", "9", "--style", "gnuplot",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    for line in data_lines(&text) {
        assert_eq!(line.split_whitespace().count(), 2, "line: {line}");
    }
}

#[test]
fn stats_reads_generated_file_and_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let seq_path = dir.path().join("seq.csv");
    let out_path = dir.path().join("gaps.csv");

    let gen = run(&[
        "generate",
        "--kind",
        "sqrt",
        "--tmax",
        "20000",
        "--out",
        seq_path.to_str().unwrap(),
    ]);
    assert!(gen.status.success(), "{}", stderr_str(&gen));

    let stats = run(&[
        "stats",
        "gaps",
        "--input",
        seq_path.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(stats.status.success(), "{}", stderr_str(&stats));

    let s = summary(&stats);
    assert_eq!(s["config"]["command"], "stats");
    assert_eq!(s["config"]["statistic"], "gaps");
    assert!(s["deviation"].as_f64().unwrap() > 0.0);
    assert!(s["reference"].as_str().unwrap().contains("Poisson"));

    // table: 100 default bins, each row lo,hi,pdf,pdf_ref,cdf,cdf_ref
    let table = std::fs::read_to_string(&out_path).unwrap();
    let rows = data_lines(&table);
    assert_eq!(rows.len(), 100);
    assert_eq!(rows[0].split(',').count(), 6);

    // sibling JSON summary embeds the run config
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_path.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(sidecar["config"]["input"], seq_path.to_str().unwrap());
}

#[test]
fn stats_exit_one_when_tolerance_exceeded() {
    // a linear orbit has at most three distinct scaled gaps, nowhere near
    // the exponential law
    let out = run(&[
        "stats",
        "gaps",
        "--kind",
        "linear",
        "--alpha",
        "golden",
        "--n",
        "2000",
        "--tolerance",
        "0.05",
    ]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr_str(&out));
    let s = summary(&out);
    assert_eq!(s["within_tolerance"], false);
    assert!(s["deviation"].as_f64().unwrap() > 0.05);
}

#[test]
fn stats_tolerance_pass_keeps_exit_zero() {
    let out = run(&[
        "stats",
        "gaps",
        "--kind",
        "iud",
        "--n",
        "20000",
        "--seed",
        "5",
        "--tolerance",
        "0.05",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_str(&out));
    let s = summary(&out);
    assert_eq!(s["within_tolerance"], true);
}

#[test]
fn stats_first_moment_equals_window_measure() {
    let out = run(&[
        "stats",
        "moments",
        "--kind",
        "iud",
        "--n",
        "500",
        "--seed",
        "3",
        "--interval",
        "0,1",
        "--power",
        "1",
    ]);
    assert!(out.status.success(), "{}", stderr_str(&out));
    let s = summary(&out);
    let rows = s["moments"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    let value = rows[0][1].as_f64().unwrap();
    assert!((value - 1.0).abs() < 1e-10, "first moment {value}");
}

#[test]
fn stats_is_deterministic_given_config() {
    let args = [
        "stats", "paircorr", "--kind", "sqrt", "--tmax", "30000", "--bins", "8",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn stats_independent_of_thread_count() {
    let args = [
        "stats",
        "moments",
        "--kind",
        "sqrt",
        "--tmax",
        "20000",
        "--interval",
        "0,2",
        "--power",
        "2",
        "--grid",
        "20000",
    ];
    let single = bin()
        .args(args)
        .env("RAYON_NUM_THREADS", "1")
        .output()
        .unwrap();
    let many = bin()
        .args(args)
        .env("RAYON_NUM_THREADS", "8")
        .output()
        .unwrap();
    assert!(single.status.success(), "{}", stderr_str(&single));
    assert_eq!(single.stdout, many.stdout);
}

#[test]
fn paircorr_gnuplot_table_has_two_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("pair.dat");
    let out = run(&[
        "stats",
        "paircorr",
        "--kind",
        "iud",
        "--n",
        "2000",
        "--seed",
        "7",
        "--style",
        "gnuplot",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_str(&out));
    let table = std::fs::read_to_string(&out_path).unwrap();
    let rows = data_lines(&table);
    assert_eq!(rows.len(), 16, "default pair-correlation binning");
    for line in &rows {
        assert_eq!(line.split_whitespace().count(), 2, "line: {line}");
    }
}

#[test]
fn counts_near_poisson_for_uniform_points() {
    let out = run(&[
        "stats",
        "counts",
        "--kind",
        "iud",
        "--n",
        "3000",
        "--seed",
        "2",
        "--interval",
        "0,1",
    ]);
    assert!(out.status.success(), "{}", stderr_str(&out));
    let s = summary(&out);
    // exact sweep vs the Poisson(1) reference: total variation is small for
    // uniform points, and the table covers several count values
    assert!(s["deviation"].as_f64().unwrap() < 0.05);
    assert!(s["distinct_count_vectors"].as_u64().unwrap() >= 3);
    assert!(s["reference"].as_str().unwrap().contains("Poisson"));

    // the table written to disk carries the probability column summing to 1
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("counts.csv");
    let out = run(&[
        "stats",
        "counts",
        "--kind",
        "iud",
        "--n",
        "3000",
        "--seed",
        "2",
        "--interval",
        "0,1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let table = std::fs::read_to_string(&path).unwrap();
    let total: f64 = data_lines(&table)
        .iter()
        .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9, "total probability {total}");
}

#[test]
fn verify_lists_and_rejects_suites() {
    let list = run(&["verify", "--list"]);
    assert!(list.status.success());
    let text = stdout_str(&list);
    for name in [
        "lemma1",
        "first-moment",
        "poisson-baseline",
        "gaps-cbrt",
        "gaps-sqrt",
        "second-moment",
        "directions-pair",
        "divergence",
        "inequalities",
        "oracles",
        "iwasawa",
        "diophantine",
    ] {
        assert!(text.contains(name), "missing suite {name}");
    }

    let bad = run(&["verify", "--suite", "nosuch"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_single_suite_passes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("report.json");
    let out = run(&[
        "verify",
        "--suite",
        "diophantine",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_str(&out));
    assert!(stdout_str(&out).contains("[PASS] diophantine"));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["config"]["command"], "verify");
    assert_eq!(report["suites"][0]["suite"], "diophantine");
    assert!(!report["suites"][0]["checks"].as_array().unwrap().is_empty());
}

#[test]
fn sequence_files_round_trip_through_both_styles() {
    let dir = tempfile::tempdir().unwrap();
    for style in ["csv", "gnuplot"] {
        let path = dir.path().join(format!("seq-{style}"));
        let gen = run(&[
            "generate",
            "--kind",
            "quadratic",
            "--alpha",
            "sqrt(2)",
            "--n",
            "400",
            "--style",
            style,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(gen.status.success(), "{}", stderr_str(&gen));
        let stats = run(&["stats", "gaps", "--input", path.to_str().unwrap()]);
        assert!(stats.status.success(), "{}", stderr_str(&stats));
        assert_eq!(summary(&stats)["n_points"], 400);
    }
    assert!(Path::new(env!("CARGO_BIN_EXE_modone")).exists());
}

#[test]
fn stats_rejects_conflicting_sources_and_misused_flags() {
    // -- tolerance is meaningless for moments
    let out = run(&[
        "stats",
        "moments",
        "--kind",
        "iud",
        "--n",
        "100",
        "--tolerance",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // --grid applies only to counts and moments
    let out = run(&[
        "stats", "gaps", "--kind", "iud", "--n", "100", "--grid", "5000",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // missing source entirely
    let out = run(&["stats", "gaps"]);
    assert_eq!(out.status.code(), Some(2));
}
