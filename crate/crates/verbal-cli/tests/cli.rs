//! End-to-end tests of the binary: flag handling, exit codes, report files,
//! and byte-identical reruns.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn verbal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verbal")).args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn tmp_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn reduce_prints_the_reduced_word() {
    let out = verbal(&["reduce", "--g", "ab B A a^2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "a^2\n");

    let identity = verbal(&["reduce", "--g", "aA"]);
    assert_eq!(stdout(&identity), "1\n");
}

#[test]
fn usage_and_input_errors_exit_one() {
    let out = verbal(&["reduce", "--nonsense"]);
    assert_eq!(out.status.code(), Some(1));

    let out = verbal(&["reduce", "--g", "a?b"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("syntax error"));

    let out = verbal(&["reduce", "--g", "abc", "--rank", "2"]);
    assert_eq!(out.status.code(), Some(1));

    // certify needs exactly one element source
    let out = verbal(&["certify", "--w", "x1^2", "--K", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn count_and_qm_modes() {
    let linear = verbal(&["count", "--w", "aa", "--g", "aaa"]);
    assert_eq!(stdout(&linear), "2\n");

    // conjugates agree in cyclic mode
    let a = verbal(&["qm", "--w", "abbabbb", "--g", "abbabbb", "--mode", "cyclic"]);
    let b = verbal(&["qm", "--w", "abbabbb", "--g", "Babbabbbb", "--mode", "cyclic"]);
    assert_eq!(stdout(&a), "1\n");
    assert_eq!(stdout(&b), "1\n");
}

#[test]
fn wordmap_reports_degree_notes() {
    let width_one = stdout(&verbal(&["wordmap", "--w", "x2 x1 x2^-2"]));
    assert!(width_one.contains("degree: 1"));
    assert!(width_one.contains("exponent_sums: [1, -1]"));
    assert!(width_one.contains("the width is 1"));

    let squared = stdout(&verbal(&["wordmap", "--w", "x1 x2 x1 x2^-1"]));
    assert!(squared.contains("degree: 2"));
    assert!(squared.contains("bezout: [1, 0]"));

    let commutator = stdout(&verbal(&["wordmap", "--w", "[x1,x2]"]));
    assert!(commutator.contains("degree: 0"));
    assert!(commutator.contains("svl"));
}

#[test]
fn witness_emits_the_expected_word() {
    let out = verbal(&["witness", "--w", "x1 x2 x1 x2^-1", "--K", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "ab^2ab^2ab^3ab^3\n");

    // degree 1 is reported as a fact, not an error
    let note = verbal(&["witness", "--w", "x1", "--K", "3"]);
    assert!(note.status.success());
    assert!(stdout(&note).contains("width is 1"));

    // degree 0 cannot have a witness
    let err = verbal(&["witness", "--w", "[x1,x2]", "--K", "3"]);
    assert_eq!(err.status.code(), Some(1));
}

#[test]
fn certify_writes_reports_and_plot_tables() {
    let report_path = tmp_path("cert_report.csv");
    let out = verbal(&[
        "certify",
        "--w",
        "x1 x2 x1 x2^-1",
        "--g-from-witness",
        "12",
        "--K",
        "12",
        "--M",
        "3",
        "--plot",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let summary = stdout(&out);
    assert!(summary.contains("\"count\":12"));
    assert!(summary.contains("\"lower_bound\":2"));

    let report = fs::read_to_string(&report_path).unwrap();
    assert!(report.starts_with("i,h_i,divisible\n"));
    assert!(report.contains("K lower_bound\n"));
    assert!(report.contains("\"soundness\":"));

    // an explicit element works too
    let direct = verbal(&["certify", "--w", "x1 x2 x1 x2^-1", "--g", "abaB", "--K", "10"]);
    assert!(direct.status.success());
    assert!(stdout(&direct).contains("\"M\":3"));
}

#[test]
fn svl_reports_a_positive_bound() {
    let out = verbal(&["svl", "--w", "[x1,x2]", "--n-max", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"element\":\"abAB\""));
    assert!(text.contains("\"svl_lower_bound\":\"1/12\""));

    let err = verbal(&["svl", "--w", "x1^2"]);
    assert_eq!(err.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&err.stderr).contains("degree"));
}

#[test]
fn oracle_finds_small_upper_bounds() {
    let one = verbal(&["oracle", "--w", "[x1,x2]", "--g", "abAB"]);
    assert_eq!(stdout(&one), "upper_bound: 1\n");

    let zero = verbal(&["oracle", "--w", "[x1,x2]", "--g", "1"]);
    assert_eq!(stdout(&zero), "upper_bound: 0\n");

    let config_path = tmp_path("budget.conf");
    fs::write(&config_path, "max_factor_len=2\nmax_product_factors=4\nmax_states=60000\n")
        .unwrap();
    let with_config = verbal(&[
        "oracle",
        "--w",
        "[x1,x2]",
        "--g",
        "abABabAB",
        "--budget-config",
        config_path.to_str().unwrap(),
    ]);
    assert!(with_config.status.success());
    assert!(stdout(&with_config).starts_with("upper_bound: "));
}

#[test]
fn suite_is_deterministic_and_exits_zero() {
    let dir_a = tmp_path("suite_a");
    let dir_b = tmp_path("suite_b");
    let run = |dir: &PathBuf| {
        verbal(&[
            "suite",
            "--seed",
            "11",
            "--K",
            "20",
            "--trials",
            "30",
            "--radius",
            "3",
            "--out",
            dir.to_str().unwrap(),
        ])
    };
    let first = run(&dir_a);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&first.stderr));
    assert!(stdout(&first).contains("suite: PASS"));

    let second = run(&dir_b);
    assert_eq!(second.status.code(), Some(0));
    // identical up to the report-directory line
    let battery_lines = |text: &str| -> Vec<String> {
        text.lines().filter(|l| l.starts_with("battery ")).map(str::to_owned).collect()
    };
    assert_eq!(battery_lines(&stdout(&first)), battery_lines(&stdout(&second)));

    let summary = fs::read_to_string(dir_a.join("summary.csv")).unwrap();
    assert!(summary.starts_with("battery,checks,cases,failures,status\n"));
    assert_eq!(summary.matches(",pass\n").count(), 9);

    for name in [
        "pattern_powers",
        "defect_bound",
        "exceptional_indices",
        "pair_bounds",
        "divisibility",
        "witness_values",
        "bezout_power",
        "svl_evidence",
        "oracle_consistency",
    ] {
        let a = fs::read(dir_a.join(format!("{name}.csv"))).unwrap();
        let b = fs::read(dir_b.join(format!("{name}.csv"))).unwrap();
        assert_eq!(a, b, "battery {name} differs between reruns");
    }
}
