use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_taylor-ito"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// Data rows of a CSV report (skips `#` headers and the column line).
fn csv_rows(text: &str) -> Vec<String> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .map(|l| l.to_string())
        .collect()
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("taylor-ito-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn coeffs_writes_a_loadable_table() {
    let path = temp_path("w000_q2.json");
    let out = run(&[
        "coeffs",
        "--pattern",
        "(000)",
        "--q",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table = taylor_ito::coeff::CoeffTable::load(&path).unwrap();
    assert_eq!(table.pattern(), taylor_ito::WeightPattern::W000);
    assert_eq!(table.len(), 27);
}

#[test]
fn coeffs_csv_renders_the_single_entry_family() {
    let out = run(&[
        "coeffs",
        "--pattern",
        "(0)",
        "--q",
        "0",
        "--format",
        "csv",
        "--delta",
        "4.0",
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 1);
    // sqrt-scale single coefficient: sqrt(4) = 2
    assert!(rows[0].contains("2.0"), "{rows:?}");
}

#[test]
fn coeffs_quintuple_q1_has_32_entries() {
    let out = run(&[
        "coeffs",
        "--pattern",
        "(00000)",
        "--q",
        "1",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    assert_eq!(csv_rows(&stdout(&out)).len(), 32);
}

#[test]
fn errors_at_unit_step_all_zero_and_idempotent() {
    let args = [
        "errors",
        "--budget-c",
        "1",
        "--delta",
        "1",
        "--m",
        "2",
        "--format",
        "csv",
    ];
    let first = run(&args);
    assert!(first.status.success());
    let rows = csv_rows(&stdout(&first));
    assert_eq!(rows.len(), 12);
    for row in &rows {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells[2], "ok");
        assert_eq!(cells[3], "0", "{row}");
    }
    let second = run(&args);
    assert_eq!(rows, csv_rows(&stdout(&second)));
}

#[test]
fn errors_reports_the_large_pair_order_and_infeasible_tables() {
    // delta = 0.1 with C = 1: the plain pair needs q = 1250 while the
    // table-backed families cannot reach the budget
    let out = run(&[
        "errors",
        "--budget-c",
        "1",
        "--delta",
        "0.1",
        "--m",
        "2",
        "--table-cap",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(4), "{}", stdout(&out));
    let rows = csv_rows(&stdout(&out));
    let pair_row = rows.iter().find(|r| r.starts_with("(00),")).unwrap();
    let cells: Vec<&str> = pair_row.split(',').collect();
    assert_eq!(cells[3], "1250", "{pair_row}");
    assert!(rows.iter().any(|r| r.contains("infeasible")));
}

#[test]
fn validate_passes_at_moderate_sample_count() {
    let out = run(&[
        "validate",
        "--samples",
        "10000",
        "--q",
        "1",
        "--seed",
        "11",
        "--format",
        "csv",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("# pass: true"));
    // mean and variance rows for 13 instances
    assert_eq!(csv_rows(&text).len(), 26);
}

#[test]
fn validate_rejects_tiny_sample_counts() {
    let out = run(&["validate", "--samples", "100"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sample_is_deterministic_and_counts_match() {
    let args = [
        "sample", "--m", "2", "--delta", "0.25", "--seed", "5", "--q", "1", "--format", "csv",
    ];
    let a = run(&args);
    assert!(a.status.success());
    let rows = csv_rows(&stdout(&a));
    // 3m + 3m^2 + 4m^3 + m^4 + m^5 = 98 for m = 2
    assert_eq!(rows.len(), 98);
    let b = run(&args);
    assert_eq!(rows, csv_rows(&stdout(&b)));
}

#[test]
fn strat_compare_terms_decrease() {
    let out = run(&["strat-compare", "--q-max", "5", "--format", "csv"]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 6);
    let mut prev = f64::INFINITY;
    for row in rows {
        let f: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!(f <= prev && f >= 0.0);
        prev = f;
    }
}

#[test]
fn solve_zero_noise_paths_are_identical() {
    // mu = 0 turns gbm into a deterministic flow; all paths coincide.
    // built-in gbm has noise, so use the bilinear model with a tiny step
    // budget instead: identical check runs on the gbm exact flow via seed
    // determinism of a single path.
    let out = run(&[
        "solve", "--model", "gbm", "--order", "1.5", "--delta", "0.25", "--t-end", "0.5",
        "--paths", "3", "--seed", "9", "--format", "csv",
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 3);
    let again = run(&[
        "solve", "--model", "gbm", "--order", "1.5", "--delta", "0.25", "--t-end", "0.5",
        "--paths", "3", "--seed", "9", "--format", "csv",
    ]);
    assert_eq!(rows, csv_rows(&stdout(&again)));
}

#[test]
fn solve_bilinear_runs_and_stays_finite() {
    let out = run(&[
        "solve",
        "--model",
        "bilinear2d",
        "--order",
        "2.5",
        "--delta",
        "0.5",
        "--t-end",
        "1",
        "--paths",
        "40",
        "--seed",
        "3",
        "--budget-c",
        "4",
        "--format",
        "csv",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 40);
    for row in rows {
        let y = row.split(',').nth(1).unwrap();
        for component in y.split(';') {
            let v: f64 = component.parse().unwrap();
            assert!(v.is_finite());
        }
    }
}

#[test]
fn unknown_pattern_is_a_configuration_error() {
    let out = run(&["coeffs", "--pattern", "(012)", "--q", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn convergence_rejects_short_grids() {
    let out = run(&["convergence", "--deltas", "0.5,0.25", "--paths", "100"]);
    assert_eq!(out.status.code(), Some(3));
}
