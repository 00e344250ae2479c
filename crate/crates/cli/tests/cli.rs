use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/germany-2021")
}

fn ledger() -> PathBuf {
    data_dir().join("ledger.csv")
}

fn params() -> PathBuf {
    data_dir().join("params.txt")
}

fn adminratio(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adminratio"))
        .args(args)
        .env_remove("ADMINRATIO_LOCALE")
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn compute_prints_headline_ratio() {
    let out = adminratio(&["compute", path(&ledger()), path(&params()), "--format", "text"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.trim_end().lines().last().unwrap().ends_with("20.23%"), "{text}");
    assert!(out.stderr.is_empty());
}

#[test]
fn locale_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_adminratio"))
        .args(["compute", path(&ledger()), path(&params())])
        .env("ADMINRATIO_LOCALE", "de")
        .output()
        .unwrap();
    assert!(stdout(&out).contains("5.647.691.878,02"));
    assert!(stdout(&out).trim_end().ends_with("20,23%"));
}

#[test]
fn validate_reports_missing_ministry_total() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(ledger()).unwrap();
    let broken: String = text
        .lines()
        .filter(|l| !(l.starts_with("he,") && l.contains(",ministry_total,")))
        .map(|l| format!("{l}\n"))
        .collect();
    let broken_path = dir.path().join("ledger.csv");
    fs::write(&broken_path, broken).unwrap();

    let out = adminratio(&["validate", path(&broken_path), path(&params())]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("missing-ministry-total"), "{err}");
    assert!(err.contains("he"), "{err}");

    let ok = adminratio(&["validate", path(&ledger()), path(&params())]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn sweep_grid_has_one_row_per_value() {
    let out = adminratio(&[
        "sweep",
        path(&ledger()),
        path(&params()),
        "--param",
        "outsourcing_rate",
        "--grid",
        "0.223,0.28,0.4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<_> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3, "{text}");
    assert_eq!(rows[1], "0.28\t20.23%");
    assert_eq!(rows[0], "0.223\t24.85%");
    assert_eq!(rows[2], "0.4\t14.80%");
}

#[test]
fn sweep_interval() {
    let out = adminratio(&[
        "sweep",
        path(&ledger()),
        path(&params()),
        "--param",
        "outsourcing_rate",
        "--interval",
        "0.223,0.28",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("outsourcing_rate\t0.223\t0.28\t20.23%\t24.85%"));
}

#[test]
fn exit_codes() {
    let out_of_domain = adminratio(&[
        "sweep",
        path(&ledger()),
        path(&params()),
        "--param",
        "outsourcing_rate",
        "--grid",
        "1.5",
    ]);
    assert_eq!(out_of_domain.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out_of_domain.stderr).contains("1.5"));

    let missing = adminratio(&["compute", "/nonexistent/ledger.csv", path(&params())]);
    assert_eq!(missing.status.code(), Some(2));

    assert_eq!(adminratio(&["frobnicate"]).status.code(), Some(4));
    assert_eq!(adminratio(&["compute", path(&ledger())]).status.code(), Some(4));
    let csv_to_stdout = adminratio(&["compute", path(&ledger()), path(&params()), "--format", "csv"]);
    assert_eq!(csv_to_stdout.status.code(), Some(4));
}

#[test]
fn version_names_schema() {
    let out = adminratio(&["version"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("dataset schema 1"));
}

#[test]
fn repeated_runs_are_identical_and_inputs_untouched() {
    let before = (fs::read(ledger()).unwrap(), fs::read(params()).unwrap());
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let out = adminratio(&[
            "compute",
            path(&ledger()),
            path(&params()),
            "--out",
            path(dir.path()),
            "--format",
            "text,csv,structured",
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let mut files: Vec<_> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (e.file_name(), fs::read(e.path()).unwrap())
            })
            .collect();
        files.sort();
        files
    };
    let first = run();
    let names: Vec<_> = first.iter().map(|(n, _)| n.to_str().unwrap().to_owned()).collect();
    assert_eq!(
        names,
        ["provenance.csv", "report.json", "report.txt", "results.csv", "table1.csv", "table2.csv"]
    );
    assert_eq!(first, run());
    assert_eq!(before, (fs::read(ledger()).unwrap(), fs::read(params()).unwrap()));
}
