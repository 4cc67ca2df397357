//! The binary end to end on the quickest catalog row.

use std::path::Path;
use std::process::{Command, Output};

fn fpuwave(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpuwave")).current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field<'a>(report: &'a str, key: &str) -> Option<&'a str> {
    report.lines().find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
}

#[test]
fn solve_certify_sample() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = fpuwave(d, &["--workers", "1", "solve", "--label", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(d.join("row3.sol").exists());
    let residual: f64 = field(&stdout(&o), "residual").unwrap().parse().unwrap();
    assert!(residual < 1e-9);

    let o = fpuwave(d, &["certify", "row3.sol"]);
    assert_eq!(o.status.code(), Some(0));
    let report = stdout(&o);
    assert_eq!(field(&report, "pass"), Some("true"));
    assert_eq!(field(&report, "failed"), Some("none"));
    let k: f64 = field(&report, "K").unwrap().parse().unwrap();
    assert!(k < 0.875);

    // the same file certifies to the same report
    let again = stdout(&fpuwave(d, &["certify", "row3.sol"]));
    assert_eq!(report, again);

    let o = fpuwave(d, &["certify", "row3.sol", "--mu-radius", "0.1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(field(&stdout(&o), "pass"), Some("false"));

    let o = fpuwave(d, &["sample", "row3.sol", "--range", "-10:10", "--step", "0.05"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("x,v_mid,v_rad"));
    assert_eq!(text.lines().count(), 402);

    let o = fpuwave(d, &["wave", "row3.sol", "--at", "0"]);
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    let mid: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
    assert!(mid.abs() < 1e-12, "{line}");

    let o = fpuwave(d, &["extrema", "row3.sol"]);
    let recs: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["kind"], "positive-max");

    // truncated files are parse errors
    let text = std::fs::read_to_string(d.join("row3.sol")).unwrap();
    std::fs::write(d.join("cut.sol"), &text[..text.len() / 2]).unwrap();
    let o = fpuwave(d, &["certify", "cut.sol"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(fpuwave(d, &["solve", "--label", "99"]).status.code(), Some(2));
    assert_eq!(fpuwave(d, &["certify", "missing.sol"]).status.code(), Some(2));
    assert_eq!(fpuwave(d, &["table", "3,x"]).status.code(), Some(2));
    assert_eq!(fpuwave(d, &["bogus"]).status.code(), Some(2));
}

#[test]
fn config_files_solve() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("row.cfg"), "# single hump\nm 3\nmu_bar = 0\nsigma 1\nr 4\nk 1\nkappa 1\nsup 1.3\nguess 0:1.3\n").unwrap();
    let o = fpuwave(d, &["--workers", "1", "solve", "--config", "row.cfg", "--out", "cfg.sol"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(d.join("cfg.sol").exists());
}
