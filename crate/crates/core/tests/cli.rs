//! Command-line behavior: exit codes, JSON output and the golden audit file.

use std::process::{Command, Output};

use cubinf::pipeline::Report;
use cubinf::tables::TABLE_DATA;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubinf")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_exit_codes() {
    let cases = [
        ("x0^3 + x1^3 + x0*x1*x2 + x0*x2 + x1*x2 + x2 + x0 + x1", 0),
        ("x0^3+x1^3+x2^3+x0*x1*x2", 0),
        ("x0 + x1^2 + x0*x1^2", 2),
        ("x0^2 + x1", 1),
        ("x0^3 + x3", 1),
        ("x0^3 +", 1),
    ];
    for (input, code) in cases {
        let o = run(&["classify", input]);
        assert_eq!(o.status.code(), Some(code), "{input}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn json_report_parses_and_round_trips() {
    let o = run(&["classify", "--json", "--verify", "x1 - x0^3 + x1^2*x2"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.broughton.holds);
    assert!(r.verification.as_ref().unwrap().passed);
    let again: Report = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(again, r);
}

#[test]
fn classify_reads_files_and_batch_writes_json_lines() {
    let dir = std::env::temp_dir().join(format!("cubinf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let one = dir.join("one.txt");
    std::fs::write(&one, "x0*x1*x2 + x0 + x1\n").unwrap();
    let o = run(&["classify", one.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("T6/"));

    let many = dir.join("many.txt");
    std::fs::write(&many, "# comment\nx0*x1*x2 + x0 + x1\n\nx0^2\nx0 + x1^2 + x0*x1^2\n").unwrap();
    let o = run(&["batch", many.to_str().unwrap()]);
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    let codes: Vec<i64> = lines.iter().map(|l| l["exit_code"].as_i64().unwrap()).collect();
    assert_eq!(codes, [0, 1, 2]);
    assert_eq!(lines[0]["line"], 2);
    assert!(lines[1]["error"].is_string());
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn tables_dump_is_verbatim() {
    let o = run(&["tables-dump"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), TABLE_DATA);
}

#[test]
fn audit_matches_the_golden_file() {
    let o = run(&["audit", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let golden = include_str!("golden/audit.json");
    assert!(stdout(&o) == golden, "audit JSON differs from tests/golden/audit.json");
}

#[test]
fn audit_text_has_one_line_per_row() {
    let o = run(&["audit"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let status_lines = out
        .lines()
        .filter(|l| l.starts_with("PASS") || l.starts_with("FINDING") || l.starts_with("FAIL"))
        .count();
    assert_eq!(status_lines, cubinf::tables::rows().len());
    assert!(out.trim_end().ends_with("0 FAIL"));
}
