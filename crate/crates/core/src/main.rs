//! Command-line front end: classify, audit, batch and table dump.

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use cubinf::audit::{audit_tables, AuditStatus, AUDIT_SEED};
use cubinf::pipeline::{classify_text, Options, SCHEMA_VERSION};
use cubinf::tables::TABLE_DATA;

#[derive(Parser)]
#[command(name = "cubinf", version, about = "Singularities at infinity of cubic polynomials in x0, x1, x2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one polynomial given inline or as a file path.
    Classify {
        input: String,
        #[arg(long)]
        json: bool,
        /// Cross-check every claim with the germ oracle.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Check every table row on its representative instance.
    Audit {
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = AUDIT_SEED)]
        seed: u64,
    },
    /// Print the embedded table data file.
    TablesDump,
    /// Classify one polynomial per line, writing one JSON record per line.
    Batch {
        file: String,
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn code(n: i32) -> ExitCode {
    ExitCode::from(n as u8)
}

fn read_input(input: &str) -> Result<String, String> {
    if Path::new(input).is_file() {
        std::fs::read_to_string(input).map_err(|e| format!("cannot read {input}: {e}"))
    } else {
        Ok(input.to_string())
    }
}

fn classify(input: &str, json: bool, opts: Options) -> ExitCode {
    let text = match read_input(input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return code(1);
        }
    };
    match classify_text(&text, opts) {
        Ok(r) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&r).expect("report serializes"));
            } else {
                print!("{}", r.render_text());
            }
            code(r.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            code(e.exit_code())
        }
    }
}

fn audit(json: bool, seed: u64) -> ExitCode {
    let rows = audit_tables(seed);
    let failed = rows.iter().filter(|r| r.status == AuditStatus::Fail).count();
    if json {
        let doc = json!({ "schema_version": SCHEMA_VERSION, "seed": seed, "rows": rows });
        println!("{}", serde_json::to_string_pretty(&doc).expect("audit serializes"));
    } else {
        for r in &rows {
            println!("{}", r.line());
        }
        let count = |s| rows.iter().filter(|r| r.status == s).count();
        println!(
            "{} rows: {} PASS, {} FINDING, {} FAIL",
            rows.len(),
            count(AuditStatus::Pass),
            count(AuditStatus::Finding),
            failed
        );
    }
    code(if failed > 0 { 4 } else { 0 })
}

fn batch(file: &str, opts: Options) -> ExitCode {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {file}: {e}");
            return code(1);
        }
    };
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let records: Vec<(i32, String)> = lines
        .par_iter()
        .map(|&(n, l)| {
            let (exit, value) = match classify_text(l, opts) {
                Ok(r) => (r.exit_code(), json!({ "line": n, "exit_code": r.exit_code(), "report": r })),
                Err(e) => (
                    e.exit_code(),
                    json!({ "line": n, "exit_code": e.exit_code(), "error": e.to_string() }),
                ),
            };
            (exit, serde_json::to_string(&value).expect("record serializes"))
        })
        .collect();
    for (_, r) in &records {
        println!("{r}");
    }
    code(records.iter().map(|(c, _)| *c).max().unwrap_or(0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Classify { input, json, verify, seed } => classify(&input, json, Options { verify, seed }),
        Command::Audit { json, seed } => audit(json, seed),
        Command::TablesDump => {
            print!("{TABLE_DATA}");
            ExitCode::SUCCESS
        }
        Command::Batch { file, verify, seed } => batch(&file, Options { verify, seed }),
    }
}
