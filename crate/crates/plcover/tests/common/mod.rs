//! Shared fixtures for the integration suites.

#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use plcover::CoverInterval;

/// The reference cover of [0, 1/2] for p = 2, E = 8: 29 intervals, right to
/// left. Frozen here interval-for-interval; `acceptance.rs` re-derives the
/// one entry (position 20, `T2 1503 5 11`) whose parameters are sometimes
/// mis-quoted as n = 13: the walk point at that step is 40919/278784, which
/// exact arithmetic places inside I2(1503,5,11) and far outside
/// I2(1503,5,13), and only the n = 11 left endpoint chains into the next
/// interval.
pub const GOLDEN_LINES: [&str; 29] = [
    "T1 1 1",
    "T1 1 2",
    "T1 3 4",
    "T1 45 8",
    "T2 7 5 3",
    "T1 11 6",
    "T2 1 3 1",
    "T1 5 5",
    "T1 155 10",
    "T2 3 5 2",
    "T1 19 7",
    "T2 33 7 5",
    "T1 603 12",
    "T2 5 17 1",
    "T1 1203 13",
    "T2 47 5 6",
    "T1 2405 14",
    "T2 16 109 0",
    "T1 38477 18",
    "T2 155 33 5",
    "T2 1503 5 11",
    "T1 9619 16",
    "T2 263 7 8",
    "T1 75 9",
    "T2 7 3 4",
    "T1 37 8",
    "T2 1 7 0",
    "T1 1 3",
    "T2 0 1 0",
];

pub fn golden_intervals() -> Vec<CoverInterval> {
    GOLDEN_LINES
        .iter()
        .map(|line| CoverInterval::parse_line(line).expect("frozen line parses"))
        .collect()
}

/// Path of the compiled `plcover` binary.
pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_plcover")
}

/// Run the CLI with the given arguments, returning the full output.
pub fn run_cli<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(bin())
        .args(args)
        .output()
        .expect("spawn plcover")
}

pub fn stdout_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn stderr_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Parse `key=value` tokens out of a summary line.
pub fn summary_field(line: &str, key: &str) -> Option<String> {
    line.split_ascii_whitespace()
        .find_map(|tok| tok.strip_prefix(key).and_then(|t| t.strip_prefix('=')))
        .map(str::to_owned)
}

/// Find the build summary line (`intervals=... type1=...`) in CLI output.
pub fn build_summary(out: &Output) -> String {
    let text = stdout_str(out) + &stderr_str(out);
    text.lines()
        .find(|l| l.starts_with("intervals="))
        .unwrap_or_else(|| panic!("no build summary in output: {text}"))
        .to_owned()
}

pub fn read_cert_interval_lines(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .expect("certificate readable")
        .lines()
        .filter(|l| l.starts_with("T1 ") || l.starts_with("T2 "))
        .map(str::to_owned)
        .collect()
}
