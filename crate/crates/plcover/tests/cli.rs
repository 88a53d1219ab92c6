//! End-to-end tests of the `plcover` binary: exit codes, output contracts,
//! and the build/verify round trip.

mod common;

use common::*;

#[test]
fn build_writes_the_reference_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e8.cert");
    let out = run_cli(["build", "--p", "2", "--E", "8", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let summary = build_summary(&out);
    assert!(summary.contains("intervals=29"), "{summary}");
    assert!(summary.contains("type1=16"), "{summary}");
    assert!(summary.contains("type2=13"), "{summary}");

    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "PLCCOVER v1 p=2 E=8 start=1/2 target=0/1"
    );
    let body: Vec<&str> = lines.collect();
    assert_eq!(&body[..29], &GOLDEN_LINES);
    assert_eq!(body[29], "END count=29");
    assert_eq!(body.len(), 30);
}

#[test]
fn build_without_out_streams_to_stdout() {
    let out = run_cli(["build", "--p", "2", "--E", "8", "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = stdout_str(&out);
    assert!(cert.starts_with("PLCCOVER v1 p=2 E=8"));
    assert!(cert.ends_with("END count=29\n"));
    // summary goes to stderr so stdout stays a clean certificate
    assert!(stderr_str(&out).contains("intervals=29"));
}

#[test]
fn identical_options_give_identical_bytes() {
    let a = run_cli(["build", "--p", "3", "--E", "9", "--quiet"]);
    let b = run_cli(["build", "--p", "3", "--E", "9", "--quiet"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn build_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (p, e) in [(2u64, 10u64), (3, 8), (5, 8)] {
        let path = dir.path().join(format!("p{p}e{e}.cert"));
        let out = run_cli([
            "build",
            "--p",
            &p.to_string(),
            "--E",
            &e.to_string(),
            "--out",
            path.to_str().unwrap(),
            "--quiet",
        ]);
        assert_eq!(out.status.code(), Some(0), "build p={p} E={e}");
        let out = run_cli(["verify", path.to_str().unwrap(), "--samples", "2"]);
        assert_eq!(out.status.code(), Some(0), "verify p={p} E={e}");
        let text = stdout_str(&out);
        assert!(text.contains("VERIFY ok=true"), "{text}");
    }
}

#[test]
fn verify_reports_spot_check_volume() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e8.cert");
    run_cli(["build", "--p", "2", "--E", "8", "--out", path.to_str().unwrap(), "--quiet"]);
    let out = run_cli(["verify", path.to_str().unwrap(), "--samples", "10", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("spot: 290 checks, 0 failures"), "{text}");
}

#[test]
fn stalls_exit_2_and_name_the_point() {
    let out = run_cli(["build", "--p", "2", "--E", "8", "--max-n", "3", "--quiet"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("stalled at 1/5"), "{}", stderr_str(&out));
}

#[test]
fn corrupt_certificates_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e8.cert");
    run_cli(["build", "--p", "2", "--E", "8", "--out", path.to_str().unwrap(), "--quiet"]);
    let text = std::fs::read_to_string(&path).unwrap();

    // drop a chain link
    let broken: String = text.lines().filter(|l| *l != "T2 7 5 3").map(|l| format!("{l}\n")).collect();
    let broken_path = dir.path().join("broken.cert");
    std::fs::write(&broken_path, broken).unwrap();
    let out = run_cli(["verify", broken_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout_str(&out).contains("VERIFY ok=false"));

    // truncate at a line boundary (no END)
    let truncated: String = text.lines().take(12).map(|l| format!("{l}\n")).collect();
    std::fs::write(&broken_path, truncated).unwrap();
    let out = run_cli(["verify", broken_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));

    // garbage line: malformed, exit 1
    let garbled = text.replace("T2 7 5 3", "T2 seven 5 3");
    std::fs::write(&broken_path, garbled).unwrap();
    let out = run_cli(["verify", broken_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_1() {
    // not a prime
    let out = run_cli(["build", "--p", "4", "--E", "8", "--quiet"]);
    assert_eq!(out.status.code(), Some(1));
    // threshold too coarse
    let out = run_cli(["build", "--p", "2", "--E", "2", "--quiet"]);
    assert_eq!(out.status.code(), Some(1));
    // unknown flag (clap error)
    let out = run_cli(["build", "--p", "2", "--E", "8", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    // bad walk range
    let out = run_cli(["build", "--p", "2", "--E", "8", "--start", "2/3", "--quiet"]);
    assert_eq!(out.status.code(), Some(1));
    // bad fraction
    let out = run_cli(["oracle", "--p", "2", "--x", "1/0", "--Q", "4"]);
    assert_eq!(out.status.code(), Some(1));
    // verify against the wrong parameters
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e8.cert");
    run_cli(["build", "--p", "2", "--E", "8", "--out", path.to_str().unwrap(), "--quiet"]);
    let out = run_cli(["verify", path.to_str().unwrap(), "--E", "10"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(run_cli(["--help"]).status.code(), Some(0));
    assert_eq!(run_cli(["--version"]).status.code(), Some(0));
    assert_eq!(run_cli(["build", "--help"]).status.code(), Some(0));
}

#[test]
fn long_runs_are_gated() {
    let out = run_cli(["build", "--p", "2", "--E", "16", "--quiet"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_str(&out).contains("--long"), "{}", stderr_str(&out));
}

#[test]
fn oracle_prints_exact_values() {
    let cases = [
        (["oracle", "--p", "2", "--x", "5/7", "--Q", "4"], "1/7 at q=4\n"),
        (["oracle", "--p", "2", "--x", "1/2", "--Q", "2"], "0 at q=2\n"),
        (["oracle", "--p", "3", "--x", "1/3", "--Q", "3"], "0 at q=3\n"),
    ];
    for (args, expected) in cases {
        let out = run_cli(args);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout_str(&out), expected);
    }
}

#[test]
fn custom_ranges_build_partial_covers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("partial.cert");
    let out = run_cli([
        "build", "--p", "2", "--E", "8",
        "--start", "3/8", "--target", "1/4",
        "--out", path.to_str().unwrap(), "--quiet",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run_cli(["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let header = std::fs::read_to_string(&path).unwrap();
    assert!(header.starts_with("PLCCOVER v1 p=2 E=8 start=3/8 target=1/4"));
}

#[test]
fn segmented_build_is_verifiable_and_checkpoints_are_refused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k3.cert");
    let out = run_cli([
        "build", "--p", "2", "--E", "8", "--segments", "3",
        "--out", path.to_str().unwrap(), "--quiet",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run_cli(["verify", path.to_str().unwrap(), "--samples", "3"]);
    assert_eq!(out.status.code(), Some(0));

    let ckpt = dir.path().join("k3.ckpt");
    let out = run_cli([
        "build", "--p", "2", "--E", "8", "--segments", "3",
        "--checkpoint", ckpt.to_str().unwrap(),
        "--out", path.to_str().unwrap(), "--quiet",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn resume_needs_matching_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("a.cert");
    let ckpt = dir.path().join("a.ckpt");
    run_cli([
        "build", "--p", "2", "--E", "8",
        "--out", cert.to_str().unwrap(),
        "--checkpoint", ckpt.to_str().unwrap(),
        "--checkpoint-every-intervals", "10",
        "--quiet",
    ]);
    // wrong E: the checkpoint is for E=8
    let out = run_cli([
        "build", "--p", "2", "--E", "10",
        "--out", cert.to_str().unwrap(),
        "--checkpoint", ckpt.to_str().unwrap(),
        "--resume", "--quiet",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_str(&out).contains("checkpoint"), "{}", stderr_str(&out));

    // resume without --out
    let out = run_cli([
        "build", "--p", "2", "--E", "8",
        "--checkpoint", ckpt.to_str().unwrap(),
        "--resume", "--quiet",
    ]);
    assert_eq!(out.status.code(), Some(1));
}
