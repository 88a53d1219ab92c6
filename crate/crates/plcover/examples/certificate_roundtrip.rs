//! Write a certificate to disk, then re-check it with the independent
//! verifier and randomized interior spot checks.
//!
//! ```bash
//! cargo run --example certificate_roundtrip
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter};

use plcover::certificate::{CertificateWriter, Header};
use plcover::{build_cover, one_half, spot_check, verify_cover, zero, SearchConfig};

fn main() -> plcover::Result<()> {
    let cfg = SearchConfig::with_defaults(2, 10)?;
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("p2_E10.cert");

    let header = Header {
        p: cfg.p,
        e: cfg.e,
        start: one_half(),
        target: zero(),
    };
    let mut writer = CertificateWriter::new(BufWriter::new(File::create(&path)?), &header)?;
    let cover = build_cover(&cfg, one_half(), zero(), &mut writer)?;
    writer.finish()?;
    println!(
        "wrote {} intervals to {} in {:?}",
        cover.stats.intervals,
        path.display(),
        cover.stats.elapsed
    );

    let report = verify_cover(BufReader::new(File::open(&path)?), cfg.p, cfg.e)?;
    println!("chain check: {}", report.summary());

    let report = spot_check(BufReader::new(File::open(&path)?), cfg.p, cfg.e, 5, 42)?;
    println!(
        "spot checks: {} passed, {} failed (5 samples per interval, seed 42)",
        report.spot_pass, report.spot_fail
    );

    // the verifier is not a rubber stamp: drop one interval and watch it object
    let text = std::fs::read_to_string(&path)?;
    let sabotaged: String = text
        .lines()
        .enumerate()
        .filter(|(i, _)| *i != 5)
        .map(|(_, l)| format!("{l}\n"))
        .collect();
    let report = verify_cover(sabotaged.as_bytes(), cfg.p, cfg.e)?;
    let summary = report.summary();
    let failure = report.first_failure.expect("a gap must be detected");
    println!(
        "after deleting one interval: {summary} (line {}: {})",
        failure.line, failure.reason
    );
    Ok(())
}
