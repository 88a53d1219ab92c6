//! The `plcover` command line: `build`, `verify` and `oracle` subcommands
//! with deterministic output and stable exit codes.
//!
//! Exit codes: 0 success, 1 usage/IO/parse trouble, 2 a stalled build,
//! 3 a certificate that failed verification.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};

use crate::arith::{fraction_str, parse_fraction, Fraction};
use crate::certificate::{CertificateReader, CertificateWriter, Header, Record};
use crate::cover::{build_cover_parallel, Checkpoint, CoverStats, Walk};
use crate::error::{Error, Result};
use crate::search::SearchConfig;
use crate::verify::{oracle_min, spot_check, verify_cover, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_STALL: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "plcover",
    version,
    about = "Build and verify exact covering certificates for the p-adic Littlewood inequality"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a cover of [target, start] and write it as a certificate
    Build(BuildOpts),
    /// Re-check a certificate with the independent verifier
    Verify(VerifyOpts),
    /// Evaluate min over q <= Q of q * |q|_p * ||q x|| at a single point
    Oracle(OracleOpts),
}

#[derive(Args, Debug)]
pub struct BuildOpts {
    /// The prime p
    #[arg(long)]
    pub p: u64,

    /// Threshold denominator: the cover certifies liminf < 1/E
    #[arg(long = "E")]
    pub e: u64,

    /// Right end of the walk, a fraction at most 1/2
    #[arg(long, default_value = "1/2")]
    pub start: String,

    /// Left end of the walk
    #[arg(long, default_value = "0/1")]
    pub target: String,

    /// Split [0, 1/2] into this many segments built in parallel
    #[arg(long, default_value_t = 1)]
    pub segments: usize,

    /// Depth cap of the type-1 scan
    #[arg(long = "max-n", default_value_t = SearchConfig::DEFAULT_MAX_N)]
    pub max_n: u32,

    /// Certificate output path; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Maintain a checkpoint file at this path while building
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,

    /// Continue from the checkpoint instead of starting over
    /// (needs --checkpoint and --out)
    #[arg(long)]
    pub resume: bool,

    /// Checkpoint/progress cadence: every this many intervals
    #[arg(long, default_value_t = 10_000_000)]
    pub checkpoint_every_intervals: u64,

    /// Checkpoint/progress cadence: every this many seconds, whichever
    /// comes first
    #[arg(long, default_value_t = 60)]
    pub checkpoint_every_secs: u64,

    /// Allow parameter ranges expected to run for hours or days
    #[arg(long)]
    pub long: bool,

    /// No progress reporting on stderr
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Args, Debug)]
pub struct VerifyOpts {
    /// Certificate file to verify
    pub cert: PathBuf,

    /// Require the certificate to be for this prime
    #[arg(long)]
    pub p: Option<u64>,

    /// Require the certificate to be for this threshold denominator
    #[arg(long = "E")]
    pub e: Option<u64>,

    /// Spot-check samples per interval (0 skips spot checks)
    #[arg(long, default_value_t = 0)]
    pub samples: u64,

    /// Seed for the spot-check sampler
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Only print the machine-readable summary line
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Args, Debug)]
pub struct OracleOpts {
    /// The prime p
    #[arg(long)]
    pub p: u64,

    /// The point, as a fraction a/b
    #[arg(long)]
    pub x: String,

    /// Upper bound of the witness range
    #[arg(long = "Q")]
    pub q: u64,
}

pub fn run(cli: &Cli) -> i32 {
    match &cli.command {
        Command::Build(opts) => cmd_build(opts),
        Command::Verify(opts) => cmd_verify(opts),
        Command::Oracle(opts) => cmd_oracle(opts),
    }
}

fn fail(err: &Error) -> i32 {
    eprintln!("error: {err}");
    match err {
        Error::Stalled { .. } | Error::SegmentStalled { .. } => EXIT_STALL,
        _ => EXIT_USAGE,
    }
}

/// `build`: writes the certificate and prints a one-line summary.
pub fn cmd_build(opts: &BuildOpts) -> i32 {
    match run_build(opts) {
        Ok((stats, to_stdout)) => {
            let summary = format!(
                "intervals={} type1={} type2={} elapsed={:.3}s",
                stats.intervals,
                stats.type1,
                stats.type2,
                stats.elapsed.as_secs_f64()
            );
            if to_stdout {
                eprintln!("{summary}"); // stdout carries the certificate
            } else {
                println!("{summary}");
            }
            EXIT_OK
        }
        Err(err) => fail(&err),
    }
}

fn run_build(opts: &BuildOpts) -> Result<(CoverStats, bool)> {
    let cfg = SearchConfig::new(opts.p, opts.e, opts.max_n)?;
    let start = parse_fraction(&opts.start)?;
    let target = parse_fraction(&opts.target)?;
    if cfg.p == 2 && cfg.e >= 16 && !opts.long {
        return Err(Error::InvalidParam(format!(
            "p=2 with E={} is expected to run for more than a few minutes; pass --long to proceed",
            cfg.e
        )));
    }
    if opts.resume && (opts.out.is_none() || opts.checkpoint.is_none()) {
        return Err(Error::InvalidParam(
            "--resume needs both --checkpoint and --out".into(),
        ));
    }
    if opts.segments > 1 && (opts.resume || opts.checkpoint.is_some()) {
        return Err(Error::InvalidParam(
            "checkpoints are only supported for serial builds (--segments 1)".into(),
        ));
    }

    let header = Header {
        p: cfg.p,
        e: cfg.e,
        start: start.clone(),
        target: target.clone(),
    };

    if opts.segments > 1 {
        if start != crate::cover::one_half() || target != crate::cover::zero() {
            return Err(Error::InvalidParam(
                "segmented builds always cover [0, 1/2]; drop --start/--target".into(),
            ));
        }
        let stats = match &opts.out {
            Some(path) => {
                let mut writer =
                    CertificateWriter::new(BufWriter::new(File::create(path)?), &header)?;
                let cover = build_cover_parallel(&cfg, opts.segments, &mut writer)?;
                writer.finish()?;
                cover.stats
            }
            None => {
                let stdout = std::io::stdout();
                let mut writer = CertificateWriter::new(BufWriter::new(stdout.lock()), &header)?;
                let cover = build_cover_parallel(&cfg, opts.segments, &mut writer)?;
                writer.finish()?;
                cover.stats
            }
        };
        return Ok((stats, opts.out.is_none()));
    }

    match &opts.out {
        Some(path) => {
            let (walk, writer, mut stats) = if opts.resume {
                let ckpt = Checkpoint::load(opts.checkpoint.as_deref().unwrap())?;
                ckpt.ensure_matches(&cfg)?;
                if ckpt.segment != 0 {
                    return Err(Error::CheckpointMismatch(
                        "cannot resume a segment checkpoint serially".into(),
                    ));
                }
                let (t1, t2) = truncate_certificate(path, &header, ckpt.count)?;
                let file = std::fs::OpenOptions::new().append(true).open(path)?;
                let writer = CertificateWriter::resume(BufWriter::new(file), ckpt.count);
                let walk = Walk::resume(&cfg, &ckpt, target)?;
                let stats = CoverStats {
                    intervals: ckpt.count,
                    type1: t1,
                    type2: t2,
                    elapsed: Duration::ZERO,
                };
                (walk, writer, stats)
            } else {
                let writer =
                    CertificateWriter::new(BufWriter::new(File::create(path)?), &header)?;
                let walk = Walk::new(&cfg, start, target)?;
                (walk, writer, CoverStats::default())
            };
            drive_walk(walk, writer, &mut stats, opts)?;
            Ok((stats, false))
        }
        None => {
            let stdout = std::io::stdout();
            let writer = CertificateWriter::new(BufWriter::new(stdout.lock()), &header)?;
            let walk = Walk::new(&cfg, start, target)?;
            let mut stats = CoverStats::default();
            drive_walk(walk, writer, &mut stats, opts)?;
            Ok((stats, true))
        }
    }
}

/// Drive a serial walk into a certificate writer, saving checkpoints and
/// reporting progress on the configured cadence.
fn drive_walk<W: Write>(
    mut walk: Walk<'_>,
    mut writer: CertificateWriter<W>,
    stats: &mut CoverStats,
    opts: &BuildOpts,
) -> Result<()> {
    let began = Instant::now();
    let resumed_at = walk.emitted();
    let every = opts.checkpoint_every_intervals.max(1);
    let tick = Duration::from_secs(opts.checkpoint_every_secs.max(1));
    let mut last_tick = Instant::now();

    while let Some(step) = walk.next() {
        let cand = match step {
            Ok(cand) => cand,
            Err(err) => {
                writer.flush()?; // keep the partial certificate for diagnosis
                return Err(err);
            }
        };
        stats.intervals += 1;
        if cand.interval.is_type1() {
            stats.type1 += 1;
        } else {
            stats.type2 += 1;
        }
        writer.emit(&cand.interval)?;

        let emitted = walk.emitted();
        if emitted.is_multiple_of(every) || last_tick.elapsed() >= tick {
            last_tick = Instant::now();
            writer.flush()?;
            if let Some(path) = &opts.checkpoint {
                Checkpoint {
                    p: opts.p,
                    e: opts.e,
                    point: walk.point().clone(),
                    count: emitted,
                    segment: 0,
                }
                .save(path)?;
            }
            if !opts.quiet {
                let rate = (emitted - resumed_at) as f64 / began.elapsed().as_secs_f64();
                eprintln!(
                    "progress: intervals={emitted} point={} rate={rate:.0}/s",
                    fraction_str(walk.point())
                );
            }
        }
    }
    writer.finish()?;
    stats.elapsed = began.elapsed();
    Ok(())
}

/// Cut an interrupted certificate back to its header plus the first `count`
/// interval lines (what the checkpoint vouches for), returning the type
/// counts of the kept lines. The file is rewritten atomically.
fn truncate_certificate(path: &Path, expected: &Header, count: u64) -> Result<(u64, u64)> {
    let reader = CertificateReader::new(BufReader::new(File::open(path)?))?;
    if reader.header() != expected {
        return Err(Error::HeaderMismatch(format!(
            "existing certificate header {:?} does not match this build",
            reader.header().to_line()
        )));
    }
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))?;
    writeln!(tmp, "{}", expected.to_line())?;
    let (mut kept, mut t1, mut t2) = (0u64, 0u64, 0u64);
    for item in reader {
        if kept == count {
            break;
        }
        match item?.1 {
            Record::Interval(interval) => {
                writeln!(tmp, "{}", interval.to_line())?;
                kept += 1;
                if interval.is_type1() {
                    t1 += 1;
                } else {
                    t2 += 1;
                }
            }
            Record::End { .. } => break,
        }
    }
    if kept < count {
        return Err(Error::CheckpointMismatch(format!(
            "checkpoint claims {count} intervals but the certificate only has {kept}"
        )));
    }
    tmp.flush()?;
    tmp.persist(path).map_err(|err| err.error)?;
    Ok((t1, t2))
}

/// `verify`: chain check plus optional spot checks; exit 3 when invalid.
pub fn cmd_verify(opts: &VerifyOpts) -> i32 {
    match run_verify(opts) {
        Ok(report) => {
            println!("{}", report.summary());
            if report.valid {
                EXIT_OK
            } else {
                EXIT_INVALID
            }
        }
        Err(err) => fail(&err),
    }
}

fn read_header(path: &Path) -> Result<Header> {
    let mut line = String::new();
    BufReader::new(File::open(path)?).read_line(&mut line)?;
    Header::parse(line.trim_end_matches('\n')).map_err(|err| match err {
        Error::InvalidParam(msg) => Error::Malformed { line: 1, msg },
        other => other,
    })
}

fn run_verify(opts: &VerifyOpts) -> Result<VerifyReport> {
    let header = read_header(&opts.cert)?;
    if let Some(p) = opts.p {
        if p != header.p {
            return Err(Error::InvalidParam(format!(
                "certificate is for p={}, not p={p}",
                header.p
            )));
        }
    }
    if let Some(e) = opts.e {
        if e != header.e {
            return Err(Error::InvalidParam(format!(
                "certificate is for E={}, not E={e}",
                header.e
            )));
        }
    }
    let (p, e) = (header.p, header.e);

    let mut report = verify_cover(BufReader::new(File::open(&opts.cert)?), p, e)?;
    if !opts.quiet {
        match &report.first_failure {
            None => println!("chain: ok ({} intervals)", report.intervals_checked),
            Some(failure) => println!("chain: FAIL at line {}: {}", failure.line, failure.reason),
        }
    }

    // spot checks only add information on a structurally sound certificate
    if opts.samples > 0 && report.valid {
        let spots = spot_check(
            BufReader::new(File::open(&opts.cert)?),
            p,
            e,
            opts.samples,
            opts.seed,
        )?;
        if !opts.quiet {
            println!(
                "spot: {} checks, {} failures (samples={}, seed={})",
                spots.spot_pass + spots.spot_fail,
                spots.spot_fail,
                opts.samples,
                opts.seed
            );
            if let Some(failure) = &spots.first_failure {
                println!("spot: first failure at line {}: {}", failure.line, failure.reason);
            }
        }
        report.spot_pass = spots.spot_pass;
        report.spot_fail = spots.spot_fail;
        if !spots.valid {
            report.valid = false;
            if report.first_failure.is_none() {
                report.first_failure = spots.first_failure;
            }
        }
    }
    Ok(report)
}

/// `oracle`: print the exact minimum and its witness.
pub fn cmd_oracle(opts: &OracleOpts) -> i32 {
    match run_oracle(opts) {
        Ok((min, q)) => {
            println!("{min} at q={q}");
            EXIT_OK
        }
        Err(err) => fail(&err),
    }
}

fn run_oracle(opts: &OracleOpts) -> Result<(Fraction, u64)> {
    if !crate::arith::is_prime(opts.p) {
        return Err(Error::InvalidParam(format!(
            "p must be prime, got {}",
            opts.p
        )));
    }
    let x = parse_fraction(&opts.x)?;
    oracle_min(&x, opts.q, opts.p)
}
