//! The greedy right-to-left cover walk, its parallel segmented variant, and
//! checkpoints for interrupting and resuming long builds.
//!
//! The walk starts at `1/2` (symmetry makes the upper half redundant) and
//! repeatedly replaces the current point by the left endpoint of the best
//! covering interval until it reaches the target. Emission is streaming:
//! intervals flow into an [`IntervalSink`] one at a time, so memory stays
//! constant no matter how many intervals a cover has.

use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::{fraction_str, parse_fraction, Fraction};
use crate::certificate::{kv, CertificateWriter};
use crate::error::{Error, Result};
use crate::intervals::CoverInterval;
use crate::search::{next_interval, Candidate, SearchConfig};

/// Anything that accepts the interval stream of a build.
pub trait IntervalSink {
    fn emit(&mut self, interval: &CoverInterval) -> Result<()>;
}

impl IntervalSink for Vec<CoverInterval> {
    fn emit(&mut self, interval: &CoverInterval) -> Result<()> {
        self.push(interval.clone());
        Ok(())
    }
}

impl<W: Write> IntervalSink for CertificateWriter<W> {
    fn emit(&mut self, interval: &CoverInterval) -> Result<()> {
        CertificateWriter::emit(self, interval)
    }
}

/// Sink that only counts, for dry runs.
#[derive(Default)]
pub struct CountingSink(pub u64);

impl IntervalSink for CountingSink {
    fn emit(&mut self, _interval: &CoverInterval) -> Result<()> {
        self.0 += 1;
        Ok(())
    }
}

/// Interval counts and wall time of a finished build.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoverStats {
    pub intervals: u64,
    pub type1: u64,
    pub type2: u64,
    pub elapsed: Duration,
}

impl CoverStats {
    fn record(&mut self, interval: &CoverInterval) {
        self.intervals += 1;
        if interval.is_type1() {
            self.type1 += 1;
        } else {
            self.type2 += 1;
        }
    }
}

/// Summary of a built cover. The intervals themselves went to the sink.
#[derive(Clone, Debug)]
pub struct Cover {
    pub p: u64,
    pub e: u64,
    pub start: Fraction,
    pub target: Fraction,
    /// Left endpoint of the last interval; at or below `target`.
    pub final_point: Fraction,
    pub stats: CoverStats,
}

pub fn one_half() -> Fraction {
    Fraction::new(BigInt::from(1), BigInt::from(2))
}

pub fn zero() -> Fraction {
    Fraction::zero()
}

/// The cover walk as an iterator of greedy steps. Each step yields the
/// chosen candidate and moves the current point to its left endpoint; the
/// iterator ends once the point is at or below the target, or after
/// reporting a stall.
pub struct Walk<'a> {
    cfg: &'a SearchConfig,
    point: Fraction,
    target: Fraction,
    emitted: u64,
    stalled: bool,
}

impl<'a> Walk<'a> {
    pub fn new(cfg: &'a SearchConfig, start: Fraction, target: Fraction) -> Result<Self> {
        if target < zero() || start > one_half() || start <= target {
            return Err(Error::InvalidParam(format!(
                "walk range must satisfy 0 <= target < start <= 1/2, got start={}, target={}",
                fraction_str(&start),
                fraction_str(&target)
            )));
        }
        Ok(Walk {
            cfg,
            point: start,
            target,
            emitted: 0,
            stalled: false,
        })
    }

    /// Continue a previously checkpointed walk. A point at or below the
    /// target yields an immediately finished walk.
    pub fn resume(cfg: &'a SearchConfig, checkpoint: &Checkpoint, target: Fraction) -> Result<Self> {
        checkpoint.ensure_matches(cfg)?;
        if checkpoint.point > one_half() {
            return Err(Error::CheckpointMismatch(format!(
                "checkpoint point {} lies outside [0, 1/2]",
                fraction_str(&checkpoint.point)
            )));
        }
        Ok(Walk {
            cfg,
            point: checkpoint.point.clone(),
            target,
            emitted: checkpoint.count,
            stalled: false,
        })
    }

    /// The current walk point (left endpoint of the last step).
    pub fn point(&self) -> &Fraction {
        &self.point
    }

    /// Intervals produced so far, including any counted by a resumed
    /// checkpoint.
    pub fn emitted(&self) -> u64 {
        self.emitted
    }
}

impl Iterator for Walk<'_> {
    type Item = Result<Candidate>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.stalled || self.point <= self.target {
            return None;
        }
        match next_interval(&self.point, self.cfg) {
            Ok(cand) => {
                self.point = cand.new_point.clone();
                self.emitted += 1;
                Some(Ok(cand))
            }
            Err(Error::Stalled { point, .. }) => {
                self.stalled = true;
                Some(Err(Error::Stalled {
                    point,
                    emitted: self.emitted,
                }))
            }
            Err(other) => {
                self.stalled = true;
                Some(Err(other))
            }
        }
    }
}

/// Build the cover of `[target, start]`, streaming intervals into `sink`.
pub fn build_cover(
    cfg: &SearchConfig,
    start: Fraction,
    target: Fraction,
    sink: &mut dyn IntervalSink,
) -> Result<Cover> {
    let begin = Instant::now();
    let mut walk = Walk::new(cfg, start.clone(), target.clone())?;
    let mut stats = CoverStats::default();
    for step in &mut walk {
        let cand = step?;
        stats.record(&cand.interval);
        sink.emit(&cand.interval)?;
    }
    stats.elapsed = begin.elapsed();
    Ok(Cover {
        p: cfg.p,
        e: cfg.e,
        start,
        target,
        final_point: walk.point().clone(),
        stats,
    })
}

/// The segment boundaries `r_i = (K - i) / (2K)` for `i = 0..=K`, from `1/2`
/// down to `0`.
pub fn segment_bounds(segments: usize) -> Vec<Fraction> {
    (0..=segments)
        .map(|i| {
            Fraction::new(
                BigInt::from((segments - i) as u64),
                BigInt::from(2 * segments as u64),
            )
        })
        .collect()
}

/// Build the full cover of `[0, 1/2]` in `segments` independent pieces and
/// stitch the results in order.
///
/// Worker `i` covers `[r_{i+1}, r_i]`. Since each greedy step depends only
/// on the current point, a segment reproduces the serial decisions as soon
/// as its walk meets a serial walk point; the join is cleaned up by
/// dropping any leading intervals of the next segment that do not advance
/// past the left endpoint reached so far (they cover already-covered
/// ground). `segments == 1` is byte-identical to the serial build.
pub fn build_cover_parallel(
    cfg: &SearchConfig,
    segments: usize,
    sink: &mut dyn IntervalSink,
) -> Result<Cover> {
    if segments == 0 {
        return Err(Error::InvalidParam("segments must be at least 1".into()));
    }
    if segments == 1 {
        return build_cover(cfg, one_half(), zero(), sink);
    }
    let begin = Instant::now();
    let bounds = segment_bounds(segments);

    // Each worker spills its intervals to a temp file in certificate line
    // format; memory stays O(1) in the cover size.
    let spills: Vec<(std::fs::File, u64)> = (0..segments)
        .into_par_iter()
        .map(|i| -> Result<(std::fs::File, u64)> {
            let mut out = tempfile::tempfile()?;
            let mut lines = std::io::BufWriter::new(&mut out);
            let mut count = 0u64;
            let walk = Walk::new(cfg, bounds[i].clone(), bounds[i + 1].clone())?;
            for step in walk {
                let cand = step.map_err(|err| match err {
                    Error::Stalled { point, emitted } => Error::SegmentStalled {
                        segment: i,
                        point,
                        emitted,
                    },
                    other => other,
                })?;
                writeln!(lines, "{}", cand.interval.to_line())?;
                count += 1;
            }
            lines.flush()?;
            drop(lines);
            Ok((out, count))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut stats = CoverStats::default();
    let mut last_left: Option<Fraction> = None;
    for (mut file, _count) in spills {
        file.seek(SeekFrom::Start(0))?;
        for line in BufReader::new(file).lines() {
            let interval = CoverInterval::parse_line(&line?)?;
            let (left, _) = interval.endpoints(cfg.p, cfg.e)?;
            if let Some(prev) = &last_left {
                if left >= *prev {
                    continue; // covers ground the previous segment already closed
                }
            }
            stats.record(&interval);
            sink.emit(&interval)?;
            last_left = Some(left);
        }
    }
    stats.elapsed = begin.elapsed();
    Ok(Cover {
        p: cfg.p,
        e: cfg.e,
        start: one_half(),
        target: zero(),
        final_point: last_left.expect("every segment emits at least one interval"),
        stats,
    })
}

pub const CKPT_MAGIC: &str = "PLCCKPT v1";

/// Resumable walk state: everything needed to continue a build is the
/// current point and how many intervals are already on disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub p: u64,
    pub e: u64,
    pub point: Fraction,
    pub count: u64,
    pub segment: u32,
}

impl Checkpoint {
    pub fn to_line(&self) -> String {
        format!(
            "{CKPT_MAGIC} p={} E={} point={} count={} segment={}",
            self.p,
            self.e,
            fraction_str(&self.point),
            self.count,
            self.segment
        )
    }

    pub fn parse(line: &str) -> Result<Checkpoint> {
        let rest = line.strip_prefix(CKPT_MAGIC).ok_or_else(|| {
            Error::CheckpointMismatch(format!("not a {CKPT_MAGIC} checkpoint"))
        })?;
        let mut tokens = rest.split_ascii_whitespace();
        let p = kv(tokens.next(), "p")?
            .parse()
            .map_err(|_| Error::InvalidParam("bad p".into()))?;
        let e = kv(tokens.next(), "E")?
            .parse()
            .map_err(|_| Error::InvalidParam("bad E".into()))?;
        let point = parse_fraction(kv(tokens.next(), "point")?)?;
        let count = kv(tokens.next(), "count")?
            .parse()
            .map_err(|_| Error::InvalidParam("bad count".into()))?;
        let segment = kv(tokens.next(), "segment")?
            .parse()
            .map_err(|_| Error::InvalidParam("bad segment".into()))?;
        if tokens.next().is_some() {
            return Err(Error::InvalidParam("trailing checkpoint fields".into()));
        }
        Ok(Checkpoint {
            p,
            e,
            point,
            count,
            segment,
        })
    }

    /// Atomically write the checkpoint (write-new-then-rename), so a crash
    /// mid-save leaves the previous checkpoint intact.
    pub fn save(&self, path: &Path) -> Result<()> {
        let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
        let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))?;
        writeln!(tmp, "{}", self.to_line())?;
        tmp.flush()?;
        tmp.persist(path).map_err(|err| err.error)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Checkpoint> {
        let text = std::fs::read_to_string(path)?;
        Checkpoint::parse(text.trim_end_matches('\n')).map_err(|err| match err {
            Error::InvalidParam(msg) => Error::CheckpointMismatch(msg),
            other => other,
        })
    }

    /// A checkpoint can only continue a build with the same p and E.
    pub fn ensure_matches(&self, cfg: &SearchConfig) -> Result<()> {
        if self.p != cfg.p || self.e != cfg.e {
            return Err(Error::CheckpointMismatch(format!(
                "checkpoint is for p={} E={}, build is p={} E={}",
                self.p, self.e, cfg.p, cfg.e
            )));
        }
        Ok(())
    }
}
