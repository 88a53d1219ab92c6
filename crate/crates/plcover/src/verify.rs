//! Independent certification of a cover.
//!
//! [`verify_cover`] re-checks a certificate stream against the chain
//! invariants using nothing but the exact endpoint formulas: parameter
//! validity per interval, the first right endpoint reaching the start, every
//! consecutive pair overlapping as closures while the left endpoints
//! strictly decrease, and the last left endpoint reaching the target. None
//! of the search shortcuts (`a_n` stepping, convergents) appear here, so a
//! builder bug cannot hide from the verifier by symmetry.
//!
//! [`spot_check`] additionally samples interior points of every interval
//! and re-derives the property that makes the interval admissible in the
//! first place. [`oracle_min`] is the brute-force evaluation of the quantity
//! the whole artifact is about, for spot checks at single points.

use std::io::BufRead;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::arith::{dist_to_nearest_int, fraction_str, Fraction};
use crate::certificate::{CertificateReader, Record};
use crate::error::{Error, Result};
use crate::intervals::CoverInterval;

/// First violation found in a certificate, with its 1-based line number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub line: u64,
    pub reason: String,
}

/// Outcome of [`verify_cover`] and/or [`spot_check`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub valid: bool,
    pub intervals_checked: u64,
    pub first_failure: Option<Failure>,
    pub spot_pass: u64,
    pub spot_fail: u64,
}

impl VerifyReport {
    fn fail(intervals_checked: u64, line: u64, reason: String) -> VerifyReport {
        VerifyReport {
            valid: false,
            intervals_checked,
            first_failure: Some(Failure { line, reason }),
            ..VerifyReport::default()
        }
    }

    /// Total failed checks (chain and spot together).
    pub fn failures(&self) -> u64 {
        u64::from(!self.valid && self.spot_fail == 0) + self.spot_fail
    }

    /// Machine-readable one-liner.
    pub fn summary(&self) -> String {
        format!(
            "VERIFY ok={} intervals={} failures={}",
            self.valid,
            self.intervals_checked,
            self.failures()
        )
    }
}

/// Verify the chain invariants of a certificate stream claiming to cover
/// `[target, start]` for the given `p` and `E`.
///
/// Syntactically malformed input and a header that contradicts `p`/`E` are
/// errors; a well-formed certificate that fails a check yields
/// `Ok(report)` with `valid = false` and the first offending line.
pub fn verify_cover<R: BufRead>(input: R, p: u64, e: u64) -> Result<VerifyReport> {
    let reader = CertificateReader::new(input)?;
    let header = reader.header().clone();
    if header.p != p || header.e != e {
        return Err(Error::HeaderMismatch(format!(
            "certificate is for p={} E={}, asked to verify p={p} E={e}",
            header.p, header.e
        )));
    }

    let mut checked = 0u64;
    let mut prev_left: Option<Fraction> = None;
    let mut end_count: Option<u64> = None;
    let mut last_line = 1u64;

    for item in reader {
        let (line, record) = item?;
        last_line = line;
        match record {
            Record::Interval(interval) => {
                if let Err(err) = interval.validate(p) {
                    return Ok(VerifyReport::fail(checked, line, format!("params: {err}")));
                }
                let (left, right) = interval.endpoints(p, e)?;
                match &prev_left {
                    None => {
                        if right < header.start {
                            return Ok(VerifyReport::fail(
                                checked,
                                line,
                                format!(
                                    "chain: first interval ends at {} short of start {}",
                                    fraction_str(&right),
                                    fraction_str(&header.start)
                                ),
                            ));
                        }
                    }
                    Some(prev) => {
                        if right < *prev {
                            return Ok(VerifyReport::fail(
                                checked,
                                line,
                                format!(
                                    "chain: gap before this interval (needs right >= {}, has {})",
                                    fraction_str(prev),
                                    fraction_str(&right)
                                ),
                            ));
                        }
                        if left >= *prev {
                            return Ok(VerifyReport::fail(
                                checked,
                                line,
                                format!(
                                    "chain: no progress (left {} does not go below {})",
                                    fraction_str(&left),
                                    fraction_str(prev)
                                ),
                            ));
                        }
                    }
                }
                checked += 1;
                prev_left = Some(left);
            }
            Record::End { count } => end_count = Some(count),
        }
    }

    match end_count {
        None => {
            return Ok(VerifyReport::fail(
                checked,
                last_line,
                "truncated: missing END line".into(),
            ))
        }
        Some(count) if count != checked => {
            return Ok(VerifyReport::fail(
                checked,
                last_line,
                format!("END claims {count} intervals, found {checked}"),
            ))
        }
        Some(_) => {}
    }

    match prev_left {
        None => Ok(VerifyReport::fail(
            checked,
            last_line,
            "certificate contains no intervals".into(),
        )),
        Some(left) if left > header.target => Ok(VerifyReport::fail(
            checked,
            last_line,
            format!(
                "chain: cover stops at {} above target {}",
                fraction_str(&left),
                fraction_str(&header.target)
            ),
        )),
        Some(_) => Ok(VerifyReport {
            valid: true,
            intervals_checked: checked,
            ..VerifyReport::default()
        }),
    }
}

/// Exact minimum of `q * |q|_p * ||q x||` over `1 <= q <= q_max`, together
/// with the smallest `q` attaining it.
pub fn oracle_min(x: &Fraction, q_max: u64, p: u64) -> Result<(Fraction, u64)> {
    if q_max < 1 {
        return Err(Error::InvalidParam("Q must be at least 1".into()));
    }
    let mut best: Option<(Fraction, u64)> = None;
    for q in 1..=q_max {
        let mut q_star = q;
        while q_star % p == 0 {
            q_star /= p;
        }
        let qx = x * BigInt::from(q);
        let term = dist_to_nearest_int(&qx) * BigInt::from(q_star);
        let better = best.as_ref().is_none_or(|(cur, _)| term < *cur);
        if better {
            let zero = term.is_zero();
            best = Some((term, q));
            if zero {
                break; // cannot improve on an exact hit
            }
        }
    }
    Ok(best.expect("q_max >= 1"))
}

fn one_half() -> Fraction {
    Fraction::new(BigInt::one(), BigInt::from(2))
}

/// Deterministic interior sample: `left + (right - left) * u` with a dyadic
/// `u` strictly inside `(0, 1)` drawn from the per-interval stream.
fn interior_sample(rng: &mut ChaCha8Rng, left: &Fraction, right: &Fraction) -> Fraction {
    const DEN: u64 = 1 << 24;
    let num = rng.next_u64() % (DEN - 1) + 1;
    let u = Fraction::new(BigInt::from(num), BigInt::from(DEN));
    left + (right - left) * u
}

/// Sample `m` interior points of every interval in the certificate and
/// re-check the defining property of its family with exact arithmetic:
///
/// * type-1: `||p^n x|| < ||x||` (samples clamped into `(0, 1/2)`);
/// * type-2: `d ||p^n d x|| < 1/E`, the witness `q = p^n d` in person.
///
/// Sampling is reproducible: the same certificate, `m` and `seed` give the
/// identical report. Stream `i + 1` of the generator is dedicated to the
/// `i`-th interval, so reports do not depend on traversal order.
pub fn spot_check<R: BufRead>(input: R, p: u64, e: u64, m: u64, seed: u64) -> Result<VerifyReport> {
    let reader = CertificateReader::new(input)?;
    let header = reader.header().clone();
    if header.p != p || header.e != e {
        return Err(Error::HeaderMismatch(format!(
            "certificate is for p={} E={}, asked to check p={p} E={e}",
            header.p, header.e
        )));
    }
    let threshold = Fraction::new(BigInt::one(), BigInt::from(e));

    let mut report = VerifyReport {
        valid: true,
        ..VerifyReport::default()
    };
    let mut index = 0u64;
    for item in reader {
        let (line, record) = item?;
        let interval = match record {
            Record::Interval(interval) => interval,
            Record::End { .. } => continue,
        };
        index += 1;
        let fail = |report: &mut VerifyReport, reason: String| {
            report.spot_fail += 1;
            report.valid = false;
            if report.first_failure.is_none() {
                report.first_failure = Some(Failure { line, reason });
            }
        };
        if let Err(err) = interval.validate(p) {
            fail(&mut report, format!("params: {err}"));
            continue;
        }
        let (left, right) = interval.endpoints(p, e)?;
        let right = if interval.is_type1() {
            // the family's property lives in (0, 1/2); covers may overshoot
            right.min(one_half())
        } else {
            right
        };
        if left >= right {
            continue; // no interior to sample in range
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        for _ in 0..m {
            let x = interior_sample(&mut rng, &left, &right);
            let ok = match &interval {
                CoverInterval::Type1 { n, .. } => {
                    let pn = BigInt::from(BigUint::from(p).pow(*n));
                    dist_to_nearest_int(&(&x * pn)) < dist_to_nearest_int(&x)
                }
                CoverInterval::Type2 { d, n, .. } => {
                    let q = BigInt::from(BigUint::from(p).pow(*n) * d);
                    dist_to_nearest_int(&(&x * q)) * BigInt::from(d.clone()) < threshold
                }
            };
            if ok {
                report.spot_pass += 1;
            } else {
                fail(
                    &mut report,
                    format!("witness check failed for {interval} at x = {}", fraction_str(&x)),
                );
            }
        }
    }
    report.intervals_checked = index;
    Ok(report)
}
