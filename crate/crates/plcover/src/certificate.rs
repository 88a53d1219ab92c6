//! The certificate file format.
//!
//! A certificate is a line-oriented text file listing a cover right to left:
//!
//! ```text
//! PLCCOVER v1 p=2 E=8 start=1/2 target=0/1
//! T1 1 1
//! T1 1 2
//! ...
//! T2 0 1 0
//! END count=29
//! ```
//!
//! All integers are decimal and unbounded; fractions are always written
//! `num/den`. The format is deterministic: the same build parameters produce
//! byte-identical files.

use std::io::{BufRead, Write};

use crate::arith::{fraction_str, parse_fraction, Fraction};
use crate::error::{Error, Result};
use crate::intervals::CoverInterval;

pub const CERT_MAGIC: &str = "PLCCOVER v1";

/// Parameters a certificate claims to certify.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub p: u64,
    pub e: u64,
    pub start: Fraction,
    pub target: Fraction,
}

pub(crate) fn kv<'a>(token: Option<&'a str>, key: &str) -> Result<&'a str> {
    let token = token.ok_or_else(|| Error::InvalidParam(format!("missing field {key}=")))?;
    token
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| Error::InvalidParam(format!("expected {key}=..., got {token:?}")))
}

impl Header {
    pub fn to_line(&self) -> String {
        format!(
            "{CERT_MAGIC} p={} E={} start={} target={}",
            self.p,
            self.e,
            fraction_str(&self.start),
            fraction_str(&self.target)
        )
    }

    pub fn parse(line: &str) -> Result<Header> {
        let rest = line
            .strip_prefix(CERT_MAGIC)
            .ok_or_else(|| Error::InvalidParam(format!("not a {CERT_MAGIC} header")))?;
        let mut tokens = rest.split_ascii_whitespace();
        let p = kv(tokens.next(), "p")?
            .parse()
            .map_err(|_| Error::InvalidParam("bad p".into()))?;
        let e = kv(tokens.next(), "E")?
            .parse()
            .map_err(|_| Error::InvalidParam("bad E".into()))?;
        let start = parse_fraction(kv(tokens.next(), "start")?)?;
        let target = parse_fraction(kv(tokens.next(), "target")?)?;
        if let Some(extra) = tokens.next() {
            return Err(Error::InvalidParam(format!(
                "unexpected header field {extra:?}"
            )));
        }
        Ok(Header {
            p,
            e,
            start,
            target,
        })
    }
}

/// Streaming certificate writer. Lines are flushed through an internal
/// count so the `END count=N` trailer is always consistent with what was
/// written.
pub struct CertificateWriter<W: Write> {
    out: W,
    count: u64,
}

impl<W: Write> CertificateWriter<W> {
    /// Start a fresh certificate: writes the header line.
    pub fn new(mut out: W, header: &Header) -> Result<Self> {
        writeln!(out, "{}", header.to_line())?;
        Ok(CertificateWriter { out, count: 0 })
    }

    /// Continue an interrupted certificate whose header and first
    /// `already_emitted` interval lines are already on disk.
    pub fn resume(out: W, already_emitted: u64) -> Self {
        CertificateWriter {
            out,
            count: already_emitted,
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn emit(&mut self, interval: &CoverInterval) -> Result<()> {
        writeln!(self.out, "{}", interval.to_line())?;
        self.count += 1;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }

    /// Write the `END count=N` trailer and hand back the underlying writer.
    pub fn finish(mut self) -> Result<W> {
        writeln!(self.out, "END count={}", self.count)?;
        self.out.flush()?;
        Ok(self.out)
    }
}

/// One parsed certificate line after the header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Record {
    Interval(CoverInterval),
    End { count: u64 },
}

/// Streaming certificate parser: reads the header eagerly, then yields one
/// `Record` per line together with its 1-based line number. Content after
/// the `END` trailer is an error.
pub struct CertificateReader<R: BufRead> {
    input: R,
    header: Header,
    line_no: u64,
    saw_end: bool,
}

impl<R: BufRead> CertificateReader<R> {
    pub fn new(mut input: R) -> Result<Self> {
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            return Err(Error::Malformed {
                line: 1,
                msg: "empty file".into(),
            });
        }
        let header = Header::parse(line.trim_end_matches('\n')).map_err(|err| match err {
            Error::InvalidParam(msg) => Error::Malformed { line: 1, msg },
            other => other,
        })?;
        Ok(CertificateReader {
            input,
            header,
            line_no: 1,
            saw_end: false,
        })
    }

    pub fn header(&self) -> &Header {
        &self.header
    }

    fn parse_record(&self, line: &str) -> Result<Record> {
        if let Some(rest) = line.strip_prefix("END") {
            let mut tokens = rest.split_ascii_whitespace();
            let count = kv(tokens.next(), "count")?
                .parse()
                .map_err(|_| Error::InvalidParam("bad count".into()))?;
            if tokens.next().is_some() {
                return Err(Error::InvalidParam("trailing fields after END".into()));
            }
            return Ok(Record::End { count });
        }
        Ok(Record::Interval(CoverInterval::parse_line(line)?))
    }
}

impl<R: BufRead> Iterator for CertificateReader<R> {
    type Item = Result<(u64, Record)>;

    fn next(&mut self) -> Option<Self::Item> {
        let mut line = String::new();
        match self.input.read_line(&mut line) {
            Ok(0) => None,
            Ok(_) => {
                self.line_no += 1;
                let line_no = self.line_no;
                if self.saw_end {
                    return Some(Err(Error::Malformed {
                        line: line_no,
                        msg: "content after END".into(),
                    }));
                }
                let record = self.parse_record(line.trim_end_matches('\n'));
                match record {
                    Ok(record) => {
                        if matches!(record, Record::End { .. }) {
                            self.saw_end = true;
                        }
                        Some(Ok((line_no, record)))
                    }
                    Err(Error::InvalidParam(msg)) => {
                        Some(Err(Error::Malformed { line: line_no, msg }))
                    }
                    Err(other) => Some(Err(other)),
                }
            }
            Err(err) => Some(Err(err.into())),
        }
    }
}
