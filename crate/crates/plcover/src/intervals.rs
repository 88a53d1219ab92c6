//! The two families of covering intervals and their exact geometry.
//!
//! For a prime `p` and threshold `1/E`:
//!
//! * a type-1 interval `I1(c, n)` is `(c/(p^n + 1), c/(p^n - 1))`. Any
//!   `x` strictly inside with `0 < x < 1/2` satisfies
//!   `||p^n x|| = |p^n x - c| < x = ||x||`, so multiplying by `p` eventually
//!   pushes `x` closer to an integer than it started;
//! * a type-2 interval `I2(c, d, n)` is
//!   `((cdE - 1)/(E p^n d^2), (cdE + 1)/(E p^n d^2))`. Any `x` inside admits
//!   the witness `q = p^n d` with `q |q|_p ||qx|| = d ||p^n d x|| < 1/E`.
//!
//! Certificates only ever store type-2 intervals in normalized form, i.e.
//! with `gcd(d, p) = 1`: any power of `p` dividing `d` is moved into `n`,
//! which can only widen the interval.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::Fraction;
use crate::error::{Error, Result};

/// One interval of a cover, tagged by family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoverInterval {
    Type1 { c: BigUint, n: u32 },
    Type2 { c: BigUint, d: BigUint, n: u32 },
}

/// Integer proxy for the reciprocal length of an interval: `p^n` for type-1
/// and `E p^n d^2` for type-2 (the latter is exactly `2/|I|` scaled).
/// Candidate intervals are compared through it; smaller bound, longer
/// interval.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SizeBound(pub BigUint);

impl std::fmt::Display for SizeBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

fn check_e(e: u64) -> Result<()> {
    if e < 3 {
        return Err(Error::InvalidParam(format!(
            "E must be at least 3 (threshold below 1/2), got {e}"
        )));
    }
    Ok(())
}

impl CoverInterval {
    pub fn type1(c: impl Into<BigUint>, n: u32) -> Self {
        CoverInterval::Type1 { c: c.into(), n }
    }

    pub fn type2(c: impl Into<BigUint>, d: impl Into<BigUint>, n: u32) -> Self {
        CoverInterval::Type2 {
            c: c.into(),
            d: d.into(),
            n,
        }
    }

    pub fn is_type1(&self) -> bool {
        matches!(self, CoverInterval::Type1 { .. })
    }

    /// Check the parameter invariants of the family: `c >= 1`, `n >= 1` for
    /// type-1; `d >= 1`, `gcd(d, p) = 1` and `gcd(c, d) = 1` for type-2.
    pub fn validate(&self, p: u64) -> Result<()> {
        match self {
            CoverInterval::Type1 { c, n } => {
                if c.is_zero() {
                    return Err(Error::InvalidParam("type-1 interval needs c >= 1".into()));
                }
                if *n == 0 {
                    return Err(Error::InvalidParam("type-1 interval needs n >= 1".into()));
                }
            }
            CoverInterval::Type2 { c, d, .. } => {
                if d.is_zero() {
                    return Err(Error::InvalidParam("type-2 interval needs d >= 1".into()));
                }
                if (d % p).is_zero() {
                    return Err(Error::InvalidParam(format!(
                        "type-2 interval not normalized: {p} divides d = {d}"
                    )));
                }
                if c.gcd(d) != BigUint::one() {
                    return Err(Error::InvalidParam(format!(
                        "type-2 interval needs gcd(c, d) = 1, got c = {c}, d = {d}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Unreduced endpoint cross-multiplication data: (num, den) for each end,
    /// denominators positive.
    fn endpoint_parts(&self, p: u64, e: u64) -> (BigInt, BigInt, BigInt, BigInt) {
        match self {
            CoverInterval::Type1 { c, n } => {
                let pn = BigInt::from(BigUint::from(p).pow(*n));
                let c = BigInt::from(c.clone());
                (c.clone(), &pn + 1, c, &pn - 1)
            }
            CoverInterval::Type2 { c, d, n } => {
                let den = BigInt::from(BigUint::from(p).pow(*n) * d * d * e);
                let center = BigInt::from(c * d * e);
                (&center - 1, den.clone(), &center + 1, den)
            }
        }
    }

    /// Exact endpoints, reduced. The left endpoint can be negative (only for
    /// type-2 intervals with `c = 0`, which close off the walk at zero).
    pub fn endpoints(&self, p: u64, e: u64) -> Result<(Fraction, Fraction)> {
        check_e(e)?;
        let (ln, ld, rn, rd) = self.endpoint_parts(p, e);
        Ok((Fraction::new(ln, ld), Fraction::new(rn, rd)))
    }

    /// The reciprocal-length proxy `S`.
    pub fn size_bound(&self, p: u64, e: u64) -> SizeBound {
        match self {
            CoverInterval::Type1 { n, .. } => SizeBound(BigUint::from(p).pow(*n)),
            CoverInterval::Type2 { d, n, .. } => {
                SizeBound(BigUint::from(p).pow(*n) * d * d * e)
            }
        }
    }

    /// Membership with progress: `left < x <= right`, by exact
    /// cross-multiplication. The left endpoint is deliberately excluded so
    /// that stepping to it always moves the walk strictly leftward; the right
    /// endpoint is allowed because interval closures remain valid covers.
    pub fn contains_with_progress(&self, x: &Fraction, p: u64, e: u64) -> Result<bool> {
        check_e(e)?;
        let (ln, ld, rn, rd) = self.endpoint_parts(p, e);
        let (xn, xd) = (x.numer(), x.denom());
        Ok(&ln * xd < xn * &ld && xn * &rd <= &rn * xd)
    }

    /// Canonical certificate line: `"T1 <c> <n>"` or `"T2 <c> <d> <n>"`.
    pub fn to_line(&self) -> String {
        match self {
            CoverInterval::Type1 { c, n } => format!("T1 {c} {n}"),
            CoverInterval::Type2 { c, d, n } => format!("T2 {c} {d} {n}"),
        }
    }

    /// Parse the canonical certificate line form.
    pub fn parse_line(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidParam(format!("bad interval line {s:?}: {msg}"));
        let mut parts = s.split_ascii_whitespace();
        let tag = parts.next().ok_or_else(|| bad("empty line"))?;
        let mut int = |name: &str| -> Result<BigUint> {
            parts
                .next()
                .ok_or_else(|| bad(&format!("missing {name}")))?
                .parse::<BigUint>()
                .map_err(|_| bad(&format!("bad {name}")))
        };
        let iv = match tag {
            "T1" => {
                let c = int("c")?;
                let n = int("n")?;
                CoverInterval::Type1 {
                    c,
                    n: u32::try_from(&n).map_err(|_| bad("n out of range"))?,
                }
            }
            "T2" => {
                let c = int("c")?;
                let d = int("d")?;
                let n = int("n")?;
                CoverInterval::Type2 {
                    c,
                    d,
                    n: u32::try_from(&n).map_err(|_| bad("n out of range"))?,
                }
            }
            _ => return Err(bad("unknown tag")),
        };
        if parts.next().is_some() {
            return Err(bad("trailing fields"));
        }
        Ok(iv)
    }
}

impl std::fmt::Display for CoverInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoverInterval::Type1 { c, n } => write!(f, "I1({c},{n})"),
            CoverInterval::Type2 { c, d, n } => write!(f, "I2({c},{d},{n})"),
        }
    }
}
