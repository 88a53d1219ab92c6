//! Exact integer and rational primitives: distance to the nearest integer,
//! p-adic absolute value, incremental modular stepping, continued fractions
//! and their convergents.
//!
//! Everything here is arbitrary precision and exact. No floating point is
//! used anywhere on the certification path: a cover certificate is a
//! mathematical claim and rounding would invalidate it.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in reduced form with a positive
/// denominator. Walk points, interval endpoints and oracle values are all
/// `Fraction`s.
pub type Fraction = num_rational::BigRational;

/// Parse a fraction from the text forms `"a/b"` or `"a"`.
///
/// A zero or negative denominator is rejected; non-reduced input is reduced
/// silently.
pub fn parse_fraction(s: &str) -> Result<Fraction> {
    let bad = |msg: &str| Error::InvalidParam(format!("cannot parse fraction {s:?}: {msg}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("bad numerator"))?;
    let den: BigInt = den.parse().map_err(|_| bad("bad denominator"))?;
    if den.is_zero() {
        return Err(bad("denominator is zero"));
    }
    if den.is_negative() {
        return Err(bad("denominator must be positive"));
    }
    Ok(Fraction::new(num, den))
}

/// Canonical `"num/den"` text form, with the denominator always written out
/// (`0` prints as `"0/1"`). This is the form used in certificate and
/// checkpoint files.
pub fn fraction_str(x: &Fraction) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Split a non-negative fraction into (numerator, denominator) magnitudes.
pub(crate) fn fraction_parts(x: &Fraction) -> (BigUint, BigUint) {
    debug_assert!(!x.numer().is_negative());
    (
        x.numer().magnitude().clone(),
        x.denom().magnitude().clone(),
    )
}

/// Distance from `x` to the nearest integer, as an exact fraction in
/// `[0, 1/2]`.
pub fn dist_to_nearest_int(x: &Fraction) -> Fraction {
    let den = x.denom();
    let r = x.numer().mod_floor(den);
    let complement = den - &r;
    let nearest = if r <= complement { r } else { complement };
    Fraction::new(nearest, den.clone())
}

/// The p-adic absolute value `1/p^v` of a positive integer, where `p^v` is
/// the exact power of `p` dividing `q`. Rejects `q = 0`.
pub fn padic_abs(q: &BigUint, p: u64) -> Result<Fraction> {
    if q.is_zero() {
        return Err(Error::InvalidParam(
            "p-adic absolute value of 0 is undefined here".into(),
        ));
    }
    let (v, _) = factor_out_p(q, p);
    Ok(Fraction::new(
        BigInt::one(),
        BigInt::from(BigUint::from(p).pow(v)),
    ))
}

/// One multiplicative step of the orbit valuation: `(p * a_n) mod b`.
///
/// Iterating from `a` yields `p^n * a mod b` without ever recomputing a
/// power of `p`.
pub fn step_mod(a_n: &BigUint, p: u64, b: &BigUint) -> BigUint {
    (a_n * p) % b
}

/// Write `d = p^k * d_star` with `gcd(d_star, p) = 1`; returns `(k, d_star)`.
pub fn factor_out_p(d: &BigUint, p: u64) -> (u32, BigUint) {
    assert!(!d.is_zero(), "cannot factor p out of 0");
    let p = BigUint::from(p);
    let mut rest = d.clone();
    let mut k = 0u32;
    loop {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return (k, rest);
        }
        rest = q;
        k += 1;
    }
}

/// Deterministic primality test by trial division; plenty for the small
/// primes this tool is pointed at.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Canonical continued fraction expansion `[a0; a1, a2, ...]` of a
/// non-negative rational.
///
/// The expansion comes straight out of the Euclidean algorithm, so it is the
/// canonical one: every partial quotient after the first is at least 1, and
/// the last is at least 2 whenever there is more than one term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialQuotients {
    terms: Vec<BigUint>,
}

impl PartialQuotients {
    pub fn terms(&self) -> &[BigUint] {
        &self.terms
    }

    /// All convergents `c_k/d_k`, in order, each in lowest terms.
    /// Denominators are strictly increasing after the first two entries.
    pub fn convergents(&self) -> impl Iterator<Item = Fraction> + '_ {
        RawConvergents::new(self.terms.iter().cloned())
            .map(|(c, d)| Fraction::new(BigInt::from(c), BigInt::from(d)))
    }

    /// Rebuild the exact fraction the expansion came from.
    pub fn reconstruct(&self) -> Fraction {
        self.convergents()
            .last()
            .expect("expansion always has at least one term")
    }
}

impl std::fmt::Display for PartialQuotients {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}", self.terms[0])?;
        for (i, t) in self.terms.iter().enumerate().skip(1) {
            write!(f, "{}{}", if i == 1 { ";" } else { "," }, t)?;
        }
        write!(f, "]")
    }
}

/// Continued fraction expansion of a non-negative fraction.
pub fn continued_fraction(x: &Fraction) -> PartialQuotients {
    assert!(
        !x.numer().is_negative(),
        "continued fractions are only taken of non-negative values here"
    );
    let (num, den) = fraction_parts(x);
    let terms: Vec<BigUint> = EuclidTerms { num, den }.collect();
    PartialQuotients { terms }
}

/// Lazily yields the partial quotients of `num/den` (which need not be
/// reduced: common factors do not change the quotient sequence).
pub(crate) struct EuclidTerms {
    num: BigUint,
    den: BigUint,
}

impl Iterator for EuclidTerms {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        if self.den.is_zero() {
            return None;
        }
        let (q, r) = self.num.div_rem(&self.den);
        self.num = std::mem::replace(&mut self.den, r);
        Some(q)
    }
}

/// Convergent recurrence `c_k = a_k c_{k-1} + c_{k-2}` (same for `d`),
/// driven by any iterator of partial quotients. Pairs come out already in
/// lowest terms. Lazy so that a consumer can stop as soon as a denominator
/// bound is exceeded.
pub(crate) struct RawConvergents<I> {
    terms: I,
    c: (BigUint, BigUint), // (c_{k-2}, c_{k-1})
    d: (BigUint, BigUint), // (d_{k-2}, d_{k-1})
}

impl<I> RawConvergents<I> {
    pub(crate) fn new(terms: I) -> Self {
        RawConvergents {
            terms,
            c: (BigUint::zero(), BigUint::one()),
            d: (BigUint::one(), BigUint::zero()),
        }
    }
}

impl<I: Iterator<Item = BigUint>> Iterator for RawConvergents<I> {
    type Item = (BigUint, BigUint);

    fn next(&mut self) -> Option<(BigUint, BigUint)> {
        let a = self.terms.next()?;
        let c_next = &a * &self.c.1 + &self.c.0;
        let d_next = &a * &self.d.1 + &self.d.0;
        self.c = (std::mem::replace(&mut self.c.1, c_next.clone()), c_next);
        self.d = (std::mem::replace(&mut self.d.1, d_next.clone()), d_next);
        Some((self.c.1.clone(), self.d.1.clone()))
    }
}

/// Convergents of `num/den` without materializing the expansion first.
pub(crate) fn raw_convergents(
    num: BigUint,
    den: BigUint,
) -> RawConvergents<EuclidTerms> {
    RawConvergents::new(EuclidTerms { num, den })
}
