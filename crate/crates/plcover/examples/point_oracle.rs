//! Evaluate the quantity the certificates are about at individual points:
//! min over 1 <= q <= Q of q * |q|_p * ||q x||, by exact brute force.
//!
//! ```bash
//! cargo run --example point_oracle
//! ```

use plcover::{oracle_min, parse_fraction, CoverInterval};

fn main() -> plcover::Result<()> {
    for (x, q_max) in [("5/7", 4u64), ("45/257", 64), ("1/2", 2), ("257/512", 512)] {
        let point = parse_fraction(x)?;
        let (min, q) = oracle_min(&point, q_max, 2)?;
        println!("min over q <= {q_max:>3} at x = {x:>8}: {min} (witness q = {q})");
    }

    // a type-2 interval carries its witness in its parameters: q = p^n d
    let interval = CoverInterval::type2(7u32, 5u32, 3);
    let (lo, hi) = interval.endpoints(2, 8)?;
    let center = (&lo + &hi) / plcover::Fraction::from(num_bigint::BigInt::from(2));
    let (min, q) = oracle_min(&center, 40, 2)?;
    println!("\ncenter of {interval} is annihilated: min = {min} at q = {q} (= 2^3 * 5)");
    Ok(())
}
