//! The exact-arithmetic primitives underneath the search: continued
//! fractions, convergents, the distance to the nearest integer, and p-adic
//! valuations.
//!
//! ```bash
//! cargo run --example continued_fractions
//! ```

use num_bigint::BigUint;
use num_traits::Signed;
use plcover::{
    continued_fraction, dist_to_nearest_int, factor_out_p, fraction_str, padic_abs,
    parse_fraction,
};

fn main() -> plcover::Result<()> {
    for s in ["45/257", "90/257", "355/113"] {
        let x = parse_fraction(s)?;
        let cf = continued_fraction(&x);
        println!("{s} = {cf}");
        for (k, convergent) in cf.convergents().enumerate() {
            let err = (&x - &convergent).abs();
            println!(
                "  convergent {k}: {:<8} off by {}",
                fraction_str(&convergent),
                fraction_str(&err)
            );
        }
    }

    println!();
    for s in ["10/7", "45/257", "7/2"] {
        let x = parse_fraction(s)?;
        println!("||{s}|| = {}", fraction_str(&dist_to_nearest_int(&x)));
    }

    println!();
    for q in [8u32, 12, 45, 96] {
        let q = BigUint::from(q);
        let (k, rest) = factor_out_p(&q, 2);
        println!(
            "{q} = 2^{k} * {rest},  |{q}|_2 = {}",
            fraction_str(&padic_abs(&q, 2)?)
        );
    }
    Ok(())
}
