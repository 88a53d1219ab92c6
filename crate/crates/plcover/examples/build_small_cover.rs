//! Build the smallest interesting cover (p = 2, threshold 1/8) in memory and
//! print every interval with its endpoints and size bound.
//!
//! ```bash
//! cargo run --example build_small_cover
//! ```

use plcover::{build_cover, fraction_str, one_half, zero, SearchConfig};

fn main() -> plcover::Result<()> {
    let cfg = SearchConfig::with_defaults(2, 8)?;
    let mut intervals = Vec::new();
    let cover = build_cover(&cfg, one_half(), zero(), &mut intervals)?;

    println!("cover of [0, 1/2] for p = {}, threshold 1/{}:\n", cfg.p, cfg.e);
    for (i, interval) in intervals.iter().enumerate() {
        let (lo, hi) = interval.endpoints(cfg.p, cfg.e)?;
        println!(
            "{:>3}. {:<16} S = {:<8} [{}, {}]",
            i + 1,
            interval.to_string(),
            interval.size_bound(cfg.p, cfg.e).to_string(),
            fraction_str(&lo),
            fraction_str(&hi),
        );
    }
    println!(
        "\n{} intervals ({} type-1, {} type-2), built in {:?}",
        cover.stats.intervals, cover.stats.type1, cover.stats.type2, cover.stats.elapsed
    );
    println!("final point: {}", fraction_str(&cover.final_point));
    Ok(())
}
