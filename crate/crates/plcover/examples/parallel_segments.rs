//! Build the same cover serially and in parallel segments, and show that
//! segmentation only ever adds a bounded number of seam intervals.
//!
//! ```bash
//! cargo run --release --example parallel_segments
//! ```

use plcover::{
    build_cover, build_cover_parallel, fraction_str, one_half, segment_bounds, zero, SearchConfig,
};

fn main() -> plcover::Result<()> {
    let cfg = SearchConfig::with_defaults(2, 11)?;

    let mut serial = Vec::new();
    build_cover(&cfg, one_half(), zero(), &mut serial)?;
    println!("serial build: {} intervals", serial.len());

    for segments in [2usize, 4, 8] {
        let bounds = segment_bounds(segments);
        let pretty: Vec<String> = bounds.iter().map(fraction_str).collect();
        let mut parallel = Vec::new();
        let cover = build_cover_parallel(&cfg, segments, &mut parallel)?;
        let extra = parallel.len() - serial.len();
        println!(
            "{segments} segments (bounds {}): {} intervals, +{extra} at seams, {:?}",
            pretty.join(" > "),
            parallel.len(),
            cover.stats.elapsed
        );
        assert!(extra < segments, "at most one extra interval per seam");
        // the serial cover survives inside the stitched one
        let mut it = parallel.iter();
        for interval in &serial {
            assert!(it.any(|p| p == interval), "serial interval lost in stitching");
        }
    }
    println!("every serial interval appears in every stitched cover, in order");
    Ok(())
}
