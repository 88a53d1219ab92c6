//! Exact-arithmetic covering certificates for the p-adic Littlewood
//! inequality.
//!
//! For a prime `p` and a threshold `1/E`, every real `x` that satisfies
//! `liminf q * |q|_p * ||q x|| >= 1/E` would have to generate, under
//! repeated multiplication by `p`, an orbit point that is never pushed
//! closer to an integer (a "bottom" point of `||.||`) and that evades the
//! witness inequality at every scale. Covering `[0, 1/2]` by
//!
//! * type-1 intervals `(c/(p^n + 1), c/(p^n - 1))`, whose interior points
//!   are demonstrably not bottom points, and
//! * type-2 intervals `((cdE - 1)/(E p^n d^2), (cdE + 1)/(E p^n d^2))`,
//!   whose interior points have the explicit witness `q = p^n d`,
//!
//! rules such a point out entirely: the inequality
//! `liminf q * |q|_p * ||q x|| < 1/E` then holds for every real `x`. This
//! crate builds such covers by a deterministic greedy walk from `1/2` down
//! to `0`, writes them as plain-text certificates, and re-verifies the
//! certificates with an independent exact checker.
//!
//! Everything on the certification path is integer or rational arithmetic
//! of unbounded precision; no floating point is involved anywhere.
//!
//! ```
//! use plcover::{build_cover, one_half, zero, verify_cover, SearchConfig};
//! use plcover::certificate::{CertificateWriter, Header};
//!
//! let cfg = SearchConfig::with_defaults(2, 8).unwrap();
//! let header = Header { p: 2, e: 8, start: one_half(), target: zero() };
//! let mut writer = CertificateWriter::new(Vec::new(), &header).unwrap();
//! let cover = build_cover(&cfg, one_half(), zero(), &mut writer).unwrap();
//! assert_eq!(cover.stats.intervals, 29);
//!
//! let bytes = writer.finish().unwrap();
//! let report = verify_cover(bytes.as_slice(), 2, 8).unwrap();
//! assert!(report.valid);
//! ```

pub mod arith;
pub mod certificate;
pub mod cli;
pub mod cover;
mod error;
pub mod intervals;
pub mod search;
pub mod verify;

pub use arith::{
    continued_fraction, dist_to_nearest_int, factor_out_p, fraction_str, is_prime, padic_abs,
    parse_fraction, step_mod, Fraction, PartialQuotients,
};
pub use cover::{
    build_cover, build_cover_parallel, one_half, segment_bounds, zero, Checkpoint, Cover,
    CoverStats, IntervalSink, Walk,
};
pub use error::{Error, Result};
pub use intervals::{CoverInterval, SizeBound};
pub use search::{find_best_type2, find_type1, next_interval, Candidate, SearchConfig};
pub use verify::{oracle_min, spot_check, verify_cover, VerifyReport};
