//! Interrupt a build at a checkpoint and resume it: the result is
//! byte-identical to an uninterrupted run because every step is a pure
//! function of the current walk point.
//!
//! ```bash
//! cargo run --example checkpoint_resume
//! ```

use plcover::certificate::{CertificateWriter, Header};
use plcover::{fraction_str, one_half, zero, Checkpoint, SearchConfig, Walk};

fn main() -> plcover::Result<()> {
    let cfg = SearchConfig::with_defaults(2, 12)?;
    let header = Header {
        p: cfg.p,
        e: cfg.e,
        start: one_half(),
        target: zero(),
    };

    // the uninterrupted run
    let mut writer = CertificateWriter::new(Vec::new(), &header)?;
    for step in Walk::new(&cfg, one_half(), zero())? {
        writer.emit(&step?.interval)?;
    }
    let uninterrupted = writer.finish()?;

    // the same run, "killed" after 300 intervals
    let mut writer = CertificateWriter::new(Vec::new(), &header)?;
    let mut walk = Walk::new(&cfg, one_half(), zero())?;
    for _ in 0..300 {
        let cand = walk.next().expect("walk is longer than 300")?;
        writer.emit(&cand.interval)?;
    }
    let checkpoint = Checkpoint {
        p: cfg.p,
        e: cfg.e,
        point: walk.point().clone(),
        count: walk.emitted(),
        segment: 0,
    };
    let dir = tempfile::tempdir()?;
    let ckpt_path = dir.path().join("walk.ckpt");
    checkpoint.save(&ckpt_path)?;
    println!("interrupted after {} intervals:", checkpoint.count);
    println!("  checkpoint: {}", checkpoint.to_line());
    drop(walk);

    // ...possibly much later, in another process...
    let restored = Checkpoint::load(&ckpt_path)?;
    println!("  restored point {}", fraction_str(&restored.point));
    for step in Walk::resume(&cfg, &restored, zero())? {
        writer.emit(&step?.interval)?;
    }
    let resumed = writer.finish()?;

    assert_eq!(uninterrupted, resumed);
    println!(
        "resumed certificate is byte-identical to the uninterrupted one ({} bytes, {} intervals)",
        resumed.len(),
        uninterrupted
            .split(|&b| b == b'\n')
            .filter(|l| l.starts_with(b"T"))
            .count()
    );
    Ok(())
}
