//! Batch-verify the shipped catalog: every base-block specification is
//! developed into its full design, checked against the pair-coverage axioms,
//! counted against the expected block count and compared with its compact
//! signature and pinned digest.
//!
//! ```bash
//! cargo run --release -p gdd --example catalog_sweep
//! ```

use gdd::catalog::{self, Catalog};

fn main() -> gdd::Result<()> {
    let cat = Catalog::open_default()?;
    println!("catalog at {}: {} entries\n", cat.dir.display(), cat.len());

    let summary = catalog::verify_all(&cat);
    println!(
        "{:<16} {:<12} {:>7}  {:<6} {:<12} digest",
        "name", "type", "blocks", "check", "signature"
    );
    for entry in &summary.entries {
        println!(
            "{:<16} {:<12} {:>7}  {:<6} {:<12} {}",
            entry.name,
            entry.group_type,
            entry.blocks,
            if entry.problems.is_empty() {
                "ok"
            } else {
                "FAIL"
            },
            match entry.signature_ok {
                Some(true) => "matches",
                Some(false) => "MISMATCH",
                None => "none",
            },
            &entry.digest[..16],
        );
        for p in &entry.problems {
            println!("    {p}");
        }
    }
    for w in &summary.warnings {
        println!("warning: {w}");
    }
    println!(
        "\n{} entries, {} failures",
        summary.entries.len(),
        summary.failures
    );
    std::process::exit(if summary.failures == 0 { 0 } else { 2 });
}
