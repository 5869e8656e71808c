//! Develop one base-block specification step by step: parse the `.gdd` text,
//! inspect its orbit classes and shift mappings, expand it into the full
//! design, verify, and print the canonical `.gddx` serialization of a slice.
//!
//! ```bash
//! cargo run -p gdd --example expand_spec [path/to/spec.gdd]
//! ```

use gdd::blockgen::{self, check_signature};
use gdd::catalog::Catalog;
use gdd::design::{expected_block_count, verify_gdd};
use gdd::gddx;

fn main() -> gdd::Result<()> {
    let spec = match std::env::args().nth(1) {
        Some(path) => blockgen::read_spec_file(std::path::Path::new(&path))?,
        None => Catalog::open_default()?.load_spec("4^5_10^2")?,
    };

    println!(
        "spec {}: v = {}, type {}",
        spec.name,
        spec.v,
        spec.group_type()
    );
    for (i, class) in spec.classes.iter().enumerate() {
        println!(
            "  class {i}: {} base blocks x {} shifts, {} segments",
            class.base_blocks.len(),
            class.j_count,
            class.segments.len()
        );
        for seg in &class.segments {
            match seg.prod3 {
                Some(c) => println!(
                    "    [{}, {}) product action over Z_{c} x Z_3, step {}",
                    seg.start,
                    seg.start + seg.length,
                    seg.step
                ),
                None => println!(
                    "    [{}, {}) shift by {} per step",
                    seg.start,
                    seg.start + seg.length,
                    seg.step
                ),
            }
        }
    }

    let design = blockgen::expand(&spec)?;
    let report = verify_gdd(&design);
    let expected = expected_block_count(&spec.group_type())?;
    println!(
        "\nexpanded: {} blocks (expected {expected}), verification: {report}",
        design.blocks().len()
    );

    match check_signature(&spec) {
        Some(check) if check.matches => println!("compact signature matches"),
        Some(check) => println!("compact signature differs: {:?}", check.diffs),
        None => println!("no compact signature present"),
    }

    let text = gddx::serialize(&design);
    println!("\nfirst lines of the .gddx serialization:");
    for line in text.lines().take(10) {
        println!("  {line}");
    }
    println!(
        "  ... ({} lines, digest {})",
        text.lines().count(),
        &gddx::digest(&design)[..16]
    );
    Ok(())
}
