//! Decide existence of small 4-GDDs by exact cover: columns are cross-group
//! pairs, rows are candidate blocks, and dancing links either finds a cover
//! or proves there is none.
//!
//! ```bash
//! cargo run --release -p gdd --example exact_cover_search [--slow]
//! ```
//!
//! With `--slow` the run also reproduces the refutation of 2^6 5^1 by
//! exhausting its full (symmetry-reduced) search tree.

use gdd::design::GroupType;
use gdd::search::{build_instance, solve_existence, SearchLimits, SearchOutcome};

fn main() -> gdd::Result<()> {
    let slow = std::env::args().any(|a| a == "--slow");

    for name in ["2^4", "3^4", "3^5", "2^6 5^1"] {
        let t = GroupType::parse(name)?;
        let instance = match build_instance(&t) {
            Ok(i) => i,
            Err(e) => {
                println!("{name}: no instance ({e})");
                continue;
            }
        };
        println!(
            "{name}: {} pair columns, {} candidate blocks",
            instance.column_count(),
            instance.row_count()
        );
        if name == "2^6 5^1" && !slow {
            println!("  (refutation needs the full tree; rerun with --slow)");
            continue;
        }
        let limits = if name == "2^6 5^1" {
            SearchLimits::slow()
        } else {
            SearchLimits::default()
        };
        match solve_existence(&t, &limits)? {
            SearchOutcome::Found(d) => {
                println!("  Found: {} blocks, first three:", d.blocks().len());
                for b in d.blocks().iter().take(3) {
                    println!("    {b:?}");
                }
            }
            SearchOutcome::Exhausted { nodes } => {
                println!("  Exhausted after {nodes} nodes: no such design");
            }
            SearchOutcome::Timeout { nodes } => {
                println!("  Timeout after {nodes} nodes: undecided");
            }
        }
    }
    Ok(())
}
