//! The three recursive construction pipelines, run operator by operator:
//!
//! A. uniform inflation: a 4-GDD of type 3^5 inflated by 3 -> 9^5;
//! B. weighted inflation: a 5-GDD of type 5^5 with all weights 3 -> 15^5;
//! C. DGDD route: delete a parallel class from the resolvable 4^4, inflate
//!    TD(4, 3) against it, adjoin 3 points and fill the holes -> 12^4 3^1.
//!
//! ```bash
//! cargo run -p gdd --example construction_pipelines
//! ```

use gdd::algebra::{rgdd, transversal_design};
use gdd::constructions::{
    fill_holes, inflate_uniform, remove_parallel_class, wfc_inflate, wfc_inflate_dgdd,
    DesignLibrary,
};
use gdd::design::GroupType;

fn main() -> gdd::Result<()> {
    let mut lib = DesignLibrary::new();

    // A: every point weight r, ingredient r^4 from the transversal design
    let base = lib.get(&GroupType::parse("3^5")?)?;
    println!(
        "pipeline A: starting from a searched 3^5 ({} blocks)",
        base.blocks().len()
    );
    let nine = inflate_uniform(&base, 3, &mut lib)?;
    println!(
        "  inflate by 3 -> {} with {} blocks (verified)\n",
        nine.group_type(),
        nine.blocks().len()
    );

    // B: one ingredient type per block, here the constant pattern 3^5
    let master = transversal_design(5, 5)?;
    println!(
        "pipeline B: master 5-GDD of type {} ({} blocks)",
        master.group_type(),
        master.blocks().len()
    );
    let fifteen = wfc_inflate(&master, &vec![3; master.v()], &mut lib)?;
    println!(
        "  weight 3 everywhere -> {} with {} blocks (verified)\n",
        fifteen.group_type(),
        fifteen.blocks().len()
    );

    // C: resolvable 4^4 minus a class gives the unit DGDD (4, 1^4)^4
    let resolvable = rgdd(4, 4)?;
    let unit = remove_parallel_class(&resolvable, 0)?;
    println!(
        "pipeline C: removed class 0 of the resolvable {} -> DGDD with {} holes, {} blocks",
        resolvable.group_type(),
        unit.holes().unwrap().len(),
        unit.blocks().len()
    );
    let master = transversal_design(4, 3)?;
    let dgdd = wfc_inflate_dgdd(&master, 1, 4, &unit)?;
    println!(
        "  inflate TD(4, 3) by 4 against it -> DGDD of group type {} with {} blocks",
        dgdd.group_type(),
        dgdd.blocks().len()
    );
    let filled = fill_holes(&dgdd, 3, &mut lib)?;
    println!(
        "  adjoin 3 points and fill holes with 3^5 -> {} with {} blocks (verified)",
        filled.group_type(),
        filled.blocks().len()
    );

    // the filler 3^5 was discovered by the exact-cover search on first use
    println!(
        "\ningredient 3^5 came from: {}",
        lib.source_of(&GroupType::parse("3^5")?).unwrap()
    );
    Ok(())
}
