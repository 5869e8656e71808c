//! Classical ingredients from finite fields: mutually orthogonal Latin
//! squares, the transversal designs they generate, and resolvable GDDs with
//! their parallel classes.
//!
//! ```bash
//! cargo run -p gdd --example latin_squares
//! ```

use gdd::algebra::{mols, rgdd, transversal_design, FiniteField};
use gdd::design::{verify_gdd, verify_resolution};

fn main() -> gdd::Result<()> {
    // GF(4) is built from the least irreducible quadratic over GF(2)
    let f4 = FiniteField::new(4)?;
    println!(
        "GF(4): characteristic {}, primitive element {}",
        f4.characteristic(),
        f4.primitive_element()
    );
    println!("multiplication table:");
    for a in 0..4 {
        let row: Vec<String> = (0..4).map(|b| f4.mul(a, b).to_string()).collect();
        println!("  {}", row.join(" "));
    }

    let set = mols(5)?;
    println!(
        "\nMOLS(5): {} pairwise orthogonal squares; first two:",
        set.squares.len()
    );
    for row in 0..5 {
        let left: Vec<String> = set.squares[0][row].iter().map(|c| c.to_string()).collect();
        let right: Vec<String> = set.squares[1][row].iter().map(|c| c.to_string()).collect();
        println!("  {}    {}", left.join(" "), right.join(" "));
    }

    let td = transversal_design(4, 5)?;
    println!(
        "\nTD(4, 5): type {}, {} blocks, verification: {}",
        td.group_type(),
        td.blocks().len(),
        verify_gdd(&td)
    );

    let r = rgdd(4, 4)?;
    let res = verify_resolution(&r)?;
    println!(
        "resolvable 4-GDD of type {}: {} blocks in {} parallel classes, resolution: {}",
        r.group_type(),
        r.blocks().len(),
        r.resolution().unwrap().len(),
        res
    );
    println!("class 0 blocks:");
    for &bi in &r.resolution().unwrap()[0] {
        println!("  {:?}", r.blocks()[bi]);
    }
    Ok(())
}
