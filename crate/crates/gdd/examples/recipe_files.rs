//! Construction recipes as text: parse a `.rcp` pipeline, run it against the
//! ingredient library and print the provenance tree of the result.
//!
//! ```bash
//! cargo run -p gdd --example recipe_files [path/to/recipe.rcp]
//! ```

use gdd::catalog::Catalog;
use gdd::constructions::DesignLibrary;
use gdd::recipe;

const PIPELINE: &str = "\
# delete a parallel class, inflate a transversal design against the DGDD,
# then adjoin three points and fill the holes with a searched 3^4 3^1
(fill_holes
  (wfc_inflate_dgdd (td 4 3) h=1 u=4
    (remove_parallel_class (rgdd 4 4) 0))
  m=3 fill=(search 3^4_3^1))
";

fn main() -> gdd::Result<()> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => PIPELINE.to_string(),
    };
    println!("recipe:\n{}", text.trim_end());

    let parsed = recipe::parse(&text)?;
    let mut lib = match Catalog::open_default() {
        Ok(cat) => DesignLibrary::with_catalog(cat),
        Err(_) => DesignLibrary::new(),
    };
    let built = recipe::run(&parsed, &mut lib)?;
    println!("\nprovenance:\n{}", built.provenance);
    println!(
        "\nresult: type {}, {} blocks, groups {:?}",
        built.design.group_type(),
        built.design.blocks().len(),
        built
            .design
            .groups()
            .iter()
            .map(|g| g.len())
            .collect::<Vec<_>>()
    );
    Ok(())
}
