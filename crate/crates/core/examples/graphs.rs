//! Named graphs, graph6 and canonical forms.
use mbt::graph::{canonical_form, max_density, named, to_graph6};

fn main() -> mbt::Result<()> {
    for name in ["K:4", "W:5", "K5minus", "turan:6:3"] {
        let g = named(name)?;
        let c = canonical_form(&g)?;
        println!("{name:10} n={} e={} m={} graph6={} canon={}", g.n(), g.edge_count(), max_density(&g)?, to_graph6(&g)?, to_graph6(&c.canonical_graph())?);
    }
    Ok(())
}
