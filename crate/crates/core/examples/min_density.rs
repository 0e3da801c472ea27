//! Least density of a Maker win, for triangles and for cyclic triangles.
use mbt::game::Goal;
use mbt::solver::{min_density_maker_win_search, SearchConstraints};

fn main() -> mbt::Result<()> {
    let k3 = SearchConstraints { v_max: 5, collections_only: false, ..Default::default() };
    let r = min_density_maker_win_search(&Goal::Clique(3), &k3)?;
    println!("triangle: m={:?} witness={:?}", r.min_density.map(|m| m.to_string()), r.witness.map(|w| w.graph6));
    let tc = SearchConstraints { v_min: 8, v_max: 8, edges: Some((15, 15)), ..Default::default() };
    let r = min_density_maker_win_search(&Goal::tc(), &tc)?;
    println!("cyclic: m={:?} witness={:?}", r.min_density.map(|m| m.to_string()), r.witness.map(|w| w.graph6));
    println!("orientation: {:?}", r.cyclic_orientation);
    Ok(())
}
