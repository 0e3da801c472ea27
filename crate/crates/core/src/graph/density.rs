use serde::Serialize;

use super::{Graph, Rational};
use crate::error::{Error, Result};

/// Largest vertex count for the subset scan in [`max_density`].
pub const MAX_DENSITY_VERTICES: usize = 25;

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    /// `e(G) / v(G)`.
    pub density: Rational,
    /// Maximum of `e(H) / v(H)` over nonempty subgraphs `H`.
    pub max_density: Rational,
    /// Vertices of an induced subgraph attaining `max_density`.
    pub witness_vertices: Vec<usize>,
    #[serde(skip)]
    pub witness: Graph,
}

/// Density and maximum density, exactly.
///
/// Deleting edges at a fixed vertex set only lowers density, so the maximum
/// is attained on an induced subgraph; every nonempty vertex subset is
/// scanned. Ties keep the first subset in increasing bitmask order.
pub fn density_and_max_density(g: &Graph) -> Result<DensityReport> {
    let density = g.density()?;
    let (max_density, mask) = max_density_mask(g)?;
    let witness_vertices: Vec<usize> = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
    let witness = g.induced(&witness_vertices);
    Ok(DensityReport { density, max_density, witness_vertices, witness })
}

pub fn max_density(g: &Graph) -> Result<Rational> {
    Ok(max_density_mask(g)?.0)
}

fn max_density_mask(g: &Graph) -> Result<(Rational, u32)> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n > MAX_DENSITY_VERTICES {
        return Err(Error::TooManyVertices { n, limit: MAX_DENSITY_VERTICES });
    }
    let rows: Vec<u32> = (0..n).map(|u| g.row(u)[0] as u32).collect();
    // Edge counts of all subsets built incrementally from the subset without
    // its highest vertex.
    let full = 1u32 << n;
    let mut edges = vec![0u16; full as usize];
    let (mut best_e, mut best_v, mut best_mask) = (0u32, 1u32, 1u32);
    for mask in 1..full {
        let top = 31 - mask.leading_zeros();
        let rest = mask & !(1 << top);
        let e = edges[rest as usize] as u32 + (rows[top as usize] & rest).count_ones();
        edges[mask as usize] = e as u16;
        let v = mask.count_ones();
        if (e as u64) * (best_v as u64) > (best_e as u64) * (v as u64) {
            best_e = e;
            best_v = v;
            best_mask = mask;
        }
    }
    Ok((Rational::new(best_e as i64, best_v as i64)?, best_mask))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn complete_graph_is_its_own_densest() {
        let r = density_and_max_density(&named("K:4").unwrap()).unwrap();
        assert_eq!(r.density.to_string(), "3/2");
        assert_eq!(r.max_density.to_string(), "3/2");
        assert_eq!(r.witness_vertices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn k5minus_max_density() {
        let r = density_and_max_density(&named("K5minus").unwrap()).unwrap();
        assert_eq!(r.max_density.to_string(), "9/5");
    }

    #[test]
    fn densest_part_can_be_proper() {
        // K4 plus a pendant path: m is attained on the K4.
        let g = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5)]).unwrap();
        let r = density_and_max_density(&g).unwrap();
        assert_eq!(r.density.to_string(), "4/3");
        assert_eq!(r.max_density.to_string(), "3/2");
        assert_eq!(r.witness.edge_count(), 6);
    }

    #[test]
    fn empty_graph_errors() {
        assert!(matches!(density_and_max_density(&Graph::new(0).unwrap()), Err(Error::EmptyGraph)));
    }
}
