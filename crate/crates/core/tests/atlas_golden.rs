use std::path::Path;

use mbt::collections::{read_atlas, verify_classification, AtlasRecord};
use mbt::game::Player;
use mbt::graph::{from_graph6, Graph};

fn golden() -> Vec<AtlasRecord> {
    read_atlas(&Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/atlas.jsonl")).unwrap()
}

#[test]
fn atlas_matches_golden_file() {
    let report = verify_classification().unwrap();
    let fresh: Vec<AtlasRecord> = report.classes.iter().map(AtlasRecord::from).collect();
    assert_eq!(fresh, golden());
}

#[test]
fn golden_records_are_self_consistent() {
    for r in golden() {
        let g = from_graph6(&r.graph6).unwrap();
        let edges: Vec<(usize, usize)> = r.edge_list.iter().map(|e| (e[0], e[1])).collect();
        assert_eq!(g.edges(), Graph::from_edges(r.vertices, &edges).unwrap().edges());
        assert_eq!(r.edges, 2 * r.vertices - 1);
        assert_eq!(r.m.to_string(), format!("{}/{}", r.edges, r.vertices));
        assert!(r.collection);
        if !r.basic {
            assert_eq!(r.verdicts.tc, Some(Player::Breaker), "{:?}", r.name);
        } else {
            assert_eq!(r.verdicts.clique3, Some(Player::Breaker), "{:?}", r.name);
        }
    }
}
