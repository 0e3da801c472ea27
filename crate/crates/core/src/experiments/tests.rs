use super::*;
use crate::graph::named;

/// Every choice of `k` classes and one vertex in each.
fn good_copies_brute(g: &Graph, k: usize) -> u64 {
    let classes = g.partition().unwrap();
    let n = g.n();
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .filter(|&m| {
            let vs: Vec<usize> = (0..n).filter(|v| m >> v & 1 == 1).collect();
            let mut cls: Vec<u16> = vs.iter().map(|&v| classes[v]).collect();
            cls.sort_unstable();
            cls.dedup();
            cls.len() == k && vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| g.has_edge(a, b)))
        })
        .count() as u64
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn turan_sizes() {
    assert_eq!(turan_edge_count(6, 3), 12);
    assert_eq!(turan_edge_count(7, 3), 16);
    assert_eq!(turan_graph(7, 3).unwrap().edge_count(), 16);
    assert_eq!(turan_graph(6, 3).unwrap().edges(), named("turan:6:3").unwrap().edges());
}

#[test]
fn sampling_extremes() {
    let full = SampleSpec { model: Model::TuranM { n: 6, k: 3, m: 12 }, seed: 1, trials: 3 };
    for g in sample_board(&full).unwrap() {
        assert_eq!(g.edge_count(), 12);
        assert!(g.partition().is_some());
    }
    let empty = SampleSpec { model: Model::Gnp { n: 9, p: 0.0 }, seed: 1, trials: 3 };
    assert!(sample_board(&empty).unwrap().all(|g| g.edge_count() == 0));
    let over = SampleSpec { model: Model::TuranM { n: 6, k: 3, m: 13 }, seed: 1, trials: 1 };
    assert!(sample_board(&over).is_err());
    assert!(Model::Gnp { n: 5, p: 1.5 }.validate().is_err());
    assert!(Model::Gnp { n: 201, p: 0.5 }.validate().is_err());
}

#[test]
fn gnp_mean_edge_count() {
    let spec = SampleSpec { model: Model::Gnp { n: 30, p: 0.3 }, seed: 11, trials: 400 };
    let total: usize = sample_board(&spec).unwrap().map(|g| g.edge_count()).sum();
    let mean = total as f64 / 400.0;
    // 435 * 0.3 = 130.5, sd of the mean about 0.48
    assert!((mean - 130.5).abs() < 3.0, "{mean}");
}

#[test]
fn sampling_is_reproducible() {
    let spec = SampleSpec { model: Model::TuranP { n: 12, k: 3, p: 0.5 }, seed: 5, trials: 4 };
    let a: Vec<_> = sample_board(&spec).unwrap().map(|g| g.edges()).collect();
    let b: Vec<_> = sample_board(&spec).unwrap().map(|g| g.edges()).collect();
    assert_eq!(a, b);
    assert_ne!(a[0], a[1]);
}

#[test]
fn good_copy_counts() {
    assert_eq!(count_good_copies(&turan_graph(6, 3).unwrap(), 3).unwrap(), 8);
    // classes of sizes 3, 2, 2
    assert_eq!(count_good_copies(&turan_graph(7, 3).unwrap(), 3).unwrap(), 12);
    assert!(count_good_copies(&named("K:4").unwrap(), 3).is_err());
    let spec = SampleSpec { model: Model::TuranP { n: 10, k: 4, p: 0.6 }, seed: 3, trials: 20 };
    for g in sample_board(&spec).unwrap() {
        for k in 2..=4 {
            assert_eq!(count_good_copies(&g, k).unwrap(), good_copies_brute(&g, k));
        }
    }
}

#[test]
fn pair_counts_match_formula() {
    for (n, k) in [(6, 3), (8, 4), (9, 3), (10, 5)] {
        let s = (n / k) as u64;
        let rows = pair_intersection_stats(n, k).unwrap();
        for r in rows {
            let t = r.t as u64;
            let expect = s.pow(k as u32) * binom(k as u64, t) * (s - 1).pow((k as u64 - t) as u32);
            assert_eq!(r.count, expect, "n={n} k={k} t={t}");
            assert!(r.holds);
        }
    }
    let rows = pair_intersection_stats(6, 3).unwrap();
    assert_eq!(rows.last().unwrap().count, 8);
    assert!(pair_intersection_stats(13, 3).is_err());
}

#[test]
fn subgraph_containment() {
    let k4 = named("K:4").unwrap();
    assert!(contains_subgraph(&named("K:5").unwrap(), &k4));
    assert!(!contains_subgraph(&named("W:6").unwrap(), &k4));
    assert!(contains_subgraph(&named("W:6").unwrap(), &named("C:6").unwrap()));
    assert!(!contains_subgraph(&named("C:7").unwrap(), &named("C:6").unwrap()));
    assert!(contains_subgraph(&named("K5minus").unwrap(), &named("W:4").unwrap()));
}

#[test]
fn chernoff_values() {
    assert!((chernoff_bound_eval(12.0, 6.0).unwrap() - (-1.25f64).exp()).abs() < 1e-12);
    assert_eq!(chernoff_bound_eval(3.0, 0.0).unwrap(), 1.0);
    assert!(chernoff_bound_eval(0.0, 1.0).is_err());
    assert!(chernoff_bound_eval(1.0, -1.0).is_err());
}

#[test]
fn binomial_tail_below_bound() {
    let c = binomial_tail_probe(200, 0.1, 8.0, 2000, 9).unwrap();
    assert!(c.ci_lo <= c.bound.unwrap());
}

#[test]
fn wilson_interval() {
    let (lo, hi) = wilson(50, 100);
    assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
    let (lo, hi) = wilson(0, 10);
    assert_eq!(lo, 0.0);
    assert!(hi > 0.2 && hi < 0.35);
}

#[test]
fn exact_curve_is_monotone() {
    let spec = CurveSpec {
        goal: "clique:3".into(),
        n: 6,
        k: None,
        ps: vec![0.2, 0.5, 0.8, 1.0],
        trials: 30,
        seed: 2,
        heuristic: false,
    };
    let r = empirical_threshold_curve(&spec).unwrap();
    assert!(!r.heuristic);
    assert!(r.checks["monotone_per_trial"]);
    // K6 is a Maker win
    assert_eq!(r.cells.last().unwrap().wins, 30);
    let big = CurveSpec { n: 9, ..spec };
    assert!(matches!(empirical_threshold_curve(&big), Err(Error::ResourceCap(_))));
}

#[test]
fn reports_ignore_thread_count() {
    let spec = CurveSpec {
        goal: "tc".into(),
        n: 5,
        k: None,
        ps: vec![0.6, 0.9],
        trials: 16,
        seed: 4,
        heuristic: false,
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| empirical_threshold_curve(&spec).unwrap())
    };
    assert_eq!(run(1), run(4));
    let rm = RandomMakerSpec { n: 12, k: 3, m: None, b: 1, adversary: "greedy".into(), delta: 0.5, trials: 8, seed: 1 };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| random_maker_trial(&rm).unwrap())
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn random_maker_report() {
    let spec = RandomMakerSpec { n: 15, k: 3, m: None, b: 1, adversary: "random".into(), delta: 0.5, trials: 10, seed: 8 };
    let r = random_maker_trial(&spec).unwrap();
    assert!(r.checks["failures_le_turns"]);
    assert_eq!(r.values["rounds"], (2.0 * 15f64.powf(1.5).floor()).min(r.cells[0].params["m"]));
    let bad = RandomMakerSpec { adversary: "smart".into(), ..spec };
    assert!(random_maker_trial(&bad).is_err());
}

#[test]
fn pittel_trivial_property() {
    let spec = PittelSpec { n: 9, k: 3, m: 10, property: Property::Always, trials: 20, seed: 0 };
    let r = model_transfer_check(&spec).unwrap();
    assert_eq!(r.values["lhs"], 0.0);
    assert!(r.checks["holds_within_ci"]);
    let spec = PittelSpec { property: Property::ContainsGoodClique { k: 3 }, ..spec };
    assert!(model_transfer_check(&spec).unwrap().checks["holds_within_ci"]);
}

#[test]
fn subgraph_curve() {
    let spec = SubgraphSpec { n: 30, ps: None, trials: 20, seed: 1 };
    let r = subgraph_frequency(&named("K:3").unwrap(), &spec).unwrap();
    assert!((r.values["pivot"] - 1.0 / 30.0).abs() < 1e-12);
    assert!(r.checks["monotone_counts"]);
    assert!(r.cells[0].freq <= r.cells[4].freq);
}

#[test]
fn report_outputs() {
    let mut r = ExperimentReport::new("x", &serde_json::json!({"a": 1}), 3);
    r.cells.push(Cell::new(&[("p", 0.5)], 1, 2));
    let mut csv = Vec::new();
    r.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("params,wins") && text.contains("p=0.5,1,2,0.5"));
    let mut js = Vec::new();
    r.write_json(&mut js).unwrap();
    let back: ExperimentReport = serde_json::from_slice(&js).unwrap();
    assert_eq!(back, r);
}
