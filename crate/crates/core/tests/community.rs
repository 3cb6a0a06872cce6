mod common;

use journet_core::community::{ei_index, louvain, modularity, network_stats, LouvainConfig};
use journet_core::{Edge, Partition, WeightedGraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn modularity_matches_pairwise_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let g = common::random_graph(10, 0.4, 5, &mut rng);
        if g.edges().is_empty() {
            continue;
        }
        let p = common::random_partition(10, 4, &mut rng);
        for gamma in [0.5, 0.8, 1.0, 2.0] {
            let q = modularity(&g, &p, gamma).unwrap();
            let oracle = common::literal_modularity(&g, p.ids(), gamma);
            assert!((q - oracle).abs() < 1e-12, "{q} vs {oracle}");
        }
    }
}

#[test]
fn louvain_against_exhaustive_search() {
    let partitions = common::all_set_partitions(8);
    assert_eq!(partitions.len(), 4140);
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let (mut trials, mut optimal) = (0, 0);
    while trials < 100 {
        let g = common::random_graph(8, 0.4, 3, &mut rng);
        if g.edges().is_empty() {
            continue;
        }
        trials += 1;
        let (p, stats) = louvain(&g, &LouvainConfig::default()).unwrap();
        let best = partitions
            .iter()
            .map(|ids| common::literal_modularity(&g, ids, 1.0))
            .fold(f64::NEG_INFINITY, f64::max);
        let single = modularity(&g, &Partition::new((1..=8).collect()).unwrap(), 1.0).unwrap();
        let one = modularity(&g, &Partition::new(vec![1; 8]).unwrap(), 1.0).unwrap();
        assert!(stats.modularity >= single - 1e-12);
        assert!(stats.modularity >= one - 1e-12);
        assert!(stats.modularity <= best + 1e-12);
        assert!((stats.modularity - modularity(&g, &p, 1.0).unwrap()).abs() < 1e-15);
        if stats.modularity >= best - 1e-9 {
            optimal += 1;
        }
    }
    assert!(optimal * 10 >= trials * 9, "{optimal}/{trials} optimal");
}

#[test]
fn louvain_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let g = common::random_graph(40, 0.15, 4, &mut rng);
    let cfg = LouvainConfig {
        seed: 9,
        ..Default::default()
    };
    let first = louvain(&g, &cfg).unwrap();
    for workers in [1, 2, 8] {
        let again = louvain(
            &g,
            &LouvainConfig {
                workers: Some(workers),
                ..cfg
            },
        )
        .unwrap();
        assert_eq!(first, again);
    }
}

#[test]
fn higher_resolution_gives_no_fewer_communities() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for trial in 0..30 {
        let g = common::random_graph(30, 0.2, 3, &mut rng);
        if g.edges().is_empty() {
            continue;
        }
        let count = |gamma| {
            louvain(
                &g,
                &LouvainConfig {
                    resolution: gamma,
                    seed: trial,
                    ..Default::default()
                },
            )
            .unwrap()
            .1
            .n_communities
        };
        assert!(count(2.0) >= count(0.5), "trial {trial}");
    }
}

#[test]
fn modularity_and_ei_are_relabeling_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..50 {
        let g = common::random_graph(9, 0.4, 4, &mut rng);
        if g.edges().is_empty() {
            continue;
        }
        let p = common::random_partition(9, 3, &mut rng);
        let order = common::shuffled(9, &mut rng);
        let labels: Vec<String> = order.iter().map(|&i| g.labels()[i].clone()).collect();
        let pg = g.aligned_to(&labels).unwrap();
        let pp = p.permuted(&order);
        assert!(
            (modularity(&g, &p, 1.0).unwrap() - modularity(&pg, &pp, 1.0).unwrap()).abs() < 1e-12
        );
        for weighted in [false, true] {
            assert_eq!(
                ei_index(&g, &p, weighted).unwrap(),
                ei_index(&pg, &pp, weighted).unwrap()
            );
        }
    }
}

#[test]
fn stats_identity_density_times_n_minus_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for n in 2..20 {
        let g = common::random_graph(n, 0.3, 2, &mut rng);
        let s = network_stats(&g).unwrap();
        assert!((s.density * (n - 1) as f64 - s.average_degree).abs() < 1e-12);
        assert_eq!(
            s.isolated_count,
            g.degrees().iter().filter(|&&d| d == 0).count()
        );
    }
}

#[test]
fn weighted_louvain_follows_heavy_edges() {
    // a 4-cycle where two opposite edges are heavy: the heavy pairs group up
    let g = WeightedGraph::new(
        common::labels(4),
        vec![
            Edge {
                a: 0,
                b: 1,
                weight: 10,
            },
            Edge {
                a: 1,
                b: 2,
                weight: 1,
            },
            Edge {
                a: 2,
                b: 3,
                weight: 10,
            },
            Edge {
                a: 3,
                b: 0,
                weight: 1,
            },
        ],
        None,
    )
    .unwrap();
    let (p, _) = louvain(&g, &LouvainConfig::default()).unwrap();
    assert_eq!(p.community(0), p.community(1));
    assert_eq!(p.community(2), p.community(3));
    assert_ne!(p.community(0), p.community(2));
}
