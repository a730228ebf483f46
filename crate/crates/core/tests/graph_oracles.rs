//! Graph counts and construction checked against dense brute-force oracles.

use geodim_core::geograph::{build_rgg, read_edge_list, write_edge_list, Graph, Vertex};
use geodim_core::pointcloud::{distance, sample_points, DensityKind, DensitySpec};
use proptest::prelude::*;

struct Dense {
    n: usize,
    adj: Vec<Vec<bool>>,
}

impl Dense {
    fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Self {
        let mut adj = vec![vec![false; n]; n];
        for &(u, v) in edges {
            if u != v {
                adj[u as usize][v as usize] = true;
                adj[v as usize][u as usize] = true;
            }
        }
        Self { n, adj }
    }

    fn delta(&self, v: usize) -> u64 {
        let nb: Vec<usize> = (0..self.n).filter(|&u| self.adj[v][u]).collect();
        let mut count = 0;
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                count += u64::from(self.adj[a][b]);
            }
        }
        count
    }

    fn triangles(&self) -> u64 {
        let mut count = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                for k in j + 1..self.n {
                    count += u64::from(self.adj[i][j] && self.adj[j][k] && self.adj[i][k]);
                }
            }
        }
        count
    }

    /// Triples whose largest label is adjacent to both others.
    fn max_labeled_cherries(&self) -> u64 {
        let mut count = 0;
        for k in 0..self.n {
            for i in 0..k {
                for j in i + 1..k {
                    count += u64::from(self.adj[k][i] && self.adj[k][j]);
                }
            }
        }
        count
    }

    fn cherries(&self) -> u64 {
        (0..self.n)
            .map(|v| {
                let d = self.adj[v].iter().filter(|&&x| x).count() as u64;
                d * d.saturating_sub(1) / 2
            })
            .sum()
    }
}

fn graph_strategy() -> impl Strategy<Value = (usize, Vec<(Vertex, Vertex)>)> {
    (1usize..40).prop_flat_map(|n| {
        let v = 0..n as Vertex;
        (Just(n), prop::collection::vec((v.clone(), v), 0..200))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn counts_match_dense_oracle((n, raw) in graph_strategy()) {
        let edges: Vec<_> = raw.iter().copied().filter(|(u, v)| u != v).collect();
        let g = Graph::from_edges(n, edges.iter().copied()).unwrap();
        let oracle = Dense::new(n, &edges);

        let deltas: Vec<u64> = (0..n).map(|v| oracle.delta(v)).collect();
        let stats = g.vertex_stats();
        prop_assert_eq!(stats.iter().map(|s| s.delta).collect::<Vec<_>>(), deltas.clone());
        prop_assert_eq!(g.triangles_per_vertex(), deltas);
        prop_assert_eq!(g.count_triangles(), oracle.triangles());
        prop_assert_eq!(g.count_max_labeled_cherries(), oracle.max_labeled_cherries());
        prop_assert_eq!(g.count_cherries(), oracle.cherries());
        for v in 0..n {
            let expected = oracle.adj[v].iter().filter(|&&x| x).count() as u64;
            prop_assert_eq!(stats[v].degree, expected);
        }
    }

    #[test]
    fn relabeling_preserves_invariants((n, raw) in graph_strategy(), seed in any::<u64>()) {
        let g = Graph::from_edges(n, raw.into_iter().filter(|(u, v)| u != v)).unwrap();
        let h = g.shuffle_labels(seed);
        prop_assert_eq!(h.edge_count(), g.edge_count());
        prop_assert_eq!(h.count_triangles(), g.count_triangles());
        prop_assert_eq!(h.count_cherries(), g.count_cherries());
        let mut a: Vec<u64> = (0..n as Vertex).map(|v| g.degree(v)).collect();
        let mut b: Vec<u64> = (0..n as Vertex).map(|v| h.degree(v)).collect();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn edge_list_roundtrip((n, raw) in graph_strategy()) {
        let g = Graph::from_edges(n, raw.into_iter().filter(|(u, v)| u != v)).unwrap();
        let mut text = Vec::new();
        write_edge_list(&g, &mut text).unwrap();
        let back = read_edge_list(text.as_slice()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn rgg_matches_pairwise_scan(
        n in 0usize..150,
        d in 1usize..5,
        torus in any::<bool>(),
        r in 0.01f64..0.5,
        seed in any::<u64>(),
    ) {
        let kind = if torus { DensityKind::UniformTorus } else { DensityKind::Gaussian { sigma: 0.5 } };
        let cloud = sample_points(&DensitySpec::new(kind, d).unwrap(), n, seed);
        let g = build_rgg(&cloud, r).unwrap();
        let mut expected = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if distance(cloud.metric(), cloud.point(i), cloud.point(j)).unwrap() <= r {
                    expected.push((i as Vertex, j as Vertex));
                }
            }
        }
        prop_assert_eq!(g.edges().collect::<Vec<_>>(), expected);
    }
}

#[test]
fn high_dimension_uses_same_predicate() {
    // Large d takes the all-pairs path; the result must not change.
    let cloud = sample_points(&DensitySpec::new(DensityKind::UniformTorus, 20).unwrap(), 120, 3);
    let g = build_rgg(&cloud, 0.5).unwrap();
    let direct = (0..120)
        .flat_map(|i| (i + 1..120).map(move |j| (i, j)))
        .filter(|&(i, j)| distance(cloud.metric(), cloud.point(i), cloud.point(j)).unwrap() <= 0.5)
        .count() as u64;
    assert_eq!(g.edge_count(), direct);
}
