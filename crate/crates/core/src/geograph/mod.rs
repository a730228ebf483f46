//! Immutable undirected graphs in sorted compressed-row form, the counting
//! kernels the estimators need, and random geometric graph construction.

mod build;
mod io;

pub use build::build_rgg;
pub use io::{read_edge_list, write_edge_list};

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::rng::seeded;

/// Vertex label. Graphs hold at most `u32::MAX` vertices.
pub type Vertex = u32;

/// Undirected simple graph with strictly increasing neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<Vertex>,
}

/// Degree `D_i` and neighborhood edge count `δ_i` of one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VertexStats {
    pub degree: u64,
    pub delta: u64,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
        }
    }

    /// Build from an edge list. Repeated and reversed mentions collapse to one
    /// edge; self-loops and out-of-range labels are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        if n > Vertex::MAX as usize {
            return domain(format!("{n} vertices exceed the supported maximum"));
        }
        let mut lists: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                return domain(format!("self-loop at vertex {u}"));
            }
            if u as usize >= n || v as usize >= n {
                return domain(format!("edge ({u}, {v}) references a vertex >= {n}"));
            }
            lists[u as usize].push(v);
            lists[v as usize].push(u);
        }
        for list in &mut lists {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self::from_sorted_lists(lists))
    }

    /// Lists must already be sorted, deduplicated and symmetric.
    pub(crate) fn from_sorted_lists(lists: Vec<Vec<Vertex>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let total: usize = lists.iter().map(Vec::len).sum();
        let mut neighbors = Vec::with_capacity(total);
        for list in lists {
            neighbors.extend_from_slice(&list);
            offsets.push(neighbors.len());
        }
        Self { offsets, neighbors }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> u64 {
        self.neighbors.len() as u64 / 2
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: Vertex) -> u64 {
        let v = v as usize;
        (self.offsets[v + 1] - self.offsets[v]) as u64
    }

    pub fn max_degree(&self) -> u64 {
        self.offsets.windows(2).map(|w| (w[1] - w[0]) as u64).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Every edge once as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.n() as Vertex).flat_map(move |u| {
            let list = self.neighbors(u);
            let start = list.partition_point(|&v| v <= u);
            list[start..].iter().map(move |&v| (u, v))
        })
    }

    /// `δ_v`: the number of edges among the neighbors of `v`.
    pub fn neighborhood_edges(&self, v: Vertex) -> u64 {
        let own = self.neighbors(v);
        let twice: u64 = own.iter().map(|&u| sorted_intersection_len(own, self.neighbors(u))).sum();
        twice / 2
    }

    pub fn vertex_stats(&self) -> Vec<VertexStats> {
        (0..self.n() as Vertex)
            .into_par_iter()
            .map(|v| VertexStats {
                degree: self.degree(v),
                delta: self.neighborhood_edges(v),
            })
            .collect()
    }

    /// Triangles, each counted once, via the forward orientation `u < v < w`.
    pub fn count_triangles(&self) -> u64 {
        (0..self.n() as Vertex)
            .into_par_iter()
            .map(|u| {
                let up = self.upper_neighbors(u);
                up.iter()
                    .enumerate()
                    .map(|(i, &v)| sorted_intersection_len(&up[i + 1..], self.upper_neighbors(v)))
                    .sum::<u64>()
            })
            .sum()
    }

    /// `δ_v` for every vertex at once, from a single forward pass over the
    /// triangles. Agrees with [`Graph::neighborhood_edges`] vertex by vertex.
    pub fn triangles_per_vertex(&self) -> Vec<u64> {
        let n = self.n();
        (0..n as Vertex)
            .into_par_iter()
            .fold(
                || vec![0u64; n],
                |mut counts, u| {
                    let up = self.upper_neighbors(u);
                    for (i, &v) in up.iter().enumerate() {
                        for_each_common(&up[i + 1..], self.upper_neighbors(v), |w| {
                            counts[u as usize] += 1;
                            counts[v as usize] += 1;
                            counts[w as usize] += 1;
                        });
                    }
                    counts
                },
            )
            .reduce(
                || vec![0u64; n],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    }

    /// `Σ_k C(m_k, 2)` with `m_k` the number of neighbors of `k` labeled
    /// below `k`: triples `i < j < k` whose largest label is adjacent to the
    /// other two. Depends on the labeling.
    pub fn count_max_labeled_cherries(&self) -> u64 {
        (0..self.n() as Vertex)
            .map(|k| choose2(self.neighbors(k).partition_point(|&j| j < k) as u64))
            .sum()
    }

    /// `Σ_i C(D_i, 2)`: paths of length two counted at their centre.
    pub fn count_cherries(&self) -> u64 {
        (0..self.n() as Vertex).map(|v| choose2(self.degree(v))).sum()
    }

    /// Relabel vertices by a uniformly random permutation drawn from `seed`.
    pub fn shuffle_labels(&self, seed: u64) -> Graph {
        let mut perm: Vec<Vertex> = (0..self.n() as Vertex).collect();
        perm.shuffle(&mut seeded(seed));
        self.relabel(&perm)
    }

    /// Apply `old -> perm[old]`. `perm` must be a permutation of `0..n`.
    pub fn relabel(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(perm.len(), self.n(), "permutation length must equal vertex count");
        let mut inverse = vec![0 as Vertex; perm.len()];
        for (old, &new) in perm.iter().enumerate() {
            inverse[new as usize] = old as Vertex;
        }
        let lists: Vec<Vec<Vertex>> = inverse
            .par_iter()
            .map(|&old| {
                let mut list: Vec<Vertex> = self.neighbors(old).iter().map(|&u| perm[u as usize]).collect();
                list.sort_unstable();
                list
            })
            .collect();
        Self::from_sorted_lists(lists)
    }

    fn upper_neighbors(&self, u: Vertex) -> &[Vertex] {
        let list = self.neighbors(u);
        &list[list.partition_point(|&v| v <= u)..]
    }
}

pub(crate) fn choose2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

fn for_each_common(a: &[Vertex], b: &[Vertex], mut f: impl FnMut(Vertex)) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                f(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

/// Size of the intersection of two strictly increasing lists.
fn sorted_intersection_len(a: &[Vertex], b: &[Vertex]) -> u64 {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}
