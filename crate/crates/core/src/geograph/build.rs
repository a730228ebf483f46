//! Fixed-radius neighbor search over a uniform cell grid.
//!
//! Cells have side at least `r`, so every neighbor of a point lies in the
//! `3^d` block of cells around its own. On the torus cell indices wrap; in
//! Euclidean space only occupied cells are stored, keyed by their integer
//! coordinates, so unbounded supports cost nothing extra.

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::{Graph, Vertex};
use crate::error::{domain, Result};
use crate::pointcloud::{squared_distance, Metric, PointCloud};

/// Cells are built only up to this dimension.
const MAX_CELL_DIM: usize = 16;
/// Above this dimension cells are used only while `3^d <= n`.
const CHEAP_CELL_DIM: usize = 8;
/// Widens cells by a relative hair so rounding in `x / side` never puts two
/// points at distance exactly `r` two cells apart.
const SIDE_SLACK: f64 = 1e-9;

/// Same predicate as `distance(..) <= r`; the squared comparison only
/// rejects pairs that are clearly out of range, so it never changes a result.
struct Within {
    metric: Metric,
    r: f64,
    reject_above: f64,
}

impl Within {
    fn new(metric: Metric, r: f64) -> Self {
        Self {
            metric,
            r,
            reject_above: r * r * (1.0 + 8.0 * f64::EPSILON),
        }
    }

    #[inline]
    fn test(&self, x: &[f64], y: &[f64]) -> bool {
        let sq = squared_distance(self.metric, x, y);
        sq <= self.reject_above && sq.sqrt() <= self.r
    }
}

/// Random geometric graph: `i ~ j` iff `distance(X_i, X_j) <= r`.
pub fn build_rgg(cloud: &PointCloud, r: f64) -> Result<Graph> {
    if !(r > 0.0 && r.is_finite()) {
        return domain(format!("connection radius must be positive and finite, got {r}"));
    }
    if cloud.metric() == Metric::Torus && r > 0.5 {
        return domain(format!("torus connection radius must be at most 1/2, got {r}"));
    }
    let n = cloud.len();
    if n > Vertex::MAX as usize {
        return domain(format!("{n} points exceed the supported vertex count"));
    }
    if n <= 1 {
        return Ok(Graph::empty(n));
    }
    let lists = match CellGrid::new(cloud, r) {
        Some(grid) => grid.neighbor_lists(cloud, r),
        None => brute_force_lists(cloud, r),
    };
    Ok(Graph::from_sorted_lists(lists))
}

fn use_cells(n: usize, d: usize) -> bool {
    if d <= CHEAP_CELL_DIM {
        return true;
    }
    d <= MAX_CELL_DIM && 3usize.pow(d as u32) <= n
}

fn brute_force_lists(cloud: &PointCloud, r: f64) -> Vec<Vec<Vertex>> {
    let n = cloud.len();
    let within = Within::new(cloud.metric(), r);
    (0..n)
        .into_par_iter()
        .map(|i| {
            let x = cloud.point(i);
            (0..n)
                .filter(|&j| j != i && within.test(x, cloud.point(j)))
                .map(|j| j as Vertex)
                .collect()
        })
        .collect()
}

struct CellGrid {
    dim: usize,
    /// Torus: cells per axis. `None` for Euclidean grids.
    wrap: Option<i64>,
    /// Points sorted by cell, and each occupied cell's range in that order.
    order: Vec<Vertex>,
    cells: Vec<(Box<[i64]>, usize, usize)>,
    index: FxHashMap<Box<[i64]>, usize>,
    offsets: Vec<Vec<i64>>,
}

impl CellGrid {
    fn new(cloud: &PointCloud, r: f64) -> Option<Self> {
        let (n, dim) = (cloud.len(), cloud.dim());
        if !use_cells(n, dim) {
            return None;
        }
        let side = r * (1.0 + SIDE_SLACK);
        let wrap = match cloud.metric() {
            Metric::Torus => Some(((1.0 / side).floor() as i64).max(1)),
            Metric::Euclidean => None,
        };
        let limit = i64::MAX as f64 / 4.0;
        let mut keys = Vec::with_capacity(n * dim);
        for p in cloud.points() {
            for &c in p {
                let key = match wrap {
                    Some(m) => ((c * m as f64) as i64).min(m - 1),
                    None => {
                        let scaled = (c / side).floor();
                        if scaled.abs() > limit {
                            return None;
                        }
                        scaled as i64
                    }
                };
                keys.push(key);
            }
        }
        let key_of = |i: usize| &keys[i * dim..(i + 1) * dim];

        let mut order: Vec<Vertex> = (0..n as Vertex).collect();
        order.par_sort_unstable_by(|&a, &b| key_of(a as usize).cmp(key_of(b as usize)).then(a.cmp(&b)));

        let mut cells = Vec::new();
        let mut index = FxHashMap::default();
        let mut start = 0;
        while start < n {
            let key = key_of(order[start] as usize);
            let mut end = start + 1;
            while end < n && key_of(order[end] as usize) == key {
                end += 1;
            }
            let boxed: Box<[i64]> = key.into();
            index.insert(boxed.clone(), cells.len());
            cells.push((boxed, start, end));
            start = end;
        }

        let mut offsets = vec![Vec::with_capacity(dim)];
        for _ in 0..dim {
            offsets = offsets
                .into_iter()
                .flat_map(|o| {
                    (-1..=1).map(move |step| {
                        let mut next = o.clone();
                        next.push(step);
                        next
                    })
                })
                .collect();
        }

        Some(Self {
            dim,
            wrap,
            order,
            cells,
            index,
            offsets,
        })
    }

    /// Indices of the occupied cells adjacent to (and including) `key`.
    fn adjacent_cells(&self, key: &[i64]) -> Vec<usize> {
        let mut probe = vec![0i64; self.dim];
        let mut found = Vec::with_capacity(self.offsets.len());
        for offset in &self.offsets {
            for ((p, k), o) in probe.iter_mut().zip(key).zip(offset) {
                *p = match self.wrap {
                    Some(m) => (k + o).rem_euclid(m),
                    None => k + o,
                };
            }
            if let Some(&cell) = self.index.get(probe.as_slice()) {
                found.push(cell);
            }
        }
        if self.wrap.is_some_and(|m| m < 3) {
            found.sort_unstable();
            found.dedup();
        }
        found
    }

    fn neighbor_lists(&self, cloud: &PointCloud, r: f64) -> Vec<Vec<Vertex>> {
        let within = Within::new(cloud.metric(), r);
        let per_cell: Vec<Vec<(Vertex, Vec<Vertex>)>> = self
            .cells
            .par_iter()
            .map(|(key, start, end)| {
                let adjacent = self.adjacent_cells(key);
                self.order[*start..*end]
                    .iter()
                    .map(|&i| {
                        let x = cloud.point(i as usize);
                        let mut list = Vec::new();
                        for &cell in &adjacent {
                            let (_, s, e) = &self.cells[cell];
                            for &j in &self.order[*s..*e] {
                                if j != i && within.test(x, cloud.point(j as usize)) {
                                    list.push(j);
                                }
                            }
                        }
                        list.sort_unstable();
                        (i, list)
                    })
                    .collect()
            })
            .collect();

        let mut lists = vec![Vec::new(); cloud.len()];
        for (i, list) in per_cell.into_iter().flatten() {
            lists[i as usize] = list;
        }
        lists
    }
}
