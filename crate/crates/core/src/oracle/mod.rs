//! Brute-force reference computations. Nothing here touches segment tree
//! graphs or counters; only explicit graph search over grid neighbourhoods.

mod brute;

use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use crate::rght::{Grid, VertexId};

pub use brute::{
    brute_betweenness, brute_loglik, brute_pair_histogram, distance_matrix, enumerate_all, enumerate_embeddings,
};

/// Breadth-first distance between two grid vertices, `None` beyond `cap`.
pub fn bfs_distance(grid: &mut Grid, v: VertexId, w: VertexId, cap: u32) -> Option<u32> {
    if v == w {
        return Some(0);
    }
    let mut dist: FxHashMap<VertexId, u32> = FxHashMap::default();
    dist.insert(v, 0);
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d == cap {
            continue;
        }
        for y in grid.neighbors(x) {
            if y == w {
                return Some(d + 1);
            }
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(y) {
                e.insert(d + 1);
                queue.push_back(y);
            }
        }
    }
    None
}

/// An explicit finite graph in compressed adjacency form.
#[derive(Clone, Debug)]
pub struct ExplicitGraph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl ExplicitGraph {
    pub fn from_adjacency(adj: &[Vec<u32>]) -> Self {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for list in adj {
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        ExplicitGraph { offsets, targets }
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Distances from `source` to every vertex (`u32::MAX` if unreachable).
    pub fn distances_from(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.len()];
        let mut queue = VecDeque::with_capacity(self.len());
        dist[source] = 0;
        queue.push_back(source as u32);
        while let Some(x) = queue.pop_front() {
            let d = dist[x as usize] + 1;
            for &y in self.neighbors(x as usize) {
                if dist[y as usize] == u32::MAX {
                    dist[y as usize] = d;
                    queue.push_back(y);
                }
            }
        }
        dist
    }
}

/// The ball `B_r` as an explicit graph. Shortest paths between vertices of
/// depth at most `r` never go deeper than `r`, so distances inside the ball
/// are graph distances.
#[derive(Clone, Debug)]
pub struct BallGraph {
    pub vertices: Vec<VertexId>,
    pub index: FxHashMap<VertexId, u32>,
    pub graph: ExplicitGraph,
}

impl BallGraph {
    pub fn new(grid: &mut Grid, radius: u32) -> Self {
        let vertices = grid.ball(radius);
        let index: FxHashMap<VertexId, u32> = vertices.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let adj: Vec<Vec<u32>> = vertices
            .iter()
            .map(|&v| grid.neighbors(v).into_iter().filter_map(|w| index.get(&w).copied()).collect())
            .collect();
        BallGraph { vertices, index, graph: ExplicitGraph::from_adjacency(&adj) }
    }

    pub fn distances_from(&self, v: VertexId) -> FxHashMap<VertexId, u32> {
        let d = self.graph.distances_from(self.index[&v] as usize);
        self.vertices.iter().zip(d).map(|(&w, x)| (w, x)).collect()
    }

    pub fn distance(&self, v: VertexId, w: VertexId) -> u32 {
        self.graph.distances_from(self.index[&v] as usize)[self.index[&w] as usize]
    }
}

/// A finite window of the `dims`-dimensional binary grid: depths
/// `-margin_up..=depth` and lateral coordinates within `margin` of the
/// descendants of the origin. Vertex `i < box_len` are exactly the
/// descendants of the origin with depth at most `depth`.
#[derive(Clone, Debug)]
pub struct BinaryBox {
    pub points: Vec<(Vec<i64>, i64)>,
    pub box_len: usize,
    pub graph: ExplicitGraph,
}

impl BinaryBox {
    pub fn new(dims: usize, depth: u32, margin: i64, margin_up: i64) -> Self {
        let lateral = dims - 1;
        let mut inside = Vec::new();
        let mut outside = Vec::new();
        for t in -margin_up..=depth as i64 {
            let side = if t >= 0 { 1i64 << t } else { 1 };
            let lo = -margin;
            let hi = side + margin;
            let mut coords = vec![lo; lateral];
            loop {
                let is_box = t >= 0 && coords.iter().all(|&c| (0..side).contains(&c));
                if is_box {
                    inside.push((coords.clone(), t));
                } else {
                    outside.push((coords.clone(), t));
                }
                let mut i = 0;
                while i < lateral {
                    coords[i] += 1;
                    if coords[i] < hi {
                        break;
                    }
                    coords[i] = lo;
                    i += 1;
                }
                if i == lateral {
                    break;
                }
            }
        }
        let box_len = inside.len();
        let mut points = inside;
        points.extend(outside);
        let index: FxHashMap<(Vec<i64>, i64), u32> =
            points.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        let mut adj = vec![Vec::new(); points.len()];
        for (i, (x, t)) in points.iter().enumerate() {
            let mut link = |p: (Vec<i64>, i64)| {
                if let Some(&j) = index.get(&p) {
                    adj[i].push(j);
                    adj[j as usize].push(i as u32);
                }
            };
            for k in 0..lateral {
                let mut y = x.clone();
                y[k] += 1;
                link((y, *t));
            }
            let up: Vec<i64> = x.iter().map(|c| c.div_euclid(2)).collect();
            link((up, t - 1));
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        BinaryBox { points, box_len, graph: ExplicitGraph::from_adjacency(&adj) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rght::GridParams;

    #[test]
    fn trivial_distances() {
        let mut g = Grid::new(GridParams::new(7, 1, 0)).unwrap();
        let r = g.root();
        assert_eq!(bfs_distance(&mut g, r, r, 0), Some(0));
        let v = g.children(r)[3];
        assert_eq!(bfs_distance(&mut g, r, v, 3), Some(1));
        let ball = BallGraph::new(&mut g, 2);
        assert_eq!(ball.distance(r, v), 1);
        assert_eq!(ball.vertices.len(), 29);
    }

    #[test]
    fn binary_box_sizes() {
        let b = BinaryBox::new(2, 3, 0, 0);
        assert_eq!(b.box_len, 15);
        // (0,3) to (7,3) climbs to the origin
        let d = b.graph.distances_from(b.points.iter().position(|p| p == &(vec![0], 3)).unwrap());
        let j = b.points.iter().position(|p| p == &(vec![7], 3)).unwrap();
        assert_eq!(d[j], 5);
    }
}
