//! Tree-likeness bound `D(G)` and growth constant `gamma(G)`.

use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::rght::{Grid, TypeTag, VertexId};

/// Memo key for the bound search: the types along a ring segment
/// `[v1, v2]` together with `d(v1, v2)`, `d(v1, v2 - 1)` and the shortest
/// `v1`-`v2` path through lower rings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SegmentSignature {
    pub word: Vec<TypeTag>,
    pub dist_last: u32,
    pub dist_prev: u32,
    pub dist_lower: u32,
}

/// Distance between two vertices at the same depth, using only vertices
/// at that depth or closer to the root. `None` if larger than `cap`.
pub fn inner_distance(grid: &mut Grid, from: VertexId, to: VertexId, cap: u32) -> Option<u32> {
    let [d] = ring_distances(grid, from, &[to], cap);
    d.map(|(any, _)| any)
}

/// For each target on the ring of `from`: the distance using vertices at
/// that depth or below, and the length of the shortest such path that
/// visits a lower ring (each `None` past `cap`).
pub fn ring_distances<const N: usize>(
    grid: &mut Grid,
    from: VertexId,
    to: &[VertexId; N],
    cap: u32,
) -> [Option<(u32, Option<u32>)>; N] {
    let level = grid.depth(from);
    let mut dist: FxHashMap<(VertexId, bool), u32> = FxHashMap::default();
    dist.insert((from, false), 0);
    let mut queue = VecDeque::from([(from, false)]);
    while let Some((v, low)) = queue.pop_front() {
        let d = dist[&(v, low)];
        if d == cap {
            continue;
        }
        for w in grid.neighbors(v) {
            let dw = grid.depth(w);
            if dw > level {
                continue;
            }
            let state = (w, low || dw < level);
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(state) {
                e.insert(d + 1);
                queue.push_back(state);
            }
        }
    }
    to.map(|t| {
        let low = dist.get(&(t, true)).copied();
        let any = [dist.get(&(t, false)).copied(), low].into_iter().flatten().min();
        any.map(|a| (a, low))
    })
}

struct BoundSearch<'g> {
    grid: &'g mut Grid,
    seen: FxHashSet<SegmentSignature>,
    best: u32,
    cap: usize,
}

impl BoundSearch<'_> {
    fn visit(&mut self, v1: VertexId, v2: VertexId, offset: u32, level: usize) -> Result<()> {
        if level > self.cap {
            return Err(Error::BoundSearchOverflow(self.cap));
        }
        let prev = self.grid.pred_inner(v2);
        let [last, before] = ring_distances(self.grid, v1, &[v2, prev], offset + 2);
        let (d_last, d_lower) = last.map_or((offset + 3, offset + 3), |(d, l)| (d, l.unwrap_or(offset + 3)));
        // the ring path must beat every path through lower rings
        if d_last == offset && d_lower > offset {
            self.best = self.best.max(offset);
        }
        let mut word = Vec::with_capacity(offset as usize + 1);
        let mut x = v1;
        let q = self.grid.params().q;
        let mut extra = false;
        for i in 0..=offset {
            let t = self.grid.vertex_type(x);
            if i > 0 && i < offset && self.grid.table().produces_extra_child(t, q) {
                extra = true;
            }
            word.push(t);
            if i < offset {
                x = self.grid.succ_inner(x);
            }
        }
        if extra {
            return Ok(());
        }
        let d_prev = before.map_or(offset + 3, |(d, _)| d);
        let sig = SegmentSignature { word, dist_last: d_last, dist_prev: d_prev, dist_lower: d_lower };
        if !self.seen.insert(sig) {
            return Ok(());
        }
        // children of v1 start at 0; the leftmost child of v2 sits at `span`
        let mut span = 0;
        let mut x = v1;
        for _ in 0..offset {
            span += self.grid.own_child_count(x);
            x = self.grid.succ_inner(x);
        }
        let n1 = self.grid.own_child_count(v1);
        let c2 = self.grid.children(v2);
        for j in 0..n1 {
            let w1 = self.grid.own_child(v1, j);
            for (k, &w2) in c2.iter().enumerate().skip(1) {
                if span + k as u32 >= j {
                    self.visit(w1, w2, span + k as u32 - j, level + 1)?;
                }
            }
        }
        Ok(())
    }
}

/// Largest ring offset `d` for which walking along the ring is strictly
/// shorter than any path through lower rings.
pub fn compute_d_bound(grid: &mut Grid) -> Result<u32> {
    let p = grid.params();
    compute_d_bound_with_cap(grid, 10 * (2 * p.a + p.b + p.q) as usize)
}

pub fn compute_d_bound_with_cap(grid: &mut Grid, cap: usize) -> Result<u32> {
    let ring = grid.children(grid.root());
    let mut search = BoundSearch { grid, seen: FxHashSet::default(), best: 0, cap };
    for &v1 in &ring {
        for i in 0..ring.len() {
            let v2 = search.grid.ring_step(v1, i as i64);
            search.visit(v1, v2, i as u32, 0)?;
        }
    }
    Ok(search.best)
}

/// Dominant eigenvalue of the type transition matrix, by power iteration
/// on `M + I` (the shift keeps the iteration from oscillating).
pub fn growth_constant(grid: &Grid, tol: f64) -> f64 {
    let m = grid.table().transition_matrix();
    let n = m.len();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut last = f64::NAN;
    for _ in 0..1_000_000 {
        let y: Vec<f64> = (0..n)
            .map(|i| x[i] + m[i].iter().zip(&x).map(|(&a, &b)| a as f64 * b).sum::<f64>())
            .collect();
        let rq = x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>();
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        x = y.into_iter().map(|v| v / norm).collect();
        if (rq - last).abs() < tol {
            return rq - 1.0;
        }
        last = rq;
    }
    last - 1.0
}
