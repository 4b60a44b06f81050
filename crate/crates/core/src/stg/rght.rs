use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};

use super::Stg;
use crate::error::Result;
use crate::metrics::compute_d_bound;
use crate::rght::{Grid, Segment, VertexId};

/// Segment tree graph over ancestor segments of a lazily generated grid.
/// Nodes are ring segments of length at most `D + 1`; two segments are
/// related when some members are at most `D` ring steps apart.
#[derive(Clone, Debug)]
pub struct RghtStg {
    grid: Grid,
    bound: u32,
    memo: FxHashMap<(Segment, Segment), Option<u8>>,
    genuine: FxHashMap<Segment, bool>,
}

impl RghtStg {
    pub fn new(mut grid: Grid) -> Result<Self> {
        let bound = compute_d_bound(&mut grid)?;
        Ok(Self::with_bound(grid, bound))
    }

    pub fn with_bound(grid: Grid, bound: u32) -> Self {
        RghtStg { grid, bound, memo: FxHashMap::default(), genuine: FxHashMap::default() }
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn max_len(&self) -> u32 {
        self.bound + 1
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn grid_mut(&mut self) -> &mut Grid {
        &mut self.grid
    }

    pub fn into_grid(self) -> Grid {
        self.grid
    }

    pub fn vertex_node(&self, v: VertexId) -> Segment {
        Segment { left: v, len: 1 }
    }

    pub fn members(&mut self, s: Segment) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(s.len as usize);
        let mut x = s.left;
        for i in 0..s.len {
            out.push(x);
            if i + 1 < s.len {
                x = self.grid.succ_inner(x);
            }
        }
        out
    }

    pub fn right(&mut self, s: Segment) -> VertexId {
        self.grid.ring_step(s.left, s.len as i64 - 1)
    }

    // Smallest number of ring steps between members of s and t.
    fn gap(&mut self, s: Segment, t: Segment) -> u128 {
        let k = self.grid.depth(s.left);
        if k == 0 {
            return 0;
        }
        let ring = self.grid.ring_len(k);
        let o = self.grid.ring_offset(s.left, t.left);
        let (ls, lt) = (s.len as u128, t.len as u128);
        if o < ls || o + lt > ring {
            return 0;
        }
        let forward = o - (ls - 1);
        let backward = ring - (o + lt - 1);
        forward.min(backward)
    }

    fn distance(&mut self, s: Segment, t: Segment) -> u32 {
        let level = self.grid.depth(s.left);
        let targets: FxHashSet<VertexId> = self.members(t).into_iter().collect();
        let mut dist: FxHashMap<VertexId, u32> = FxHashMap::default();
        let mut queue = VecDeque::new();
        for v in self.members(s) {
            if targets.contains(&v) {
                return 0;
            }
            dist.insert(v, 0);
            queue.push_back(v);
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            for w in self.grid.neighbors(v) {
                if self.grid.depth(w) > level || dist.contains_key(&w) {
                    continue;
                }
                if targets.contains(&w) {
                    return d + 1;
                }
                dist.insert(w, d + 1);
                queue.push_back(w);
            }
        }
        unreachable!("ring segments on one ring are connected")
    }

    // A segment is an ancestor set of some vertex exactly when repeatedly
    // taking its smallest child segment ends in a single vertex.
    fn is_genuine(&mut self, s: Segment) -> bool {
        if s.len == 1 {
            return true;
        }
        if let Some(&g) = self.genuine.get(&s) {
            return g;
        }
        let mut chain = vec![s];
        let mut cur = s;
        let verdict = loop {
            if cur.len == 1 {
                break true;
            }
            if cur.len > self.max_len() || chain.len() > 8 * (self.bound as usize + 2) {
                break cur.len <= self.max_len();
            }
            if let Some(&g) = self.genuine.get(&cur) {
                break g;
            }
            cur = self.smallest_child(cur);
            chain.push(cur);
        };
        for c in chain {
            self.genuine.insert(c, verdict);
        }
        verdict
    }

    // [rightmost child of the left end, leftmost child of the right end]
    fn smallest_child(&mut self, s: Segment) -> Segment {
        let right = self.right(s);
        let left_children = self.grid.children(s.left);
        let start = *left_children.last().unwrap();
        let end = self.grid.own_child(right, 0);
        let len = self.grid.ring_offset(start, end) + 1;
        Segment { left: start, len: len.min(u32::MAX as u128) as u32 }
    }

    fn hull(&mut self, tuple: &[Segment]) -> (VertexId, VertexId, u128) {
        let k = self.grid.depth(tuple[0].left);
        let ring = self.grid.ring_len(k) as i128;
        let base = self.grid.ring_index(tuple[0].left) as i128;
        let (mut lo, mut hi) = (0i128, tuple[0].len as i128 - 1);
        for s in &tuple[1..] {
            let mut o = self.grid.ring_index(s.left) as i128 - base;
            if o > ring / 2 {
                o -= ring;
            } else if o < -ring / 2 {
                o += ring;
            }
            lo = lo.min(o);
            hi = hi.max(o + s.len as i128 - 1);
        }
        let left = self.grid.ring_step(tuple[0].left, lo as i64);
        let right = self.grid.ring_step(tuple[0].left, hi as i64);
        (left, right, (hi - lo) as u128 + 1)
    }
}

impl Stg for RghtStg {
    type Node = Segment;

    fn root(&self) -> Segment {
        Segment { left: self.grid.root(), len: 1 }
    }

    fn depth(&self, s: Segment) -> u32 {
        self.grid.depth(s.left)
    }

    fn parent(&mut self, s: Segment) -> Option<Segment> {
        let k = self.grid.depth(s.left);
        if k == 0 {
            return None;
        }
        if k == 1 {
            return Some(self.root());
        }
        let right = self.right(s);
        let left = self.grid.left_parent(s.left).unwrap();
        let right = self.grid.tree_parent(right).unwrap();
        let len = self.grid.ring_offset(left, right) + 1;
        Some(Segment { left, len: len as u32 })
    }

    fn is_vertex(&self, s: Segment) -> bool {
        s.len == 1
    }

    fn near(&mut self, s: Segment, t: Segment) -> Option<u32> {
        if self.grid.depth(s.left) != self.grid.depth(t.left) {
            return None;
        }
        let key = if s <= t { (s, t) } else { (t, s) };
        if let Some(&d) = self.memo.get(&key) {
            return d.map(u32::from);
        }
        let d = if self.gap(s, t) <= self.bound as u128 { Some(self.distance(s, t) as u8) } else { None };
        self.memo.insert(key, d);
        d.map(u32::from)
    }

    fn near_candidates(&mut self, s: Segment) -> Vec<Segment> {
        let k = self.grid.depth(s.left);
        if k == 0 {
            return vec![s];
        }
        let reach = (self.bound + self.max_len()) as i64;
        let span = reach + s.len as i64 + self.bound as i64;
        let ring = self.grid.ring_len(k);
        let steps = (span as u128).min(ring) as i64;
        let mut x = self.grid.ring_step(s.left, -reach);
        let mut out = Vec::new();
        let mut seen = FxHashSet::default();
        for _ in 0..steps {
            if seen.insert(x) {
                for len in 1..=self.max_len() {
                    if (len as u128) <= ring {
                        out.push(Segment { left: x, len });
                    }
                }
            }
            x = self.grid.succ_inner(x);
        }
        out
    }

    fn child_nodes(&mut self, s: Segment) -> Vec<Segment> {
        let k = self.grid.depth(s.left);
        let mut out = Vec::new();
        let max = self.max_len();
        if k == 0 {
            let ring = self.grid.children(s.left);
            for &v in &ring {
                for len in 1..=max.min(ring.len() as u32) {
                    let seg = Segment { left: v, len };
                    if self.is_genuine(seg) {
                        out.push(seg);
                    }
                }
            }
            return out;
        }
        // left ends: non-leftmost children of the left end; right ends:
        // non-rightmost children of the right end
        let right = self.right(s);
        let lefts: Vec<VertexId> = self.grid.children(s.left).into_iter().skip(1).collect();
        let n = self.grid.own_child_count(right);
        let rights: Vec<VertexId> = (0..n).map(|i| self.grid.own_child(right, i)).collect();
        let ring = self.grid.ring_len(k + 1);
        for &l in &lefts {
            for &r in &rights {
                let len = self.grid.ring_offset(l, r) + 1;
                if len > max as u128 || len > ring {
                    continue;
                }
                let seg = Segment { left: l, len: len as u32 };
                if self.parent(seg) == Some(s) && self.is_genuine(seg) {
                    out.push(seg);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn type_key(&mut self, tuple: &[Segment]) -> Option<Vec<u64>> {
        let k = self.grid.depth(tuple[0].left);
        let up = self.bound;
        let margin = self.bound as i64 + 1;
        if k <= up {
            return None;
        }
        let (left, right, _) = self.hull(tuple);
        let (mut wl, mut wr) = (left, right);
        for _ in 0..up {
            wl = self.grid.left_parent(wl).unwrap();
            wr = self.grid.tree_parent(wr).unwrap();
        }
        wl = self.grid.ring_step(wl, -margin);
        wr = self.grid.ring_step(wr, margin + 1);
        let top = k - up;
        let span = self.grid.ring_offset(wl, wr) + 1;
        if span + self.bound as u128 + 1 >= self.grid.ring_len(top) {
            return None;
        }
        let mut key = Vec::with_capacity(span as usize + 2 * tuple.len() + 1);
        key.push(span as u64);
        let mut x = wl;
        for _ in 0..span {
            key.push(self.grid.vertex_type(x) as u64);
            x = self.grid.succ_inner(x);
        }
        let mut first = wl;
        for _ in 0..up {
            first = self.grid.own_child(first, 0);
        }
        for s in tuple {
            key.push(self.grid.ring_offset(first, s.left) as u64);
            key.push(s.len as u64);
        }
        Some(key)
    }

    fn is_regular(&self) -> bool {
        true
    }

    fn max_near_distance(&self) -> u32 {
        self.bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rght::GridParams;

    fn stg710() -> RghtStg {
        RghtStg::new(Grid::new(GridParams::new(7, 1, 0)).unwrap()).unwrap()
    }

    #[test]
    fn unit_segments_are_vertices() {
        let mut stg = stg710();
        let v = stg.grid_mut().vertex_at(&"2/1".parse().unwrap()).unwrap();
        let s = stg.vertex_node(v);
        assert!(stg.is_vertex(s));
        assert!(!stg.is_vertex(Segment { left: v, len: 2 }));
        assert_eq!(stg.near(s, s), Some(0));
    }

    #[test]
    fn parents_of_vertex() {
        let mut stg = stg710();
        let v = stg.grid_mut().vertex_at(&"2/1/0".parse().unwrap()).unwrap();
        let s = stg.vertex_node(v);
        let p = stg.parent(s).unwrap();
        assert_eq!(p, stg.grid_mut().parents(v).unwrap());
    }

    #[test]
    fn children_partition_vertices() {
        let mut stg = stg710();
        let root = stg.root();
        let mut count = 0;
        let mut level = vec![root];
        for _ in 0..3 {
            let mut next = Vec::new();
            for s in level {
                for c in stg.child_nodes(s) {
                    assert_eq!(stg.parent(c), Some(s));
                    next.push(c);
                }
            }
            count = next.iter().filter(|s| s.len == 1).count();
            level = next;
        }
        assert_eq!(count, 56);
    }

    #[test]
    fn far_segments_unrelated() {
        let mut stg = stg710();
        let v = stg.grid_mut().vertex_at(&"0/0/0".parse().unwrap()).unwrap();
        let w = stg.grid_mut().ring_step(v, 3);
        assert_eq!(stg.near(Segment { left: v, len: 1 }, Segment { left: w, len: 1 }), None);
        let w = stg.grid_mut().ring_step(v, 2);
        assert_eq!(stg.near(Segment { left: v, len: 1 }, Segment { left: w, len: 1 }), Some(2));
    }
}
