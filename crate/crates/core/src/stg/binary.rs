use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use super::Stg;
use crate::error::{Error, Result};

/// Largest supported number of lateral coordinates.
pub const MAX_LATERAL: usize = 6;

/// Lateral window of the near relation, per coordinate.
const WINDOW: i64 = 4;

/// A vertex of the `d`-dimensional binary grid below the origin: lateral
/// coordinates in `[0, 2^depth)` plus the depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryNode {
    pub depth: u32,
    pub x: [i64; MAX_LATERAL],
}

type Point = ([i64; MAX_LATERAL], i64);

#[derive(Clone, Debug)]
pub struct BinaryStg {
    lateral: usize,
    residue_bits: u32,
    memo: FxHashMap<([i8; MAX_LATERAL], [u16; MAX_LATERAL]), u8>,
}

impl BinaryStg {
    /// `dims` counts the depth coordinate, so `dims = 2` is the binary grid
    /// of the plane.
    pub fn new(dims: usize) -> Result<Self> {
        if !(2..=MAX_LATERAL + 1).contains(&dims) {
            return Err(Error::InvalidParams(format!("binary grid dimension {dims} not in 2..={}", MAX_LATERAL + 1)));
        }
        let lateral = dims - 1;
        // a path of length <= 4 * lateral climbs at most half that many levels
        let residue_bits = (2 * lateral as u32 + 1).min(15);
        Ok(BinaryStg { lateral, residue_bits, memo: FxHashMap::default() })
    }

    pub fn dims(&self) -> usize {
        self.lateral + 1
    }

    /// Node from lateral coordinates and depth.
    pub fn node(&self, coords: &[i64], depth: u32) -> Result<BinaryNode> {
        if coords.len() != self.lateral {
            return Err(Error::InvalidParams(format!("expected {} lateral coordinates", self.lateral)));
        }
        if depth > 62 {
            return Err(Error::InvalidParams("depth above 62".into()));
        }
        let mut x = [0; MAX_LATERAL];
        for (i, &c) in coords.iter().enumerate() {
            if c < 0 || c >= 1 << depth {
                return Err(Error::InvalidParams(format!("coordinate {c} outside [0, 2^{depth})")));
            }
            x[i] = c;
        }
        Ok(BinaryNode { depth, x })
    }

    /// All nodes with depth at most `depth`, level by level.
    pub fn ball(&self, depth: u32) -> Vec<BinaryNode> {
        let mut out = vec![BinaryNode { depth: 0, x: [0; MAX_LATERAL] }];
        let mut start = 0;
        for _ in 0..depth {
            let end = out.len();
            for i in start..end {
                let s = out[i];
                out.extend(self.children_of(s));
            }
            start = end;
        }
        out
    }

    fn children_of(&self, s: BinaryNode) -> Vec<BinaryNode> {
        (0..1usize << self.lateral)
            .map(|mask| {
                let mut x = [0; MAX_LATERAL];
                for (i, xi) in x.iter_mut().enumerate().take(self.lateral) {
                    *xi = 2 * s.x[i] + ((mask >> i) & 1) as i64;
                }
                BinaryNode { depth: s.depth + 1, x }
            })
            .collect()
    }

    // Exact distance in the full lattice between two points at one level;
    // paths never need to go deeper or further than the lateral L1 distance.
    fn lattice_distance(&self, a: [i64; MAX_LATERAL], b: [i64; MAX_LATERAL]) -> u32 {
        let cap: i64 = (0..self.lateral).map(|i| (a[i] - b[i]).abs()).sum();
        if cap == 0 {
            return 0;
        }
        let start: Point = (a, 0);
        let goal: Point = (b, 0);
        let mut dist: FxHashMap<Point, i64> = FxHashMap::default();
        dist.insert(start, 0);
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            let d = dist[&p];
            if d == cap {
                continue;
            }
            let mut next = Vec::with_capacity(2 * self.lateral + 1 + (1 << self.lateral));
            for i in 0..self.lateral {
                for step in [-1, 1] {
                    let mut x = p.0;
                    x[i] += step;
                    next.push((x, p.1));
                }
            }
            let mut up = p.0;
            for v in up.iter_mut().take(self.lateral) {
                *v = v.div_euclid(2);
            }
            next.push((up, p.1 - 1));
            if p.1 < 0 {
                for mask in 0..1usize << self.lateral {
                    let mut x = p.0;
                    for (i, v) in x.iter_mut().enumerate().take(self.lateral) {
                        *v = 2 * *v + ((mask >> i) & 1) as i64;
                    }
                    next.push((x, p.1 + 1));
                }
            }
            for w in next {
                if w == goal {
                    return (d + 1) as u32;
                }
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(d + 1);
                    queue.push_back(w);
                }
            }
        }
        cap as u32
    }
}

impl Stg for BinaryStg {
    type Node = BinaryNode;

    fn root(&self) -> BinaryNode {
        BinaryNode { depth: 0, x: [0; MAX_LATERAL] }
    }

    fn depth(&self, s: BinaryNode) -> u32 {
        s.depth
    }

    fn parent(&mut self, s: BinaryNode) -> Option<BinaryNode> {
        if s.depth == 0 {
            return None;
        }
        let mut x = s.x;
        for v in x.iter_mut() {
            *v >>= 1;
        }
        Some(BinaryNode { depth: s.depth - 1, x })
    }

    fn is_vertex(&self, _: BinaryNode) -> bool {
        true
    }

    fn near(&mut self, s: BinaryNode, t: BinaryNode) -> Option<u32> {
        if s.depth != t.depth {
            return None;
        }
        let mut diff = [0i8; MAX_LATERAL];
        let mut residue = [0u16; MAX_LATERAL];
        let mask = (1i64 << self.residue_bits) - 1;
        for i in 0..self.lateral {
            let d = t.x[i] - s.x[i];
            if d.abs() > WINDOW {
                return None;
            }
            diff[i] = d as i8;
            residue[i] = (s.x[i] & mask) as u16;
        }
        if let Some(&d) = self.memo.get(&(diff, residue)) {
            return Some(d as u32);
        }
        let mut a = [0; MAX_LATERAL];
        let mut b = [0; MAX_LATERAL];
        for i in 0..self.lateral {
            a[i] = residue[i] as i64;
            b[i] = a[i] + diff[i] as i64;
        }
        let d = self.lattice_distance(a, b);
        self.memo.insert((diff, residue), d as u8);
        Some(d)
    }

    fn near_candidates(&mut self, s: BinaryNode) -> Vec<BinaryNode> {
        let side = 1i64 << s.depth;
        let mut out = vec![s];
        for i in 0..self.lateral {
            let mut next = Vec::new();
            for t in &out {
                for d in -WINDOW..=WINDOW {
                    let c = t.x[i] + d;
                    if (0..side).contains(&c) {
                        let mut u = *t;
                        u.x[i] = c;
                        next.push(u);
                    }
                }
            }
            out = next;
        }
        out
    }

    fn child_nodes(&mut self, s: BinaryNode) -> Vec<BinaryNode> {
        self.children_of(s)
    }

    fn type_key(&mut self, tuple: &[BinaryNode]) -> Option<Vec<u64>> {
        let mask = (1i64 << self.residue_bits) - 1;
        let base = tuple[0];
        let mut key = Vec::with_capacity(self.lateral * (tuple.len() + 1));
        for i in 0..self.lateral {
            key.push((base.x[i] & mask) as u64);
        }
        for s in &tuple[1..] {
            for i in 0..self.lateral {
                key.push((s.x[i] - base.x[i]) as u64);
            }
        }
        Some(key)
    }

    fn is_regular(&self) -> bool {
        true
    }

    fn max_near_distance(&self) -> u32 {
        (WINDOW as u32) * self.lateral as u32
    }
}
