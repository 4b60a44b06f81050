//! Pair-distance histogram of a single coloring with `O(R^2)` updates and
//! indexed lookup of the vertices at a given distance.

use std::rc::Rc;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::stg::{ancestors, NeighborCache, Stg};

/// `hist[d]` counts ordered pairs `(v, w)` weighted by `val(v) val(w)` with
/// `d(v, w) = d`; self pairs land in `hist[0]`.
pub struct PairCounter<S: Stg> {
    stg: S,
    radius: u32,
    vals: FxHashMap<S::Node, f64>,
    // per node, descendant value sums indexed by absolute depth
    sums: FxHashMap<S::Node, Vec<f64>>,
    hist: Vec<f64>,
    neighbor_cache: NeighborCache<S::Node>,
    child_cache: FxHashMap<S::Node, Rc<Vec<S::Node>>>,
}

impl<S: Stg> PairCounter<S> {
    pub fn new(stg: S, radius: u32) -> Self {
        PairCounter {
            stg,
            radius,
            vals: FxHashMap::default(),
            sums: FxHashMap::default(),
            hist: vec![0.0; 2 * radius as usize + 1],
            neighbor_cache: FxHashMap::default(),
            child_cache: FxHashMap::default(),
        }
    }

    pub fn stg(&self) -> &S {
        &self.stg
    }

    pub fn stg_mut(&mut self) -> &mut S {
        &mut self.stg
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn value(&self, s: S::Node) -> f64 {
        self.vals.get(&s).copied().unwrap_or(0.0)
    }

    /// Total value of the vertices below `s` at depth `d`.
    pub fn partial(&self, s: S::Node, d: u32) -> f64 {
        self.sums.get(&s).and_then(|c| c.get(d as usize)).copied().unwrap_or(0.0)
    }

    pub fn histogram(&self) -> &[f64] {
        &self.hist
    }

    /// `Count(d)`, zero outside `0..=2R`.
    pub fn count(&self, d: u32) -> f64 {
        self.hist.get(d as usize).copied().unwrap_or(0.0)
    }

    fn check_vertex(&self, s: S::Node) -> Result<()> {
        let depth = self.stg.depth(s);
        if depth > self.radius {
            return Err(Error::OutOfBall { depth, radius: self.radius });
        }
        if !self.stg.is_vertex(s) {
            return Err(Error::InvalidParams("only vertices carry values".into()));
        }
        Ok(())
    }

    pub fn add(&mut self, s: S::Node, x: f64) -> Result<()> {
        self.check_vertex(s)?;
        if x == 0.0 {
            return Ok(());
        }
        let chain = ancestors(&mut self.stg, s);
        let profile = self.profile_along(&chain);
        for (h, p) in self.hist.iter_mut().zip(&profile) {
            *h += 2.0 * x * p;
        }
        self.hist[0] += x * x;
        let depth = self.stg.depth(s) as usize;
        let width = self.radius as usize + 1;
        for a in chain {
            self.sums.entry(a).or_insert_with(|| vec![0.0; width])[depth] += x;
        }
        let v = self.vals.entry(s).or_insert(0.0);
        *v += x;
        if *v == 0.0 {
            self.vals.remove(&s);
        }
        Ok(())
    }

    /// `profile[d] = sum_w val(w) [d(s, w) = d]`, `s` itself included.
    pub fn profile(&mut self, s: S::Node) -> Result<Vec<f64>> {
        self.check_vertex(s)?;
        let chain = ancestors(&mut self.stg, s);
        Ok(self.profile_along(&chain))
    }

    fn neighbors_of(&mut self, s: S::Node) -> Rc<Vec<(S::Node, u32)>> {
        if let Some(n) = self.neighbor_cache.get(&s) {
            return n.clone();
        }
        let n = Rc::new(self.stg.neighbors(s));
        self.neighbor_cache.insert(s, n.clone());
        n
    }

    fn children_of(&mut self, s: S::Node) -> Rc<Vec<S::Node>> {
        if let Some(c) = self.child_cache.get(&s) {
            return c.clone();
        }
        let c = Rc::new(self.stg.child_nodes(s));
        self.child_cache.insert(s, c.clone());
        c
    }

    // Related nodes `t` of `a` with the value sums of vertices whose deepest
    // related ancestor pair with the chain sits at this level: `c(t)` minus
    // the related children of the chain's next node below.
    fn level_groups(&mut self, a: S::Node, below: Option<S::Node>) -> Vec<(S::Node, u32, Vec<f64>)> {
        let width = self.radius as usize + 1;
        let mut groups: Vec<(S::Node, u32, Vec<f64>)> = Vec::new();
        let mut slot: FxHashMap<S::Node, usize> = FxHashMap::default();
        for &(t, delta) in self.neighbors_of(a).iter() {
            if let Some(c) = self.sums.get(&t) {
                slot.insert(t, groups.len());
                groups.push((t, delta, c.clone()));
            }
        }
        if let Some(b) = below {
            for &(t, _) in self.neighbors_of(b).iter() {
                let Some(c) = self.sums.get(&t) else { continue };
                let c = c.clone();
                let p = self.stg.parent(t).expect("related nodes below the root have parents");
                let i = slot[&p];
                for (g, v) in groups[i].2.iter_mut().zip(c.iter()).take(width) {
                    *g -= v;
                }
            }
        }
        groups
    }

    fn profile_along(&mut self, chain: &[S::Node]) -> Vec<f64> {
        let mut out = vec![0.0; 2 * self.radius as usize + 1];
        let dv = chain.len() - 1;
        for (i, &a) in chain.iter().enumerate() {
            let level = dv - i;
            let below = i.checked_sub(1).map(|j| chain[j]);
            for (_, delta, c) in self.level_groups(a, below) {
                for (dw, &v) in c.iter().enumerate().skip(level) {
                    if v != 0.0 {
                        out[dv + dw + delta as usize - 2 * level] += v;
                    }
                }
            }
        }
        out
    }

    /// The `idx`-th (1-based) unit of value at distance `d` from `s`, for
    /// integer colorings. Returns the vertex and the 1-based position within
    /// its value. Order: chain level from `s` upwards, then related node
    /// order, then subtree order.
    pub fn select_at_distance(&mut self, s: S::Node, d: u32, idx: u64) -> Result<(S::Node, u64)> {
        self.check_vertex(s)?;
        let chain = ancestors(&mut self.stg, s);
        let dv = chain.len() - 1;
        let mut rest = idx;
        if rest == 0 {
            return Err(Error::IndexOutOfRange { index: idx, len: 0 });
        }
        let mut total = 0u64;
        for (i, &a) in chain.iter().enumerate() {
            let level = dv - i;
            let below = i.checked_sub(1).map(|j| chain[j]);
            for (t, delta, c) in self.level_groups(a, below) {
                let dw = d as i64 - dv as i64 + 2 * level as i64 - delta as i64;
                if dw < level as i64 || dw > self.radius as i64 {
                    continue;
                }
                let n = c[dw as usize].round() as u64;
                total += n;
                if rest <= n {
                    let excluded: Vec<S::Node> = match below {
                        Some(b) => self.neighbors_of(b).iter().map(|&(x, _)| x).collect(),
                        None => Vec::new(),
                    };
                    return Ok(self.descend(t, dw as u32, rest, &excluded));
                }
                rest -= n;
            }
        }
        Err(Error::IndexOutOfRange { index: idx, len: total })
    }

    fn descend(&mut self, mut t: S::Node, dw: u32, mut rest: u64, excluded: &[S::Node]) -> (S::Node, u64) {
        let mut first = true;
        loop {
            if self.stg.depth(t) == dw {
                return (t, rest);
            }
            let children = self.children_of(t);
            let mut next = None;
            for &ch in children.iter() {
                if first && excluded.contains(&ch) {
                    continue;
                }
                let n = self.partial(ch, dw).round() as u64;
                if rest <= n {
                    next = Some(ch);
                    break;
                }
                rest -= n;
            }
            t = next.expect("partial sums are consistent with the children");
            first = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rght::{Grid, GridParams};
    use crate::stg::RghtStg;

    fn counter() -> PairCounter<RghtStg> {
        PairCounter::new(RghtStg::new(Grid::new(GridParams::new(7, 1, 0)).unwrap()).unwrap(), 4)
    }

    #[test]
    fn single_self_pair() {
        let mut pc = counter();
        let v = pc.stg_mut().grid_mut().ring(3)[10];
        let s = pc.stg().vertex_node(v);
        pc.add(s, 1.0).unwrap();
        assert_eq!(pc.count(0), 1.0);
        assert_eq!(pc.histogram().iter().sum::<f64>(), 1.0);
        assert_eq!(pc.count(99), 0.0);
    }

    #[test]
    fn ring_neighbours() {
        let mut pc = counter();
        let v = pc.stg_mut().grid_mut().ring(3)[10];
        let w = pc.stg_mut().grid_mut().succ(v).unwrap();
        let (s, t) = (pc.stg().vertex_node(v), pc.stg().vertex_node(w));
        pc.add(s, 1.0).unwrap();
        pc.add(t, 1.0).unwrap();
        assert_eq!(pc.count(0), 2.0);
        assert_eq!(pc.count(1), 2.0);
        assert_eq!(pc.select_at_distance(s, 1, 1).unwrap(), (t, 1));
        assert!(pc.select_at_distance(s, 1, 2).is_err());
    }

    #[test]
    fn rejects_outside_ball() {
        let mut pc = counter();
        let v = pc.stg_mut().grid_mut().ring(5)[0];
        let s = pc.stg().vertex_node(v);
        assert_eq!(pc.add(s, 1.0), Err(Error::OutOfBall { depth: 5, radius: 4 }));
    }
}
