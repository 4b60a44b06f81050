//! Segment tree graphs: a rooted tree of nodes (segments) whose leaves
//! include the graph vertices, plus a bounded "near" relation between
//! equal-depth nodes that carries exact distances.

mod binary;
mod rght;

use std::fmt::Debug;
use std::hash::Hash;
use std::rc::Rc;

use rustc_hash::FxHashMap;

pub use binary::{BinaryNode, BinaryStg, MAX_LATERAL};
pub use rght::RghtStg;

/// Memoised [`Stg::neighbors`] results.
pub(crate) type NeighborCache<N> = FxHashMap<N, Rc<Vec<(N, u32)>>>;

/// Operations the counting structures need from a segment tree graph.
pub trait Stg {
    type Node: Copy + Eq + Hash + Ord + Debug;

    fn root(&self) -> Self::Node;

    fn depth(&self, s: Self::Node) -> u32;

    fn parent(&mut self, s: Self::Node) -> Option<Self::Node>;

    /// True for nodes that are single graph vertices.
    fn is_vertex(&self, s: Self::Node) -> bool;

    /// `Some(delta_N(s, t))` if the two nodes are related, else `None`.
    /// Nodes at different depths are never related.
    fn near(&mut self, s: Self::Node, t: Self::Node) -> Option<u32>;

    /// Superset of the nodes related to `s`; callers filter with
    /// [`Stg::near`]. May include nodes without vertex descendants.
    fn near_candidates(&mut self, s: Self::Node) -> Vec<Self::Node>;

    /// Nodes whose parent is `s` and which have vertex descendants.
    fn child_nodes(&mut self, s: Self::Node) -> Vec<Self::Node>;

    /// Key that is equal for tuples whose descendant structure is the same
    /// (up to depth), or `None` when no such summary is available.
    fn type_key(&mut self, tuple: &[Self::Node]) -> Option<Vec<u64>>;

    fn is_regular(&self) -> bool;

    /// Upper bound on `delta_N` over related pairs.
    fn max_near_distance(&self) -> u32;

    /// Related nodes with vertex descendants, with their `delta_N`.
    fn neighbors(&mut self, s: Self::Node) -> Vec<(Self::Node, u32)> {
        let mut out: Vec<_> = self
            .near_candidates(s)
            .into_iter()
            .filter_map(|t| self.near(s, t).map(|d| (t, d)))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Ancestor chain of `s` from `s` itself up to the root.
pub fn ancestors<S: Stg>(stg: &mut S, s: S::Node) -> Vec<S::Node> {
    let mut out = vec![s];
    let mut cur = s;
    while let Some(p) = stg.parent(cur) {
        out.push(p);
        cur = p;
    }
    out
}

/// Graph distance through the tree: the minimum over all levels of
/// `k + l + delta_N` where the `k`-th and `l`-th ancestors meet in `N`.
pub fn stg_distance<S: Stg>(stg: &mut S, s1: S::Node, s2: S::Node) -> u32 {
    let (mut a, mut b) = (s1, s2);
    let (mut ka, mut kb) = (0, 0);
    while stg.depth(a) > stg.depth(b) {
        a = stg.parent(a).expect("non-root node has a parent");
        ka += 1;
    }
    while stg.depth(b) > stg.depth(a) {
        b = stg.parent(b).expect("non-root node has a parent");
        kb += 1;
    }
    let mut best = u32::MAX;
    loop {
        if let Some(d) = stg.near(a, b) {
            best = best.min(ka + kb + d);
        }
        match (stg.parent(a), stg.parent(b)) {
            (Some(pa), Some(pb)) => {
                a = pa;
                b = pb;
                ka += 1;
                kb += 1;
            }
            _ => break,
        }
        if ka + kb >= best {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rght::{Grid, GridParams};

    #[test]
    fn root_distance_is_depth() {
        let g = Grid::new(GridParams::new(7, 1, 0)).unwrap();
        let mut stg = RghtStg::with_bound(g, 2);
        let v = stg.grid_mut().vertex_at(&"1/2/0".parse().unwrap()).unwrap();
        let root = stg.root();
        let s = stg.vertex_node(v);
        assert_eq!(stg_distance(&mut stg, root, s), 3);
        let w = stg.grid_mut().succ(v).unwrap();
        let t = stg.vertex_node(w);
        assert_eq!(stg_distance(&mut stg, s, t), 1);
        assert_eq!(stg_distance(&mut stg, s, s), 0);
    }
}
