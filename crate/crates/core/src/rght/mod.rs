//! Lazily generated regular hyperbolic triangulations `G_{q,a,b}`.
//!
//! Every non-root vertex is a non-rightmost child of exactly one tree parent
//! (its right parent), so vertices are named by the sequence of child indices
//! from the root. Rings are generated on demand and all links are cached.

mod goldberg;
mod table;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

pub use table::{TypeTable, TypeTag};

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridParams {
    pub q: u32,
    pub a: u32,
    pub b: u32,
}

impl GridParams {
    pub fn new(q: u32, a: u32, b: u32) -> Self {
        GridParams { q, a, b }
    }

    /// Checks validity and swaps `a` and `b` if needed (`G_{q,a,b}` and
    /// `G_{q,b,a}` are mirror images).
    pub fn canonical(self) -> Result<Self> {
        let (a, b) = if self.b > self.a { (self.b, self.a) } else { (self.a, self.b) };
        if self.q < 7 {
            return Err(Error::InvalidParams(format!("q = {} must be at least 7", self.q)));
        }
        if a < 1 {
            return Err(Error::InvalidParams("a must be at least 1".into()));
        }
        if self.q > 64 || a > 16 {
            return Err(Error::InvalidParams(format!(
                "q = {} and a = {a} exceed the supported range (q <= 64, a <= 16)",
                self.q
            )));
        }
        Ok(GridParams { q: self.q, a, b })
    }
}

impl fmt::Display for GridParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G_{{{},{},{}}}", self.q, self.a, self.b)
    }
}

/// Arena index of a generated vertex. Only meaningful for the grid that
/// produced it; use [`VertexAddress`] for a portable name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub(crate) u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Child indices from the root; the empty address names the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexAddress(pub Vec<u16>);

impl fmt::Display for VertexAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for VertexAddress {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(VertexAddress(Vec::new()));
        }
        s.split('/')
            .map(|p| p.parse::<u16>().map_err(|_| Error::InvalidAddress(s.to_string())))
            .collect::<Result<Vec<_>>>()
            .map(VertexAddress)
    }
}

/// A run of consecutive vertices on one ring, from `left` clockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub left: VertexId,
    pub len: u32,
}

#[derive(Clone, Debug)]
struct Record {
    parent: u32,
    index: u16,
    vtype: TypeTag,
    depth: u32,
    succ: u32,
    pred: u32,
    first_child: u32,
}

#[derive(Clone, Debug)]
pub struct Grid {
    params: GridParams,
    table: Arc<TypeTable>,
    recs: Vec<Record>,
    // counts[m][t]: number of depth-m tree descendants of a type-t vertex
    counts: Vec<Vec<u128>>,
    ring_indices: FxHashMap<u32, u128>,
}

impl Grid {
    pub fn new(params: GridParams) -> Result<Self> {
        let params = params.canonical()?;
        let table = if params.a == 1 && params.b == 0 {
            Arc::new(TypeTable::regular(params.q))
        } else {
            goldberg::table_for(params)?
        };
        Ok(Self::with_table(params, table))
    }

    pub(crate) fn with_table(params: GridParams, table: Arc<TypeTable>) -> Self {
        let root = Record {
            parent: NONE,
            index: 0,
            vtype: table.root_type(),
            depth: 0,
            succ: NONE,
            pred: NONE,
            first_child: NONE,
        };
        let counts = vec![vec![1u128; table.len()]];
        Grid { params, table, recs: vec![root], counts, ring_indices: FxHashMap::default() }
    }

    pub fn params(&self) -> GridParams {
        self.params
    }

    pub fn table(&self) -> &TypeTable {
        &self.table
    }

    pub fn root(&self) -> VertexId {
        VertexId(0)
    }

    /// Number of vertex records created so far.
    pub fn records_created(&self) -> usize {
        self.recs.len()
    }

    pub fn depth(&self, v: VertexId) -> u32 {
        self.recs[v.index()].depth
    }

    pub fn vertex_type(&self, v: VertexId) -> TypeTag {
        self.recs[v.index()].vtype
    }

    pub fn degree(&self, v: VertexId) -> u32 {
        self.table.degree(self.vertex_type(v))
    }

    /// Number of non-rightmost children.
    pub fn own_child_count(&self, v: VertexId) -> u32 {
        self.table.child_word(self.vertex_type(v)).len() as u32
    }

    /// Tree parent (the right parent).
    pub fn tree_parent(&self, v: VertexId) -> Option<VertexId> {
        let p = self.recs[v.index()].parent;
        (p != NONE).then_some(VertexId(p))
    }

    /// Position of `v` among the non-rightmost children of its tree parent.
    pub fn child_index(&self, v: VertexId) -> u32 {
        self.recs[v.index()].index as u32
    }

    /// The `i`-th non-rightmost child of `v`.
    pub fn own_child(&mut self, v: VertexId, i: u32) -> VertexId {
        let r = &self.recs[v.index()];
        debug_assert!(i < self.table.child_word(r.vtype).len() as u32);
        if r.first_child == NONE {
            self.expand(v);
        }
        VertexId(self.recs[v.index()].first_child + i)
    }

    fn expand(&mut self, v: VertexId) {
        let depth = self.recs[v.index()].depth + 1;
        assert!(self.recs.len() < NONE as usize - 64, "vertex arena exhausted");
        let first = self.recs.len() as u32;
        let vtype = self.recs[v.index()].vtype;
        let table = Arc::clone(&self.table);
        for (i, &t) in table.child_word(vtype).iter().enumerate() {
            self.recs.push(Record {
                parent: v.0,
                index: i as u16,
                vtype: t,
                depth,
                succ: NONE,
                pred: NONE,
                first_child: NONE,
            });
        }
        self.recs[v.index()].first_child = first;
    }

    pub fn succ(&mut self, v: VertexId) -> Result<VertexId> {
        if v.0 == 0 {
            return Err(Error::RootHasNoRing);
        }
        Ok(self.succ_inner(v))
    }

    pub fn pred(&mut self, v: VertexId) -> Result<VertexId> {
        if v.0 == 0 {
            return Err(Error::RootHasNoRing);
        }
        Ok(self.pred_inner(v))
    }

    pub(crate) fn succ_inner(&mut self, v: VertexId) -> VertexId {
        let r = &self.recs[v.index()];
        if r.succ != NONE {
            return VertexId(r.succ);
        }
        let p = VertexId(r.parent);
        let i = r.index as u32 + 1;
        let n = self.own_child_count(p);
        let s = if i < n {
            self.own_child(p, i)
        } else if p.0 == 0 {
            self.own_child(p, 0)
        } else {
            let ps = self.succ_inner(p);
            self.own_child(ps, 0)
        };
        self.recs[v.index()].succ = s.0;
        self.recs[s.index()].pred = v.0;
        s
    }

    pub(crate) fn pred_inner(&mut self, v: VertexId) -> VertexId {
        let r = &self.recs[v.index()];
        if r.pred != NONE {
            return VertexId(r.pred);
        }
        let p = VertexId(r.parent);
        let i = r.index as u32;
        let s = if i > 0 {
            self.own_child(p, i - 1)
        } else if p.0 == 0 {
            let n = self.own_child_count(p);
            self.own_child(p, n - 1)
        } else {
            let pp = self.pred_inner(p);
            let n = self.own_child_count(pp);
            self.own_child(pp, n - 1)
        };
        self.recs[v.index()].pred = s.0;
        self.recs[s.index()].succ = v.0;
        s
    }

    /// Vertex `k` steps clockwise (negative: counterclockwise) from `v`.
    pub fn ring_step(&mut self, mut v: VertexId, k: i64) -> VertexId {
        if v.0 == 0 {
            return v;
        }
        if k >= 0 {
            for _ in 0..k {
                v = self.succ_inner(v);
            }
        } else {
            for _ in 0..(-k) {
                v = self.pred_inner(v);
            }
        }
        v
    }

    /// Left parent: differs from the tree parent exactly for leftmost
    /// children below ring 1.
    pub fn left_parent(&mut self, v: VertexId) -> Option<VertexId> {
        let r = &self.recs[v.index()];
        if r.parent == NONE {
            return None;
        }
        let p = VertexId(r.parent);
        if r.index == 0 && r.depth >= 2 {
            Some(self.pred_inner(p))
        } else {
            Some(p)
        }
    }

    /// Parents as a ring segment `[p_L, p_R]` of length 1 or 2.
    pub fn parents(&mut self, v: VertexId) -> Result<Segment> {
        let Some(pl) = self.left_parent(v) else {
            return Err(Error::RootHasNoParent);
        };
        let pr = VertexId(self.recs[v.index()].parent);
        Ok(Segment { left: pl, len: if pl == pr { 1 } else { 2 } })
    }

    /// All children left to right; the last one is the leftmost child of
    /// the successor. The root's children are exactly ring 1.
    pub fn children(&mut self, v: VertexId) -> Vec<VertexId> {
        let n = self.own_child_count(v);
        let mut out: Vec<VertexId> = (0..n).map(|i| self.own_child(v, i)).collect();
        if v.0 != 0 {
            let s = self.succ_inner(v);
            out.push(self.own_child(s, 0));
        }
        out
    }

    /// Parents, ring neighbours and children.
    pub fn neighbors(&mut self, v: VertexId) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.degree(v) as usize);
        if v.0 != 0 {
            let pr = VertexId(self.recs[v.index()].parent);
            let pl = self.left_parent(v).unwrap();
            out.push(pr);
            if pl != pr {
                out.push(pl);
            }
            out.push(self.pred_inner(v));
            out.push(self.succ_inner(v));
        }
        out.extend(self.children(v));
        out
    }

    pub fn address_of(&self, v: VertexId) -> VertexAddress {
        let mut out = Vec::with_capacity(self.depth(v) as usize);
        let mut cur = v.0;
        while cur != 0 {
            let r = &self.recs[cur as usize];
            out.push(r.index);
            cur = r.parent;
        }
        out.reverse();
        VertexAddress(out)
    }

    pub fn vertex_at(&mut self, addr: &VertexAddress) -> Result<VertexId> {
        let mut v = self.root();
        for &i in &addr.0 {
            if i as u32 >= self.own_child_count(v) {
                return Err(Error::InvalidAddress(addr.to_string()));
            }
            v = self.own_child(v, i as u32);
        }
        Ok(v)
    }

    /// `|R_k|`, from the type-count recurrence.
    pub fn ring_size(&self, k: u32) -> BigUint {
        if k == 0 {
            return BigUint::from(1u32);
        }
        let counts = self.table.descendant_counts(k - 1);
        self.table
            .child_word(self.table.root_type())
            .iter()
            .map(|&t| counts[t as usize].clone())
            .sum()
    }

    fn count(&mut self, m: u32, t: TypeTag) -> u128 {
        while self.counts.len() <= m as usize {
            let prev = self.counts.last().unwrap();
            let next = (0..self.table.len())
                .map(|s| {
                    self.table.child_word(s as TypeTag).iter().fold(0u128, |acc, &c| {
                        acc.checked_add(prev[c as usize]).expect("ring index exceeds u128")
                    })
                })
                .collect();
            self.counts.push(next);
        }
        self.counts[m as usize][t as usize]
    }

    /// `|R_k|` as a machine integer; panics beyond `u128`.
    pub fn ring_len(&mut self, k: u32) -> u128 {
        if k == 0 {
            return 1;
        }
        let root = self.table.root_type();
        self.count(k, root)
    }

    /// Clockwise position of `v` on its ring, counted from the vertex
    /// with address `0/0/.../0`.
    pub fn ring_index(&mut self, v: VertexId) -> u128 {
        if let Some(&i) = self.ring_indices.get(&v.0) {
            return i;
        }
        let addr = self.address_of(v);
        let d = addr.0.len() as u32;
        let mut cur = self.table.root_type();
        let mut acc = 0u128;
        for (l, &i) in addr.0.iter().enumerate() {
            let word: Vec<TypeTag> = self.table.child_word(cur)[..i as usize].to_vec();
            let m = d - l as u32 - 1;
            for t in word {
                acc += self.count(m, t);
            }
            cur = self.table.child_word(cur)[i as usize];
        }
        self.ring_indices.insert(v.0, acc);
        acc
    }

    /// Inverse of [`Grid::ring_index`].
    pub fn vertex_at_ring_index(&mut self, depth: u32, mut idx: u128) -> Result<VertexId> {
        if idx >= self.ring_len(depth) {
            return Err(Error::InvalidAddress(format!("ring {depth} index {idx}")));
        }
        let mut v = self.root();
        for l in 0..depth {
            let m = depth - l - 1;
            let t = self.vertex_type(v);
            let word: Vec<TypeTag> = self.table.child_word(t).to_vec();
            let mut chosen = word.len() - 1;
            for (j, &c) in word.iter().enumerate() {
                let cnt = self.count(m, c);
                if idx < cnt {
                    chosen = j;
                    break;
                }
                idx -= cnt;
            }
            v = self.own_child(v, chosen as u32);
        }
        Ok(v)
    }

    /// Clockwise offset from `a` to `b` on a common ring, in `[0, |R_k|)`.
    pub fn ring_offset(&mut self, a: VertexId, b: VertexId) -> u128 {
        let k = self.depth(a);
        debug_assert_eq!(k, self.depth(b));
        if k == 0 {
            return 0;
        }
        let (ia, ib) = (self.ring_index(a), self.ring_index(b));
        if ib >= ia {
            ib - ia
        } else {
            self.ring_len(k) - ia + ib
        }
    }

    /// All vertices of ring `k` in clockwise order, starting at `0/.../0`.
    pub fn ring(&mut self, k: u32) -> Vec<VertexId> {
        let mut cur = vec![self.root()];
        for _ in 0..k {
            let mut next = Vec::new();
            for v in cur {
                let n = self.own_child_count(v);
                for i in 0..n {
                    next.push(self.own_child(v, i));
                }
            }
            cur = next;
        }
        cur
    }

    /// All vertices of `B_r`, ring by ring.
    pub fn ball(&mut self, r: u32) -> Vec<VertexId> {
        let size: u128 = (0..=r).map(|k| self.ring_len(k)).sum();
        let size = usize::try_from(size).expect("ball does not fit in memory");
        self.recs.reserve(size.saturating_sub(self.recs.len()));
        let mut out = Vec::with_capacity(size);
        out.push(self.root());
        let mut start = 0;
        for _ in 0..r {
            let end = out.len();
            for j in start..end {
                let v = out[j];
                let n = self.own_child_count(v);
                for i in 0..n {
                    let c = self.own_child(v, i);
                    out.push(c);
                }
            }
            start = end;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g710() -> Grid {
        Grid::new(GridParams::new(7, 1, 0)).unwrap()
    }

    #[test]
    fn invalid_params() {
        assert!(matches!(Grid::new(GridParams::new(6, 1, 0)), Err(Error::InvalidParams(_))));
        assert!(matches!(Grid::new(GridParams::new(7, 0, 0)), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn root_children() {
        let mut g = g710();
        let r = g.root();
        let ch = g.children(r);
        assert_eq!(ch.len(), 7);
        assert!(ch.iter().all(|&c| g.vertex_type(c) == 1));
        assert_eq!(g.succ(r), Err(Error::RootHasNoRing));
        assert_eq!(g.parents(r), Err(Error::RootHasNoParent));
    }

    #[test]
    fn ring_closure_small() {
        let mut g = g710();
        let v = g.vertex_at(&"3".parse().unwrap()).unwrap();
        assert_eq!(g.ring_step(v, 7), v);
        let w = g.vertex_at(&"3/1".parse().unwrap()).unwrap();
        let mut x = w;
        for i in 1..=21 {
            x = g.succ(x).unwrap();
            assert_eq!(x == w, i == 21);
        }
    }

    #[test]
    fn type_one_children() {
        let mut g = g710();
        let v = g.vertex_at(&"2".parse().unwrap()).unwrap();
        assert_eq!(g.children(v).len(), 4);
        let c = g.own_child(v, 0);
        assert_eq!(g.vertex_type(c), 2);
        assert_eq!(g.parents(c).unwrap().len, 2);
        let c = g.own_child(v, 1);
        assert_eq!(g.parents(c).unwrap().len, 1);
    }

    #[test]
    fn addresses() {
        let mut g = g710();
        assert_eq!(g.address_of(g.root()), VertexAddress::default());
        let v = g.vertex_at(&"0".parse().unwrap()).unwrap();
        assert_eq!(g.depth(v), 1);
        assert!(matches!(g.vertex_at(&"0/7".parse().unwrap()), Err(Error::InvalidAddress(_))));
        assert_eq!("".parse::<VertexAddress>().unwrap(), VertexAddress::default());
        assert_eq!(VertexAddress(vec![0, 2, 1]).to_string(), "0/2/1");
    }

    #[test]
    fn ring_sizes() {
        let g = g710();
        let s: Vec<BigUint> = (0..4).map(|k| g.ring_size(k)).collect();
        assert_eq!(s, [1u32, 7, 21, 56].map(BigUint::from).to_vec());
    }

    #[test]
    fn ring_index_roundtrip() {
        let mut g = g710();
        let ring = g.ring(4);
        assert_eq!(ring.len() as u128, g.ring_len(4));
        for (i, &v) in ring.iter().enumerate() {
            assert_eq!(g.ring_index(v), i as u128);
            assert_eq!(g.vertex_at_ring_index(4, i as u128).unwrap(), v);
        }
        assert_eq!(g.succ(ring[ring.len() - 1]).unwrap(), ring[0]);
    }
}
