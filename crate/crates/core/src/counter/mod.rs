//! Dynamic counting of distance-constrained template embeddings.
//!
//! For a connected subgraph `D` of the template and a tuple `u` of equal-depth
//! nodes (one per vertex of `D`, related along every edge of `D`), the
//! counter keeps `c_D(u, d)`: the weighted number of maps sending each
//! vertex of `D` below its node with depths and distances `d`. Values at one
//! level are assembled from the level below.

mod key;
mod template;

use std::rc::Rc;

use rustc_hash::{FxHashMap, FxHashSet};

pub use key::{DistKey, DistanceQuery, KeyMode};
pub use template::{Color, Subgraph, Template, MAX_EDGES, MAX_TEMPLATE};

use crate::error::{Error, Result};
use crate::stg::{ancestors, NeighborCache, Stg};

type Values = Rc<Vec<(DistKey, f64)>>;
type Tuple<N> = [N; MAX_TEMPLATE];

#[derive(Clone, Debug)]
struct SubInfo {
    shape: Subgraph,
    vertices: Vec<usize>,
    edges: Vec<usize>,
    // linear mode: per level, the coefficients of template edges that leave
    // this subgraph from one of its vertices
    outgoing: i32,
}

#[derive(Clone, Copy, Debug)]
enum Source {
    Stored,
    Regular(Color),
}

/// Counting structure over a segment tree graph, restricted to vertices of
/// depth at most `radius`.
pub struct Counter<S: Stg> {
    stg: S,
    template: Template,
    mode: KeyMode,
    radius: u32,
    subs: Vec<SubInfo>,
    sub_index: FxHashMap<Subgraph, usize>,
    full: usize,
    vals: FxHashMap<(Color, S::Node), f64>,
    active: FxHashSet<(Color, S::Node)>,
    partials: FxHashMap<(usize, Tuple<S::Node>), Values>,
    neighbor_cache: NeighborCache<S::Node>,
    child_cache: FxHashMap<S::Node, Rc<Vec<S::Node>>>,
    frozen: bool,
    typed: FxHashMap<(usize, Vec<u64>, u32), Values>,
    untyped: FxHashMap<(usize, Tuple<S::Node>), Values>,
}

impl<S: Stg> Counter<S> {
    pub fn new(stg: S, template: Template, radius: u32) -> Result<Self> {
        Self::with_mode(stg, template, radius, KeyMode::Exact)
    }

    pub fn with_mode(stg: S, template: Template, radius: u32, mode: KeyMode) -> Result<Self> {
        mode.validate(&template)?;
        if radius > 2000 {
            return Err(Error::InvalidParams(format!("radius {radius} too large")));
        }
        let subs: Vec<SubInfo> = template
            .subgraphs()
            .into_iter()
            .map(|shape| {
                let vertices: Vec<usize> = (0..template.len()).filter(|&w| shape.contains_vertex(w)).collect();
                let edges: Vec<usize> = (0..template.edges().len()).filter(|&e| shape.contains_edge(e)).collect();
                let outgoing = match &mode {
                    KeyMode::Linear { coefs, .. } => template
                        .edges()
                        .iter()
                        .enumerate()
                        .filter(|&(e, _)| !shape.contains_edge(e))
                        .map(|(e, &(a, b))| {
                            coefs[e] * (shape.contains_vertex(a) as i32 + shape.contains_vertex(b) as i32)
                        })
                        .sum(),
                    _ => 0,
                };
                SubInfo { shape, vertices, edges, outgoing }
            })
            .collect();
        let sub_index: FxHashMap<Subgraph, usize> = subs.iter().enumerate().map(|(i, s)| (s.shape.clone(), i)).collect();
        let all = Subgraph { vertices: (1 << template.len()) - 1, edges: ((1u16 << template.edges().len()) - 1) as u8 };
        let full = sub_index[&all];
        Ok(Counter {
            stg,
            template,
            mode,
            radius,
            subs,
            sub_index,
            full,
            vals: FxHashMap::default(),
            active: FxHashSet::default(),
            partials: FxHashMap::default(),
            neighbor_cache: FxHashMap::default(),
            child_cache: FxHashMap::default(),
            frozen: false,
            typed: FxHashMap::default(),
            untyped: FxHashMap::default(),
        })
    }

    pub fn stg(&self) -> &S {
        &self.stg
    }

    pub fn stg_mut(&mut self) -> &mut S {
        &mut self.stg
    }

    pub fn into_stg(self) -> S {
        self.stg
    }

    pub fn template(&self) -> &Template {
        &self.template
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn subgraph_count(&self) -> usize {
        self.subs.len()
    }

    /// Current value of vertex `s` in color `k`.
    pub fn value(&self, k: Color, s: S::Node) -> f64 {
        self.vals.get(&(k, s)).copied().unwrap_or(0.0)
    }

    /// Add `x` to the value of vertex `s` in color `k`.
    pub fn add(&mut self, k: Color, s: S::Node, x: f64) -> Result<()> {
        if self.frozen {
            return Err(Error::Frozen);
        }
        let depth = self.stg.depth(s);
        if depth > self.radius {
            return Err(Error::OutOfBall { depth, radius: self.radius });
        }
        if !self.stg.is_vertex(s) {
            return Err(Error::InvalidParams("only vertices carry values".into()));
        }
        if x == 0.0 {
            return Ok(());
        }
        let entry = self.vals.entry((k, s)).or_insert(0.0);
        *entry += x;
        if *entry == 0.0 {
            self.vals.remove(&(k, s));
        }
        let chain = ancestors(&mut self.stg, s);
        for &a in &chain {
            self.active.insert((k, a));
        }
        let touched: Vec<usize> =
            (0..self.subs.len()).filter(|&i| self.subs[i].vertices.iter().any(|&w| self.template.color(w) == k)).collect();
        for (i, &a) in chain.iter().enumerate() {
            let level = depth - i as u32;
            let mut tuples = FxHashSet::default();
            for &sub in &touched {
                let starts: Vec<usize> =
                    self.subs[sub].vertices.iter().copied().filter(|&w| self.template.color(w) == k).collect();
                for w0 in starts {
                    self.tuples_through(sub, w0, a, &mut tuples);
                }
            }
            for (sub, tuple) in tuples {
                let values = self.compute(sub, level, &tuple, Source::Stored);
                if values.is_empty() {
                    self.partials.remove(&(sub, tuple));
                } else {
                    self.partials.insert((sub, tuple), Rc::new(values));
                }
            }
        }
        Ok(())
    }

    /// Equivalent to adding 1 in color `k0` to every vertex of the ball,
    /// evaluated once per type of node tuple. The counter accepts no
    /// further updates afterwards.
    pub fn init_regular(&mut self, k0: Color) -> Result<()> {
        if !self.stg.is_regular() {
            return Err(Error::NotRegular);
        }
        if self.frozen || !self.vals.is_empty() {
            return Err(Error::NotFresh);
        }
        let root = [self.stg.root(); MAX_TEMPLATE];
        let values = self.regular_value(self.full, 0, &root, k0);
        self.typed.clear();
        self.untyped.clear();
        self.partials.insert((self.full, root), values);
        self.frozen = true;
        Ok(())
    }

    /// All nonzero `(key, count)` pairs for the whole template.
    pub fn root_values(&self) -> &[(DistKey, f64)] {
        let root = [self.stg.root(); MAX_TEMPLATE];
        self.partials.get(&(self.full, root)).map_or(&[], |v| v.as_slice())
    }

    /// Weighted number of maps matching `key` exactly.
    pub fn count_key(&self, key: &DistKey) -> f64 {
        self.root_values().iter().filter(|(k, _)| k == key).map(|&(_, v)| v).sum()
    }

    /// Exact-mode count for a query; out-of-range queries give zero.
    pub fn count(&self, q: &DistanceQuery) -> Result<f64> {
        if self.mode != KeyMode::Exact {
            return Err(Error::UnsupportedQuery("exact queries need an exact-mode counter".into()));
        }
        let key = q.to_key(&self.template)?;
        Ok(self.count_key(&key))
    }

    /// `sum_key weight(key) * count(key)` over the stored keys.
    pub fn count_aggregate(&self, weight: impl Fn(&DistKey) -> f64) -> f64 {
        self.root_values().iter().map(|(k, v)| weight(k) * v).sum()
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

    // Tuples of subgraph `sub` placing `a` at template vertex `w0`, every
    // other vertex on a node with descendants of its color.
    fn tuples_through(&mut self, sub: usize, w0: usize, a: S::Node, out: &mut FxHashSet<(usize, Tuple<S::Node>)>) {
        let info = self.subs[sub].clone();
        let mut order = vec![(w0, w0)];
        let mut placed = 1u8 << w0;
        let mut i = 0;
        while i < order.len() {
            let x = order[i].0;
            for &e in &info.edges {
                let (p, q) = self.template.edges()[e];
                for (from, to) in [(p, q), (q, p)] {
                    if from == x && placed >> to & 1 == 0 {
                        placed |= 1 << to;
                        order.push((to, x));
                    }
                }
            }
            i += 1;
        }
        let mut tuple = [self.stg.root(); MAX_TEMPLATE];
        tuple[w0] = a;
        self.extend_tuple(sub, &info, &order, 1, &mut tuple, out);
    }

    fn extend_tuple(
        &mut self,
        sub: usize,
        info: &SubInfo,
        order: &[(usize, usize)],
        pos: usize,
        tuple: &mut Tuple<S::Node>,
        out: &mut FxHashSet<(usize, Tuple<S::Node>)>,
    ) {
        if pos == order.len() {
            for &e in &info.edges {
                let (a, b) = self.template.edges()[e];
                if self.stg.near(tuple[a], tuple[b]).is_none() {
                    return;
                }
            }
            out.insert((sub, *tuple));
            return;
        }
        let (w, from) = order[pos];
        let k = self.template.color(w);
        let candidates = self.neighbors_of(tuple[from]);
        for &(t, _) in candidates.iter() {
            if self.active.contains(&(k, t)) {
                tuple[w] = t;
                self.extend_tuple(sub, info, order, pos + 1, tuple, out);
            }
        }
    }

    fn point_value(&self, k: Color, s: S::Node, source: Source) -> f64 {
        match source {
            Source::Stored => self.value(k, s),
            Source::Regular(k0) => (k == k0) as u8 as f64,
        }
    }

    fn lookup(&mut self, sub: usize, level: u32, tuple: &Tuple<S::Node>, source: Source) -> Option<Values> {
        match source {
            Source::Stored => self.partials.get(&(sub, *tuple)).cloned(),
            Source::Regular(k0) => {
                let v = self.regular_value(sub, level, tuple, k0);
                (!v.is_empty()).then_some(v)
            }
        }
    }

    fn regular_value(&mut self, sub: usize, level: u32, tuple: &Tuple<S::Node>, k0: Color) -> Values {
        let nodes: Vec<S::Node> = self.subs[sub].vertices.iter().map(|&w| tuple[w]).collect();
        match self.stg.type_key(&nodes) {
            Some(tk) => {
                let key = (sub, tk, level);
                if let Some(v) = self.typed.get(&key) {
                    return v.clone();
                }
                let v = Rc::new(self.compute(sub, level, tuple, Source::Regular(k0)));
                self.typed.insert(key, v.clone());
                v
            }
            None => {
                if let Some(v) = self.untyped.get(&(sub, *tuple)) {
                    return v.clone();
                }
                let v = Rc::new(self.compute(sub, level, tuple, Source::Regular(k0)));
                self.untyped.insert((sub, *tuple), v.clone());
                v
            }
        }
    }

    // c_D(u, .) from the values one level below.
    fn compute(&mut self, sub: usize, level: u32, u: &Tuple<S::Node>, source: Source) -> Vec<(DistKey, f64)> {
        let info = self.subs[sub].clone();
        let ends: Vec<(usize, usize)> = info.edges.iter().map(|&e| self.template.edges()[e]).collect();
        let base_dist: Vec<u32> = ends
            .iter()
            .map(|&(a, b)| self.stg.near(u[a], u[b]).expect("tuples are related along subgraph edges"))
            .collect();
        let mut acc: FxHashMap<DistKey, f64> = FxHashMap::default();
        let all = info.shape.vertices;
        let mut below = all;
        loop {
            self.expand(&info, &ends, &base_dist, level, u, below, source, &mut acc);
            if below == 0 {
                break;
            }
            below = (below - 1) & all;
        }
        let mut out: Vec<(DistKey, f64)> = acc.into_iter().filter(|&(_, v)| v != 0.0).collect();
        out.sort_by_key(|a| a.0);
        out
    }

    // Contribution of maps where exactly the vertices in `below` descend
    // strictly below `u`.
    #[allow(clippy::too_many_arguments)]
    fn expand(
        &mut self,
        info: &SubInfo,
        ends: &[(usize, usize)],
        base_dist: &[u32],
        level: u32,
        u: &Tuple<S::Node>,
        below: u8,
        source: Source,
        acc: &mut FxHashMap<DistKey, f64>,
    ) {
        let mut factor = 1.0;
        let mut base = DistKey::default();
        for &w in &info.vertices {
            if below >> w & 1 == 1 {
                continue;
            }
            if !self.stg.is_vertex(u[w]) {
                return;
            }
            let v = self.point_value(self.template.color(w), u[w], source);
            if v == 0.0 {
                return;
            }
            factor *= v;
            if self.mode.keeps_depth(w) {
                base.set_depth(w, level);
            }
        }
        if below != 0 && level >= self.radius {
            return;
        }
        let deep: Vec<usize> = info.vertices.iter().copied().filter(|&w| below >> w & 1 == 1).collect();
        let mut options = Vec::with_capacity(deep.len());
        for &w in &deep {
            let k = self.template.color(w);
            let children = self.children_of(u[w]);
            let picked: Vec<S::Node> = match source {
                Source::Stored => children.iter().copied().filter(|c| self.active.contains(&(k, *c))).collect(),
                Source::Regular(k0) if k == k0 => children.to_vec(),
                Source::Regular(_) => Vec::new(),
            };
            if picked.is_empty() {
                return;
            }
            options.push(picked);
        }
        let mut pick = vec![0usize; deep.len()];
        loop {
            let mut child = *u;
            for (i, &w) in deep.iter().enumerate() {
                child[w] = options[i][pick[i]];
            }
            self.combine(info, ends, base_dist, level, &child, below, base, factor, source, acc);
            let mut i = 0;
            while i < pick.len() {
                pick[i] += 1;
                if pick[i] < options[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
            if i == pick.len() {
                break;
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn combine(
        &mut self,
        info: &SubInfo,
        ends: &[(usize, usize)],
        base_dist: &[u32],
        level: u32,
        child: &Tuple<S::Node>,
        below: u8,
        base: DistKey,
        factor: f64,
        source: Source,
        acc: &mut FxHashMap<DistKey, f64>,
    ) {
        // edges whose endpoints stay related one level down
        let mut near = 0u8;
        for (i, &(a, b)) in ends.iter().enumerate() {
            if below >> a & 1 == 1 && below >> b & 1 == 1 && self.stg.near(child[a], child[b]).is_some() {
                near |= 1 << i;
            }
        }
        let mut product: Vec<(DistKey, f64)> = vec![(base, factor)];
        let mut left = below;
        while left != 0 {
            let start = left.trailing_zeros() as usize;
            let mut comp = 1u8 << start;
            loop {
                let mut grown = comp;
                for (i, &(a, b)) in ends.iter().enumerate() {
                    if near >> i & 1 == 1 && (comp >> a & 1 == 1 || comp >> b & 1 == 1) {
                        grown |= 1 << a | 1 << b;
                    }
                }
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            left &= !comp;
            let mut edges = 0u8;
            for (i, &e) in info.edges.iter().enumerate() {
                let (a, _) = ends[i];
                if near >> i & 1 == 1 && comp >> a & 1 == 1 {
                    edges |= 1 << e;
                }
            }
            let idx = self.sub_index[&Subgraph { vertices: comp, edges }];
            let mut tuple = [self.stg.root(); MAX_TEMPLATE];
            for w in 0..MAX_TEMPLATE {
                if comp >> w & 1 == 1 {
                    tuple[w] = child[w];
                }
            }
            let Some(values) = self.lookup(idx, level + 1, &tuple, source) else {
                return;
            };
            let mut next = Vec::with_capacity(product.len() * values.len());
            for &(k1, v1) in &product {
                for &(k2, v2) in values.iter() {
                    next.push((k1 + k2, v1 * v2));
                }
            }
            product = next;
        }
        for (mut key, mut value) in product {
            if let KeyMode::Linear { .. } = self.mode {
                key.shift_exponent(info.outgoing);
            }
            for (i, &(a, b)) in ends.iter().enumerate() {
                if near >> i & 1 == 1 {
                    continue;
                }
                let e = info.edges[i];
                let dist = key.depth(a) as i64 + key.depth(b) as i64 + base_dist[i] as i64 - 2 * level as i64;
                match &self.mode {
                    KeyMode::Exact => key.set_edge(e, dist as u32),
                    KeyMode::Linear { coefs, .. } => key.shift_exponent(coefs[e] * base_dist[i] as i32),
                    KeyMode::Weighted { weights } => {
                        value *= weights[e].get(dist as usize).copied().unwrap_or(0.0);
                    }
                }
            }
            if value != 0.0 {
                *acc.entry(key).or_insert(0.0) += value;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rght::{Grid, GridParams};
    use crate::stg::RghtStg;

    fn stg710() -> RghtStg {
        RghtStg::new(Grid::new(GridParams::new(7, 1, 0)).unwrap()).unwrap()
    }

    #[test]
    fn self_pair() {
        let stg = stg710();
        let root = stg.root();
        let mut c = Counter::new(stg, Template::edge(0, 0), 3).unwrap();
        assert_eq!(c.subgraph_count(), 3);
        let q = DistanceQuery::new(vec![0, 0], vec![0]);
        assert_eq!(c.count(&q).unwrap(), 0.0);
        c.add(0, root, 2.0).unwrap();
        assert_eq!(c.count(&q).unwrap(), 4.0);
    }

    #[test]
    fn root_and_depth_two() {
        let mut stg = stg710();
        let root = stg.root();
        let w = stg.grid_mut().vertex_at(&"0/0".parse().unwrap()).unwrap();
        let w = stg.vertex_node(w);
        let mut c = Counter::new(stg, Template::edge(0, 0), 3).unwrap();
        c.add(0, root, 1.0).unwrap();
        c.add(0, w, 1.0).unwrap();
        assert_eq!(c.count(&DistanceQuery::new(vec![0, 2], vec![2])).unwrap(), 1.0);
        assert_eq!(c.count(&DistanceQuery::new(vec![2, 2], vec![0])).unwrap(), 1.0);
    }

    #[test]
    fn regular_ring_sizes() {
        let mut c = Counter::new(stg710(), Template::single(0), 2).unwrap();
        c.init_regular(0).unwrap();
        let q = DistanceQuery::new(vec![2], vec![]);
        assert_eq!(c.count(&q).unwrap(), 21.0);
        assert_eq!(c.count_aggregate(|_| 1.0), 29.0);
        assert_eq!(c.add(0, c.stg().root(), 1.0), Err(Error::Frozen));
    }

    #[test]
    fn regular_needs_fresh() {
        let stg = stg710();
        let root = stg.root();
        let mut c = Counter::new(stg, Template::single(0), 2).unwrap();
        c.add(0, root, 1.0).unwrap();
        assert_eq!(c.init_regular(0), Err(Error::NotFresh));
    }
}
