//! Discrete hyperbolic random graphs: vertices placed on a ball of a grid,
//! each pair joined with a probability depending on their grid distance.

mod io;
mod stats;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Geometric;
use rustc_hash::{FxHashMap, FxHashSet};

pub use io::{read_edges, read_embedding, write_edges, write_embedding};
pub use stats::{expected_stats, ExpectedStats};

use crate::error::{Error, Result};
use crate::paircount::PairCounter;
use crate::rght::{Grid, VertexId};
use crate::stg::{stg_distance, RghtStg};

/// Distribution of vertex depths.
#[derive(Clone, Debug, PartialEq)]
pub enum Radial {
    /// `P(X = r)` for `r = 0..=R`.
    Table(Vec<f64>),
    /// `P(X = r)` proportional to `exp(alpha r)`.
    Exponential { alpha: f64 },
}

/// Connection probability by distance.
#[derive(Clone, Debug, PartialEq)]
pub enum Connection {
    /// `p(d)` for `d = 0..=2R`.
    Table(Vec<f64>),
    /// `p(d) = 1 / (1 + exp(t d + shift))`.
    Logistic { t: f64, shift: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DhrgModel {
    pub n: usize,
    pub radius: u32,
    radial: Vec<f64>,
    conn: Vec<f64>,
}

impl DhrgModel {
    pub fn new(n: usize, radius: u32, radial: Radial, conn: Connection) -> Result<Self> {
        let r = radius as usize;
        let radial = match radial {
            Radial::Table(p) => p,
            Radial::Exponential { alpha } => {
                let w: Vec<f64> = (0..=r).map(|i| (alpha * i as f64).exp()).collect();
                let total: f64 = w.iter().sum();
                w.into_iter().map(|x| x / total).collect()
            }
        };
        if radial.len() != r + 1 || radial.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidModel(format!("radial table must hold {} probabilities", r + 1)));
        }
        let mass: f64 = radial.iter().sum();
        if (mass - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidModel(format!("radial probabilities sum to {mass}")));
        }
        let conn = match conn {
            Connection::Table(p) => p,
            Connection::Logistic { t, shift } => (0..=2 * r).map(|d| 1.0 / (1.0 + (t * d as f64 + shift).exp())).collect(),
        };
        if conn.len() != 2 * r + 1 || conn.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidModel(format!("connection table must hold {} probabilities", 2 * r + 1)));
        }
        Ok(DhrgModel { n, radius, radial, conn })
    }

    pub fn radial(&self) -> &[f64] {
        &self.radial
    }

    pub fn connection(&self) -> &[f64] {
        &self.conn
    }

    pub fn p(&self, d: u32) -> f64 {
        self.conn.get(d as usize).copied().unwrap_or(0.0)
    }
}

/// An embedded graph together with its pair and edge distance histograms.
pub struct DhrgInstance {
    model: DhrgModel,
    pairs: PairCounter<RghtStg>,
    positions: Vec<VertexId>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    edge_hist: Vec<u64>,
}

/// One accepted or rejected local-search proposal.
#[derive(Clone, Debug, PartialEq)]
pub struct MoveRecord {
    pub iteration: usize,
    pub vertex: usize,
    pub from: VertexId,
    pub to: VertexId,
    pub delta: f64,
    pub accepted: bool,
    pub loglik: f64,
}

impl DhrgInstance {
    /// Instance for a given embedding (0-based vertex ids) and edge list.
    pub fn from_embedding(model: DhrgModel, grid: Grid, positions: Vec<VertexId>, edges: &[(usize, usize)]) -> Result<Self> {
        if positions.len() != model.n {
            return Err(Error::InvalidModel(format!("{} positions for {} vertices", positions.len(), model.n)));
        }
        let pairs = PairCounter::new(RghtStg::new(grid)?, model.radius);
        Self::assemble(model, pairs, positions, edges)
    }

    // `pairs` must hold no values.
    fn assemble(
        model: DhrgModel,
        mut pairs: PairCounter<RghtStg>,
        positions: Vec<VertexId>,
        edges: &[(usize, usize)],
    ) -> Result<Self> {
        for &v in &positions {
            let s = pairs.stg().vertex_node(v);
            pairs.add(s, 1.0)?;
        }
        let mut seen = FxHashSet::default();
        let mut list = Vec::new();
        let mut adjacency = vec![Vec::new(); model.n];
        let mut edge_hist = vec![0u64; 2 * model.radius as usize + 1];
        for &(a, b) in edges {
            if a >= model.n || b >= model.n {
                return Err(Error::InvalidModel(format!("edge ({}, {}) names a missing vertex", a + 1, b + 1)));
            }
            if a == b {
                return Err(Error::InvalidModel(format!("self-loop at vertex {}", a + 1)));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                continue;
            }
            list.push(e);
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let mut inst = DhrgInstance { model, pairs, positions, edges: Vec::new(), adjacency, edge_hist: Vec::new() };
        for &(a, b) in &list {
            let d = inst.distance(inst.positions[a], inst.positions[b]);
            edge_hist[d as usize] += 1;
        }
        inst.edges = list;
        inst.edge_hist = edge_hist;
        Ok(inst)
    }

    /// Sample positions and edges. Identical inputs give identical output.
    pub fn generate(model: DhrgModel, mut grid: Grid, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let depth_dist = WeightedIndex::new(&model.radial).map_err(|e| Error::InvalidModel(e.to_string()))?;
        let mut positions = Vec::with_capacity(model.n);
        for _ in 0..model.n {
            let r = depth_dist.sample(&mut rng) as u32;
            let idx = rng.random_range(0..grid.ring_len(r));
            positions.push(grid.vertex_at_ring_index(r, idx)?);
        }
        let stg = RghtStg::new(grid)?;
        let mut pairs = PairCounter::new(stg, model.radius);
        let mut occupants: FxHashMap<VertexId, Vec<usize>> = FxHashMap::default();
        for (v, &pos) in positions.iter().enumerate() {
            let s = pairs.stg().vertex_node(pos);
            pairs.add(s, 1.0)?;
            occupants.entry(pos).or_default().push(v);
        }
        let mut edges = Vec::new();
        for (v, &pos) in positions.iter().enumerate() {
            let s = pairs.stg().vertex_node(pos);
            pairs.add(s, -1.0)?;
            occupants.get_mut(&pos).expect("occupied").retain(|&w| w != v);
            let profile = pairs.profile(s)?;
            for (d, &q) in profile.iter().enumerate() {
                let p = model.p(d as u32);
                let q = q.round() as u64;
                if q == 0 || p <= 0.0 {
                    continue;
                }
                let skip = Geometric::new(p).map_err(|e| Error::InvalidModel(e.to_string()))?;
                let mut idx = 0u64;
                loop {
                    idx = idx.saturating_add(skip.sample(&mut rng)).saturating_add(1);
                    if idx > q {
                        break;
                    }
                    let (t, j) = pairs.select_at_distance(s, d as u32, idx)?;
                    let w = occupants[&t.left][j as usize - 1];
                    edges.push((v.min(w), v.max(w)));
                }
            }
        }
        edges.sort_unstable();
        Self::assemble(model, pairs, positions, &edges)
    }

    pub fn model(&self) -> &DhrgModel {
        &self.model
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[VertexId] {
        &self.positions
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn grid(&self) -> &Grid {
        self.pairs.stg().grid()
    }

    pub fn grid_mut(&mut self) -> &mut Grid {
        self.pairs.stg_mut().grid_mut()
    }

    pub fn edge_histogram(&self) -> &[u64] {
        &self.edge_hist
    }

    /// Unordered pairs of distinct vertices per distance.
    pub fn pair_histogram(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.pairs.histogram().iter().map(|&c| c / 2.0).collect();
        out[0] -= self.n() as f64 / 2.0;
        out
    }

    pub fn distance(&mut self, a: VertexId, b: VertexId) -> u32 {
        let stg = self.pairs.stg_mut();
        let (s, t) = (stg.vertex_node(a), stg.vertex_node(b));
        stg_distance(stg, s, t)
    }

    /// `sum_d E(d) log p(d) + (P(d) - E(d)) log(1 - p(d))`; negative
    /// infinity when an observed pair has probability zero.
    pub fn loglik(&self) -> f64 {
        let pairs = self.pair_histogram();
        let mut total = 0.0;
        for (d, &p_d) in pairs.iter().enumerate() {
            let e = self.edge_hist[d] as f64;
            let non = p_d - e;
            let p = self.model.p(d as u32);
            if e > 0.0 {
                total += e * p.ln();
            }
            if non > 0.0 {
                total += non * (1.0 - p).ln();
            }
        }
        total
    }

    /// Move vertex `v` to `to`; returns the change in log-likelihood.
    pub fn move_vertex(&mut self, v: usize, to: VertexId) -> Result<f64> {
        let depth = self.grid().depth(to);
        if depth > self.model.radius {
            return Err(Error::OutOfBall { depth, radius: self.model.radius });
        }
        let from = self.positions[v];
        if from == to {
            return Ok(0.0);
        }
        let before = self.loglik();
        let (s, t) = (self.pairs.stg().vertex_node(from), self.pairs.stg().vertex_node(to));
        self.pairs.add(s, -1.0)?;
        self.pairs.add(t, 1.0)?;
        for i in 0..self.adjacency[v].len() {
            let u = self.positions[self.adjacency[v][i]];
            let old = self.distance(from, u);
            let new = self.distance(to, u);
            self.edge_hist[old as usize] -= 1;
            self.edge_hist[new as usize] += 1;
        }
        self.positions[v] = to;
        Ok(self.loglik() - before)
    }

    /// Hill climbing: move a random vertex to a random grid neighbour of
    /// its position, keeping the move only if the likelihood improves.
    pub fn local_search(&mut self, iters: usize, seed: u64) -> Result<Vec<MoveRecord>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut log = Vec::with_capacity(iters);
        let mut current = self.loglik();
        for iteration in 0..iters {
            let v = rng.random_range(0..self.n());
            let from = self.positions[v];
            let radius = self.model.radius;
            let grid = self.grid_mut();
            let options: Vec<VertexId> = grid.neighbors(from).into_iter().filter(|&w| grid.depth(w) <= radius).collect();
            let to = options[rng.random_range(0..options.len())];
            let delta = self.move_vertex(v, to)?;
            let accepted = delta > 0.0;
            if accepted {
                current = self.loglik();
            } else {
                self.move_vertex(v, from)?;
            }
            log.push(MoveRecord { iteration, vertex: v, from, to, delta, accepted, loglik: current });
        }
        Ok(log)
    }
}
