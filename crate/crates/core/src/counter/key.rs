use std::ops::Add;

use super::template::{Template, MAX_EDGES, MAX_TEMPLATE};
use crate::error::{Error, Result};

const EXPONENT: usize = MAX_TEMPLATE;

/// Packed distance data of one embedding class: vertex depths in the first
/// slots, then edge distances (exact mode) or a single exponent (linear
/// mode).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DistKey(pub [i16; MAX_TEMPLATE + MAX_EDGES]);

impl DistKey {
    pub fn depth(&self, w: usize) -> u32 {
        self.0[w] as u32
    }

    pub fn edge(&self, e: usize) -> u32 {
        self.0[MAX_TEMPLATE + e] as u32
    }

    pub fn exponent(&self) -> i32 {
        self.0[EXPONENT] as i32
    }

    pub(crate) fn set_depth(&mut self, w: usize, d: u32) {
        self.0[w] = d as i16;
    }

    pub(crate) fn set_edge(&mut self, e: usize, d: u32) {
        self.0[MAX_TEMPLATE + e] = d as i16;
    }

    pub(crate) fn shift_exponent(&mut self, by: i32) {
        self.0[EXPONENT] += by as i16;
    }
}

impl Add for DistKey {
    type Output = DistKey;

    fn add(mut self, rhs: DistKey) -> DistKey {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        self
    }
}

/// What a counter remembers about each embedding.
#[derive(Clone, Debug, PartialEq)]
pub enum KeyMode {
    /// Every vertex depth and edge distance.
    Exact,
    /// Only `sum_e coefs[e] * d(e)` plus the depths of the flagged vertices.
    Linear { coefs: Vec<i32>, keep_depth: Vec<bool> },
    /// Vertex depths; each embedding is weighted by `prod_e weights[e][d(e)]`
    /// (zero past the end of a table).
    Weighted { weights: Vec<Vec<f64>> },
}

impl KeyMode {
    pub(crate) fn validate(&self, template: &Template) -> Result<()> {
        let m = template.edges().len();
        let n = template.len();
        match self {
            KeyMode::Exact => Ok(()),
            KeyMode::Linear { coefs, keep_depth } if coefs.len() == m && keep_depth.len() == n => Ok(()),
            KeyMode::Weighted { weights } if weights.len() == m => Ok(()),
            _ => Err(Error::InvalidTemplate("key mode does not match the template size".into())),
        }
    }

    pub(crate) fn keeps_depth(&self, w: usize) -> bool {
        match self {
            KeyMode::Linear { keep_depth, .. } => keep_depth[w],
            _ => true,
        }
    }
}

/// Target depths per template vertex and distances per template edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DistanceQuery {
    pub vertex: Vec<u32>,
    pub edge: Vec<u32>,
}

impl DistanceQuery {
    pub fn new(vertex: Vec<u32>, edge: Vec<u32>) -> Self {
        DistanceQuery { vertex, edge }
    }

    pub fn to_key(&self, template: &Template) -> Result<DistKey> {
        if self.vertex.len() != template.len() || self.edge.len() != template.edges().len() {
            return Err(Error::InvalidTemplate("query does not match the template".into()));
        }
        let mut key = DistKey::default();
        for (w, &d) in self.vertex.iter().enumerate() {
            key.set_depth(w, d.min(i16::MAX as u32));
        }
        for (e, &d) in self.edge.iter().enumerate() {
            key.set_edge(e, d.min(i16::MAX as u32));
        }
        Ok(key)
    }

    pub fn from_key(key: &DistKey, template: &Template) -> Self {
        DistanceQuery {
            vertex: (0..template.len()).map(|w| key.depth(w)).collect(),
            edge: (0..template.edges().len()).map(|e| key.edge(e)).collect(),
        }
    }
}
