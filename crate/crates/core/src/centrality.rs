//! Pseudo-betweenness: `b(v) = sum over ordered pairs (v1, v2) of
//! gamma^(d(v1,v) + d(v,v2) - d(v1,v2))`, with `0^0 = 1`.

use crate::counter::{Counter, KeyMode, Template};
use crate::error::{Error, Result};
use crate::rght::{Grid, VertexId};
use crate::stg::RghtStg;

const CENTRE: u32 = 0;
const ENDPOINT: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct BetweennessResult {
    pub gamma: f64,
    pub scores: Vec<f64>,
}

/// Scores for every embedded vertex; `radius` bounds the depths of
/// `positions`.
pub fn pseudo_betweenness(grid: Grid, positions: &[VertexId], radius: u32, gamma: f64) -> Result<BetweennessResult> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::InvalidParams(format!("gamma must lie in [0, 1), got {gamma}")));
    }
    // edges (v1, v), (v, v2), (v1, v2)
    let template = Template::triangle(ENDPOINT, CENTRE, ENDPOINT);
    let mode = KeyMode::Linear { coefs: vec![1, 1, -1], keep_depth: vec![false; 3] };
    let mut counter = Counter::with_mode(RghtStg::new(grid)?, template, radius, mode)?;
    for &v in positions {
        let s = counter.stg().vertex_node(v);
        counter.add(ENDPOINT, s, 1.0)?;
    }
    let mut scores = Vec::with_capacity(positions.len());
    for &v in positions {
        let s = counter.stg().vertex_node(v);
        counter.add(CENTRE, s, 1.0)?;
        scores.push(counter.count_aggregate(|k| gamma.powi(k.exponent())));
        counter.add(CENTRE, s, -1.0)?;
    }
    Ok(BetweennessResult { gamma, scores })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rght::GridParams;

    fn grid() -> Grid {
        Grid::new(GridParams::new(7, 1, 0)).unwrap()
    }

    #[test]
    fn single_vertex() {
        let mut g = grid();
        let v = g.ring(2)[3];
        assert_eq!(pseudo_betweenness(g, &[v], 2, 0.3).unwrap().scores, vec![1.0]);
    }

    #[test]
    fn path_middle() {
        let mut g = grid();
        let r = g.root();
        let c = g.children(r)[0];
        let cc = g.children(c)[0];
        // the middle vertex lies on the only geodesic between the others
        let b = pseudo_betweenness(g, &[r, c, cc], 2, 0.0).unwrap().scores;
        assert_eq!(b[1], 2.0 + 5.0);
    }

    #[test]
    fn rejects_gamma_one() {
        assert!(pseudo_betweenness(grid(), &[], 2, 1.0).is_err());
    }
}
