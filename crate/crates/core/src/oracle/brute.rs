use rustc_hash::FxHashMap;

use super::BallGraph;
use crate::counter::{Color, DistanceQuery, Template};
use crate::error::{Error, Result};
use crate::rght::{Grid, VertexId};

const ENUMERATION_LIMIT: u128 = 100_000_000;

/// Pairwise distances between `points` (rows follow the input order).
pub fn distance_matrix(grid: &mut Grid, points: &[VertexId]) -> Vec<Vec<u32>> {
    let radius = points.iter().map(|&v| grid.depth(v)).max().unwrap_or(0);
    let ball = BallGraph::new(grid, radius);
    points
        .iter()
        .map(|&v| {
            let d = ball.graph.distances_from(ball.index[&v] as usize);
            points.iter().map(|w| d[ball.index[w] as usize]).collect()
        })
        .collect()
}

/// Every nonzero value of the embedding sum, keyed by the distance query it
/// satisfies. Only colored vertices can contribute, so the sum runs over
/// maps into the support of the coloring.
pub fn enumerate_all(
    grid: &mut Grid,
    template: &Template,
    coloring: &[(Color, VertexId, f64)],
) -> Result<FxHashMap<DistanceQuery, f64>> {
    let mut merged: FxHashMap<(Color, VertexId), f64> = FxHashMap::default();
    for &(k, v, x) in coloring {
        *merged.entry((k, v)).or_insert(0.0) += x;
    }
    let mut support: Vec<VertexId> = merged.keys().map(|&(_, v)| v).collect();
    support.sort();
    support.dedup();
    let slot: FxHashMap<VertexId, usize> = support.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let choices: Vec<Vec<(usize, f64)>> = template
        .colors()
        .iter()
        .map(|&k| {
            let mut c: Vec<(usize, f64)> =
                merged.iter().filter(|(&(kk, _), &x)| kk == k && x != 0.0).map(|(&(_, v), &x)| (slot[&v], x)).collect();
            c.sort_by_key(|&(i, _)| i);
            c
        })
        .collect();
    let total = choices.iter().map(|c| c.len() as u128).product::<u128>();
    if total > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(total));
    }
    let mut out = FxHashMap::default();
    if total == 0 {
        return Ok(out);
    }
    let dist = distance_matrix(grid, &support);
    let depth: Vec<u32> = support.iter().map(|&v| grid.depth(v)).collect();
    let mut pick = vec![0usize; template.len()];
    loop {
        let image: Vec<usize> = pick.iter().enumerate().map(|(w, &i)| choices[w][i].0).collect();
        let value: f64 = pick.iter().enumerate().map(|(w, &i)| choices[w][i].1).product();
        let q = DistanceQuery {
            vertex: image.iter().map(|&i| depth[i]).collect(),
            edge: template.edges().iter().map(|&(a, b)| dist[image[a]][image[b]]).collect(),
        };
        *out.entry(q).or_insert(0.0) += value;
        let mut w = 0;
        while w < pick.len() {
            pick[w] += 1;
            if pick[w] < choices[w].len() {
                break;
            }
            pick[w] = 0;
            w += 1;
        }
        if w == pick.len() {
            break;
        }
    }
    out.retain(|_, v| *v != 0.0);
    Ok(out)
}

/// The embedding sum for a single query.
pub fn enumerate_embeddings(
    grid: &mut Grid,
    template: &Template,
    coloring: &[(Color, VertexId, f64)],
    q: &DistanceQuery,
) -> Result<f64> {
    Ok(enumerate_all(grid, template, coloring)?.get(q).copied().unwrap_or(0.0))
}

/// `hist[d] = sum over ordered pairs (v, w) of val(v) val(w) [d(v, w) = d]`,
/// self pairs included, for `d` in `0..=2 * radius`.
pub fn brute_pair_histogram(grid: &mut Grid, values: &[(VertexId, f64)], radius: u32) -> Vec<f64> {
    let mut merged: FxHashMap<VertexId, f64> = FxHashMap::default();
    for &(v, x) in values {
        *merged.entry(v).or_insert(0.0) += x;
    }
    let mut points: Vec<(VertexId, f64)> = merged.into_iter().collect();
    points.sort_by_key(|&(v, _)| v);
    let vertices: Vec<VertexId> = points.iter().map(|&(v, _)| v).collect();
    let dist = distance_matrix(grid, &vertices);
    let mut hist = vec![0.0; 2 * radius as usize + 1];
    for (i, &(_, x)) in points.iter().enumerate() {
        for (j, &(_, y)) in points.iter().enumerate() {
            if let Some(h) = hist.get_mut(dist[i][j] as usize) {
                *h += x * y;
            }
        }
    }
    hist
}

/// Log-likelihood of an edge set over all unordered pairs of distinct
/// vertices (0-based ids) given a connection probability per distance.
pub fn brute_loglik(grid: &mut Grid, positions: &[VertexId], edges: &[(usize, usize)], conn: impl Fn(u32) -> f64) -> f64 {
    let dist = distance_matrix(grid, positions);
    let n = positions.len();
    let mut adjacent = vec![vec![false; n]; n];
    for &(a, b) in edges {
        adjacent[a][b] = true;
        adjacent[b][a] = true;
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let p = conn(dist[i][j]);
            total += if adjacent[i][j] { p.ln() } else { (1.0 - p).ln() };
        }
    }
    total
}

/// `b(v) = sum over ordered pairs (v1, v2) of gamma^(d(v1,v) + d(v,v2) - d(v1,v2))`
/// with `0^0 = 1`.
pub fn brute_betweenness(grid: &mut Grid, positions: &[VertexId], gamma: f64) -> Vec<f64> {
    let dist = distance_matrix(grid, positions);
    let n = positions.len();
    (0..n)
        .map(|v| {
            let mut b = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let e = dist[i][v] + dist[v][j] - dist[i][j];
                    b += gamma.powi(e as i32);
                }
            }
            b
        })
        .collect()
}
