use super::DhrgModel;
use crate::counter::{Counter, KeyMode, Template};
use crate::error::Result;
use crate::rght::Grid;
use crate::stg::RghtStg;

#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedStats {
    pub avg_degree: f64,
    /// Expected degree of a vertex placed at depth `r`.
    pub degree_by_radius: Vec<f64>,
    /// `NaN` when no wedge can occur.
    pub clustering: f64,
    /// Probability that a random ordered triple forms a wedge around its
    /// middle vertex.
    pub wedge_probability: f64,
}

/// Expected average degree, degree by depth and clustering coefficient,
/// from counts of edges and triangles over the whole ball. Vertex pairs are
/// distinct, so each vertex has `n - 1` potential neighbours.
pub fn expected_stats(model: &DhrgModel, mut grid: Grid) -> Result<ExpectedStats> {
    let radius = model.radius;
    let ring: Vec<f64> = (0..=radius).map(|r| grid.ring_len(r) as f64).collect();
    let a: Vec<f64> = model.radial().iter().zip(&ring).map(|(p, size)| p / size).collect();
    let others = model.n.saturating_sub(1) as f64;

    let stg = RghtStg::new(grid)?;
    let mut edges = Counter::new(stg, Template::edge(0, 0), radius)?;
    edges.init_regular(0)?;
    let mut degree_by_radius = vec![0.0; radius as usize + 1];
    let mut avg_degree = 0.0;
    for (key, count) in edges.root_values() {
        let (r1, r2) = (key.depth(0) as usize, key.depth(1) as usize);
        let w = count * others * a[r2] * model.p(key.edge(0));
        avg_degree += w * a[r1];
        degree_by_radius[r1] += w / ring[r1];
    }

    let p = model.connection().to_vec();
    let ones = vec![1.0; p.len()];
    let stg = edges.into_stg();
    let (wedges, stg) = weighted_triangles(stg, radius, vec![p.clone(), p.clone(), ones], &a)?;
    let (closed, _) = weighted_triangles(stg, radius, vec![p.clone(), p.clone(), p], &a)?;
    let clustering = if wedges > 0.0 { closed / wedges } else { f64::NAN };
    Ok(ExpectedStats { avg_degree, degree_by_radius, clustering, wedge_probability: wedges })
}

// Triangle edges are (0,1), (1,2), (0,2); vertex 1 is the wedge centre.
fn weighted_triangles(stg: RghtStg, radius: u32, weights: Vec<Vec<f64>>, a: &[f64]) -> Result<(f64, RghtStg)> {
    let mode = KeyMode::Weighted { weights };
    let mut tri = Counter::with_mode(stg, Template::triangle(0, 0, 0), radius, mode)?;
    tri.init_regular(0)?;
    let total = tri.count_aggregate(|k| a[k.depth(0) as usize] * a[k.depth(1) as usize] * a[k.depth(2) as usize]);
    Ok((total, tri.into_stg()))
}
