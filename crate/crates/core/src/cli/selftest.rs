use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use hyperseg::centrality::pseudo_betweenness;
use hyperseg::counter::{Counter, DistanceQuery, Template};
use hyperseg::dhrg::{Connection, DhrgInstance, DhrgModel, Radial};
use hyperseg::metrics::{compute_d_bound, growth_constant};
use hyperseg::oracle::{brute_betweenness, brute_loglik, brute_pair_histogram, enumerate_all, BallGraph};
use hyperseg::paircount::PairCounter;
use hyperseg::rght::{Grid, GridParams, VertexId};
use hyperseg::stg::{stg_distance, RghtStg};
use hyperseg::{Error, Result};

use super::Output;

type Suite = fn() -> Result<Value>;

const SUITES: &[(&str, Suite)] = &[
    ("dbound", dbound),
    ("growth", growth),
    ("realization", realization),
    ("counter", counter),
    ("regular", regular),
    ("paircount", paircount),
    ("dhrg", dhrg),
    ("betweenness", betweenness),
];

/// Runs one named suite or all of them; each reports `{"pass": bool, ...}`.
pub(super) fn run(only: Option<&str>) -> Result<Output> {
    let chosen: Vec<&(&str, Suite)> = match only {
        Some(name) => {
            let s = SUITES.iter().find(|(n, _)| *n == name).ok_or_else(|| {
                let names: Vec<&str> = SUITES.iter().map(|(n, _)| *n).collect();
                Error::InvalidParams(format!("unknown suite `{name}`; choose from {}", names.join(", ")))
            })?;
            vec![s]
        }
        None => SUITES.iter().collect(),
    };
    let mut report = Map::new();
    let mut all = true;
    for (name, suite) in chosen {
        let result = suite()?;
        all &= result["pass"] == Value::Bool(true);
        report.insert(name.to_string(), result);
    }
    let report = json!({ "pass": all, "suites": report });
    Ok(if all { Output::Json(report) } else { Output::Failed(report) })
}

fn grid(q: u32, a: u32, b: u32) -> Grid {
    Grid::new(GridParams::new(q, a, b)).expect("valid parameters")
}

fn random_vertices(g: &mut Grid, radius: u32, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<VertexId>> {
    (0..n)
        .map(|_| {
            let r = rng.random_range(0..=radius);
            let len = g.ring_len(r);
            g.vertex_at_ring_index(r, rng.random_range(0..len))
        })
        .collect()
}

fn dbound() -> Result<Value> {
    let mut got = Vec::new();
    let mut pass = true;
    for (q, a, b, want) in [(7, 1, 0, 2), (8, 1, 0, 2), (7, 1, 1, 3), (8, 1, 1, 3)] {
        let d = compute_d_bound(&mut grid(q, a, b))?;
        pass &= d == want;
        got.push(json!({"q": q, "a": a, "b": b, "d_bound": d, "expected": want}));
    }
    Ok(json!({"pass": pass, "cases": got}))
}

fn growth() -> Result<Value> {
    let g710 = growth_constant(&grid(7, 1, 0), 1e-12);
    let g711 = growth_constant(&grid(7, 1, 1), 1e-12);
    let golden = (3.0 + 5f64.sqrt()) / 2.0;
    let pass = (g710 - golden).abs() < 1e-6 && (g711 - 1.72208).abs() < 1e-4;
    Ok(json!({"pass": pass, "g710": g710, "g711": g711}))
}

fn realization() -> Result<Value> {
    let mut checked = 0u64;
    let mut mismatches = 0u64;
    for (q, a, b, radius) in [(7, 1, 0, 5), (7, 1, 1, 4)] {
        let mut g = grid(q, a, b);
        let ball = BallGraph::new(&mut g, radius);
        let mut stg = RghtStg::new(g)?;
        for (i, &v) in ball.vertices.iter().enumerate() {
            let d = ball.graph.distances_from(i);
            for (j, &w) in ball.vertices.iter().enumerate() {
                let (s, t) = (stg.vertex_node(v), stg.vertex_node(w));
                mismatches += (stg_distance(&mut stg, s, t) != d[j]) as u64;
                checked += 1;
            }
        }
    }
    Ok(json!({"pass": mismatches == 0, "pairs": checked, "mismatches": mismatches}))
}

fn counter() -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut runs = 0;
    let mut failures = 0;
    for template in [Template::edge(0, 1), Template::path3(0, 1, 0), Template::triangle(0, 1, 1)] {
        let mut g = grid(7, 1, 0);
        let ball = g.ball(4);
        let mut stg = Some(RghtStg::new(g)?);
        for _ in 0..5 {
            let mut c = Counter::new(stg.take().expect("returned"), template.clone(), 4)?;
            let mut coloring = Vec::new();
            for _ in 0..10 {
                let v = ball[rng.random_range(0..ball.len())];
                let (k, x) = (rng.random_range(0..2), rng.random_range(-2..=3) as f64);
                let s = c.stg().vertex_node(v);
                c.add(k, s, x)?;
                coloring.push((k, v, x));
            }
            let mut got: Vec<(DistanceQuery, f64)> =
                c.root_values().iter().map(|(k, v)| (DistanceQuery::from_key(k, &template), *v)).collect();
            let mut s = c.into_stg();
            let mut want: Vec<(DistanceQuery, f64)> = enumerate_all(s.grid_mut(), &template, &coloring)?.into_iter().collect();
            got.sort_by(|a, b| (&a.0.vertex, &a.0.edge).cmp(&(&b.0.vertex, &b.0.edge)));
            want.sort_by(|a, b| (&a.0.vertex, &a.0.edge).cmp(&(&b.0.vertex, &b.0.edge)));
            failures += (got != want) as u32;
            runs += 1;
            stg = Some(s);
        }
    }
    Ok(json!({"pass": failures == 0, "runs": runs, "failures": failures}))
}

fn regular() -> Result<Value> {
    let mut failures = 0;
    for template in [Template::edge(0, 0), Template::triangle(0, 0, 0)] {
        let radius = 3;
        let stg = RghtStg::new(grid(7, 1, 0))?;
        let mut bulk = Counter::new(stg.clone(), template.clone(), radius)?;
        bulk.init_regular(0)?;
        let mut explicit = Counter::new(stg, template, radius)?;
        let ball = explicit.stg_mut().grid_mut().ball(radius);
        for v in ball {
            let s = explicit.stg().vertex_node(v);
            explicit.add(0, s, 1.0)?;
        }
        let mut a = bulk.root_values().to_vec();
        let mut b = explicit.root_values().to_vec();
        a.sort_by_key(|x| x.0);
        b.sort_by_key(|x| x.0);
        failures += (a != b) as u32;
    }
    Ok(json!({"pass": failures == 0, "failures": failures}))
}

fn paircount() -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut g = grid(7, 1, 1);
    let radius = 4;
    let points = random_vertices(&mut g, radius, 40, &mut rng)?;
    let mut pc = PairCounter::new(RghtStg::new(g)?, radius);
    let mut values = Vec::new();
    for &v in &points {
        let x = rng.random_range(-1..=2) as f64;
        let s = pc.stg().vertex_node(v);
        pc.add(s, x)?;
        values.push((v, x));
    }
    let got = pc.histogram().to_vec();
    let want = brute_pair_histogram(pc.stg_mut().grid_mut(), &values, radius);
    Ok(json!({"pass": got == want, "histogram": got}))
}

fn dhrg() -> Result<Value> {
    let g = grid(7, 1, 0);
    let model = DhrgModel::new(40, 5, Radial::Exponential { alpha: 0.7 }, Connection::Logistic { t: 1.0, shift: -3.0 })?;
    let mut inst = DhrgInstance::generate(model.clone(), g, 3)?;
    let (pos, edges) = (inst.positions().to_vec(), inst.edges().to_vec());
    let fast = inst.loglik();
    let brute = brute_loglik(inst.grid_mut(), &pos, &edges, |d| model.p(d));
    let pass = (fast - brute).abs() <= 1e-9 * brute.abs().max(1.0);
    Ok(json!({"pass": pass, "loglik": fast, "brute_force": brute, "edges": edges.len()}))
}

fn betweenness() -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut g = grid(7, 1, 0);
    let points = random_vertices(&mut g, 4, 30, &mut rng)?;
    let mut worst: f64 = 0.0;
    let mut exact = true;
    for gamma in [0.0, 0.5] {
        let got = pseudo_betweenness(g.clone(), &points, 4, gamma)?.scores;
        let want = brute_betweenness(&mut g, &points, gamma);
        for (a, b) in got.iter().zip(&want) {
            if gamma == 0.0 {
                exact &= a == b;
            } else {
                worst = worst.max((a - b).abs() / b.abs());
            }
        }
    }
    Ok(json!({"pass": exact && worst <= 1e-9, "max_relative_error": worst}))
}
