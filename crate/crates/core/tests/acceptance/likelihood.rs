use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperseg::dhrg::{expected_stats, Connection, DhrgInstance, DhrgModel, Radial};
use hyperseg::metrics::growth_constant;
use hyperseg::oracle::brute_loglik;
use hyperseg::rght::{Grid, GridParams};

fn grid() -> Grid {
    Grid::new(GridParams::new(7, 1, 0)).unwrap()
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn alpha(g: &Grid) -> f64 {
    0.75 * growth_constant(g, 1e-12).ln()
}

pub fn loglik_matches_brute_force_under_moves() {
    let g = grid();
    let model = DhrgModel::new(50, 6, Radial::Exponential { alpha: alpha(&g) }, Connection::Logistic { t: 1.0, shift: -4.0 })
        .unwrap();
    let mut inst = DhrgInstance::generate(model.clone(), g, 11).unwrap();
    assert!(!inst.edges().is_empty());
    let brute = |inst: &mut DhrgInstance| {
        let pos = inst.positions().to_vec();
        let edges = inst.edges().to_vec();
        brute_loglik(inst.grid_mut(), &pos, &edges, |d| model.p(d))
    };
    let start = brute(&mut inst);
    assert!(rel_close(inst.loglik(), start, 1e-9), "{} vs {start}", inst.loglik());
    let ball = inst.grid_mut().ball(6);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut before = start;
    for _ in 0..100 {
        let v = rng.random_range(0..50);
        let to = if rng.random_bool(0.5) {
            ball[rng.random_range(0..ball.len())]
        } else {
            let from = inst.positions()[v];
            let g = inst.grid_mut();
            let nb: Vec<_> = g.neighbors(from).into_iter().filter(|&w| g.depth(w) <= 6).collect();
            nb[rng.random_range(0..nb.len())]
        };
        let delta = inst.move_vertex(v, to).unwrap();
        let after = brute(&mut inst);
        assert!(rel_close(inst.loglik(), after, 1e-9));
        // differences of large sums: relative to the likelihood scale
        assert!((delta - (after - before)).abs() <= 1e-9 * after.abs().max(before.abs()));
        before = after;
    }
}

struct Sample {
    degree: Vec<f64>,
    closed: Vec<f64>,
    wedges: Vec<f64>,
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn sample(model: &DhrgModel, g: &Grid, runs: u64) -> Sample {
    let mut s = Sample { degree: Vec::new(), closed: Vec::new(), wedges: Vec::new() };
    for seed in 0..runs {
        let inst = DhrgInstance::generate(model.clone(), g.clone(), 1000 + seed).unwrap();
        let n = inst.n();
        let mut adjacent = vec![rustc_hash::FxHashSet::default(); n];
        for &(a, b) in inst.edges() {
            adjacent[a].insert(b);
            adjacent[b].insert(a);
        }
        let (mut wedges, mut closed) = (0.0, 0.0);
        for v in 0..n {
            let nb = inst.neighbors(v);
            let k = nb.len() as f64;
            wedges += k * (k - 1.0);
            for (i, &x) in nb.iter().enumerate() {
                for &y in &nb[i + 1..] {
                    closed += 2.0 * adjacent[x].contains(&y) as u8 as f64;
                }
            }
        }
        s.degree.push(2.0 * inst.edges().len() as f64 / n as f64);
        s.closed.push(closed);
        s.wedges.push(wedges);
    }
    s
}

pub fn expected_stats_match_monte_carlo() {
    let g = grid();
    let model = DhrgModel::new(500, 10, Radial::Exponential { alpha: alpha(&g) }, Connection::Logistic { t: 1.0, shift: -10.0 })
        .unwrap();
    let want = expected_stats(&model, g.clone()).unwrap();
    let runs = 200;
    let s = sample(&model, &g, runs);
    let k = runs as f64;

    let deg = mean(&s.degree);
    let deg_se = (s.degree.iter().map(|d| (d - deg).powi(2)).sum::<f64>() / (k - 1.0) / k).sqrt();
    eprintln!("avg degree {deg} ± {deg_se}, expected {}", want.avg_degree);
    assert!((deg - want.avg_degree).abs() <= 3.0 * deg_se);

    let (cx, wy) = (mean(&s.closed), mean(&s.wedges));
    let ratio = cx / wy;
    let resid: f64 = s.closed.iter().zip(&s.wedges).map(|(x, y)| (x - ratio * y).powi(2)).sum::<f64>() / (k - 1.0);
    let ratio_se = (resid / k).sqrt() / wy;
    eprintln!("clustering {ratio} ± {ratio_se}, expected {}", want.clustering);
    assert!((ratio - want.clustering).abs() <= 3.0 * ratio_se);
}
