use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;

use hyperseg::oracle::{brute_pair_histogram, BallGraph};
use hyperseg::paircount::PairCounter;
use hyperseg::rght::{Grid, GridParams};
use hyperseg::stg::RghtStg;

fn histograms(q: u32, a: u32, b: u32, seed: u64) {
    let radius = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grid = Grid::new(GridParams::new(q, a, b)).unwrap();
    let ball = grid.ball(radius);
    let mut oracle_grid = grid.clone();
    let mut pc = PairCounter::new(RghtStg::new(grid).unwrap(), radius);
    let mut values = Vec::new();
    for _ in 0..100 {
        let v = ball[rng.random_range(0..ball.len())];
        let x = rng.random_range(-2..=3) as f64;
        pc.add(pc.stg().vertex_node(v), x).unwrap();
        values.push((v, x));
        let want = brute_pair_histogram(&mut oracle_grid, &values, radius);
        assert_eq!(pc.histogram(), want.as_slice());
    }
}

fn selection(q: u32, a: u32, b: u32, seed: u64) {
    let radius = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grid = Grid::new(GridParams::new(q, a, b)).unwrap();
    let ball = grid.ball(radius);
    let oracle = BallGraph::new(&mut grid, radius);
    let mut pc = PairCounter::new(RghtStg::new(grid).unwrap(), radius);
    let mut colored = FxHashSet::default();
    while colored.len() < 150 {
        let v = ball[rng.random_range(0..ball.len())];
        if colored.insert(v) {
            pc.add(pc.stg().vertex_node(v), 1.0).unwrap();
        }
    }
    for _ in 0..30 {
        let v = ball[rng.random_range(0..ball.len())];
        let s = pc.stg().vertex_node(v);
        let dist = oracle.distances_from(v);
        let profile = pc.profile(s).unwrap();
        for d in 0..=2 * radius {
            let want: FxHashSet<_> = colored.iter().copied().filter(|w| dist[w] == d).collect();
            assert_eq!(profile[d as usize], want.len() as f64);
            let mut got = FxHashSet::default();
            for idx in 1..=want.len() as u64 {
                let (t, j) = pc.select_at_distance(s, d, idx).unwrap();
                assert_eq!(j, 1);
                assert!(got.insert(t.left));
            }
            assert!(pc.select_at_distance(s, d, want.len() as u64 + 1).is_err());
            assert_eq!(got, want);
        }
    }
}

pub fn histogram_710() {
    histograms(7, 1, 0, 11);
}

pub fn histogram_711() {
    histograms(7, 1, 1, 12);
}

pub fn select_710() {
    selection(7, 1, 0, 13);
}

pub fn select_711() {
    selection(7, 1, 1, 14);
}
