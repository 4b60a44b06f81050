use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperseg::centrality::pseudo_betweenness;
use hyperseg::oracle::brute_betweenness;
use hyperseg::rght::{Grid, GridParams};

fn run(q: u32, a: u32, b: u32, radius: u32, n: usize, seed: u64) {
    let mut grid = Grid::new(GridParams::new(q, a, b)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions = Vec::with_capacity(n);
    for _ in 0..n {
        let r = rng.random_range(0..=radius);
        let len = grid.ring_len(r);
        positions.push(grid.vertex_at_ring_index(r, rng.random_range(0..len)).unwrap());
    }
    // a few shared cells
    for i in 0..n / 20 {
        positions[n - 1 - i] = positions[i];
    }
    for gamma in [0.0, 0.5] {
        let start = Instant::now();
        let got = pseudo_betweenness(grid.clone(), &positions, radius, gamma).unwrap().scores;
        let elapsed = start.elapsed();
        let want = brute_betweenness(&mut grid, &positions, gamma);
        for (g, w) in got.iter().zip(&want) {
            if gamma == 0.0 {
                assert_eq!(g, w);
            } else {
                assert!((g - w).abs() <= 1e-9 * w.abs(), "{g} vs {w}");
            }
        }
        eprintln!("{q},{a},{b} n={n} gamma={gamma}: {elapsed:?}");
    }
}

pub fn betweenness_710() {
    run(7, 1, 0, 6, 200, 1);
}

pub fn betweenness_711() {
    run(7, 1, 1, 5, 200, 2);
}
