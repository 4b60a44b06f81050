use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperseg::counter::{Counter, DistanceQuery, Template};
use hyperseg::oracle::enumerate_all;
use hyperseg::rght::{Grid, GridParams};
use hyperseg::stg::RghtStg;

#[allow(clippy::too_many_arguments)]
fn run(q: u32, a: u32, b: u32, radius: u32, template: Template, seqs: usize, adds: usize, seed: u64) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grid = Grid::new(GridParams::new(q, a, b)).unwrap();
    let ball = grid.ball(radius);
    let stg = RghtStg::new(grid).unwrap();
    let mut stg = Some(stg);
    let mut nonempty = 0;
    for _ in 0..seqs {
        let mut counter = Counter::new(stg.take().unwrap(), template.clone(), radius).unwrap();
        let mut coloring = Vec::new();
        for _ in 0..adds {
            let v = match coloring.last() {
                Some(&(_, prev, _)) if rng.random_bool(0.7) => {
                    let mut v = prev;
                    for _ in 0..rng.random_range(0..4) {
                        let s = counter.stg_mut().grid_mut();
                        let nb: Vec<_> = s.neighbors(v).into_iter().filter(|&w| s.depth(w) <= radius).collect();
                        v = nb[rng.random_range(0..nb.len())];
                    }
                    v
                }
                _ => ball[rng.random_range(0..ball.len())],
            };
            let k = rng.random_range(0..2u32);
            let x = rng.random_range(1..4) as f64 * if rng.random_bool(0.3) { -1.0 } else { 1.0 };
            let node = counter.stg().vertex_node(v);
            counter.add(k, node, x).unwrap();
            coloring.push((k, v, x));
        }
        let mut got: Vec<(DistanceQuery, f64)> =
            counter.root_values().iter().map(|(k, v)| (DistanceQuery::from_key(k, &template), *v)).collect();
        let mut s = counter.into_stg();
        let want = enumerate_all(s.grid_mut(), &template, &coloring).unwrap();
        nonempty += !want.is_empty() as usize;
        let mut want: Vec<(DistanceQuery, f64)> = want.into_iter().collect();
        got.sort_by(|x, y| format!("{:?}", x.0).cmp(&format!("{:?}", y.0)));
        want.sort_by(|x, y| format!("{:?}", x.0).cmp(&format!("{:?}", y.0)));
        assert_eq!(got, want);
        stg = Some(s);
    }
    assert!(nonempty * 2 > seqs);
    eprintln!("{q},{a},{b} R={radius} {:?}: {:?}", template.edges(), start.elapsed());
}

pub fn edge_710() {
    run(7, 1, 0, 5, Template::edge(0, 1), 50, 14, 1);
}
pub fn path_710() {
    run(7, 1, 0, 5, Template::path3(0, 1, 0), 50, 14, 2);
}
pub fn triangle_710() {
    run(7, 1, 0, 5, Template::triangle(0, 1, 1), 50, 14, 3);
}
pub fn edge_711() {
    run(7, 1, 1, 4, Template::edge(1, 1), 50, 14, 4);
}
pub fn path_711() {
    run(7, 1, 1, 4, Template::path3(1, 0, 1), 50, 14, 5);
}
pub fn triangle_711() {
    run(7, 1, 1, 4, Template::triangle(0, 0, 1), 50, 14, 6);
}
