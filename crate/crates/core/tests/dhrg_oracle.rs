use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperseg::dhrg::{Connection, DhrgInstance, DhrgModel, Radial};
use hyperseg::metrics::growth_constant;
use hyperseg::oracle::distance_matrix;
use hyperseg::rght::{Grid, GridParams};

fn grid() -> Grid {
    Grid::new(GridParams::new(7, 1, 0)).unwrap()
}

fn alpha(g: &Grid) -> f64 {
    0.75 * growth_constant(g, 1e-12).ln()
}

#[test]
fn move_and_back() {
    let g = grid();
    let model = DhrgModel::new(40, 5, Radial::Exponential { alpha: alpha(&g) }, Connection::Logistic { t: 1.0, shift: -3.0 })
        .unwrap();
    let mut inst = DhrgInstance::generate(model, g, 3).unwrap();
    let from = inst.positions()[7];
    let to = inst.grid_mut().ring(5)[100];
    let there = inst.move_vertex(7, to).unwrap();
    let back = inst.move_vertex(7, from).unwrap();
    assert!((there + back).abs() < 1e-9);
}

#[test]
fn generation_is_deterministic() {
    let g = grid();
    let model = DhrgModel::new(60, 6, Radial::Exponential { alpha: alpha(&g) }, Connection::Logistic { t: 1.0, shift: -5.0 })
        .unwrap();
    let a = DhrgInstance::generate(model.clone(), g.clone(), 9).unwrap();
    let b = DhrgInstance::generate(model, g, 9).unwrap();
    assert_eq!(a.positions(), b.positions());
    assert_eq!(a.edges(), b.edges());
}

#[test]
fn edge_count_matches_pair_probabilities() {
    let g = grid();
    let model = DhrgModel::new(300, 7, Radial::Exponential { alpha: alpha(&g) }, Connection::Logistic { t: 1.0, shift: -6.0 })
        .unwrap();
    let mut inst = DhrgInstance::generate(model.clone(), g, 21).unwrap();
    let pos = inst.positions().to_vec();
    let dist = distance_matrix(inst.grid_mut(), &pos);
    let (mut mean, mut var) = (0.0, 0.0);
    for (i, row) in dist.iter().enumerate() {
        for &d in &row[i + 1..] {
            let p = model.p(d);
            mean += p;
            var += p * (1.0 - p);
        }
    }
    let m = inst.edges().len() as f64;
    assert!((m - mean).abs() <= 3.0 * var.sqrt(), "{m} edges, expected {mean} ± {}", var.sqrt());
}

#[test]
fn local_search_improves_perturbed_embedding() {
    let g = grid();
    let model = DhrgModel::new(100, 6, Radial::Exponential { alpha: alpha(&g) }, Connection::Logistic { t: 1.0, shift: -4.0 })
        .unwrap();
    let planted = DhrgInstance::generate(model.clone(), g.clone(), 77).unwrap();
    let mut improved = 0;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut inst =
            DhrgInstance::from_embedding(model.clone(), g.clone(), planted.positions().to_vec(), planted.edges()).unwrap();
        for _ in 0..30 {
            let v = rng.random_range(0..100);
            let to = {
                let gr = inst.grid_mut();
                let ball = gr.ball(6);
                ball[rng.random_range(0..ball.len())]
            };
            inst.move_vertex(v, to).unwrap();
        }
        let initial = inst.loglik();
        let log = inst.local_search(500, seed).unwrap();
        assert!(log.windows(2).all(|w| w[0].loglik <= w[1].loglik));
        let last = inst.loglik();
        assert!(last >= initial);
        improved += (last > initial) as usize;
    }
    assert!(improved >= 18, "{improved} of 20 runs improved");
    let mut inst = DhrgInstance::from_embedding(model, g, planted.positions().to_vec(), planted.edges()).unwrap();
    let before = inst.loglik();
    assert!(inst.local_search(0, 1).unwrap().is_empty());
    assert_eq!(inst.loglik(), before);
}
