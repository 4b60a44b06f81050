use std::time::{Duration, Instant};

use hyperseg::rght::{Grid, GridParams};

fn materialize(r: u32) -> (usize, usize, Duration) {
    let mut grid = Grid::new(GridParams::new(7, 1, 0)).unwrap();
    let start = Instant::now();
    let ball = grid.ball(r);
    (ball.len(), grid.records_created(), start.elapsed())
}

pub fn ball_records_are_amortized() {
    let (size, records, _) = materialize(12);
    assert!(records <= 4 * size, "{records} records for {size} vertices");
}

pub fn ball_time_is_linear() {
    let per_vertex: Vec<f64> = [8, 10, 12]
        .into_iter()
        .map(|r| {
            (0..7)
                .map(|_| {
                    let (size, _, t) = materialize(r);
                    t.as_secs_f64() / size as f64
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let lo = per_vertex.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = per_vertex.iter().copied().fold(0.0, f64::max);
    eprintln!("seconds per vertex: {per_vertex:?}");
    assert!(hi <= 2.0 * lo);
}
