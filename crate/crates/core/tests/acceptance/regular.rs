use std::time::Instant;

use hyperseg::counter::{Counter, Template};
use hyperseg::rght::{Grid, GridParams};
use hyperseg::stg::RghtStg;

fn check(q: u32, a: u32, b: u32, radius: u32, template: Template) {
    let start = Instant::now();
    let mut grid = Grid::new(GridParams::new(q, a, b)).unwrap();
    let ball = grid.ball(radius);
    let stg = RghtStg::new(grid).unwrap();
    let mut bulk = Counter::new(stg.clone(), template.clone(), radius).unwrap();
    bulk.init_regular(0).unwrap();
    let mut explicit = Counter::new(stg, template.clone(), radius).unwrap();
    for &v in &ball {
        let s = explicit.stg().vertex_node(v);
        explicit.add(0, s, 1.0).unwrap();
    }
    let mut x = bulk.root_values().to_vec();
    let mut y = explicit.root_values().to_vec();
    x.sort_by_key(|p| p.0);
    y.sort_by_key(|p| p.0);
    assert!(!x.is_empty());
    assert_eq!(x, y, "G({q},{a},{b}) R={radius} {:?}", template.edges());
    eprintln!("G({q},{a},{b}) R={radius} {:?}: {} keys, {:?}", template.edges(), x.len(), start.elapsed());
}

pub fn all_templates() {
    for (q, a, b) in [(7, 1, 0), (7, 1, 1)] {
        for radius in 0..=4 {
            for t in [Template::single(0), Template::edge(0, 0), Template::path3(0, 0, 0), Template::triangle(0, 0, 0)] {
                check(q, a, b, radius, t);
            }
        }
    }
}

pub fn other_colors_count_zero() {
    let stg = RghtStg::new(Grid::new(GridParams::new(7, 1, 0)).unwrap()).unwrap();
    let mut c = Counter::new(stg, Template::edge(0, 1), 3).unwrap();
    c.init_regular(0).unwrap();
    assert!(c.root_values().is_empty());
}
