use hyperseg::metrics::{compute_d_bound, growth_constant};
use hyperseg::rght::{Grid, GridParams};

fn d_bound(q: u32, a: u32, b: u32) -> u32 {
    compute_d_bound(&mut Grid::new(GridParams::new(q, a, b)).unwrap()).unwrap()
}

pub fn d_bounds() {
    assert_eq!(d_bound(7, 1, 0), 2);
    assert_eq!(d_bound(8, 1, 0), 2);
    assert_eq!(d_bound(7, 1, 1), 3);
    assert_eq!(d_bound(8, 1, 1), 3);
    for q in [7, 8] {
        for a in 1..=3 {
            for b in 0..=a {
                assert_eq!(d_bound(q, a, b), 2 * a + b, "G({q},{a},{b})");
            }
        }
    }
}

pub fn growth_constants() {
    let g710 = growth_constant(&Grid::new(GridParams::new(7, 1, 0)).unwrap(), 1e-12);
    assert!((g710 - 2.6180339).abs() < 1e-5, "{g710}");
    assert!((g710 - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-6, "{g710}");
    let g711 = growth_constant(&Grid::new(GridParams::new(7, 1, 1)).unwrap(), 1e-12);
    assert!((g711 - 1.72208).abs() < 1e-4, "{g711}");
}
