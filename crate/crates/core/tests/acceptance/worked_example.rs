use hyperseg::oracle::bfs_distance;
use hyperseg::rght::{Grid, GridParams};
use hyperseg::stg::{ancestors, stg_distance, RghtStg, Stg};

/// A depth-7 vertex and a depth-8 vertex whose ancestors first become
/// related at depth 6, two steps apart: 1 + 2 + 2 = 5.
pub fn one_plus_two_plus_two() {
    let mut stg = RghtStg::new(Grid::new(GridParams::new(7, 1, 1)).unwrap()).unwrap();
    let ring = stg.grid_mut().ring(7);
    let mut found = None;
    'scan: for &v in &ring {
        let sv = stg.vertex_node(v);
        let cv = ancestors(&mut stg, sv);
        for (u, delta) in stg.neighbors(cv[1]) {
            if delta != 2 {
                continue;
            }
            for c in stg.child_nodes(u) {
                if stg.near(cv[0], c).is_some() {
                    continue;
                }
                for w in stg.child_nodes(c) {
                    if !stg.is_vertex(w) {
                        continue;
                    }
                    if stg_distance(&mut stg, sv, w) == 5 {
                        found = Some((v, w));
                        break 'scan;
                    }
                }
            }
        }
    }
    let (v, w) = found.expect("no pair found");
    let cw = ancestors(&mut stg, w);
    let sv = stg.vertex_node(v);
    let cv = ancestors(&mut stg, sv);
    assert_eq!((stg.depth(cv[0]), stg.depth(cw[0])), (7, 8));
    assert_eq!(stg.near(cv[0], cw[1]), None);
    assert_eq!(stg.near(cv[1], cw[2]), Some(2));
    assert_eq!(bfs_distance(stg.grid_mut(), v, w.left, 8), Some(5));
}
