use std::time::Instant;

use hyperseg::oracle::{BallGraph, BinaryBox};
use hyperseg::rght::{Grid, GridParams};
use hyperseg::stg::{stg_distance, BinaryStg, RghtStg, Stg};

fn check_grid(q: u32, a: u32, b: u32, radius: u32) {
    let start = Instant::now();
    let mut grid = Grid::new(GridParams::new(q, a, b)).unwrap();
    let ball = BallGraph::new(&mut grid, radius);
    let mut stg = RghtStg::new(grid).unwrap();
    let nodes: Vec<_> = ball.vertices.iter().map(|&v| stg.vertex_node(v)).collect();
    for i in 0..nodes.len() {
        let d = ball.graph.distances_from(i);
        for j in i..nodes.len() {
            assert_eq!(stg_distance(&mut stg, nodes[i], nodes[j]), d[j], "G({q},{a},{b}) pair {i} {j}");
        }
    }
    eprintln!("G({q},{a},{b}) B_{radius}: {} vertices in {:?}", nodes.len(), start.elapsed());
}

fn check_binary(dims: usize, depth: u32) {
    let start = Instant::now();
    let bx = BinaryBox::new(dims, depth, 8, 2);
    let mut stg = BinaryStg::new(dims).unwrap();
    let nodes: Vec<_> = bx.points[..bx.box_len].iter().map(|(x, t)| stg.node(x, *t as u32).unwrap()).collect();
    for i in 0..nodes.len() {
        let d = bx.graph.distances_from(i);
        for j in i..nodes.len() {
            assert_eq!(stg_distance(&mut stg, nodes[i], nodes[j]), d[j], "G_{dims} {:?} {:?}", nodes[i], nodes[j]);
        }
    }
    let _ = stg.root();
    eprintln!("binary G_{dims} depth {depth}: {} vertices in {:?}", nodes.len(), start.elapsed());
}

pub fn rght_710() {
    check_grid(7, 1, 0, 8);
}

pub fn rght_711() {
    check_grid(7, 1, 1, 7);
}

pub fn rght_811() {
    check_grid(8, 1, 1, 6);
}

pub fn binary_2() {
    check_binary(2, 6);
}

pub fn binary_3() {
    check_binary(3, 6);
}
