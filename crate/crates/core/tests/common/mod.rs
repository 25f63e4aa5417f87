#![allow(dead_code)]

use std::path::PathBuf;

use gspline::{ints, CycleSpec, Graph, Int, PathSpec};
use rand::rngs::StdRng;
use rand::Rng;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn graph(m: &[i64], edges: &[(usize, usize, i64)]) -> Graph {
    let edges = edges.iter().map(|&(u, v, r)| (u - 1, v - 1, Int::from(r))).collect();
    Graph::new(ints(m), edges).unwrap()
}

pub fn vecs(rows: &[&[i64]]) -> Vec<Vec<Int>> {
    rows.iter().map(|r| ints(r)).collect()
}

fn label(rng: &mut StdRng, max: i64, zero_rate: f64) -> i64 {
    if rng.gen_bool(zero_rate) {
        0
    } else {
        rng.gen_range(1..=max)
    }
}

/// A random simple graph on at most `max_n` vertices; each pair is joined
/// with probability drawn from a few densities, and edge labels are zero
/// (equality) with probability `zero_rate`.
pub fn random_graph(rng: &mut StdRng, max_n: usize, max_label: i64, zero_rate: f64) -> Graph {
    let n = rng.gen_range(1..=max_n);
    let density = [0.3, 0.6, 1.0][rng.gen_range(0..3)];
    let m: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=max_label)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                let (a, b) = if rng.gen_bool(0.5) { (u, v) } else { (v, u) };
                edges.push((a, b, Int::from(label(rng, max_label, zero_rate))));
            }
        }
    }
    Graph::new(ints(&m), edges).unwrap()
}

pub fn random_path(rng: &mut StdRng, max_n: usize, max_label: i64, zero_rate: f64) -> PathSpec {
    let n = rng.gen_range(1..=max_n);
    let m: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=max_label)).collect();
    let r: Vec<i64> = (1..n).map(|_| label(rng, max_label, zero_rate)).collect();
    PathSpec::new(ints(&m), ints(&r)).unwrap()
}

pub fn random_cycle(rng: &mut StdRng, max_n: usize, max_label: i64, zero_rate: f64) -> CycleSpec {
    let n = rng.gen_range(3..=max_n);
    let m: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=max_label)).collect();
    let r: Vec<i64> = (0..n).map(|_| label(rng, max_label, zero_rate)).collect();
    CycleSpec::new(ints(&m), ints(&r)).unwrap()
}
