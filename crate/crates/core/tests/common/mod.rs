//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use milnor_boundary::covering::build_covering;
use milnor_boundary::curvegraph::{CurveEdge, CurveGraph, CurveVertex, Sign};
use milnor_boundary::plumbing::PlumbGraph;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// A random decorated graph; it may fail validation or be unrealizable.
pub fn random_curve_graph(rng: &mut ChaCha8Rng, max_nodes: usize) -> CurveGraph {
    let mut g = CurveGraph::new("fuzz");
    let base_mf = *[1, 2, 3, 4, 6, 12].choose(rng).unwrap();
    let palette: Vec<(i64, i64)> = (0..2)
        .map(|_| (rng.gen_range(1..=12), rng.gen_range(1..=3)))
        .collect();
    let nodes = rng.gen_range(1..=max_nodes);
    for i in 0..nodes {
        let mf = if rng.gen_bool(0.8) {
            base_mf
        } else {
            rng.gen_range(1..=6)
        };
        let (m, n) = *palette.choose(rng).unwrap();
        let genus = if rng.gen_bool(0.2) { 1 } else { 0 };
        let switches = (0..2 * genus).map(|_| rng.gen_range(0..=mf)).collect();
        g.add_vertex(CurveVertex::node(format!("v{i}"), mf, m, n, genus).with_switches(switches))
            .unwrap();
    }
    let ids: Vec<String> = g.vertices.keys().cloned().collect();
    let mut used = std::collections::BTreeSet::new();
    let mut edge = 0;
    for _ in 0..rng.gen_range(0..=2 * nodes) {
        let a = ids.choose(rng).unwrap().clone();
        let b = ids.choose(rng).unwrap().clone();
        if a == b || !used.insert((a.clone().min(b.clone()), a.clone().max(b.clone()))) {
            continue;
        }
        let (va, vb) = (&g.vertices[&a], &g.vertices[&b]);
        let sign = if va.mf == vb.mf && (va.pair != vb.pair || rng.gen_bool(0.6)) {
            Sign::Plus
        } else if va.pair == vb.pair {
            Sign::Minus
        } else {
            continue;
        };
        let count = if rng.gen_bool(0.15) { 2 } else { 1 };
        let e = CurveEdge::new(format!("e{edge}"), a, b, sign)
            .with_count(count)
            .with_attach(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        g.add_edge(e).unwrap();
        edge += 1;
    }
    for i in 0..rng.gen_range(0..=3) {
        let host = ids.choose(rng).unwrap().clone();
        let mf = g.vertices[&host].mf;
        let id = format!("x{i}");
        g.add_vertex(CurveVertex::arrowhead(id.clone(), mf))
            .unwrap();
        g.add_edge(CurveEdge::new(format!("a{i}"), host, id, Sign::Plus))
            .unwrap();
    }
    g
}

/// Draws until the graph validates and its covering exists; returns the
/// graph and the number of draws it took.
pub fn realizable_curve_graph(rng: &mut ChaCha8Rng, max_nodes: usize) -> (CurveGraph, usize) {
    for attempt in 1.. {
        let g = random_curve_graph(rng, max_nodes);
        if g.validate().is_valid() && build_covering(&g).is_ok() {
            return (g, attempt);
        }
    }
    unreachable!()
}

/// A random plumbing graph, possibly with cycles and parallel edges.
pub fn random_plumb_graph(rng: &mut ChaCha8Rng, max_vertices: usize, tree: bool) -> PlumbGraph {
    let mut pg = PlumbGraph::default();
    let n = rng.gen_range(1..=max_vertices);
    let ids: Vec<String> = (0..n).map(|i| format!("p{i:02}")).collect();
    for id in &ids {
        pg.add_vertex(id.clone(), rng.gen_range(-5..=3), rng.gen_range(0..=2))
            .unwrap();
    }
    let sign = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.5) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    };
    for i in 1..n {
        let parent = rng.gen_range(0..i);
        let s = sign(rng);
        pg.add_edge(&ids[parent], &ids[i], s).unwrap();
    }
    if !tree && n > 1 {
        for _ in 0..rng.gen_range(0..=n) {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a != b {
                let s = sign(rng);
                pg.add_edge(&ids[a], &ids[b], s).unwrap();
            }
        }
    }
    pg
}
