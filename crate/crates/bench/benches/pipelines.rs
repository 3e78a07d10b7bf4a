//! End-to-end benchmarks for the hot paths: codecs, distance matrices,
//! interval extraction, shape enumeration and a small witness search.

use criterion::{Criterion, black_box, criterion_group, criterion_main};

use pcglab_core::{
    Graph, SearchConfig, TopologyChoice, caterpillar_topology, enumerate_topologies,
    extract_intervals, search_witness,
};

fn graph6_round_trip(c: &mut Criterion) {
    let g = Graph::cycle(8).unwrap();
    let encoded = g.encode_graph6();
    c.bench_function("graph6 decode+encode C8", |b| {
        b.iter(|| {
            let g = Graph::parse_graph6(black_box(&encoded)).unwrap();
            black_box(g.encode_graph6())
        })
    });
}

fn distance_matrix(c: &mut Criterion) {
    let topo = caterpillar_topology(8).unwrap();
    let weights: Vec<u64> = (1..=topo.tree().edge_count() as u64).collect();
    let tree = topo.tree().with_weights(&weights).unwrap();
    c.bench_function("leaf distance matrix, 8-leaf caterpillar", |b| {
        b.iter(|| black_box(&tree).leaf_distance_matrix())
    });
}

fn interval_extraction(c: &mut Criterion) {
    let g = Graph::cycle(8).unwrap();
    let topo = caterpillar_topology(8).unwrap();
    let weights: Vec<u64> = (1..=topo.tree().edge_count() as u64).collect();
    let tree = topo.tree().with_weights(&weights).unwrap();
    let assignment: std::collections::BTreeMap<usize, String> =
        (0..8).map(|i| (i, format!("L{i}"))).collect();
    c.bench_function("tightest intervals, C8 on caterpillar", |b| {
        b.iter(|| extract_intervals(black_box(&g), &tree, &assignment, 4).unwrap())
    });
}

fn shape_enumeration(c: &mut Criterion) {
    c.bench_function("enumerate 8-leaf shapes", |b| {
        b.iter(|| enumerate_topologies(black_box(8)).unwrap())
    });
}

fn small_search(c: &mut Criterion) {
    let c5 = Graph::cycle(5).unwrap();
    let mut cfg = SearchConfig::new(1, 4);
    cfg.topologies = TopologyChoice::All;
    c.bench_function("search C5, k=1, weights ≤ 4", |b| {
        b.iter(|| search_witness(black_box(&c5), &cfg).unwrap())
    });
}

criterion_group!(
    benches,
    graph6_round_trip,
    distance_matrix,
    interval_extraction,
    shape_enumeration,
    small_search
);
criterion_main!(benches);
