//! Benchmarks for the hot paths: exact solves, basis enumeration, graph
//! search, and the gadget pipeline.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use polywalk_core::cyclic::cyclic_silo_tracked;
use polywalk_core::knapsack::{decide_on_graph, gadget_graph, PartitionInstance};
use polywalk_core::truncate::{TrackedPolytope, Validation};
use polywalk_core::{
    build_graph, diameter, enumerate_feasible_bases, solve_square, Budget, HPolytope, RatMatrix,
    RatVector,
};

fn bench_solve(c: &mut Criterion) {
    let m = RatMatrix::from_ints(&[
        &[3, 1, -2, 4],
        &[1, -1, 5, 2],
        &[7, 0, 1, -3],
        &[2, 2, 2, 1],
    ]);
    let rhs = RatVector::from_ints(&[5, -1, 9, 4]);
    c.bench_function("solve_square_4x4", |b| {
        b.iter(|| solve_square(&m, &rhs).unwrap())
    });
}

fn bench_enumeration(c: &mut Criterion) {
    let budget = Budget::default();
    for d in [3usize, 4] {
        let p = HPolytope::unit_cube(d);
        c.bench_function(&format!("enumerate_cube_d{d}"), |b| {
            b.iter(|| enumerate_feasible_bases(&p, &budget).unwrap())
        });
    }
    let inst = PartitionInstance::new(vec![2, 1, 1]).unwrap();
    let p = polywalk_core::knapsack::build_gadget(&inst);
    c.bench_function("enumerate_gadget_2_1_1", |b| {
        b.iter(|| enumerate_feasible_bases(&p, &budget).unwrap())
    });
}

fn bench_gadget_decision(c: &mut Criterion) {
    let budget = Budget::default();
    let inst = PartitionInstance::new(vec![2, 1, 1]).unwrap();
    c.bench_function("decide_gadget_2_1_1", |b| {
        b.iter(|| {
            let g = gadget_graph(&inst, &budget).unwrap();
            decide_on_graph(&inst, &g).unwrap().yes
        })
    });
}

fn bench_tracked_cut(c: &mut Criterion) {
    let budget = Budget::default();
    let tracked = TrackedPolytope::from_polytope(&HPolytope::unit_cube(3), &budget).unwrap();
    c.bench_function("cut_cube_corner_tracked", |b| {
        b.iter_batched(
            || tracked.clone(),
            |t| t.cut_vertex(0, "cut:1".into(), Validation::Full).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_tower_diameter(c: &mut Criterion) {
    let budget = Budget::default();
    let tracked = TrackedPolytope::from_polytope(&HPolytope::unit_cube(3), &budget).unwrap();
    let node = tracked
        .find_by_point(&RatVector::from_ints(&[0, 0, 0]))
        .unwrap();
    let (built, _) = cyclic_silo_tracked(&tracked, node, 2, "y").unwrap();
    c.bench_function("diameter_cyclic_tower_r2", |b| {
        b.iter(|| diameter(built.graph(), &budget).unwrap().value)
    });
    c.bench_function("re_enumerate_cyclic_tower_r2", |b| {
        b.iter(|| build_graph(built.polytope(), &budget).unwrap().node_count())
    });
}

criterion_group!(
    benches,
    bench_solve,
    bench_enumeration,
    bench_gadget_decision,
    bench_tracked_cut,
    bench_tower_diameter
);
criterion_main!(benches);
