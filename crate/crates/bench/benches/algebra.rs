use criterion::{criterion_group, criterion_main, Criterion};
use hspace_bench::{dense_matrix, small_inst};
use hspace_core::diophantine::brute_force_search;
use hspace_core::intlinalg::smith_normal_form;
use hspace_core::simplicial::{fixtures, relative_homology, SimplicialPair};
use std::hint::black_box;

fn smith(c: &mut Criterion) {
    let a = dense_matrix(8);
    c.bench_function("smith_8x8", |b| b.iter(|| smith_normal_form(black_box(&a))));
}

fn torus_homology(c: &mut Criterion) {
    let pair = SimplicialPair::absolute(fixtures::torus());
    c.bench_function("torus_homology", |b| {
        b.iter(|| (0..=2).map(|n| relative_homology(black_box(&pair), n)).collect::<Vec<_>>())
    });
}

fn inst_search(c: &mut Criterion) {
    let inst = small_inst();
    c.bench_function("inst_bilp_box_search", |b| {
        b.iter(|| brute_force_search(black_box(&inst.system), 2, 1 << 30).unwrap())
    });
}

criterion_group!(benches, smith, torus_homology, inst_search);
criterion_main!(benches);
