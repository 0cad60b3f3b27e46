//! Desk-scale benchmarks: the five Tutte pipelines on K10, the raw
//! subset-lattice transform, the split-evaluator tradeoff sweep, a
//! Matrix–Tree determinant, and the fast cover table.

use criterion::{criterion_group, criterion_main, Criterion};

use tuttekit::potts::induced_weight_table;
use tuttekit::transforms::split_eval;
use tuttekit::{
    compute_tutte, cover_table, Algorithm, CoverMode, Digraph, Fp, LatticeFunction, Multigraph,
    RunOptions, ZPoly,
};

const P: u64 = (1 << 62) - 57;

fn opts(algorithm: Algorithm) -> RunOptions {
    RunOptions { algorithm, threads: 1, memory_budget: 4 << 30 }
}

fn tutte_pipelines(c: &mut Criterion) {
    let g = Multigraph::complete(10);
    let mut group = c.benchmark_group("tutte_k10");
    group.sample_size(10);
    let algorithms = [
        ("dense", Algorithm::Dense),
        ("polyspace", Algorithm::Direct),
        ("split5", Algorithm::Split(5)),
        ("connected", Algorithm::Connected),
        ("recursion", Algorithm::Recursion),
    ];
    for (name, algorithm) in algorithms {
        group.bench_function(name, |b| b.iter(|| compute_tutte(&g, &opts(algorithm)).unwrap()));
    }
    group.finish();
}

fn zeta_transform(c: &mut Criterion) {
    let fp = Fp::new(P);
    let n = 16;
    let base = LatticeFunction::from_fn(n, 1, |mask, row| row[0] = mask as u64 % 97);
    c.bench_function("fast_zeta_2^16", |b| {
        b.iter(|| {
            let mut f = base.clone();
            f.fast_zeta(&fp)
        })
    });
}

fn split_tradeoff(c: &mut Criterion) {
    let n = 12usize;
    let g = Multigraph::cycle(n);
    let fp = Fp::new(P);
    let factors = vec![3u64; g.m()];
    let wt = induced_weight_table(&g, &fp, &factors);
    let f = move |x: u32| ZPoly::monomial(n, wt[x as usize], x.count_ones() as usize);
    let mut group = c.benchmark_group("split_eval_n12_q7");
    for s in [0usize, 6, 12] {
        group.bench_function(format!("s{s}"), |b| b.iter(|| split_eval(n, n, &f, &fp, 7, s)));
    }
    group.finish();
}

fn spanning_trees(c: &mut Criterion) {
    let g = Multigraph::complete(22);
    c.bench_function("tau_k22", |b| b.iter(|| g.spanning_tree_count()));
}

fn cover_fast(c: &mut Criterion) {
    let n = 12usize;
    // Deterministic digraph: a long cycle plus chords and a few loops.
    let mut arcs = Vec::new();
    for v in 1..=n {
        arcs.push((v, v % n + 1));
        arcs.push((v, (v * 5) % n + 1));
        if v % 4 == 0 {
            arcs.push((v, v));
        }
    }
    let d = Digraph::new(n, &arcs).unwrap();
    let mut group = c.benchmark_group("cover_n12");
    group.sample_size(10);
    group.bench_function("fast", |b| b.iter(|| cover_table(&d, CoverMode::Fast).unwrap()));
    group.finish();
}

criterion_group!(
    benches,
    tutte_pipelines,
    zeta_transform,
    split_tradeoff,
    spanning_trees,
    cover_fast
);
criterion_main!(benches);
