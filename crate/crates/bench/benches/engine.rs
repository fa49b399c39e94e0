use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use crnx::domination::maximal_admissible;
use crnx::engine::{analyze, AbsorbingStrategy, DomStrategy, SearchConfig};
use crnx::forest::{decide_balance, enumerate_forests, BalancingSystem, Nontriviality};
use crnx::invariants::{is_subconservative, t_invariants};
use crnx::oracle::guaranteed_extinction_on;
use crnx_bench::fixture;

fn engine(c: &mut Criterion) {
    let envz = fixture("envz_ompr");
    let gap = fixture("catalyst_gap");
    let mut g = c.benchmark_group("analyze");
    g.bench_function("envz_ompr", |b| b.iter(|| analyze(black_box(&envz), &SearchConfig::default()).unwrap()));
    let exhaustive = SearchConfig::default()
        .with_dom(DomStrategy::AllSubsets(4096))
        .with_absorbing(AbsorbingStrategy::Enumerate(4096));
    g.bench_function("catalyst_gap_exhaustive", |b| b.iter(|| analyze(black_box(&gap), &exhaustive).unwrap()));
    g.finish();
}

fn linear(c: &mut Criterion) {
    let envz = fixture("envz_ompr");
    let gamma = envz.stoich_matrix();
    let mut g = c.benchmark_group("linear");
    g.bench_function("subconservative_envz", |b| b.iter(|| is_subconservative(black_box(&gamma)).unwrap()));
    g.bench_function("t_invariants_envz", |b| b.iter(|| t_invariants(black_box(&gamma))));
    let dc = maximal_admissible(&envz);
    let forest = enumerate_forests(&dc, 1).unwrap().forests.remove(0);
    let sys = BalancingSystem::build(&dc, &forest, Nontriviality::TrueReactions);
    g.bench_function("balance_envz_forest", |b| b.iter(|| decide_balance(black_box(&sys)).unwrap()));
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let net = fixture("catalyst_cycle");
    let nt: Vec<usize> = (0..net.complex_count()).collect();
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    g.bench_function("catalyst_cycle_budget4", |b| {
        b.iter(|| guaranteed_extinction_on(black_box(&net), &nt, 4, 200_000).unwrap())
    });
    g.finish();
}

criterion_group!(benches, engine, linear, oracle);
criterion_main!(benches);
