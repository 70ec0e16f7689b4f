//! Compares the check drivers under the parallel and sequential strategies.
//!
//! Run with `cargo bench`. Without the `parallel` feature both strategies
//! execute the same code, so the pairs should tie; with it the gap shows
//! what rayon buys on each driver's workload.

use criterion::{criterion_group, criterion_main, Criterion};

use bdsys_core::action::check_axioms;
use bdsys_core::exec::Strategy;
use bdsys_core::fixtures;
use bdsys_core::groupoid::iso_check;
use bdsys_core::paths::build_correspondence;
use bdsys_core::semigroup::check_semigroup_laws;

const STRATEGIES: [(&str, Strategy); 2] =
    [("parallel", Strategy::Parallel), ("sequential", Strategy::Sequential)];

fn bench_semigroup_laws(c: &mut Criterion) {
    let sys = fixtures::full_shift();
    let mut group = c.benchmark_group("semigroup_laws");
    for (name, strategy) in STRATEGIES {
        group.bench_function(name, |b| {
            b.iter(|| check_semigroup_laws(&sys, 3, Some(4000), 7, strategy))
        });
    }
    group.finish();
}

fn bench_action_axioms(c: &mut Criterion) {
    let sys = fixtures::full_shift();
    let corr = build_correspondence(&sys);
    let mut group = c.benchmark_group("action_axioms");
    for (name, strategy) in STRATEGIES {
        group.bench_function(name, |b| b.iter(|| check_axioms(&corr, 3, 400, 7, strategy)));
    }
    group.finish();
}

fn bench_groupoid_iso(c: &mut Criterion) {
    let sys = fixtures::full_shift();
    let corr = build_correspondence(&sys);
    let mut group = c.benchmark_group("groupoid_iso");
    for (name, strategy) in STRATEGIES {
        group.bench_function(name, |b| b.iter(|| iso_check(&corr, 2, 300, 7, strategy)));
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_semigroup_laws, bench_action_axioms, bench_groupoid_iso
}
criterion_main!(benches);
