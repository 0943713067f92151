//! Parallel against sequential search on the exhaustive solvers.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tievote::par;
use tievote::parse::parse_profile;
use tievote::reductions::{
    gen_x3c_plurality_ccav, partition_sweep, verify_reduction, Mode, ReductionKind, SourceInstance, X3CInstance,
};
use tievote::rules::{RuleSpec, ScoringExtension, ScoringVector, WinnerModel};
use tievote::solvers::{ccav_exact, cwcm_exact, DomainKind, ManipulationInstance, SolverConfig, VoteDomain};

fn configs() -> [(&'static str, SolverConfig); 2] {
    [
        ("parallel", SolverConfig::default()),
        ("sequential", SolverConfig::sequential()),
    ]
}

fn cwcm(c: &mut Criterion) {
    // a NO instance, so the whole space is searched
    let inst = ManipulationInstance {
        nonmanipulators: parse_profile("candidates: a,b,c,p\n30: a > b > c > p\n30: b > c > a > p\n").unwrap(),
        manipulator_weights: vec![1, 2, 3],
        preferred: 3,
        rule: RuleSpec::scoring(
            ScoringVector::borda(4),
            ScoringExtension::Average,
            WinnerModel::Nonunique,
        ),
        domain: VoteDomain::new(DomainKind::Weak),
    };
    let mut group = c.benchmark_group("cwcm_exact");
    for (name, config) in configs() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| cwcm_exact(black_box(&inst), &config).unwrap())
        });
    }
    group.finish();
}

fn ccav(c: &mut Criterion) {
    // overlapping triples with no exact cover
    let sets = (0..12).map(|i| [i, (i + 1) % 12, (i + 5) % 12]).map(|mut s| {
        s.sort();
        s
    });
    let src = X3CInstance::new(4, sets.collect()).unwrap();
    let inst = gen_x3c_plurality_ccav(&src, Mode::Strict).unwrap();
    let mut group = c.benchmark_group("ccav_exact");
    for (name, config) in configs() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| ccav_exact(black_box(&inst), &config).unwrap())
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let sources = partition_sweep(3, 6);
    let mut group = c.benchmark_group("borda_max_sweep");
    group.sample_size(10);
    for (name, config) in configs() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let agree = par::map(&sources, config.parallel, |s| {
                    let s = SourceInstance::Partition(s.clone());
                    verify_reduction(&ReductionKind::BordaMax, &s, Mode::Strict, &config)
                        .unwrap()
                        .agree
                });
                agree.into_iter().all(|a| a)
            })
        });
    }
    group.finish();
}

criterion_group!(benches, cwcm, ccav, sweep);
criterion_main!(benches);
