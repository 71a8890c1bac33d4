use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use wsts_bench::{effect_automata, pipeline, shipped, shuttle};
use wsts_core::ltl::LtlOptions;
use wsts_core::{
    build_ikm_tree, exists_positive_sequence, model_check_ltl, repeatedly_coverable, IdealVec,
    IkmOptions,
};

fn ikm_shipped(c: &mut Criterion) {
    let mut group = c.benchmark_group("ikm/shipped");
    for (name, net, x0) in shipped() {
        group.bench_function(name, |b| {
            b.iter(|| {
                build_ikm_tree(
                    &net,
                    IdealVec::from_marking(black_box(&x0)),
                    &IkmOptions::default(),
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn ikm_scaling(c: &mut Criterion) {
    let mut group = c.benchmark_group("ikm/pipeline");
    for d in [2, 3, 4, 5] {
        let (net, x0) = pipeline(d);
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, _| {
            b.iter(|| {
                build_ikm_tree(&net, IdealVec::from_marking(&x0), &IkmOptions::default()).unwrap()
            })
        });
    }
    group.finish();
    let mut group = c.benchmark_group("ikm/shuttle");
    for k in [4, 8, 12] {
        let (net, x0) = shuttle(k);
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, _| {
            b.iter(|| {
                build_ikm_tree(&net, IdealVec::from_marking(&x0), &IkmOptions::default()).unwrap()
            })
        });
    }
    group.finish();
}

fn positivity(c: &mut Criterion) {
    let automata = effect_automata(7, 32);
    c.bench_function("positivity/random_32", |b| {
        b.iter(|| {
            automata
                .iter()
                .filter(|ea| exists_positive_sequence(*ea).unwrap().is_some())
                .count()
        })
    });
    let (net, x0) = pipeline(3);
    let y = "(0,0,4)".parse().unwrap();
    c.bench_function("repcover/pipeline_3", |b| {
        b.iter(|| repeatedly_coverable(&net, &x0, &y).unwrap())
    });
}

fn ltl(c: &mut Criterion) {
    let nets = shipped();
    let opts = LtlOptions::default();
    for (name, formula) in [
        ("increment", "G F a"),
        ("alternate", "G (!a | X b)"),
        ("alternate", "G F b & G F a"),
    ] {
        let (_, net, x0) = nets.iter().find(|(n, _, _)| *n == name).unwrap();
        let phi = formula.parse().unwrap();
        c.bench_function(&format!("ltl/{name}/{formula}"), |b| {
            b.iter(|| model_check_ltl(net, x0, &phi, &opts).unwrap())
        });
    }
}

criterion_group!(benches, ikm_shipped, ikm_scaling, positivity, ltl);
criterion_main!(benches);
