// Copyright 2026 The ecslab Authors
// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ecslab::decoherence::{default_alpha0_grid, fig1_sweep, DEFAULT_ETAS};
use ecslab::quadrature::SphereRule;
use ecslab::sweep::linspace;
use ecslab::teleport::{fig2_table, fig3_table, default_fig3_alphas, CatInput, Protocol, Resource};
use ecslab::{Complex64, Execution};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn fig1(c: &mut Criterion) {
    let grid = default_alpha0_grid();
    let mut g = c.benchmark_group("fig1");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| fig1_sweep(black_box(&DEFAULT_ETAS), &grid, exec).unwrap())
        });
    }
    g.finish();
}

fn fig2(c: &mut Criterion) {
    let alphas = linspace(0.05, 4.0, 16);
    let etas = [1.0, 0.7, 0.3];
    let rule = SphereRule::default();
    let mut g = c.benchmark_group("fig2");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| fig2_table(black_box(&alphas), &etas, false, &rule, exec).unwrap())
        });
    }
    g.finish();
}

fn fig3(c: &mut Criterion) {
    let alphas = default_fig3_alphas();
    let mut g = c.benchmark_group("fig3");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| fig3_table(black_box(&alphas), exec).unwrap()));
    }
    g.finish();
}

fn protocol(c: &mut Criterion) {
    let input = CatInput::new(Complex64::new(0.6, 0.2), Complex64::new(-0.3, 0.7), Complex64::new(1.5, 0.0));
    c.bench_function("protocol/noisy_run", |b| {
        b.iter(|| Protocol::new(Resource::H, 0.7).run(black_box(&input)).unwrap())
    });
}

criterion_group!(benches, fig1, fig2, fig3, protocol);
criterion_main!(benches);
