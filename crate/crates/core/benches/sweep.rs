use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::f64::consts::PI;
use waveqed::{
    eval_three_level, run_sweep_seq, solve_forward, Axis, Model, ParamField, SweepGrid,
    SystemParams,
};

fn bench_grid(points: usize) -> SweepGrid {
    SweepGrid {
        axes: vec![
            Axis {
                param: ParamField::Lambda,
                start: 0.0,
                stop: 1.0,
                count: points,
            },
            Axis {
                param: ParamField::Delta1,
                start: -2.0,
                stop: 1.0,
                count: points,
            },
        ],
        base: SystemParams {
            gamma1: 0.27,
            gamma2: 0.001,
            gamma3: 0.001,
            big_gamma: 1.2,
            omega: 0.1,
            theta: 0.1 * PI,
            ..Default::default()
        },
        model: Model::ThreeLevel,
        links: vec![
            waveqed::ParamLink {
                target: ParamField::Delta2,
                source: ParamField::Delta1,
                offset: 0.0,
            },
            waveqed::ParamLink {
                target: ParamField::Delta3,
                source: ParamField::Delta1,
                offset: 1.0,
            },
        ],
    }
}

fn sweep_parallel_vs_sequential(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    for points in [64usize, 192] {
        let grid = bench_grid(points);
        group.bench_with_input(
            BenchmarkId::new("sequential", points * points),
            &grid,
            |b, g| b.iter(|| run_sweep_seq(g).unwrap().rows.len()),
        );
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("rayon", points * points), &grid, |b, g| {
            b.iter(|| waveqed::run_sweep_par(g).unwrap().rows.len())
        });
    }
    group.finish();
}

fn point_kernels(c: &mut Criterion) {
    let p = SystemParams {
        delta1: 0.37,
        delta2: -0.82,
        delta3: 1.44,
        gamma1: 0.15,
        gamma2: 0.05,
        gamma3: 0.02,
        big_gamma: 0.9,
        lambda: 0.6,
        omega: 0.7,
        theta: 1.1,
    };
    c.bench_function("closed_form_point", |b| {
        b.iter(|| eval_three_level(std::hint::black_box(&p)).unwrap())
    });
    c.bench_function("oracle_point", |b| {
        b.iter(|| solve_forward(std::hint::black_box(&p)).unwrap())
    });
}

criterion_group!(benches, sweep_parallel_vs_sequential, point_kernels);
criterion_main!(benches);
