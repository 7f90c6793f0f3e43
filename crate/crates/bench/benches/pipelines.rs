use std::hint::black_box;

use cfwb_bench::tinted_mosaic;
use cfwb_core::wavelet::{dwt2d_forward, dwt2d_inverse};
use cfwb_core::white_balance::gray_world_coeffs;
use cfwb_core::{
    decode_container, encode_container, forward_scalar_lift, inverse_scalar_lift, wb_forward,
    wb_inverse, PipelineMode, ScalarGain, WbSide, WbStructure, DEFAULT_LEVELS,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

const SIZE: usize = 512;

fn lifting(c: &mut Criterion) {
    let q = ScalarGain::new(0.840_896_415_253_714_5).unwrap();
    let pairs: Vec<(i32, i32)> = (0..4096).map(|k| (k * 7 % 4096, k * 13 % 4096)).collect();
    let mut g = c.benchmark_group("scalar_lift");
    g.throughput(Throughput::Elements(pairs.len() as u64));
    g.bench_function("forward", |b| {
        b.iter(|| {
            for &(x1, x2) in &pairs {
                black_box(forward_scalar_lift(black_box(x1), black_box(x2), q).unwrap());
            }
        })
    });
    g.bench_function("inverse", |b| {
        b.iter(|| {
            for &(x1, x2) in &pairs {
                black_box(inverse_scalar_lift(black_box(x1), black_box(x2), q).unwrap());
            }
        })
    });
    g.finish();
}

fn white_balance(c: &mut Criterion) {
    let img = tinted_mosaic(SIZE);
    let mut g = c.benchmark_group("white_balance");
    g.throughput(Throughput::Elements(img.samples.len() as u64));
    for structure in [WbStructure::Pyramid, WbStructure::Sequential] {
        let coeffs = gray_world_coeffs(&img, structure).unwrap();
        let balanced = wb_forward(&img, &coeffs, structure).unwrap();
        g.bench_function(BenchmarkId::new("forward", structure.name()), |b| {
            b.iter(|| wb_forward(black_box(&img), &coeffs, structure).unwrap())
        });
        g.bench_function(BenchmarkId::new("inverse", structure.name()), |b| {
            b.iter(|| wb_inverse(black_box(&balanced), &coeffs, structure).unwrap())
        });
    }
    g.finish();
}

fn dwt(c: &mut Criterion) {
    let plane = tinted_mosaic(SIZE).as_plane();
    let pyr = dwt2d_forward(&plane, DEFAULT_LEVELS).unwrap();
    let mut g = c.benchmark_group("legall53_2d");
    g.throughput(Throughput::Elements(plane.len() as u64));
    g.bench_function("forward", |b| {
        b.iter(|| dwt2d_forward(black_box(&plane), DEFAULT_LEVELS).unwrap())
    });
    g.bench_function("inverse", |b| {
        b.iter(|| dwt2d_inverse(black_box(&pyr)).unwrap())
    });
    g.finish();
}

fn codec(c: &mut Criterion) {
    let img = tinted_mosaic(SIZE);
    let structure = WbStructure::Pyramid;
    let wb = Some(WbSide {
        coeffs: gray_world_coeffs(&img, structure).unwrap(),
        structure,
    });
    let mut g = c.benchmark_group("codec");
    g.throughput(Throughput::Elements(img.samples.len() as u64));
    g.sample_size(20);
    for pipeline in PipelineMode::ALL {
        let bytes = encode_container(&img, pipeline, DEFAULT_LEVELS, wb).unwrap();
        g.bench_function(BenchmarkId::new("encode", pipeline), |b| {
            b.iter(|| encode_container(black_box(&img), pipeline, DEFAULT_LEVELS, wb).unwrap())
        });
        g.bench_function(BenchmarkId::new("decode", pipeline), |b| {
            b.iter(|| decode_container(black_box(&bytes)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, lifting, white_balance, dwt, codec);
criterion_main!(benches);
