use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use sl2ext_core::ext_engine::{ExtEngine, FormalModule};
use sl2ext_core::quantum::{gl2, QuantumContext};
use sl2ext_core::specseq::{infinity_page, random_bicomplex, GeneratorMode, DEFAULT_MODULUS};
use sl2ext_core::weights::WeightContext;

fn weyl_grid(c: &mut Criterion) {
    c.bench_function("weyl_grid_p3_60x60_cold", |b| {
        b.iter_batched(
            || ExtEngine::new(WeightContext::new(3).unwrap()),
            |e| {
                for a in 0..60u64 {
                    for m in 0..60u64 {
                        e.query(&FormalModule::weyl(m), &FormalModule::weyl(a), None).unwrap();
                    }
                }
            },
            BatchSize::SmallInput,
        )
    });
}

fn simple_targets(c: &mut Criterion) {
    c.bench_function("weyl_vs_simple_p5_40x40_cold", |b| {
        b.iter_batched(
            || ExtEngine::new(WeightContext::new(5).unwrap()),
            |e| {
                for a in 0..40u64 {
                    for m in 0..40u64 {
                        e.query(&FormalModule::weyl(a), &FormalModule::simple(m), None).unwrap();
                    }
                }
            },
            BatchSize::SmallInput,
        )
    });
}

fn quantum_layer(c: &mut Criterion) {
    c.bench_function("quantum_l5_even_gaps", |b| {
        b.iter_batched(
            || QuantumContext::new(5, 0).unwrap(),
            |q| {
                for i in 0..4i64 {
                    for g in [2i64, 4, 6, 8] {
                        let d = 5 * g / 2;
                        q.qext_weyl_weyl(&gl2(i + d, d), &gl2(5 * g + i, 0)).unwrap();
                    }
                }
            },
            BatchSize::SmallInput,
        )
    });
}

fn spectral_pages(c: &mut Criterion) {
    let b6 = random_bicomplex(GeneratorMode::Generic, 6, 5, 4, DEFAULT_MODULUS, 42).unwrap();
    c.bench_function("stable_page_generic_6x5", |b| {
        b.iter(|| infinity_page(&b6))
    });
}

criterion_group!(benches, weyl_grid, simple_targets, quantum_layer, spectral_pages);
criterion_main!(benches);
