//! Benchmarks of the two lattice enumerations, comparing the rayon pool
//! against a single-thread pool when the `parallel` feature is enabled.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use doublet::characters::chi_fermionic;
use doublet::kostka::khat;
use doublet::model::{build_model, v_irr, NVector};

fn bench_chi_fermionic(c: &mut Criterion) {
    let mp = build_model(5).unwrap();
    let v = v_irr(&mp, 2).unwrap();
    let trunc = 40 * mp.denom();
    let mut group = c.benchmark_group("chi_fermionic_p5_q40");

    group.bench_function(BenchmarkId::new("threads", "default"), |b| {
        b.iter(|| chi_fermionic(&mp, &v, trunc))
    });

    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        group.bench_function(BenchmarkId::new("threads", "1"), |b| {
            b.iter(|| pool.install(|| chi_fermionic(&mp, &v, trunc)))
        });
    }
    group.finish();
}

fn bench_khat(c: &mut Criterion) {
    let mp = build_model(3).unwrap();
    let n = NVector(vec![14, 0]);
    let mut group = c.benchmark_group("khat_p3_n14");

    group.bench_function(BenchmarkId::new("threads", "default"), |b| {
        b.iter(|| khat(&mp, 3, &n).unwrap())
    });

    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        group.bench_function(BenchmarkId::new("threads", "1"), |b| {
            b.iter(|| pool.install(|| khat(&mp, 3, &n).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_chi_fermionic, bench_khat);
criterion_main!(benches);
