use criterion::{black_box, criterion_group, criterion_main, Criterion};

use gaussid_bench::pendulum_instance;
use gaussid_core::baselines::{dmd_fit, sindy_fit, tdmd_fit};
use gaussid_core::models::DictionaryLibrary;

fn bench_baselines(c: &mut Criterion) {
    let (_, _, data, _) = pendulum_instance(1000, 0.05, 1);
    c.bench_function("dmd_fit_d2_n1000", |b| {
        b.iter(|| black_box(dmd_fit(&data).unwrap()))
    });
    c.bench_function("tdmd_fit_d2_n1000", |b| {
        b.iter(|| black_box(tdmd_fit(&data).unwrap()))
    });
    let lib = DictionaryLibrary::total_degree(2, 2);
    c.bench_function("sindy_fit_d2_n1000_deg2", |b| {
        b.iter(|| black_box(sindy_fit(&data, &lib, 1e-3, 10).unwrap().n_iterations))
    });
}

criterion_group!(benches, bench_baselines);
criterion_main!(benches);
