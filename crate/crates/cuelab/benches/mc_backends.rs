use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cuelab::cue::{field_on_grid, CueSample, FieldMode};
use cuelab::par::{mc_fold, mc_fold_seq};
use cuelab::rng::Streams;

fn mass_draw(streams: &Streams, index: u64, n: usize, beta: f64) -> f64 {
    let mut rng = streams.stream(index);
    let sample = CueSample::generate(n, &mut rng).expect("positive size");
    let field = field_on_grid(&sample, 256, FieldMode::Full).expect("grid fits");
    field.values.iter().map(|x| (beta * x).exp()).sum::<f64>() / 256.0
}

fn bench_mass_sums(c: &mut Criterion) {
    let streams = Streams::new(99);
    let mut group = c.benchmark_group("mean_mass");
    for &draws in &[256u64, 1024] {
        group.bench_with_input(BenchmarkId::new("parallel", draws), &draws, |b, &draws| {
            b.iter(|| {
                mc_fold(
                    draws,
                    0.0f64,
                    |i, acc| acc + mass_draw(&streams, i, 16, 1.0),
                    |a, b| a + b,
                )
            })
        });
        group.bench_with_input(BenchmarkId::new("sequential", draws), &draws, |b, &draws| {
            b.iter(|| {
                mc_fold_seq(
                    draws,
                    0.0f64,
                    |i, acc| acc + mass_draw(&streams, i, 16, 1.0),
                    |a, b| a + b,
                )
            })
        });
    }
    group.finish();
}

fn criterion_config() -> Criterion {
    Criterion::default().sample_size(10).configure_from_args()
}

criterion_group! {
    name = benches;
    config = criterion_config();
    targets = bench_mass_sums
}
criterion_main!(benches);
