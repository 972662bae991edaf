use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rauzy::renorm::covariogram_samples;
use rauzy::{presets, solve_self_consistent, Exec};

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("covariogram");
    group.sample_size(10);
    for (preset, level, cap) in [(presets::ssm(), 8, 20_000), (presets::sigma(), 4, 20_000)] {
        let sys = preset.system();
        let patch = sys.generate_patch(level, preset.seed).unwrap();
        for exec in [Exec::Sequential, Exec::Parallel] {
            let id = BenchmarkId::new(preset.name, format!("{exec:?}"));
            group.bench_with_input(id, &exec, |b, &exec| {
                // a fresh table per run so the memo starts empty
                b.iter_batched(
                    || solve_self_consistent(&sys, &preset.cutoff).unwrap(),
                    |table| covariogram_samples(&table, &patch, cap, exec).points.len(),
                    criterion::BatchSize::LargeInput,
                )
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sampling);
criterion_main!(benches);
