use criterion::{BatchSize, BenchmarkId, Criterion, criterion_group, criterion_main};
use furnace_bench::{conflicting_problem, single_peak_data};
use furnace_core::bargain::{DisagreementPoint, bargain};
use furnace_core::dataset::Column;
use furnace_core::evolve::GaParams;
use furnace_core::moo::{nondominated_fronts, nsga2_run};
use furnace_core::pipeline::brute_force_oracle;
use furnace_core::rng::seeded;
use furnace_core::surrogate::{CartParams, fit_cart};
use rand::Rng;

fn cart(c: &mut Criterion) {
    let mut group = c.benchmark_group("fit_cart");
    for n in [250, 1000, 4000] {
        let data = single_peak_data(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &data, |b, data| {
            b.iter(|| fit_cart(data, &Column::MANIPULATED, Column::AbsorbedDuty, &CartParams::default()).unwrap())
        });
    }
    group.finish();
}

fn sorting(c: &mut Criterion) {
    let mut group = c.benchmark_group("nondominated_fronts");
    for n in [50, 200, 800] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter_batched(
                || {
                    let mut rng = seeded(n as u64);
                    (0..n).map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()]).collect::<Vec<_>>()
                },
                |objs| nondominated_fronts(&objs),
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

fn solvers(c: &mut Criterion) {
    let problem = conflicting_problem();
    let params = GaParams::default();
    let mut group = c.benchmark_group("solvers");
    group.sample_size(20);
    group.bench_function("nsga2_200_generations", |b| b.iter(|| nsga2_run(&problem, &params).unwrap()));
    group.bench_function("nash_bargain", |b| b.iter(|| bargain(&problem, &params).unwrap()));
    group.bench_function("oracle_grid_31", |b| {
        b.iter(|| brute_force_oracle(&problem, DisagreementPoint([0.0, 0.0]), 31).unwrap())
    });
    group.finish();
}

criterion_group!(benches, cart, sorting, solvers);
criterion_main!(benches);
