//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion with its runtime, and exits non-zero if any fails.
//!
//! Run with `cargo test -p furnace-core --test acceptance`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use furnace_core::bargain::{self, disagreement, nash_product, payoff_matrix};
use furnace_core::dataset::{NoiseLevels, SyntheticSpec, synthesize};
use furnace_core::evolve::{GaParams, polynomial_mutation, sbx_crossover};
use furnace_core::moo::{Individual, Objective, ProblemSpec, crowding_distance, dominates, fast_nondominated_sort, nsga2_run};
use furnace_core::pipeline::{DataSource, PipelineConfig, REPORT_FILES, brute_force_oracle, compute_report, grid_bargain, run_pipeline};
use furnace_core::surrogate::{CartParams, ModelMetrics, evaluate, fit_cart, select_models};
use furnace_core::{BoundsBox, Column};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn criterion_1() -> Outcome {
    let x1 = [86.18, 101.71, 176.88];
    let x2 = [77.27, 95.22, 213.69];
    let pin = |a: f64, b: f64| move |x: &[f64]| if x == x1 { a } else if x == x2 { b } else { f64::NAN };
    let p = payoff_matrix(pin(75.2, 47.27), pin(337.17, 361.29), &x1, &x2).map_err(|e| e.to_string())?;
    ensure!(p.entries == [[75.2, 337.17], [47.27, 361.29]], "payoff matrix {:?}", p.entries);
    let d = disagreement(&p);
    ensure!(d.0 == [47.27, 337.17], "disagreement {:?}", d.0);
    let np = nash_product([75.20, 361.29], &d);
    ensure!((np - 673.6716).abs() <= 1e-9, "nash product {np}");
    Ok(format!("P exact, d = (47.27, 337.17), product {np:.10}"))
}

fn criterion_2() -> Outcome {
    let mut rng = common::rng(2024);
    let bounds = BoundsBox::furnace();
    let mut worst = f64::INFINITY;
    for instance in 0..20 {
        let problem = common::random_quadratic_problem(&bounds, &mut rng);
        let params = GaParams { seed: instance, ..Default::default() };
        let setup = bargain::setup(&problem, &params).map_err(|e| e.to_string())?;
        let solved = bargain::nash_solve(&problem, &setup, &params.with_seed(instance + 1000)).map_err(|e| e.to_string())?;
        let oracle = brute_force_oracle(&problem, setup.disagreement, 50).map_err(|e| e.to_string())?;
        let grid_max = oracle.nash.ok_or("oracle found no feasible cell")?.nash_product;
        let margin = (solved.nash_product - grid_max) / grid_max.abs().max(f64::MIN_POSITIVE);
        ensure!(
            solved.nash_product >= grid_max - 1e-3 * grid_max.abs(),
            "instance {instance}: solver {} < grid {grid_max}",
            solved.nash_product
        );
        worst = worst.min(margin);
    }
    Ok(format!("20 instances, worst (solver - grid) / grid = {worst:+.2e}"))
}

fn criterion_3() -> Outcome {
    let mut rng = common::rng(3);
    // Symmetry: Y1 = f(x1) + g(x2, x3), Y2 = f(1 - x1) + g(x2, x3); the map
    // x1 -> 1 - x1 swaps the players and preserves the unit box.
    let mut worst_sym: f64 = 0.0;
    for _ in 0..5 {
        let b: f64 = rng.gen_range(0.5..3.0);
        let a: f64 = 2.0 * b + rng.gen_range(0.5..5.0);
        let (c2, c3, k2, k3) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0), rng.gen_range(1.0..9.0), rng.gen_range(1.0..9.0));
        let f = move |t: f64| a * t - b * t * t;
        let g = move |x: &[f64]| 10.0 - k2 * (x[1] - c2).powi(2) - k3 * (x[2] - c3).powi(2);
        let p = ProblemSpec::new(
            vec![
                Objective::new("y1", move |x| f(x[0]) + g(x)),
                Objective::new("y2", move |x| f(1.0 - x[0]) + g(x)),
            ],
            BoundsBox::unit(3),
        )
        .unwrap();
        let res = grid_bargain(&p, 41).map_err(|e| e.to_string())?;
        let n = res.oracle.nash.ok_or("no feasible cell")?;
        let gap = (n.point.payoffs[0] - n.point.payoffs[1]).abs();
        ensure!(gap <= 1e-6, "asymmetric Nash payoffs {:?}", n.point.payoffs);
        worst_sym = worst_sym.max(gap);
    }

    // Positive affine invariance of the grid argmax cell.
    let bounds = BoundsBox::furnace();
    let mut checks = 0;
    for _ in 0..5 {
        let p = common::random_quadratic_problem(&bounds, &mut rng);
        let base = grid_bargain(&p, 21).map_err(|e| e.to_string())?.oracle.nash.ok_or("no feasible cell")?;
        for scale in [0.5, 3.0, 10.0] {
            for player in 0..2 {
                let mut objectives = p.objectives.clone();
                objectives[player] = objectives[player].affine(scale, 7.5);
                let q = ProblemSpec::new(objectives, bounds.clone()).unwrap();
                let t = grid_bargain(&q, 21).map_err(|e| e.to_string())?.oracle.nash.ok_or("no feasible cell")?;
                ensure!(t.point.index == base.point.index, "argmax moved under a = {scale}, player {player}");
                let ratio = t.nash_product / (scale * base.nash_product);
                ensure!((ratio - 1.0).abs() < 1e-9, "product ratio {ratio} under a = {scale}");
                checks += 1;
            }
        }
    }
    Ok(format!("symmetry gap {worst_sym:.1e} on 5 mirrored instances; argmax fixed in {checks} affine rescalings"))
}

fn criterion_4() -> Outcome {
    let problem = common::conflicting_toy();
    let mut worst: f64 = 0.0;
    for seed in 0..10 {
        let params = GaParams { population_size: 40, offspring_size: 10, generations: 200, seed, ..Default::default() };
        let out = nsga2_run(&problem, &params).map_err(|e| e.to_string())?;
        for ind in &out.front {
            let s = (-ind.objectives[0]).sqrt() + (-ind.objectives[1]).sqrt();
            worst = worst.max((s - 1.0).abs());
        }
        for a in &out.front {
            for b in &out.front {
                ensure!(!dominates(&a.objectives, &b.objectives).unwrap(), "seed {seed}: front member dominated");
            }
        }
    }
    ensure!(worst <= 0.05, "front identity deviation {worst}");
    Ok(format!("10 seeds, max |sqrt(-f1) + sqrt(-f2) - 1| = {worst:.2e}"))
}

fn criterion_5() -> Outcome {
    let cfg = PipelineConfig::default();
    ensure!(matches!(cfg.data, DataSource::Synthetic(_)), "default data source is not synthetic");
    let r = compute_report(&cfg).map_err(|e| e.to_string())?;
    let a = &r.agreement;
    let all = [a.nsga2_spread_relative, a.rnsga2_spread_relative, a.nash_gap_relative];
    for (name, v) in ["NSGA-II spread", "R-NSGA-II spread", "Nash gap"].iter().zip(all) {
        ensure!(v[0] < 0.01 && v[1] < 0.01, "{name} {v:?} not below 1 %");
    }
    Ok(format!(
        "front of {} at ({:.2}, {:.2}); spread nsga2 ({:.1e}, {:.1e}), rnsga2 ({:.1e}, {:.1e}), nash gap ({:.1e}, {:.1e})",
        r.nsga2_front.len(),
        r.nash.payoffs[0],
        r.nash.payoffs[1],
        all[0][0], all[0][1], all[1][0], all[1][1], all[2][0], all[2][1]
    ))
}

fn criterion_6() -> Outcome {
    let mut rng = common::rng(6);
    for case in 0..500 {
        let n = rng.gen_range(1..=100);
        let m = rng.gen_range(2..=3);
        // Small integer grid so ties and duplicates are common.
        let objs: Vec<Vec<f64>> = (0..n).map(|_| (0..m).map(|_| rng.gen_range(0..8) as f64).collect()).collect();
        let pop: Vec<Individual> = objs.iter().map(|o| Individual { genome: vec![0.0], objectives: o.clone() }).collect();
        let got = fast_nondominated_sort(&pop).map_err(|e| e.to_string())?;
        let expected = common::peel_fronts(&objs);
        ensure!(got == expected, "case {case}: {got:?} != {expected:?}");
    }
    let cd = crowding_distance(&[[1.0, 3.0], [2.0, 2.0], [3.0, 1.0]]);
    ensure!(cd[0] == f64::INFINITY && cd[1] == 2.0 && cd[2] == f64::INFINITY, "crowding {cd:?}");
    Ok("500 random populations match peeling; crowding (inf, 2, inf)".into())
}

fn criterion_7() -> Outcome {
    let spec = SyntheticSpec {
        noise: NoiseLevels { absorbed_duty: 0.0, cot: 0.0, stack_o2: 0.0 },
        ..SyntheticSpec::single_peak()
    };
    let data = synthesize(&spec).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for target in Column::CONTROLLED {
        let tree = fit_cart(&data, &Column::MANIPULATED, target, &CartParams::unconstrained()).map_err(|e| e.to_string())?;
        let m = evaluate(&tree, &data, &data, target).map_err(|e| e.to_string())?;
        ensure!((m.train_r2 - 1.0).abs() <= 1e-9, "{target:?} train R² {}", m.train_r2);
        worst = worst.max((m.train_r2 - 1.0).abs());
    }
    let row = |train_mse, test_mse, train_rmse, test_rmse, train_r2, test_r2| ModelMetrics {
        train_mse,
        test_mse,
        train_rmse,
        test_rmse,
        train_r2,
        test_r2,
    };
    let table = [
        ("absorbed_duty", row(3.523, 5.105, 1.877, 2.259, 0.941, 0.925)),
        ("stack_o2", row(0.106, 0.142, 0.326, 0.377, 0.349, 0.207)),
        ("cot", row(11.505, 21.135, 3.392, 4.597, 0.810, 0.687)),
    ];
    let kept = select_models(&table, 0.5);
    ensure!(kept == ["absorbed_duty", "cot"], "selected {kept:?}");
    Ok(format!("max |train R² - 1| = {worst:.1e}; selection keeps {kept:?}"))
}

fn criterion_8() -> Outcome {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let cfg = PipelineConfig { output_dir: d.path().to_path_buf(), ..Default::default() };
        run_pipeline(&cfg).map_err(|e| e.to_string())?;
    }
    let mut compared = 0;
    for file in REPORT_FILES {
        let read = |i: usize| std::fs::read_to_string(dirs[i].path().join(file)).map_err(|e| format!("{file}: {e}"));
        let (a, b) = (read(0)?, read(1)?);
        // The markdown header carries the generation time; compare its body.
        let body = |s: &str| if file == "report.md" { s.lines().skip(3).collect::<Vec<_>>().join("\n") } else { s.to_string() };
        ensure!(body(&a) == body(&b), "{file} differs between runs");
        compared += 1;
    }
    Ok(format!("{compared} artifacts identical across two runs"))
}

fn criterion_9() -> Outcome {
    let mut rng = common::rng(9);
    let mut applications = 0u64;
    while applications < 1_000_000 {
        let dims = rng.gen_range(1..=4);
        let lower: Vec<f64> = (0..dims).map(|_| rng.gen_range(-500.0..500.0)).collect();
        let upper: Vec<f64> = lower.iter().map(|l| l + rng.gen_range(1e-6..1000.0)).collect();
        let bounds = BoundsBox::new(lower, upper).unwrap();
        // Parents include the bounds themselves half of the time.
        let point = |r: &mut rand_xoshiro::Xoshiro256PlusPlus| -> Vec<f64> {
            (0..dims)
                .map(|i| match r.gen_range(0..4) {
                    0 => bounds.lower()[i],
                    1 => bounds.upper()[i],
                    _ => r.gen_range(bounds.lower()[i]..=bounds.upper()[i]),
                })
                .collect()
        };
        for _ in 0..50 {
            let (p1, p2) = (point(&mut rng), point(&mut rng));
            let eta = rng.gen_range(0.5..60.0);
            let (c1, c2) = sbx_crossover(&p1, &p2, eta, 1.0, &bounds, &mut rng).map_err(|e| e.to_string())?;
            let m = polynomial_mutation(&p1, eta, 1.0, &bounds, &mut rng).map_err(|e| e.to_string())?;
            for c in [&c1, &c2, &m] {
                ensure!(bounds.contains(c), "out of bounds child {c:?} in {bounds:?}");
            }
            applications += 2;
        }
    }
    Ok(format!("{applications} operator applications stayed in bounds"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("payoff-matrix fidelity", criterion_1, Duration::from_secs(1)),
        ("Nash oracle equivalence", criterion_2, Duration::from_secs(120)),
        ("bargaining axioms on the grid", criterion_3, Duration::from_secs(60)),
        ("NSGA-II front quality", criterion_4, Duration::from_secs(30)),
        ("convergence coincidence", criterion_5, Duration::from_secs(60)),
        ("sorting and crowding oracles", criterion_6, Duration::from_secs(10)),
        ("surrogate contract", criterion_7, Duration::from_secs(10)),
        ("determinism", criterion_8, Duration::from_secs(120)),
        ("operator bounds safety", criterion_9, Duration::from_secs(30)),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > budget => Err(format!("took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("[{tag}] criterion {} {name} ({:.2} s): {detail}", i + 1, elapsed.as_secs_f64());
        failed += outcome.is_err() as usize;
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
