//! Config-driven orchestration: data, surrogates, the three solvers and the
//! comparison report, plus the grid oracle used to check them.

mod config;
mod oracle;
mod report;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

pub use config::{CartConfig, DataSource, PipelineConfig, SplitConfig};
pub use oracle::{
    GRID_LIMIT, GridBargain, GridPoint, OracleNash, OracleResult, brute_force_oracle, grid_axis, grid_bargain,
};
pub use report::{REPORT_FILES, emit_report, load_report, write_front_csv, write_metrics_csv};

use crate::bargain::{self, BargainResult};
use crate::dataset::{Column, Dataset, load_csv, synthesize, train_test_split};
use crate::error::{Error, Result, Stage};
use crate::evolve::BoundsBox;
use crate::moo::{Individual, Nsga2Outcome, Objective, ProblemSpec, Rnsga2Outcome, nsga2_run, rnsga2_run};
use crate::rng::seeded;
use crate::surrogate::{ModelMetrics, SurrogateSet, evaluate, fit_cart, select_models};

/// The two optimized controlled variables, in payoff order (Y1, Y2).
pub const OBJECTIVES: [Column; 2] = [Column::AbsorbedDuty, Column::Cot];

/// One row of the surrogate performance table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub target: Column,
    pub metrics: ModelMetrics,
    pub retained: bool,
}

/// Fitted surrogates for all controlled variables with their scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub train_rows: usize,
    pub test_rows: usize,
    pub metrics: Vec<MetricsRow>,
    pub surrogates: SurrogateSet,
}

/// A point reported by one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodPoint {
    pub method: String,
    pub payoffs: [f64; 2],
    pub genome: Vec<f64>,
}

/// How closely the three methods agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agreement {
    /// Index into the NSGA-II front of the point closest to the Nash payoffs
    /// (smallest largest relative gap).
    pub closest_front_index: usize,
    /// `|nash_k - front_k|` for that point.
    pub nash_gap: [f64; 2],
    /// `nash_gap[k] / |nash_k|`.
    pub nash_gap_relative: [f64; 2],
    /// Largest componentwise gap.
    pub max_gap: f64,
    /// `(max - min) / |mean|` of each objective over the NSGA-II front.
    pub nsga2_spread_relative: [f64; 2],
    /// Same over the final R-NSGA-II population.
    pub rnsga2_spread_relative: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    /// Keys of the payoff objectives, (Y1, Y2).
    pub objectives: [String; 2],
    pub bounds: BoundsBox,
    pub metrics: Vec<MetricsRow>,
    pub nsga2_front: Vec<Individual>,
    /// Hypervolume of everything NSGA-II evaluated, per generation.
    pub nsga2_hypervolume: Vec<f64>,
    pub rnsga2_population: Vec<Individual>,
    pub nash: BargainResult,
    pub agreement: Agreement,
    /// Uniform samples over the box with their surrogate payoffs.
    pub feasible_scatter: Vec<Individual>,
}

impl ComparisonReport {
    /// One representative row per method: the NSGA-II and R-NSGA-II
    /// members closest to the Nash payoffs, and the Nash point itself.
    pub fn method_points(&self) -> Vec<MethodPoint> {
        let nsga = &self.nsga2_front[self.agreement.closest_front_index];
        let rnsga = closest(&self.rnsga2_population, self.nash.payoffs).0;
        let row = |method: &str, ind: &Individual| MethodPoint {
            method: method.into(),
            payoffs: [ind.objectives[0], ind.objectives[1]],
            genome: ind.genome.clone(),
        };
        vec![
            row("nsga2", nsga),
            row("rnsga2", &self.rnsga2_population[rnsga]),
            MethodPoint {
                method: "nash".into(),
                payoffs: self.nash.payoffs,
                genome: self.nash.x_best.clone(),
            },
        ]
    }
}

/// Load or synthesize the configured data.
pub fn load_data(config: &PipelineConfig) -> Result<Dataset> {
    match &config.data {
        DataSource::Csv { path } => load_csv(path),
        DataSource::Synthetic(spec) => synthesize(spec),
    }
    .map_err(|e| e.at(Stage::Data))
}

/// Split, fit a tree per controlled variable and score each one. The
/// `retained` flags follow the configured threshold.
pub fn fit_surrogates(config: &PipelineConfig, data: &Dataset) -> Result<FitResult> {
    let (train, test) =
        train_test_split(data, config.split.test_fraction, config.split.seed).map_err(|e| e.at(Stage::Split))?;
    let features = Column::MANIPULATED.to_vec();
    let mut models = Vec::new();
    let mut scored = Vec::new();
    for target in Column::CONTROLLED {
        let fitted = config
            .cart
            .for_target(target)
            .and_then(|params| fit_cart(&train, &features, target, params))
            .and_then(|tree| evaluate(&tree, &train, &test, target).map(|m| (tree, m)));
        let (tree, m) = fitted.map_err(|e| e.at(Stage::Fit))?;
        models.push((target, tree));
        scored.push((target.key(), m));
    }
    let keep = select_models(&scored, config.retain_threshold);
    let metrics = scored
        .iter()
        .map(|&(key, m)| MetricsRow {
            target: key.parse().expect("controlled key"),
            metrics: m,
            retained: keep.iter().any(|k| k == key),
        })
        .collect();
    Ok(FitResult {
        train_rows: train.len(),
        test_rows: test.len(),
        metrics,
        surrogates: SurrogateSet { features, models },
    })
}

/// Build the bi-objective problem from the retained absorbed-duty and COT
/// surrogates. Fails with a model-quality error listing every test R² if
/// either was dropped.
pub fn build_problem(fit: &FitResult, bounds: &BoundsBox) -> Result<ProblemSpec> {
    let retained = |c: Column| fit.metrics.iter().any(|r| r.target == c && r.retained);
    if !OBJECTIVES.iter().all(|&c| retained(c)) {
        let scores = fit.metrics.iter().map(|r| (r.target.key().to_string(), r.metrics.test_r2)).collect();
        return Err(Error::ModelQuality(scores).at(Stage::Select));
    }
    let objectives = OBJECTIVES
        .iter()
        .map(|&c| {
            let tree = fit.surrogates.get(c).expect("fitted").clone();
            Objective::new(c.key(), move |x| tree.eval(x))
        })
        .collect();
    ProblemSpec::new(objectives, bounds.clone()).map_err(|e| e.at(Stage::Select))
}

/// Data through surrogate selection: the problem the solvers work on.
pub fn prepare(config: &PipelineConfig) -> Result<(FitResult, ProblemSpec)> {
    config.validate().map_err(|e| e.at(Stage::Data))?;
    let data = load_data(config)?;
    let fit = fit_surrogates(config, &data)?;
    let problem = build_problem(&fit, &config.bounds)?;
    Ok((fit, problem))
}

pub fn run_nsga2(config: &PipelineConfig, problem: &ProblemSpec) -> Result<Nsga2Outcome> {
    nsga2_run(problem, &config.nsga2_params()).map_err(|e| e.at(Stage::Nsga2))
}

pub fn run_rnsga2(config: &PipelineConfig, problem: &ProblemSpec) -> Result<Rnsga2Outcome> {
    rnsga2_run(problem, &config.rnsga2_params()).map_err(|e| e.at(Stage::Rnsga2))
}

/// Best responses, payoff matrix, disagreement point and Nash search.
pub fn run_bargain(config: &PipelineConfig, problem: &ProblemSpec) -> Result<BargainResult> {
    let setup = bargain::setup(problem, &config.ga).map_err(|e| e.at(Stage::BestResponse))?;
    let params = config.ga.with_seed(crate::rng::derive_seed(config.ga.seed, crate::rng::role::NASH));
    bargain::nash_solve(problem, &setup, &params).map_err(|e| e.at(Stage::Bargain))
}

/// Uniform samples over the box with their payoffs.
pub fn feasible_scatter(problem: &ProblemSpec, samples: usize, seed: u64) -> Result<Vec<Individual>> {
    let mut rng = seeded(seed);
    let b = &problem.bounds;
    (0..samples)
        .map(|_| {
            let x = (0..b.dims()).map(|i| rng.gen_range(b.lower()[i]..=b.upper()[i])).collect();
            problem.individual(x)
        })
        .collect()
}

/// Member of `pop` minimizing the largest relative gap to `target`, with
/// that gap. Ties go to the earliest member.
fn closest(pop: &[Individual], target: [f64; 2]) -> (usize, f64) {
    let gap = |ind: &Individual| {
        (0..2)
            .map(|k| (target[k] - ind.objectives[k]).abs() / target[k].abs().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    };
    pop.iter()
        .enumerate()
        .map(|(i, ind)| (i, gap(ind)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
}

fn spread(pop: &[Individual]) -> [f64; 2] {
    let mut out = [0.0; 2];
    for (k, s) in out.iter_mut().enumerate() {
        let vals = pop.iter().map(|p| p.objectives[k]);
        let (lo, hi) = vals.clone().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        let mean = vals.sum::<f64>() / pop.len() as f64;
        *s = (hi - lo) / mean.abs().max(f64::MIN_POSITIVE);
    }
    out
}

pub fn agreement(nsga2_front: &[Individual], rnsga2_population: &[Individual], nash: &BargainResult) -> Agreement {
    let (i, _) = closest(nsga2_front, nash.payoffs);
    let near = &nsga2_front[i].objectives;
    let nash_gap = [0, 1].map(|k| (nash.payoffs[k] - near[k]).abs());
    Agreement {
        closest_front_index: i,
        nash_gap,
        nash_gap_relative: [0, 1].map(|k| nash_gap[k] / nash.payoffs[k].abs().max(f64::MIN_POSITIVE)),
        max_gap: nash_gap[0].max(nash_gap[1]),
        nsga2_spread_relative: spread(nsga2_front),
        rnsga2_spread_relative: spread(rnsga2_population),
    }
}

/// Run every stage and assemble the report without writing anything.
pub fn compute_report(config: &PipelineConfig) -> Result<ComparisonReport> {
    let (fit, problem) = prepare(config)?;
    let nsga2 = run_nsga2(config, &problem)?;
    let rnsga2 = run_rnsga2(config, &problem)?;
    let nash = run_bargain(config, &problem)?;
    let feasible_scatter =
        feasible_scatter(&problem, config.scatter_samples, config.scatter_seed()).map_err(|e| e.at(Stage::Report))?;
    Ok(ComparisonReport {
        objectives: OBJECTIVES.map(|c| c.key().to_string()),
        bounds: config.bounds.clone(),
        metrics: fit.metrics,
        agreement: agreement(&nsga2.front, &rnsga2.population, &nash),
        nsga2_front: nsga2.front,
        nsga2_hypervolume: nsga2.hypervolume,
        rnsga2_population: rnsga2.population,
        nash,
        feasible_scatter,
    })
}

/// Full run: compute the report and write every artifact to the configured
/// output directory.
pub fn run_pipeline(config: &PipelineConfig) -> Result<ComparisonReport> {
    let report = compute_report(config)?;
    emit_report(&report, &config.output_dir).map_err(|e| e.at(Stage::Report))?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::SyntheticSpec;
    use crate::evolve::GaParams;

    fn quick(spec: SyntheticSpec) -> PipelineConfig {
        PipelineConfig {
            data: DataSource::Synthetic(SyntheticSpec { samples: 400, ..spec }),
            ga: GaParams { generations: 60, ..Default::default() },
            scatter_samples: 20,
            ..Default::default()
        }
    }

    #[test]
    fn single_peak_report_is_consistent() {
        let r = compute_report(&quick(SyntheticSpec::single_peak())).unwrap();
        let keep: Vec<(Column, bool)> = r.metrics.iter().map(|m| (m.target, m.retained)).collect();
        assert_eq!(
            keep,
            vec![(Column::AbsorbedDuty, true), (Column::StackO2, false), (Column::Cot, true)]
        );
        let d = r.nash.disagreement.0;
        assert!(r.nash.payoffs[0] >= d[0] && r.nash.payoffs[1] >= d[1]);
        for ind in r.nsga2_front.iter().chain(&r.rnsga2_population).chain(&r.feasible_scatter) {
            assert!(r.bounds.contains(&ind.genome));
        }
        assert!(r.bounds.contains(&r.nash.x_best));
        assert_eq!(r.feasible_scatter.len(), 20);
        let rows = r.method_points();
        assert_eq!(rows[2].payoffs, r.nash.payoffs);
        assert_eq!(rows[0].payoffs.to_vec(), r.nsga2_front[r.agreement.closest_front_index].objectives);
    }

    #[test]
    fn strict_threshold_names_every_target() {
        let cfg = PipelineConfig {
            retain_threshold: 0.99,
            ..quick(SyntheticSpec::single_peak())
        };
        let err = compute_report(&cfg).unwrap_err();
        assert!(matches!(err, Error::Staged { stage: Stage::Select, .. }));
        match err.root() {
            Error::ModelQuality(scores) => {
                let names: Vec<&str> = scores.iter().map(|(n, _)| n.as_str()).collect();
                assert_eq!(names, ["absorbed_duty", "stack_o2", "cot"]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_csv_is_a_tagged_io_error() {
        let cfg = PipelineConfig {
            data: DataSource::Csv { path: "/nonexistent/plant.csv".into() },
            ..Default::default()
        };
        let err = compute_report(&cfg).unwrap_err();
        assert!(matches!(err, Error::Staged { stage: Stage::Data, .. }));
        assert!(matches!(err.root(), Error::Io { .. }));
    }

    #[test]
    fn closest_and_spread_by_hand() {
        let mk = |a: f64, b: f64| Individual { genome: vec![], objectives: vec![a, b] };
        let pop = vec![mk(10.0, 100.0), mk(9.0, 101.0), mk(11.0, 99.0)];
        assert_eq!(closest(&pop, [9.1, 101.0]).0, 1);
        let s = spread(&pop);
        assert!((s[0] - 0.2).abs() < 1e-12 && (s[1] - 0.02).abs() < 1e-12);
    }
}
