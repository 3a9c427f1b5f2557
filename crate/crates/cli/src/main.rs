//! `furnace`: command-line front end for the furnace optimization pipeline.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use furnace_core::dataset::{SyntheticSpec, synthesize, write_csv};
use furnace_core::moo::Individual;
use furnace_core::pipeline::{
    self, ComparisonReport, DataSource, PipelineConfig, emit_report, grid_bargain, load_report, write_front_csv,
    write_metrics_csv,
};
use furnace_core::{Error, Result};

#[derive(Parser)]
#[command(name = "furnace", version, about = "Furnace setpoint optimization with tree surrogates, NSGA-II and Nash bargaining")]
struct Cli {
    /// Pipeline configuration (JSON). Defaults are used when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override every seed in the configuration.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Output directory (overrides the configuration).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Only report errors.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    /// Both responses peak at one interior point.
    SinglePeak,
    /// The responses peak at opposite corners.
    Conflicting,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Method {
    Nsga2,
    Rnsga2,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic furnace data set as CSV.
    Synth {
        /// Ground-truth profile; defaults to the configured synthetic spec.
        #[arg(long, value_enum)]
        profile: Option<Profile>,
        #[arg(long)]
        samples: Option<usize>,
        /// Destination file; defaults to `<out>/synthetic.csv`.
        #[arg(long, value_name = "PATH")]
        file: Option<PathBuf>,
    },
    /// Fit the surrogates and write their performance table.
    Fit,
    /// Run NSGA-II and/or R-NSGA-II on the retained surrogates.
    Optimize {
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
    },
    /// Best responses, payoff matrix, disagreement point and Nash solution.
    Bargain,
    /// Brute-force grid reference: front and Nash point on the grid.
    Oracle {
        /// Grid points per axis (overrides the configuration).
        #[arg(long)]
        resolution: Option<usize>,
    },
    /// Full pipeline with every report artifact.
    Run,
    /// Re-emit the report artifacts from a previous run's `report.json`.
    Compare {
        /// Directory holding `report.json`; defaults to the output directory.
        #[arg(long, value_name = "DIR")]
        from: Option<PathBuf>,
    },
}

/// Process exit status for an error.
fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::ModelQuality(_) => 3,
        Error::Infeasible { .. } => 4,
        Error::Io { .. } => 5,
        Error::Schema(_)
        | Error::Parse { .. }
        | Error::EmptyInput
        | Error::Validation { .. }
        | Error::Json(_)
        | Error::Bounds(_)
        | Error::InvalidParams(_)
        | Error::Dimension { .. }
        | Error::InsufficientData { .. }
        | Error::GridTooLarge { .. } => 2,
        _ => 1,
    }
}

fn load_config(cli: &Cli) -> Result<PipelineConfig> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg = cfg.with_seed(seed);
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

struct Out {
    quiet: bool,
}

impl Out {
    fn line(&self, s: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", s.as_ref());
        }
    }
}

fn synth(cfg: &PipelineConfig, seed: Option<u64>, profile: Option<Profile>, samples: Option<usize>, file: Option<PathBuf>, out: &Out) -> Result<()> {
    let mut spec = match (profile, &cfg.data) {
        (Some(Profile::SinglePeak), _) => SyntheticSpec::single_peak(),
        (Some(Profile::Conflicting), _) => SyntheticSpec::conflicting(),
        (None, DataSource::Synthetic(spec)) => spec.clone(),
        (None, DataSource::Csv { .. }) => SyntheticSpec::single_peak(),
    };
    if let Some(n) = samples {
        spec.samples = n;
    }
    if let Some(s) = seed {
        spec.seed = s;
    }
    let data = synthesize(&spec)?;
    let path = match file {
        Some(p) => p,
        None => {
            create_dir(&cfg.output_dir)?;
            cfg.output_dir.join("synthetic.csv")
        }
    };
    let f = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
    write_csv(&data, f).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(&path, source),
        other => other,
    })?;
    out.line(format!("wrote {} records to {}", data.len(), path.display()));
    Ok(())
}

fn fit(cfg: &PipelineConfig, out: &Out) -> Result<()> {
    let data = pipeline::load_data(cfg)?;
    let fit = pipeline::fit_surrogates(cfg, &data)?;
    create_dir(&cfg.output_dir)?;
    write_metrics_csv(&fit.metrics, &cfg.output_dir.join("metrics.csv"))?;
    write_json(&cfg.output_dir.join("surrogates.json"), &fit.surrogates)?;
    out.line(format!("train rows {}, test rows {}", fit.train_rows, fit.test_rows));
    out.line(format!("{:<14} {:>10} {:>10} {:>9} {:>9}  retained", "target", "train MSE", "test MSE", "train R²", "test R²"));
    for r in &fit.metrics {
        let m = &r.metrics;
        out.line(format!(
            "{:<14} {:>10.4} {:>10.4} {:>9.4} {:>9.4}  {}",
            r.target.key(),
            m.train_mse,
            m.test_mse,
            m.train_r2,
            m.test_r2,
            if r.retained { "yes" } else { "no" }
        ));
    }
    Ok(())
}

fn optimize(cfg: &PipelineConfig, method: Method, out: &Out) -> Result<()> {
    let (_, problem) = pipeline::prepare(cfg)?;
    create_dir(&cfg.output_dir)?;
    let dims = problem.bounds.dims();
    if method != Method::Rnsga2 {
        let r = pipeline::run_nsga2(cfg, &problem)?;
        write_front_csv(&r.front, dims, &cfg.output_dir.join("front_nsga2.csv"))?;
        out.line(format!("NSGA-II: {} front points", r.front.len()));
    }
    if method != Method::Nsga2 {
        let r = pipeline::run_rnsga2(cfg, &problem)?;
        write_front_csv(&r.population, dims, &cfg.output_dir.join("front_rnsga2.csv"))?;
        out.line(format!("R-NSGA-II: {} population members, {} on the first front", r.population.len(), r.front.len()));
    }
    Ok(())
}

fn bargain(cfg: &PipelineConfig, out: &Out) -> Result<()> {
    let (_, problem) = pipeline::prepare(cfg)?;
    let r = pipeline::run_bargain(cfg, &problem)?;
    create_dir(&cfg.output_dir)?;
    write_json(&cfg.output_dir.join("nash.json"), &r)?;
    let p = r.payoff_matrix.entries;
    out.line(format!("payoff matrix [[{:.4}, {:.4}], [{:.4}, {:.4}]]", p[0][0], p[0][1], p[1][0], p[1][1]));
    out.line(format!("disagreement ({:.4}, {:.4})", r.disagreement.0[0], r.disagreement.0[1]));
    out.line(format!(
        "Nash point {:?} payoffs ({:.4}, {:.4}) product {:.4}",
        r.x_best, r.payoffs[0], r.payoffs[1], r.nash_product
    ));
    Ok(())
}

fn oracle(cfg: &PipelineConfig, resolution: Option<usize>, out: &Out) -> Result<()> {
    let (_, problem) = pipeline::prepare(cfg)?;
    let res = resolution.unwrap_or(cfg.oracle_resolution);
    let g = grid_bargain(&problem, res).map_err(|e| e.at(furnace_core::Stage::Oracle))?;
    create_dir(&cfg.output_dir)?;
    let front: Vec<Individual> = g
        .oracle
        .front
        .iter()
        .map(|p| Individual { genome: p.genome.clone(), objectives: p.payoffs.to_vec() })
        .collect();
    write_front_csv(&front, problem.bounds.dims(), &cfg.output_dir.join("oracle_front.csv"))?;
    let summary = serde_json::json!({
        "resolution": res,
        "best_responses": g.best_responses,
        "payoff_matrix": g.payoff_matrix,
        "disagreement": g.oracle.disagreement,
        "nash": g.oracle.nash,
    });
    write_json(&cfg.output_dir.join("oracle_nash.json"), &summary)?;
    out.line(format!("grid {res}^{}: {} front points", problem.bounds.dims(), front.len()));
    match &g.oracle.nash {
        Some(n) => out.line(format!(
            "grid Nash point {:?} payoffs ({:.4}, {:.4}) product {:.4}",
            n.point.genome, n.point.payoffs[0], n.point.payoffs[1], n.nash_product
        )),
        None => out.line("no grid cell reaches the disagreement point"),
    }
    Ok(())
}

fn summarize(report: &ComparisonReport, dir: &Path, out: &Out) {
    for m in report.method_points() {
        out.line(format!("{:<7} Y1 {:>10.4}  Y2 {:>10.4}  x {:?}", m.method, m.payoffs[0], m.payoffs[1], m.genome));
    }
    out.line(format!("max gap Nash vs NSGA-II front: {:.4}", report.agreement.max_gap));
    out.line(format!("artifacts in {}", dir.display()));
}

fn dispatch(cli: &Cli) -> Result<()> {
    let out = Out { quiet: cli.quiet };
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::Synth { profile, samples, file } => synth(&cfg, cli.seed, *profile, *samples, file.clone(), &out),
        Command::Fit => fit(&cfg, &out),
        Command::Optimize { method } => optimize(&cfg, *method, &out),
        Command::Bargain => bargain(&cfg, &out),
        Command::Oracle { resolution } => oracle(&cfg, *resolution, &out),
        Command::Run => {
            let report = pipeline::run_pipeline(&cfg)?;
            summarize(&report, &cfg.output_dir, &out);
            Ok(())
        }
        Command::Compare { from } => {
            let src = from.as_deref().unwrap_or(&cfg.output_dir);
            let report = load_report(src)?;
            emit_report(&report, &cfg.output_dir)?;
            summarize(&report, &cfg.output_dir, &out);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
