use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{ComparisonReport, MetricsRow};
use crate::dataset::Column;
use crate::error::{Error, Result};
use crate::moo::Individual;

/// Files written by [`emit_report`].
pub const REPORT_FILES: [&str; 10] = [
    "metrics.csv",
    "front_nsga2.csv",
    "front_rnsga2.csv",
    "nash.json",
    "comparison.csv",
    "feasible_scatter.csv",
    "report.md",
    "report.json",
    "nash_convergence.csv",
    "nsga2_hypervolume.csv",
];

const METRICS_HEADER: [&str; 9] = [
    "Manipulated Variables",
    "Controlled Variables",
    "Train MSE",
    "Test MSE",
    "Train RMSE",
    "Test RMSE",
    "Train Rsquare",
    "Test Rsquare",
    "Retained",
];

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| csv_err(path, e))
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Schema(format!("{}: {other:?}", path.display())),
    }
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn genome_header(dims: usize) -> Vec<String> {
    (1..=dims).map(|i| format!("x{i}")).collect()
}

pub fn write_metrics_csv(rows: &[MetricsRow], path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(METRICS_HEADER).map_err(|e| csv_err(path, e))?;
    let inputs = Column::MANIPULATED.map(|c| c.header()).join(", ");
    for r in rows {
        let m = &r.metrics;
        let mut rec = vec![inputs.clone(), r.target.header().to_string()];
        rec.extend([m.train_mse, m.test_mse, m.train_rmse, m.test_rmse, m.train_r2, m.test_r2].map(fmt));
        rec.push(r.retained.to_string());
        w.write_record(&rec).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// `x1..xn, Y1, Y2` rows.
pub fn write_front_csv(points: &[Individual], dims: usize, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = genome_header(dims);
    header.extend(["Y1".into(), "Y2".into()]);
    w.write_record(&header).map_err(|e| csv_err(path, e))?;
    for p in points {
        let rec: Vec<String> = p.genome.iter().chain(&p.objectives).copied().map(fmt).collect();
        w.write_record(&rec).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_series(values: &[f64], column: &str, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["generation", column]).map_err(|e| csv_err(path, e))?;
    for (g, v) in values.iter().enumerate() {
        w.write_record([g.to_string(), fmt(*v)]).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_comparison(report: &ComparisonReport, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["method".to_string(), "Y1".into(), "Y2".into()];
    header.extend(genome_header(report.bounds.dims()));
    w.write_record(&header).map_err(|e| csv_err(path, e))?;
    for p in report.method_points() {
        let mut rec = vec![p.method, fmt(p.payoffs[0]), fmt(p.payoffs[1])];
        rec.extend(p.genome.iter().copied().map(fmt));
        w.write_record(&rec).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

fn markdown(report: &ComparisonReport) -> String {
    let mut s = String::new();
    let now = chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ");
    let [y1, y2] = &report.objectives;
    let _ = writeln!(s, "# Furnace setpoint comparison\n\nGenerated {now}\n");
    let _ = writeln!(s, "Y1 = {y1}, Y2 = {y2}. Both are maximized.\n");

    let _ = writeln!(s, "## Surrogates\n");
    let _ = writeln!(s, "| target | train MSE | test MSE | train RMSE | test RMSE | train R² | test R² | retained |");
    let _ = writeln!(s, "|---|---|---|---|---|---|---|---|");
    for r in &report.metrics {
        let m = &r.metrics;
        let _ = writeln!(
            s,
            "| {} | {:.3} | {:.3} | {:.3} | {:.3} | {:.3} | {:.3} | {} |",
            r.target.key(),
            m.train_mse,
            m.test_mse,
            m.train_rmse,
            m.test_rmse,
            m.train_r2,
            m.test_r2,
            if r.retained { "yes" } else { "no" }
        );
    }
    let _ = writeln!(
        s,
        "\nStack O2 is expected to stay between 1.5 % and 2 % in operation. \
         The band is noted for context only and is not enforced as a constraint.\n"
    );

    let n = &report.nash;
    let p = n.payoff_matrix.entries;
    let _ = writeln!(s, "## Bargaining\n");
    let _ = writeln!(s, "Payoff matrix (rows: best response of player 1, player 2):\n");
    let _ = writeln!(s, "| | Y1 | Y2 |\n|---|---|---|");
    let _ = writeln!(s, "| X1 best | {:.4} | {:.4} |", p[0][0], p[0][1]);
    let _ = writeln!(s, "| X2 best | {:.4} | {:.4} |", p[1][0], p[1][1]);
    let _ = writeln!(
        s,
        "\nDisagreement point ({:.4}, {:.4}); Nash product {:.4}.\n",
        n.disagreement.0[0], n.disagreement.0[1], n.nash_product
    );

    let _ = writeln!(s, "## Comparison\n");
    let _ = writeln!(s, "| method | Y1 | Y2 | x |\n|---|---|---|---|");
    for m in report.method_points() {
        let x: Vec<String> = m.genome.iter().map(|v| format!("{v:.2}")).collect();
        let _ = writeln!(s, "| {} | {:.4} | {:.4} | ({}) |", m.method, m.payoffs[0], m.payoffs[1], x.join(", "));
    }
    let a = &report.agreement;
    let _ = writeln!(
        s,
        "\nNSGA-II front: {} points, relative spread ({:.2e}, {:.2e}). \
         R-NSGA-II population relative spread ({:.2e}, {:.2e}).",
        report.nsga2_front.len(),
        a.nsga2_spread_relative[0],
        a.nsga2_spread_relative[1],
        a.rnsga2_spread_relative[0],
        a.rnsga2_spread_relative[1]
    );
    let _ = writeln!(
        s,
        "Largest gap between the Nash payoffs and the closest NSGA-II front point: {:.4} \
         (relative {:.2e}, {:.2e}).",
        a.max_gap, a.nash_gap_relative[0], a.nash_gap_relative[1]
    );
    s
}

/// Write every artifact of `report` into `dir`, creating it if needed.
/// Only the `report.md` header carries a timestamp; everything else is a
/// pure function of the report.
pub fn emit_report(report: &ComparisonReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let at = |name: &str| dir.join(name);
    let dims = report.bounds.dims();
    write_metrics_csv(&report.metrics, &at("metrics.csv"))?;
    write_front_csv(&report.nsga2_front, dims, &at("front_nsga2.csv"))?;
    write_front_csv(&report.rnsga2_population, dims, &at("front_rnsga2.csv"))?;
    write_text(&at("nash.json"), &serde_json::to_string_pretty(&report.nash)?)?;
    write_comparison(report, &at("comparison.csv"))?;
    write_front_csv(&report.feasible_scatter, dims, &at("feasible_scatter.csv"))?;
    write_text(&at("report.md"), &markdown(report))?;
    write_text(&at("report.json"), &serde_json::to_string_pretty(report)?)?;
    write_series(&report.nash.history, "best_value", &at("nash_convergence.csv"))?;
    write_series(&report.nsga2_hypervolume, "hypervolume", &at("nsga2_hypervolume.csv"))?;
    Ok(REPORT_FILES.iter().map(|f| at(f)).collect())
}

/// Read back the `report.json` written by [`emit_report`].
pub fn load_report(dir: &Path) -> Result<ComparisonReport> {
    let path = dir.join("report.json");
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surrogate::ModelMetrics;

    #[test]
    fn metrics_table_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let m = ModelMetrics {
            train_mse: 3.523,
            test_mse: 5.105,
            train_rmse: 1.877,
            test_rmse: 2.259,
            train_r2: 0.941,
            test_r2: 0.925,
        };
        write_metrics_csv(&[MetricsRow { target: Column::AbsorbedDuty, metrics: m, retained: true }], &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "Manipulated Variables,Controlled Variables,Train MSE,Test MSE,Train RMSE,Test RMSE,Train Rsquare,Test Rsquare,Retained"
        );
        assert_eq!(
            lines.next().unwrap(),
            "\"Fired-duty-MW, Throughput, CIT-degC\",Absorbed-duty-MW,3.523,5.105,1.877,2.259,0.941,0.925,true"
        );
    }

    #[test]
    fn front_rows_round_trip_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        let pts = vec![Individual { genome: vec![0.1 + 0.2, 1.0 / 3.0, 5.0], objectives: vec![75.2, 361.29] }];
        write_front_csv(&pts, 3, &path).unwrap();
        let mut rdr = csv::Reader::from_path(&path).unwrap();
        assert_eq!(rdr.headers().unwrap(), vec!["x1", "x2", "x3", "Y1", "Y2"]);
        let row: Vec<f64> = rdr.records().next().unwrap().unwrap().iter().map(|c| c.parse().unwrap()).collect();
        assert_eq!(row, vec![0.1 + 0.2, 1.0 / 3.0, 5.0, 75.2, 361.29]);
    }

    #[test]
    fn unwritable_directory_is_an_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let err = write_front_csv(&[], 3, &blocker.join("f.csv")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }), "{err:?}");
    }
}
