use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{Column, Dataset, FurnaceRecord, TIMESTAMP_HEADER};
use crate::error::{Error, Result};

/// Load a furnace CSV. Columns may appear in any order but must be exactly
/// the canonical set.
pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn read_csv(reader: impl Read) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::EmptyInput);
    }

    let mut timestamp_at = None;
    let mut positions: Vec<(Column, usize)> = Vec::with_capacity(Column::ALL.len());
    for (i, name) in headers.iter().enumerate() {
        if name == TIMESTAMP_HEADER {
            if timestamp_at.replace(i).is_some() {
                return Err(Error::Schema(format!("duplicate column `{name}`")));
            }
            continue;
        }
        let col = Column::ALL
            .into_iter()
            .find(|c| c.header() == name)
            .ok_or_else(|| Error::Schema(format!("unexpected column `{name}`")))?;
        if positions.iter().any(|&(c, _)| c == col) {
            return Err(Error::Schema(format!("duplicate column `{name}`")));
        }
        positions.push((col, i));
    }
    let timestamp_at = timestamp_at
        .ok_or_else(|| Error::Schema(format!("missing column `{TIMESTAMP_HEADER}`")))?;
    for c in Column::ALL {
        if !positions.iter().any(|&(p, _)| p == c) {
            return Err(Error::Schema(format!("missing column `{}`", c.header())));
        }
    }

    let mut records = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(csv_error)?;
        let cell = |col: Column| -> Result<f64> {
            let at = positions.iter().find(|&&(c, _)| c == col).map(|&(_, at)| at).unwrap();
            let raw = row.get(at).unwrap_or("");
            raw.parse::<f64>().map_err(|_| Error::Parse {
                row: row_no,
                column: col.header().to_string(),
                value: raw.to_string(),
            })
        };
        let record = FurnaceRecord {
            timestamp: row.get(timestamp_at).unwrap_or("").to_string(),
            stack_o2: cell(Column::StackO2)?,
            efficiency: cell(Column::Efficiency)?,
            fuel_gas: cell(Column::FuelGas)?,
            fired_duty: cell(Column::FiredDuty)?,
            absorbed_duty: cell(Column::AbsorbedDuty)?,
            throughput: cell(Column::Throughput)?,
            cit: cell(Column::Cit)?,
            cot: cell(Column::Cot)?,
        };
        records.push(record);
    }
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    Dataset::new(records)
}

/// Write `data` with the canonical header order.
pub fn write_csv(data: &Dataset, writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec![TIMESTAMP_HEADER];
    header.extend(Column::ALL.iter().map(|c| c.header()));
    w.write_record(&header).map_err(csv_error)?;
    for r in data.records() {
        let mut row = vec![r.timestamp.clone()];
        row.extend(Column::ALL.iter().map(|c| c.of(r).to_string()));
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::io("<csv writer>", e))
}

fn csv_error(e: csv::Error) -> Error {
    let pos = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io("<csv>", io),
        csv::ErrorKind::Utf8 { .. } => Error::Schema(format!("invalid UTF-8 near line {pos}")),
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => Error::Schema(format!(
            "line {pos} has {len} fields, header has {expected_len}"
        )),
        other => Error::Schema(format!("{other:?}")),
    }
}
