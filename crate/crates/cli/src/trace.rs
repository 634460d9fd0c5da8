//! Per-cycle mission trace as CSV.
//!
//! Floats are written with the shortest representation that parses back to the
//! same value, so a trace read back is bit-identical to the one written.

use std::io::{Read, Write};

use thiserror::Error;

use mfba::environment::Point2;
use mfba::perception::SensoryVector;
use mfba::planner::{CycleRecord, Mode};

const FIXED_COLUMNS: [&str; 7] = [
    "cycle",
    "time_s",
    "x_m",
    "y_m",
    "mode",
    "sensory_vector",
    "escape_bearing_deg",
];

#[derive(Debug, Error)]
pub enum TraceError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("row {row}: bad `{column}` value {value:?}")]
    Field {
        row: usize,
        column: String,
        value: String,
    },
    #[error("malformed header: {0}")]
    Header(String),
}

pub fn header(obstacle_count: usize) -> Vec<String> {
    let mut cols: Vec<String> = FIXED_COLUMNS.iter().map(|s| s.to_string()).collect();
    for k in 1..=obstacle_count {
        cols.push(format!("obs{k}_x_m"));
        cols.push(format!("obs{k}_y_m"));
    }
    cols
}

pub fn write_trace<W: Write>(records: &[CycleRecord], writer: W) -> Result<(), TraceError> {
    let obstacle_count = records.first().map_or(0, |r| r.obstacles.len());
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(header(obstacle_count))?;
    for r in records {
        let mut row = vec![
            r.cycle.to_string(),
            r.time.to_string(),
            r.position.x.to_string(),
            r.position.y.to_string(),
            r.mode.as_str().to_string(),
            r.sensory.to_string(),
            r.escape_bearing_deg
                .map(|b| b.to_string())
                .unwrap_or_default(),
        ];
        for p in &r.obstacles {
            row.push(p.x.to_string());
            row.push(p.y.to_string());
        }
        out.write_record(&row)?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_trace<R: Read>(reader: R) -> Result<Vec<CycleRecord>, TraceError> {
    let mut input = csv::Reader::from_reader(reader);
    let headers = input.headers()?.clone();
    let names: Vec<&str> = headers.iter().collect();
    if names.len() < FIXED_COLUMNS.len()
        || names[..FIXED_COLUMNS.len()] != FIXED_COLUMNS
        || !(names.len() - FIXED_COLUMNS.len()).is_multiple_of(2)
    {
        return Err(TraceError::Header(names.join(",")));
    }
    let obstacle_count = (names.len() - FIXED_COLUMNS.len()) / 2;
    if names[FIXED_COLUMNS.len()..] != header(obstacle_count)[FIXED_COLUMNS.len()..] {
        return Err(TraceError::Header(names.join(",")));
    }

    let mut records = Vec::new();
    for (row, result) in input.records().enumerate() {
        let rec = result?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let bad = |i: usize| TraceError::Field {
            row: row + 1,
            column: names[i].to_string(),
            value: field(i).to_string(),
        };
        let num = |i: usize| field(i).parse::<f64>().map_err(|_| bad(i));

        let cycle = field(0).parse::<usize>().map_err(|_| bad(0))?;
        let mode = field(4).parse::<Mode>().map_err(|_| bad(4))?;
        let sensory = SensoryVector::parse(field(5)).map_err(|_| bad(5))?;
        let escape_bearing_deg = match field(6) {
            "" => None,
            _ => Some(num(6)?),
        };
        let obstacles = (0..obstacle_count)
            .map(|k| {
                let i = FIXED_COLUMNS.len() + 2 * k;
                Ok(Point2::new(num(i)?, num(i + 1)?))
            })
            .collect::<Result<Vec<_>, TraceError>>()?;
        records.push(CycleRecord {
            cycle,
            time: num(1)?,
            position: Point2::new(num(2)?, num(3)?),
            mode,
            sensory,
            escape_bearing_deg,
            obstacles,
        });
    }
    Ok(records)
}
