//! Trace CSV files.
//!
//! One row per recorded step, angles in radians. Columns that do not apply
//! (no command on the terminal row, `S_E` at maneuver level, `U` at
//! information level) are left empty. Numbers use the shortest text that
//! reads back to the same `f64`.

use std::io::{Read, Write};

use pursuit_core::engagement::{beta_error, chi_angle};
use pursuit_core::simulator::SimulationTrace;

pub const COLUMNS: [&str; 31] = [
    "t", "xP", "yP", "gP", "aP", "xE", "yE", "gE", "aE", "xD", "yD", "gD", "aD", "rEP", "lEP",
    "rdEP", "ldEP", "rDP", "lDP", "rdDP", "ldDP", "rED", "lED", "rdED", "ldED", "chi", "beta",
    "S_inner", "S_outer", "S_E", "U",
];

#[derive(Debug, thiserror::Error)]
pub enum TraceError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("unexpected header, expected {}", COLUMNS.join(","))]
    Header,
    #[error("row {row}: column `{column}`: {reason}")]
    Field {
        row: usize,
        column: &'static str,
        reason: String,
    },
    #[error("row {row}: `{column}` does not match the LOS columns ({stored} vs {recomputed})")]
    Inconsistent {
        row: usize,
        column: &'static str,
        stored: f64,
        recomputed: f64,
    },
}

/// One parsed CSV row, indexed like [`COLUMNS`].
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow(pub [Option<f64>; 31]);

impl CsvRow {
    pub fn get(&self, column: &str) -> Option<f64> {
        COLUMNS
            .iter()
            .position(|c| *c == column)
            .and_then(|i| self.0[i])
    }
}

fn fmt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

pub fn rows(trace: &SimulationTrace<f64>) -> Vec<CsvRow> {
    trace
        .rows
        .iter()
        .map(|row| {
            let s = &row.state;
            let c = row.command.as_ref();
            let m = row.manifolds.as_ref();
            CsvRow([
                Some(s.t),
                Some(s.pursuer.x),
                Some(s.pursuer.y),
                Some(s.pursuer.heading),
                c.map(|c| c.a_p),
                Some(s.evader.x),
                Some(s.evader.y),
                Some(s.evader.heading),
                c.map(|c| c.a_e),
                Some(s.defender.x),
                Some(s.defender.y),
                Some(s.defender.heading),
                c.map(|c| c.a_d),
                Some(s.ep.range),
                Some(s.ep.los),
                Some(s.ep.range_rate),
                Some(s.ep.los_rate),
                Some(s.dp.range),
                Some(s.dp.los),
                Some(s.dp.range_rate),
                Some(s.dp.los_rate),
                Some(s.ed.range),
                Some(s.ed.los),
                Some(s.ed.range_rate),
                Some(s.ed.los_rate),
                Some(s.chi),
                Some(s.beta),
                m.map(|m| m.s_inner),
                m.map(|m| m.s_outer),
                m.and_then(|m| m.s_e),
                c.and_then(|c| c.u),
            ])
        })
        .collect()
}

pub fn write_csv<W: Write>(trace: &SimulationTrace<f64>, out: W) -> Result<(), TraceError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for row in rows(trace) {
        w.write_record(row.0.iter().map(|v| fmt(*v)))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Reads a trace back and checks that `chi` and `beta` are exactly what the
/// LOS columns and `chi_star` (radians) imply.
pub fn read_csv<R: Read>(input: R, chi_star: f64) -> Result<Vec<CsvRow>, TraceError> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers()?.iter().ne(COLUMNS.iter().copied()) {
        return Err(TraceError::Header);
    }
    let mut out = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let row = i + 1;
        let mut values = [None; 31];
        for (j, column) in COLUMNS.iter().enumerate() {
            let field = record.get(j).unwrap_or("");
            if !field.is_empty() {
                let v = field.parse::<f64>().map_err(|e| TraceError::Field {
                    row,
                    column,
                    reason: e.to_string(),
                })?;
                values[j] = Some(v);
            }
        }
        let row_data = CsvRow(values);
        let need = |column: &'static str| {
            row_data.get(column).ok_or(TraceError::Field {
                row,
                column,
                reason: "missing value".into(),
            })
        };
        let chi = chi_angle(need("lDP")?, need("lED")?);
        let stored_chi = need("chi")?;
        if chi.to_bits() != stored_chi.to_bits() {
            return Err(TraceError::Inconsistent {
                row,
                column: "chi",
                stored: stored_chi,
                recomputed: chi,
            });
        }
        let beta = beta_error(chi, chi_star).map_err(|e| TraceError::Field {
            row,
            column: "beta",
            reason: e.to_string(),
        })?;
        let stored_beta = need("beta")?;
        if beta.to_bits() != stored_beta.to_bits() {
            return Err(TraceError::Inconsistent {
                row,
                column: "beta",
                stored: stored_beta,
                recomputed: beta,
            });
        }
        out.push(row_data);
    }
    Ok(out)
}
