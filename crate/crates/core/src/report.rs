//! Flat-file output: CSV with `#` metadata lines and a header row, or JSON as
//! an array of row objects with keys in column order.
//!
//! Column layouts are fixed:
//!
//! * levels (`spectrum`, `sweep`): `m,g,omega,n,E_model,E_oracle,rel_err,status`
//! * partition (`zeval`): `beta,Z,free_energy,n_c,tau_c,omega_g,status`
//! * figure: `g,model_n0..model_nN,oracle_n0..oracle_nN,oracle_basis,status`

use std::fmt::Write as _;

use serde_json::{Map, Value};

use crate::error::Result;
use crate::sweep::{LevelRow, ZRow};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra free-form `#` comment lines.
    pub comments: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}: {v}");
        }
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| crate::Error::Domain(format!("csv: {e}"));
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| crate::Error::Domain(format!("csv: {e}")))?;
        out.push_str(&String::from_utf8_lossy(&bytes));
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::to_json))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("json values serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json()),
        }
    }
}

fn status_of(row: &LevelRow) -> String {
    if row.oracle_converged {
        "ok".into()
    } else {
        format!("oracle_unconverged(drift={:e})", row.oracle_drift)
    }
}

pub const LEVEL_COLUMNS: [&str; 8] = ["m", "g", "omega", "n", "E_model", "E_oracle", "rel_err", "status"];

/// Long-format level table; failed points become a single diagnostic row.
pub fn level_table(rows: &[(f64, &Result<LevelRow>)], m: u32, omega: f64) -> Table {
    let mut t = Table::new(&LEVEL_COLUMNS);
    for (g, row) in rows {
        match row {
            Ok(r) => {
                let status = status_of(r);
                for n in 0..r.model.len() {
                    t.push(vec![
                        Cell::Int(m as i64),
                        Cell::Num(*g),
                        Cell::Num(omega),
                        Cell::Int(n as i64),
                        Cell::Num(r.model[n]),
                        Cell::Num(r.oracle[n]),
                        Cell::Num(r.rel_err[n]),
                        Cell::Text(status.clone()),
                    ]);
                }
            }
            Err(e) => t.push(vec![
                Cell::Int(m as i64),
                Cell::Num(*g),
                Cell::Num(omega),
                Cell::Int(-1),
                Cell::Num(f64::NAN),
                Cell::Num(f64::NAN),
                Cell::Num(f64::NAN),
                Cell::Text(format!("error: {e}")),
            ]),
        }
    }
    t
}

pub const Z_COLUMNS: [&str; 7] = ["beta", "Z", "free_energy", "n_c", "tau_c", "omega_g", "status"];

pub fn z_table(rows: &[(f64, &Result<ZRow>)]) -> Table {
    let mut t = Table::new(&Z_COLUMNS);
    for (beta, row) in rows {
        match row {
            Ok(r) => t.push(vec![
                Cell::Num(r.beta),
                Cell::Num(r.z),
                Cell::Num(r.free_energy),
                Cell::Num(r.n_c),
                Cell::Num(r.tau_c),
                Cell::Num(r.omega_g),
                Cell::Text("ok".into()),
            ]),
            Err(e) => {
                let mut cells = vec![Cell::Num(*beta)];
                cells.extend((0..5).map(|_| Cell::Num(f64::NAN)));
                cells.push(Cell::Text(format!("error: {e}")));
                t.push(cells);
            }
        }
    }
    t
}

/// File name used for the figure of a given anharmonicity.
pub fn figure_file_name(m: u32) -> String {
    let kind = match m {
        2 => "quartic",
        3 => "sextic",
        4 => "octic",
        _ => return format!("fig_m{m}.csv"),
    };
    format!("fig_{kind}.csv")
}

pub fn figure_columns(n_max: usize) -> Vec<String> {
    let mut cols = vec!["g".to_string()];
    cols.extend((0..=n_max).map(|n| format!("model_n{n}")));
    cols.extend((0..=n_max).map(|n| format!("oracle_n{n}")));
    cols.push("oracle_basis".into());
    cols.push("status".into());
    cols
}

/// Wide-format table: one row per coupling, model and oracle columns per level.
pub fn figure_table(
    rows: &[(f64, &Result<LevelRow>)],
    m: u32,
    omega: f64,
    n_max: usize,
    truncation: usize,
    oracle_tol: f64,
) -> Table {
    let cols = figure_columns(n_max);
    let mut t = Table {
        columns: cols,
        ..Table::default()
    };
    t = t
        .meta("tool", format!("anharm {TOOL_VERSION}"))
        .meta("m", m)
        .meta("omega", omega)
        .meta("n_max", n_max)
        .meta("truncation", truncation)
        .meta("oracle_tol", format!("{oracle_tol:e}"));
    let max_basis = rows
        .iter()
        .filter_map(|(_, r)| r.as_ref().ok().map(|r| r.oracle_basis))
        .max()
        .unwrap_or(0);
    t = t.meta("oracle_max_basis", max_basis);
    t.comments.push(format!(
        "gnuplot: set datafile separator ','; set logscale x; plot for [i=2:{}] '{}' using 1:i with points, for [i={}:{}] '' using 1:i with lines",
        n_max + 2,
        figure_file_name(m),
        n_max + 3,
        2 * n_max + 3
    ));
    for (g, row) in rows {
        let mut cells = vec![Cell::Num(*g)];
        match row {
            Ok(r) => {
                cells.extend(r.model.iter().map(|&v| Cell::Num(v)));
                cells.extend(r.oracle.iter().map(|&v| Cell::Num(v)));
                cells.push(Cell::Int(r.oracle_basis as i64));
                cells.push(Cell::Text(status_of(r)));
            }
            Err(e) => {
                cells.extend((0..2 * (n_max + 1)).map(|_| Cell::Num(f64::NAN)));
                cells.push(Cell::Int(0));
                cells.push(Cell::Text(format!("error: {e}")));
            }
        }
        t.push(cells);
    }
    t
}

/// Parsed figure CSV: couplings, model levels and oracle levels per row.
#[derive(Debug, Clone)]
pub struct FigureData {
    pub g: Vec<f64>,
    pub model: Vec<Vec<f64>>,
    pub oracle: Vec<Vec<f64>>,
}

pub fn parse_figure_csv(text: &str) -> Result<FigureData> {
    let bad = |msg: String| crate::Error::Domain(format!("figure csv: {msg}"));
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    let model_idx: Vec<usize> = headers
        .iter()
        .enumerate()
        .filter(|(_, h)| h.starts_with("model_n"))
        .map(|(i, _)| i)
        .collect();
    let oracle_idx: Vec<usize> = headers
        .iter()
        .enumerate()
        .filter(|(_, h)| h.starts_with("oracle_n"))
        .map(|(i, _)| i)
        .collect();
    let mut data = FigureData {
        g: Vec::new(),
        model: Vec::new(),
        oracle: Vec::new(),
    };
    for rec in rdr.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let num = |i: usize| -> Result<f64> {
            rec.get(i)
                .ok_or_else(|| bad(format!("missing column {i}")))?
                .parse::<f64>()
                .map_err(|e| bad(e.to_string()))
        };
        data.g.push(num(0)?);
        data.model.push(model_idx.iter().map(|&i| num(i)).collect::<Result<_>>()?);
        data.oracle.push(oracle_idx.iter().map(|&i| num(i)).collect::<Result<_>>()?);
    }
    Ok(data)
}
