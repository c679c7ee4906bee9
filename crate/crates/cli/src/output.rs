//! Result rows and their CSV / JSON renderings.

use std::io::Write;

use aklt_negativity::{BlockGeometry, BoundaryWeights, GeometryFlag};
use serde::Serialize;

use crate::config::Format;
use crate::error::{CliError, Result};

pub const COLUMNS: [&str; 11] = [
    "mode",
    "lc_l1",
    "la",
    "l_l2",
    "lb",
    "le",
    "weights",
    "negativity_analytic",
    "negativity_oracle",
    "spectrum_min",
    "abs_diff",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub mode: &'static str,
    pub lc_l1: Option<usize>,
    pub la: usize,
    pub l_l2: usize,
    pub lb: usize,
    pub le: Option<usize>,
    pub weights: Option<String>,
    pub negativity_analytic: f64,
    pub negativity_oracle: Option<f64>,
    pub spectrum_min: f64,
    pub abs_diff: Option<f64>,
    /// Only present in sweep tables.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<Option<f64>>,
    #[serde(skip)]
    pub flags: Vec<GeometryFlag>,
}

impl ResultRow {
    pub fn new(geometry: &BlockGeometry, weights: Option<&BoundaryWeights>, analytic: f64, spectrum_min: f64) -> Self {
        let (lc_l1, la, l_l2, lb, le) = match *geometry {
            BlockGeometry::HalfBoundary { lc, la, gap, lb, le } => (Some(lc), la, gap, lb, Some(le)),
            BlockGeometry::Spin1Boundary { la, gap, lb } => (None, la, gap, lb, None),
            BlockGeometry::Periodic { l1, la, l2, lb } => (Some(l1), la, l2, lb, None),
        };
        ResultRow {
            mode: geometry.mode_name(),
            lc_l1,
            la,
            l_l2,
            lb,
            le,
            weights: weights.map(ToString::to_string),
            negativity_analytic: analytic,
            negativity_oracle: None,
            spectrum_min,
            abs_diff: None,
            closed_form: None,
            flags: geometry.flags(),
        }
    }

    pub fn with_oracle(mut self, oracle: f64) -> Self {
        self.negativity_oracle = Some(oracle);
        self.abs_diff = Some((self.negativity_analytic - oracle).abs());
        self
    }

    fn record(&self) -> Vec<String> {
        let int = |v: Option<usize>| v.map(|v| v.to_string()).unwrap_or_default();
        let mut rec = vec![
            self.mode.to_string(),
            int(self.lc_l1),
            self.la.to_string(),
            self.l_l2.to_string(),
            self.lb.to_string(),
            int(self.le),
            self.weights.clone().unwrap_or_default(),
            float(self.negativity_analytic),
            opt_float(self.negativity_oracle),
            float(self.spectrum_min),
            opt_float(self.abs_diff),
        ];
        if let Some(cf) = self.closed_form {
            rec.push(opt_float(cf));
        }
        rec
    }
}

/// Shortest representation that round-trips; never more than 17 significant digits.
pub fn float(x: f64) -> String {
    format!("{x:?}")
}

fn opt_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

/// A finished table: metadata, header flavor and rows.
#[derive(Debug)]
pub struct Table {
    pub command: &'static str,
    pub config: String,
    pub closed_form: bool,
    pub rows: Vec<ResultRow>,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    tool: String,
    command: &'a str,
    config: &'a str,
    notes: Vec<String>,
    rows: &'a [ResultRow],
}

fn tool() -> String {
    format!("{} {}", env!("CARGO_BIN_NAME"), env!("CARGO_PKG_VERSION"))
}

impl Table {
    fn notes(&self) -> Vec<String> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.flags.iter().map(move |f| format!("row {}: {f}", i + 1)))
            .collect()
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => self.csv(),
            Format::Json => {
                let doc = JsonTable {
                    tool: tool(),
                    command: self.command,
                    config: &self.config,
                    notes: self.notes(),
                    rows: &self.rows,
                };
                let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Serialize(e.to_string()))?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }

    fn csv(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        writeln!(out, "# {}", tool()).expect("writing to a Vec");
        writeln!(out, "# {} {}", self.command, self.config).expect("writing to a Vec");
        for note in self.notes() {
            writeln!(out, "# note: {note}").expect("writing to a Vec");
        }
        let ser = |e: csv::Error| CliError::Serialize(e.to_string());
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<&str> = COLUMNS.to_vec();
        if self.closed_form {
            header.push("closed_form");
        }
        w.write_record(&header).map_err(ser)?;
        for row in &self.rows {
            w.write_record(row.record()).map_err(ser)?;
        }
        w.into_inner().map_err(|e| CliError::Serialize(e.to_string()))
    }
}
