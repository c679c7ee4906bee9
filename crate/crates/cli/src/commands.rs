use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use aklt_negativity::oracle::oracle_negativity;
use aklt_negativity::spectrum::negativity_of;
use aklt_negativity::verify::{self, standard_cases};
use aklt_negativity::ClosedForm;
use rayon::prelude::*;

use crate::config::{Format, Point, RunConfig};
use crate::error::{CliError, Result};
use crate::output::{ResultRow, Table};

/// Where a rendered table goes. Files are opened before any work starts so an
/// unwritable path fails fast.
pub enum Sink {
    Stdout,
    File(PathBuf, File),
}

impl Sink {
    pub fn open(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Sink::Stdout),
            Some(p) => File::create(p)
                .map(|f| Sink::File(p.to_path_buf(), f))
                .map_err(|source| CliError::Output {
                    path: p.to_path_buf(),
                    source,
                }),
        }
    }

    pub fn write(self, bytes: &[u8]) -> Result<()> {
        match self {
            Sink::Stdout => {
                let mut out = std::io::stdout().lock();
                out.write_all(bytes)
                    .and_then(|_| out.flush())
                    .map_err(|source| CliError::Output {
                        path: PathBuf::from("<stdout>"),
                        source,
                    })
            }
            Sink::File(path, mut f) => f
                .write_all(bytes)
                .and_then(|_| f.flush())
                .map_err(|source| CliError::Output { path, source }),
        }
    }
}

fn evaluate(point: &Point, oracle: bool) -> Result<ResultRow> {
    let w = point.weights.as_ref();
    let r = negativity_of(point.geometry, w)?;
    let row = ResultRow::new(&point.geometry, w, r.negativity, r.spectrum.min());
    if oracle {
        let (n, _) = oracle_negativity(&point.geometry, w)?;
        return Ok(row.with_oracle(n));
    }
    Ok(row)
}

fn evaluate_all(points: &[Point], oracle: bool) -> Result<Vec<ResultRow>> {
    points.par_iter().map(|p| evaluate(p, oracle)).collect()
}

fn mismatches(rows: &[ResultRow], tol: f64) -> Option<CliError> {
    let failed = rows
        .iter()
        .filter(|r| r.abs_diff.is_some_and(|d| d.is_nan() || d > tol))
        .count();
    (failed > 0).then_some(CliError::Mismatch {
        failed,
        total: rows.len(),
        tol,
    })
}

fn finish(table: Table, format: Format, sink: Sink, tol: f64) -> Result<()> {
    let check = mismatches(&table.rows, tol);
    sink.write(&table.render(format)?)?;
    check.map_or(Ok(()), Err)
}

pub fn eval(config: &RunConfig, format: Format, out: Option<&Path>) -> Result<()> {
    for (name, r) in [
        ("la", Some(&config.la)),
        ("lb", Some(&config.lb)),
        ("gap", config.gap.as_ref()),
    ]
    .into_iter()
    .chain([
        ("lc", config.lc.as_ref()),
        ("le", config.le.as_ref()),
        ("l1", config.l1.as_ref()),
        ("l2", config.l2.as_ref()),
    ]) {
        if r.is_some_and(|r| r.is_empty()) {
            return Err(CliError::Usage(format!("--{name} selects no lengths")));
        }
    }
    let points = config.points()?;
    let sink = Sink::open(out)?;
    let rows = evaluate_all(&points, config.oracle)?;
    let table = Table {
        command: "eval",
        config: config.echo(),
        closed_form: false,
        rows,
    };
    finish(table, format, sink, config.tol)
}

/// Like `eval`, plus the matching closed form per row. Empty ranges give a
/// header-only table.
pub fn sweep(config: &RunConfig, format: Format, out: Option<&Path>) -> Result<()> {
    let points = config.points()?;
    let sink = Sink::open(out)?;
    let mut rows = evaluate_all(&points, config.oracle)?;
    for (row, p) in rows.iter_mut().zip(&points) {
        row.closed_form = Some(ClosedForm::for_geometry(&p.geometry, p.weights.as_ref()).map(|c| c.evaluate()));
    }
    let table = Table {
        command: "sweep",
        config: config.echo(),
        closed_form: true,
        rows,
    };
    finish(table, format, sink, config.tol)
}

/// Runs every small configuration through both routes. Agreement requires the
/// negativities and the full spectra to match within `tol`.
pub fn verify(max_sites: usize, max_block_sum: usize, tol: f64, format: Format, out: Option<&Path>) -> Result<()> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::Usage(format!(
            "tolerance must be a non-negative number, got {tol}"
        )));
    }
    let sink = Sink::open(out)?;
    let cases = standard_cases(max_sites, max_block_sum);
    let comparisons = verify::run(&cases)?;
    let mut failed = 0;
    let mut worst: f64 = 0.0;
    let rows: Vec<ResultRow> = comparisons
        .iter()
        .map(|c| {
            if !c.agrees(tol) {
                failed += 1;
            }
            worst = worst.max(c.negativity_gap()).max(c.spectrum_distance);
            let w = c.case.weights.as_ref();
            let spectrum_min = negativity_of(c.case.geometry, w).map(|r| r.spectrum.min());
            spectrum_min
                .map(|m| ResultRow::new(&c.case.geometry, w, c.negativity_edge, m).with_oracle(c.negativity_oracle))
        })
        .collect::<std::result::Result<_, _>>()?;
    eprintln!(
        "verify: {} configurations, {} disagree, largest gap {:e} (tol {:e})",
        rows.len(),
        failed,
        worst,
        tol
    );
    let config = format!("max_sites={max_sites} max_block_sum={max_block_sum} tol={tol:e}");
    let table = Table {
        command: "verify",
        config,
        closed_form: false,
        rows,
    };
    sink.write(&table.render(format)?)?;
    if failed > 0 {
        return Err(CliError::Mismatch {
            failed,
            total: comparisons.len(),
            tol,
        });
    }
    Ok(())
}
