//! Length ranges and the geometry points they span.

use std::fmt;
use std::str::FromStr;

use aklt_negativity::oracle::MAX_SPIN1_SITES;
use aklt_negativity::spectrum::MAX_DIM;
use aklt_negativity::{BlockGeometry, BoundaryWeights};
use clap::ValueEnum;

use crate::error::{CliError, Result};

/// Sorted, de-duplicated list of block lengths.
///
/// Accepts `N`, `A..B` (exclusive), `A..=B` and comma-separated
/// combinations of those, e.g. `1,3..5,8`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthRange(Vec<usize>);

impl LengthRange {
    pub fn single(n: usize) -> Self {
        LengthRange(vec![n])
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for LengthRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("'{t}' is not a non-negative integer"))
        };
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if let Some((a, b)) = part.split_once("..=") {
                out.extend(num(a)?..=num(b)?);
            } else if let Some((a, b)) = part.split_once("..") {
                out.extend(num(a)?..num(b)?);
            } else {
                out.push(num(part)?);
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(LengthRange(out))
    }
}

impl fmt::Display for LengthRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Spin-1/2 ends, partition C | A | D | B | E.
    Half,
    /// Spin-1 ends tied by a boundary state, partition A | C | B.
    Spin1,
    /// Ring, partition 1 | A | 2 | B.
    Pbc,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Half => "half",
            Mode::Spin1 => "spin1",
            Mode::Pbc => "pbc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Everything needed to enumerate geometry points.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub la: LengthRange,
    pub lb: LengthRange,
    pub gap: Option<LengthRange>,
    pub lc: Option<LengthRange>,
    pub le: Option<LengthRange>,
    pub l1: Option<LengthRange>,
    pub l2: Option<LengthRange>,
    pub weights: Vec<String>,
    pub oracle: bool,
    pub tol: f64,
}

/// One point to evaluate.
#[derive(Debug, Clone, Copy)]
pub struct Point {
    pub geometry: BlockGeometry,
    pub weights: Option<BoundaryWeights>,
}

fn misuse(flag: &str, mode: Mode) -> CliError {
    CliError::Usage(format!("--{flag} does not apply to --mode {}", mode.name()))
}

impl RunConfig {
    fn or_default(r: &Option<LengthRange>, n: usize) -> LengthRange {
        r.clone().unwrap_or_else(|| LengthRange::single(n))
    }

    /// Rejects flags that do not belong to the mode and bad tolerances.
    pub fn check(&self) -> Result<()> {
        let m = self.mode;
        match m {
            Mode::Half => {
                for (flag, v) in [("l1", &self.l1), ("l2", &self.l2)] {
                    if v.is_some() {
                        return Err(misuse(flag, m));
                    }
                }
            }
            Mode::Spin1 => {
                for (flag, v) in [("lc", &self.lc), ("le", &self.le), ("l1", &self.l1), ("l2", &self.l2)] {
                    if v.is_some() {
                        return Err(misuse(flag, m));
                    }
                }
            }
            Mode::Pbc => {
                for (flag, v) in [("lc", &self.lc), ("le", &self.le), ("gap", &self.gap)] {
                    if v.is_some() {
                        return Err(misuse(flag, m));
                    }
                }
            }
        }
        if m != Mode::Spin1 && !self.weights.is_empty() {
            return Err(misuse("weights", m));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(CliError::Usage(format!(
                "tolerance must be a non-negative number, got {}",
                self.tol
            )));
        }
        Ok(())
    }

    fn parsed_weights(&self) -> Result<Vec<BoundaryWeights>> {
        if self.weights.is_empty() {
            return Ok(vec![BoundaryWeights::basis(0)?]);
        }
        self.weights
            .iter()
            .map(|w| w.parse::<BoundaryWeights>().map_err(CliError::from))
            .collect()
    }

    /// Points in lexicographic order over (lc | l1, la, gap | l2, lb, le, weights).
    pub fn points(&self) -> Result<Vec<Point>> {
        self.check()?;
        let (outer_left, inner, outer_right) = match self.mode {
            Mode::Half => (
                Self::or_default(&self.lc, 1),
                Self::or_default(&self.gap, 0),
                Self::or_default(&self.le, 1),
            ),
            Mode::Spin1 => (
                LengthRange::single(0),
                Self::or_default(&self.gap, 0),
                LengthRange::single(0),
            ),
            Mode::Pbc => (
                Self::or_default(&self.l1, 0),
                Self::or_default(&self.l2, 0),
                LengthRange::single(0),
            ),
        };
        let weights: Vec<Option<BoundaryWeights>> = match self.mode {
            Mode::Spin1 => self.parsed_weights()?.into_iter().map(Some).collect(),
            _ => vec![None],
        };
        let mut points = Vec::new();
        for &x in outer_left.values() {
            for &la in self.la.values() {
                for &y in inner.values() {
                    for &lb in self.lb.values() {
                        for &le in outer_right.values() {
                            let geometry = match self.mode {
                                Mode::Half => BlockGeometry::HalfBoundary {
                                    lc: x,
                                    la,
                                    gap: y,
                                    lb,
                                    le,
                                },
                                Mode::Spin1 => BlockGeometry::Spin1Boundary { la, gap: y, lb },
                                Mode::Pbc => BlockGeometry::Periodic { l1: x, la, l2: y, lb },
                            };
                            geometry.validate()?;
                            for w in &weights {
                                points.push(Point { geometry, weights: *w });
                            }
                        }
                    }
                }
            }
        }
        if self.oracle {
            for p in &points {
                check_oracle_size(&p.geometry)?;
            }
        }
        Ok(points)
    }

    /// Deterministic one-line echo for output metadata.
    pub fn echo(&self) -> String {
        let opt = |name: &str, r: &Option<LengthRange>| r.as_ref().map(|r| format!(" {name}={r}")).unwrap_or_default();
        let weights = if self.weights.is_empty() {
            String::new()
        } else {
            format!(" weights={}", self.weights.join(";"))
        };
        format!(
            "mode={} la={} lb={}{}{}{}{}{}{} oracle={} tol={:e}",
            self.mode.name(),
            self.la,
            self.lb,
            opt("gap", &self.gap),
            opt("lc", &self.lc),
            opt("le", &self.le),
            opt("l1", &self.l1),
            opt("l2", &self.l2),
            weights,
            self.oracle,
            self.tol
        )
    }
}

/// The oracle needs the whole state (at most `MAX_SPIN1_SITES` spin-1 sites)
/// and a dense eigensolve of the two-block operator.
pub fn check_oracle_size(g: &BlockGeometry) -> Result<()> {
    let sites = g.spin1_sites();
    if sites > MAX_SPIN1_SITES {
        return Err(aklt_negativity::Error::DimensionCap {
            dim: sites,
            cap: MAX_SPIN1_SITES,
        }
        .into());
    }
    let (la, lb) = g.block_lengths();
    let dim = 3usize.checked_pow((la + lb) as u32).unwrap_or(usize::MAX);
    if dim > MAX_DIM {
        return Err(aklt_negativity::Error::DimensionCap { dim, cap: MAX_DIM }.into());
    }
    Ok(())
}
