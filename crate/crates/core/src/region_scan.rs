//! Sweeps of the `(r1, r2)` plane for a fixed polygon size.
//!
//! Grids are parameterized by `r1` and the gap `r2 − r1`, because the
//! region with positive axis masses is a thin band in the gap direction.
//! Cells are independent, so they are evaluated in parallel into
//! pre-assigned slots; the result never depends on the thread count.

use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::central_config::{verify, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::scalar::Real;
use crate::stacked::{coefficients, feasible, solve_masses, Chain};

pub const CSV_HEADER: [&str; 9] = [
    "n", "r1", "r2", "M1", "M2", "det", "feasible", "chain", "residual",
];

/// Upper bound on the number of points a single range may expand to.
const MAX_RANGE_POINTS: f64 = 1e7;

/// Inclusive-ish lattice `lo, lo + step, …`: every point below `hi`, plus a
/// final point when it lands within `step / 2` of `hi`. Points are computed
/// as `lo + i·step`, never by accumulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeSpec {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl RangeSpec {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        let spec = Self { lo, hi, step };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let Self { lo, hi, step } = *self;
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
            return Err(Error::invalid("range bounds and step must be finite"));
        }
        if !(lo > 0.0) {
            return Err(Error::invalid(format!(
                "range lower bound must be positive, got {lo}"
            )));
        }
        if lo > hi {
            return Err(Error::invalid(format!("empty range: lo {lo} > hi {hi}")));
        }
        if !(step > 0.0) {
            return Err(Error::invalid(format!(
                "range step must be positive, got {step}"
            )));
        }
        if (hi - lo) / step > MAX_RANGE_POINTS {
            return Err(Error::invalid(format!(
                "range {lo}:{hi}:{step} expands to more than {MAX_RANGE_POINTS} points"
            )));
        }
        Ok(())
    }

    pub fn count(&self) -> usize {
        ((self.hi - self.lo) / self.step + 0.5).floor() as usize + 1
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count())
            .map(|i| self.lo + i as f64 * self.step)
            .collect()
    }
}

impl FromStr for RangeSpec {
    type Err = Error;

    /// Parses `lo:hi:step`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::format(
                "range",
                format!("expected lo:hi:step, got {s:?}"),
            ));
        }
        let mut nums = [0.0; 3];
        for (slot, (part, name)) in nums.iter_mut().zip(parts.iter().zip(["lo", "hi", "step"])) {
            *slot = part.trim().parse().map_err(|_| {
                Error::format(format!("range {name}"), format!("not a number: {part:?}"))
            })?;
        }
        RangeSpec::new(nums[0], nums[1], nums[2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityCell<T> {
    pub r1: T,
    pub r2: T,
    /// NaN when the coefficient system is near-singular.
    pub m1: T,
    pub m2: T,
    pub determinant: T,
    pub feasible: bool,
    pub chain: Chain,
    /// Relative residual of the assembled configuration, when verified.
    pub residual_check: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanGrid<T> {
    pub n: usize,
    pub r1_values: Vec<f64>,
    pub gap_values: Vec<f64>,
    /// Row-major: all gaps of the first `r1`, then the second, …
    pub cells: Vec<FeasibilityCell<T>>,
}

impl<T: Real> ScanGrid<T> {
    pub fn cell(&self, r1_index: usize, gap_index: usize) -> &FeasibilityCell<T> {
        &self.cells[r1_index * self.gap_values.len() + gap_index]
    }

    pub fn feasible_cells(&self) -> impl Iterator<Item = &FeasibilityCell<T>> {
        self.cells.iter().filter(|c| c.feasible)
    }

    pub fn feasible_count(&self) -> usize {
        self.feasible_cells().count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScanOptions {
    /// Assemble and verify every feasible cell.
    pub verify: bool,
    /// Worker count; `None` uses every available core.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandEstimate {
    /// Smallest scanned `r1` with at least one feasible gap; NaN when empty.
    pub delta_hat: f64,
    /// `(r1, largest feasible gap)` for every `r1` that has one.
    pub per_r1_max_gap: Vec<(f64, f64)>,
    pub feasible_cells: usize,
    pub empty: bool,
}

fn evaluate_cell<T: Real>(
    n: usize,
    r1: f64,
    gap: f64,
    verify_cell: bool,
) -> Result<FeasibilityCell<T>> {
    let r1 = T::lit(r1);
    let r2 = r1 + T::lit(gap);
    let coeffs = coefficients(n, r1, r2)?;
    let chain = feasible(&coeffs).chain;
    let cell = match solve_masses(&coeffs) {
        Ok(s) => {
            let residual_check = if verify_cell && s.feasible {
                let config = s.configuration(&coeffs)?;
                Some(
                    verify(&config, T::lit(DEFAULT_TOLERANCE))?
                        .report
                        .relative_max,
                )
            } else {
                None
            };
            FeasibilityCell {
                r1,
                r2,
                m1: s.m1,
                m2: s.m2,
                determinant: s.determinant,
                feasible: s.feasible,
                chain,
                residual_check,
            }
        }
        Err(Error::SingularSystem { .. }) => FeasibilityCell {
            r1,
            r2,
            m1: T::nan(),
            m2: T::nan(),
            determinant: coeffs.determinant(),
            feasible: false,
            chain,
            residual_check: None,
        },
        Err(e) => return Err(e),
    };
    Ok(cell)
}

pub fn scan<T: Real>(
    n: usize,
    r1_range: RangeSpec,
    gap_range: RangeSpec,
    options: ScanOptions,
) -> Result<ScanGrid<T>> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "polygon count must be >= 2, got {n}"
        )));
    }
    r1_range.validate()?;
    gap_range.validate()?;
    let r1_values = r1_range.values();
    let gap_values = gap_range.values();
    let width = gap_values.len();
    let total = r1_values.len() * width;

    let run = || -> Result<Vec<FeasibilityCell<T>>> {
        (0..total)
            .into_par_iter()
            .map(|idx| {
                evaluate_cell(
                    n,
                    r1_values[idx / width],
                    gap_values[idx % width],
                    options.verify,
                )
            })
            .collect()
    };
    let cells = match options.threads {
        Some(0) => return Err(Error::invalid("thread count must be positive")),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::invalid(format!("cannot build thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    Ok(ScanGrid {
        n,
        r1_values,
        gap_values,
        cells,
    })
}

pub fn band_summary<T: Real>(grid: &ScanGrid<T>) -> BandEstimate {
    let width = grid.gap_values.len();
    let mut per_r1_max_gap = Vec::new();
    for (i, &r1) in grid.r1_values.iter().enumerate() {
        let best = (0..width)
            .filter(|&k| grid.cells[i * width + k].feasible)
            .map(|k| grid.gap_values[k])
            .fold(None, |acc: Option<f64>, g| {
                Some(acc.map_or(g, |a| a.max(g)))
            });
        if let Some(g) = best {
            per_r1_max_gap.push((r1, g));
        }
    }
    let delta_hat = per_r1_max_gap
        .iter()
        .map(|&(r1, _)| r1)
        .fold(f64::NAN, f64::min);
    BandEstimate {
        delta_hat,
        empty: per_r1_max_gap.is_empty(),
        feasible_cells: grid.feasible_count(),
        per_r1_max_gap,
    }
}

/// CSV text of the grid: the fixed header, then one row per cell in grid
/// order, LF line endings.
pub fn csv_string<T: Real>(grid: &ScanGrid<T>) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::format("csv", e.to_string());
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    let n = grid.n.to_string();
    for c in &grid.cells {
        w.write_record([
            n.as_str(),
            &fmt_f64(c.r1.as_f64()),
            &fmt_f64(c.r2.as_f64()),
            &fmt_f64(c.m1.as_f64()),
            &fmt_f64(c.m2.as_f64()),
            &fmt_f64(c.determinant.as_f64()),
            if c.feasible { "true" } else { "false" },
            c.chain.as_str(),
            &c.residual_check
                .map(|r| fmt_f64(r.as_f64()))
                .unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::format("csv", e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::format("csv", e.to_string()))
}

pub fn export_csv<T: Real>(grid: &ScanGrid<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, csv_string(grid)?).map_err(|e| Error::io(path, e))
}

/// One parsed CSV row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub n: usize,
    pub cell: FeasibilityCell<f64>,
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::format("csv header", e.to_string()))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::format(
            "csv header",
            format!("expected {}", CSV_HEADER.join(",")),
        ));
    }
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record =
            record.map_err(|e| Error::format(format!("csv row {}", line + 1), e.to_string()))?;
        let field = |i: usize| -> Result<f64> {
            record[i].parse().map_err(|_| {
                Error::format(
                    format!("csv row {} column {}", line + 1, CSV_HEADER[i]),
                    format!("not a number: {:?}", &record[i]),
                )
            })
        };
        let flag = |i: usize| -> Result<bool> {
            match &record[i] {
                "true" => Ok(true),
                "false" => Ok(false),
                other => Err(Error::format(
                    format!("csv row {} column {}", line + 1, CSV_HEADER[i]),
                    format!("expected true/false, got {other:?}"),
                )),
            }
        };
        let chain = match &record[7] {
            "indeterminate" => Chain::Indeterminate,
            _ => {
                if flag(7)? {
                    Chain::Holds
                } else {
                    Chain::Violated
                }
            }
        };
        let n = record[0].parse().map_err(|_| {
            Error::format(format!("csv row {} column n", line + 1), "not an integer")
        })?;
        rows.push(CsvRow {
            n,
            cell: FeasibilityCell {
                r1: field(1)?,
                r2: field(2)?,
                m1: field(3)?,
                m2: field(4)?,
                determinant: field(5)?,
                feasible: flag(6)?,
                chain,
                residual_check: if record[8].is_empty() {
                    None
                } else {
                    Some(field(8)?)
                },
            },
        });
    }
    Ok(rows)
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<CsvRow>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text)
}
