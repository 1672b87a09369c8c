//! Plain-text file formats.
//!
//! * curves: one curve per CSV row, the grid size inferred from the column count
//! * responses: one value per line
//! * kernel: `P x P` CSV matrix
//! * eigen output: `j,eigenvalue` table and one CSV row per eigenfunction
//! * fit summary: `key=value` lines plus a `j,theta,b` table
//! * Monte Carlo tables: CSV with header `threshold,ase,mc_se,mise`
//!
//! Numbers are written with Rust's shortest round-trip formatting, so
//! reading a file back reproduces the values exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{FlrError, Result};
use crate::fpca::{CovOperator, EigenSystem};
use crate::funcgrid::{inner_product, Grid, GridFunction};
use crate::regression::SlopeFit;
use crate::simlab::{LowerBoundReport, McRow, McTable, RateReport};

fn parse_err(line: u64, message: impl Into<String>) -> FlrError {
    FlrError::Parse {
        line,
        message: message.into(),
    }
}

/// Numeric CSV rows with their 1-based line numbers. Blank lines are skipped.
pub fn read_numeric_rows<R: Read>(reader: R) -> Result<Vec<(u64, Vec<f64>)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        let values = rec
            .iter()
            .enumerate()
            .map(|(col, field)| {
                field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| {
                        parse_err(line, format!("column {}: '{field}' is not a finite number", col + 1))
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push((line, values));
    }
    Ok(rows)
}

/// Curves stored one per row; all rows must have the same length, at least 2.
pub fn read_curves<R: Read>(reader: R) -> Result<Vec<GridFunction>> {
    let rows = read_numeric_rows(reader)?;
    let Some((_, first)) = rows.first() else {
        return Err(parse_err(0, "no curves found"));
    };
    let p = first.len();
    if p < 2 {
        return Err(parse_err(rows[0].0, "a curve needs at least 2 values"));
    }
    let grid = Grid::uniform(p)?;
    rows.into_iter()
        .map(|(line, values)| {
            if values.len() != p {
                return Err(parse_err(
                    line,
                    format!("expected {p} values, found {}", values.len()),
                ));
            }
            GridFunction::new(&grid, values)
        })
        .collect()
}

pub fn read_curves_file(path: &Path) -> Result<Vec<GridFunction>> {
    read_curves(fs::File::open(path)?)
}

fn push_row(out: &mut String, values: &[f64]) {
    for (k, v) in values.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        write!(out, "{v}").unwrap();
    }
    out.push('\n');
}

pub fn curves_to_csv(curves: &[GridFunction]) -> String {
    let mut out = String::new();
    for c in curves {
        push_row(&mut out, c.values());
    }
    out
}

/// Responses, one per line.
pub fn read_responses<R: Read>(reader: R) -> Result<Vec<f64>> {
    read_numeric_rows(reader)?
        .into_iter()
        .map(|(line, v)| match v.as_slice() {
            [y] => Ok(*y),
            _ => Err(parse_err(line, format!("expected 1 value, found {}", v.len()))),
        })
        .collect()
}

pub fn read_responses_file(path: &Path) -> Result<Vec<f64>> {
    read_responses(fs::File::open(path)?)
}

pub fn responses_to_csv(y: &[f64]) -> String {
    let mut out = String::new();
    for v in y {
        writeln!(out, "{v}").unwrap();
    }
    out
}

pub fn kernel_to_csv(op: &CovOperator) -> String {
    let k = op.kernel();
    let mut out = String::new();
    for r in 0..k.nrows() {
        let row: Vec<f64> = k.row(r).iter().copied().collect();
        push_row(&mut out, &row);
    }
    out
}

pub fn read_kernel<R: Read>(reader: R) -> Result<CovOperator> {
    let rows = read_numeric_rows(reader)?;
    let p = rows.len();
    if p < 2 {
        return Err(parse_err(0, "kernel needs at least 2 rows"));
    }
    for (line, r) in &rows {
        if r.len() != p {
            return Err(parse_err(*line, format!("expected {p} columns, found {}", r.len())));
        }
    }
    let m = DMatrix::from_fn(p, p, |r, c| rows[r].1[c]);
    CovOperator::new(&Grid::uniform(p)?, m)
}

/// `j,eigenvalue` table with a header line.
pub fn eigenvalues_to_csv(sys: &EigenSystem) -> String {
    let mut out = String::from("j,eigenvalue\n");
    for (j, v) in sys.eigenvalues().iter().enumerate() {
        writeln!(out, "{},{v}", j + 1).unwrap();
    }
    out
}

pub fn eigenfunctions_to_csv(sys: &EigenSystem) -> String {
    curves_to_csv(sys.eigenfunctions())
}

/// Reads the eigenvalue table and eigenfunction rows written above.
pub fn read_eigensystem<R1: Read, R2: Read>(values: R1, functions: R2) -> Result<EigenSystem> {
    let rows = read_header_table(values, &["j", "eigenvalue"])?;
    let eigenvalues: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let funcs = read_curves(functions)?;
    let grid = funcs[0].grid().clone();
    EigenSystem::new(&grid, eigenvalues, funcs)
}

fn read_header_table<R: Read>(reader: R, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut text = String::new();
    let mut reader = reader;
    reader.read_to_string(&mut text)?;
    let mut lines = text.lines();
    let first = lines.next().unwrap_or_default();
    let got: Vec<&str> = first.split(',').map(str::trim).collect();
    if got != header {
        return Err(parse_err(1, format!("expected header '{}'", header.join(","))));
    }
    let body: String = lines.collect::<Vec<_>>().join("\n");
    read_numeric_rows(body.as_bytes())?
        .into_iter()
        .map(|(line, v)| {
            if v.len() == header.len() {
                Ok(v)
            } else {
                Err(parse_err(
                    line + 1,
                    format!("expected {} values, found {}", header.len(), v.len()),
                ))
            }
        })
        .collect()
}

/// `key=value` lines; `#` starts a comment.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(k as u64 + 1, format!("expected key=value, got '{line}'")))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn get_parsed<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<T> {
    map.get(key)
        .ok_or_else(|| parse_err(0, format!("missing key '{key}'")))?
        .parse()
        .map_err(|_| parse_err(0, format!("invalid value for '{key}'")))
}

/// Scalar results of a slope fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitSummary {
    pub n: usize,
    pub grid_points: usize,
    pub cutoff: usize,
    pub intercept: f64,
    pub slope_norm: f64,
    pub truncated: bool,
    pub y_mean: f64,
}

impl FitSummary {
    pub fn of(fit: &SlopeFit) -> Self {
        FitSummary {
            n: fit.sample_size(),
            grid_points: fit.grid().point_count(),
            cutoff: fit.cutoff(),
            intercept: fit.intercept(),
            slope_norm: fit.slope_norm(),
            truncated: fit.truncated(),
            y_mean: fit.y_mean(),
        }
    }

    pub fn to_key_values(&self) -> String {
        format!(
            "n={}\ngrid_points={}\ncutoff={}\nintercept={}\nslope_norm={}\ntruncated={}\ny_mean={}\n",
            self.n, self.grid_points, self.cutoff, self.intercept, self.slope_norm, self.truncated, self.y_mean
        )
    }

    pub fn from_key_values(text: &str) -> Result<Self> {
        let map = parse_key_values(text)?;
        Ok(FitSummary {
            n: get_parsed(&map, "n")?,
            grid_points: get_parsed(&map, "grid_points")?,
            cutoff: get_parsed(&map, "cutoff")?,
            intercept: get_parsed(&map, "intercept")?,
            slope_norm: get_parsed(&map, "slope_norm")?,
            truncated: get_parsed(&map, "truncated")?,
            y_mean: get_parsed(&map, "y_mean")?,
        })
    }
}

/// `j,theta,b` rows for the retained components.
pub fn coefficients_to_csv(fit: &SlopeFit) -> String {
    let mut out = String::from("j,theta,b\n");
    for (j, (b, theta)) in fit
        .b_coeffs()
        .iter()
        .zip(fit.eigensystem().eigenvalues())
        .enumerate()
    {
        writeln!(out, "{},{theta},{b}", j + 1).unwrap();
    }
    out
}

/// `(j, theta_j, b_j)` triples.
pub fn read_coefficients<R: Read>(reader: R) -> Result<Vec<(usize, f64, f64)>> {
    Ok(read_header_table(reader, &["j", "theta", "b"])?
        .into_iter()
        .map(|r| (r[0] as usize, r[1], r[2]))
        .collect())
}

pub const SUMMARY_FILE: &str = "fit_summary.txt";
pub const COEFFICIENTS_FILE: &str = "fit_coefficients.csv";
pub const SLOPE_FILE: &str = "fit_slope.csv";
pub const MEAN_CURVE_FILE: &str = "fit_mean_curve.csv";

/// Writes the summary, coefficient table, the (truncated) slope function and
/// the mean curve into `dir`.
pub fn write_fit(dir: &Path, fit: &SlopeFit) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(SUMMARY_FILE), FitSummary::of(fit).to_key_values())?;
    fs::write(dir.join(COEFFICIENTS_FILE), coefficients_to_csv(fit))?;
    fs::write(dir.join(SLOPE_FILE), curves_to_csv(std::slice::from_ref(fit.b_tilde())))?;
    fs::write(dir.join(MEAN_CURVE_FILE), curves_to_csv(std::slice::from_ref(fit.x_mean())))?;
    Ok(())
}

/// A fit reloaded from disk: enough to predict by quadrature.
#[derive(Debug, Clone)]
pub struct StoredFit {
    pub summary: FitSummary,
    pub slope: GridFunction,
}

impl StoredFit {
    pub fn load(dir: &Path) -> Result<Self> {
        let summary = FitSummary::from_key_values(&fs::read_to_string(dir.join(SUMMARY_FILE))?)?;
        let mut slope = read_curves_file(&dir.join(SLOPE_FILE))?;
        if slope.len() != 1 {
            return Err(parse_err(0, "slope file must hold exactly one curve"));
        }
        let slope = slope.remove(0);
        if slope.grid().point_count() != summary.grid_points {
            return Err(FlrError::GridMismatch {
                expected: summary.grid_points,
                found: slope.grid().point_count(),
            });
        }
        Ok(StoredFit { summary, slope })
    }

    /// `a_hat + int b_tilde x`.
    pub fn predict(&self, x: &GridFunction) -> Result<f64> {
        Ok(self.summary.intercept + inner_product(&self.slope, x)?)
    }
}

pub const MC_TABLE_HEADER: &str = "threshold,ase,mc_se,mise";

pub fn mc_table_to_csv(table: &McTable) -> String {
    let mut out = format!("{MC_TABLE_HEADER}\n");
    for r in &table.rows {
        push_row(&mut out, &[r.threshold, r.ase, r.mc_se, r.mise]);
    }
    out
}

pub fn read_mc_table<R: Read>(reader: R) -> Result<McTable> {
    let header: Vec<&str> = MC_TABLE_HEADER.split(',').collect();
    let rows = read_header_table(reader, &header)?
        .into_iter()
        .map(|r| McRow {
            threshold: r[0],
            ase: r[1],
            mc_se: r[2],
            mise: r[3],
        })
        .collect();
    Ok(McTable { rows })
}

pub const RATE_TABLE_HEADER: &str = "n,mean_cutoff,mse,mc_se,tau";

pub fn rate_table_to_csv(report: &RateReport) -> String {
    let mut out = format!("{RATE_TABLE_HEADER}\n");
    for r in &report.rows {
        push_row(&mut out, &[r.n as f64, r.mean_cutoff, r.mse, r.mc_se, r.tau]);
    }
    out
}

pub fn rate_summary(report: &RateReport) -> String {
    let log_factor = if report.regime == crate::regression::RateRegime::Boundary {
        "tau = log(n)/n; theoretical exponent is the log-log slope over the n list\n"
    } else {
        ""
    };
    format!(
        "regime={}\nfitted_exponent={}\ntheoretical_exponent={}\n{log_factor}",
        report.regime.label(),
        report.fitted_exponent,
        report.theoretical_exponent
    )
}

impl LowerBoundReport {
    pub fn to_key_values(&self) -> String {
        format!(
            "n={}\nnu={}\nt_b0={}\nt_b1={}\nv_n={}\nn_v_n={}\nchi_sq_mean={}\nscaling_check={}\n",
            self.n,
            self.nu,
            self.t_b0,
            self.t_b1,
            self.v_n,
            self.n_v_n,
            self.chi_sq_mean,
            self.scaling_check
        )
    }

    pub fn from_key_values(text: &str) -> Result<Self> {
        let map = parse_key_values(text)?;
        Ok(LowerBoundReport {
            n: get_parsed(&map, "n")?,
            nu: get_parsed(&map, "nu")?,
            t_b0: get_parsed(&map, "t_b0")?,
            t_b1: get_parsed(&map, "t_b1")?,
            v_n: get_parsed(&map, "v_n")?,
            n_v_n: get_parsed(&map, "n_v_n")?,
            chi_sq_mean: get_parsed(&map, "chi_sq_mean")?,
            scaling_check: get_parsed(&map, "scaling_check")?,
        })
    }
}
