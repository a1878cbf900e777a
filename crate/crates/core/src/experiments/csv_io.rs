use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::corpus::FunctionId;
use super::sweep::{ResultRow, RowStatus};
use crate::error::{FrameError, Result};
use crate::frame::{assemble, factorize, FrameConfig};
use crate::orthopoly::JacobiParams;
use crate::par::Execution;

pub const CSV_HEADER: [&str; 14] = [
    "function",
    "alpha",
    "beta",
    "gamma",
    "epsilon",
    "eta",
    "n",
    "m",
    "uniform_error",
    "sigma_min",
    "kept_count",
    "condition_estimate",
    "wall_time_ms",
    "status",
];

pub const PROFILE_HEADER: [&str; 3] = ["n", "index", "sigma"];

/// 17 significant digits, enough to round-trip any f64.
fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn status_text(s: &RowStatus) -> String {
    match s {
        RowStatus::Ok => "ok".to_owned(),
        RowStatus::Failed(msg) => format!("failed: {msg}"),
    }
}

fn bad_record(line: u64, what: &str) -> FrameError {
    FrameError::Parameter(format!("CSV line {line}: {what}"))
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.function.name().to_owned(),
            real(r.alpha),
            real(r.beta),
            real(r.gamma),
            real(r.epsilon),
            real(r.eta),
            r.n.to_string(),
            r.m.to_string(),
            real(r.uniform_error),
            real(r.sigma_min),
            r.kept_count.to_string(),
            real(r.condition_estimate),
            real(r.wall_time_ms),
            status_text(&r.status),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| FrameError::Io { path: path.to_owned(), source })?;
    write_csv(rows, file).map_err(|source| FrameError::Csv { path: path.to_owned(), source })
}

pub fn parse_csv<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let csv_err = |e: csv::Error| FrameError::Parameter(format!("CSV: {e}"));
    let header = rd.headers().map_err(csv_err)?;
    if header.iter().ne(CSV_HEADER) {
        return Err(FrameError::Parameter(format!(
            "unexpected CSV header: {}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line());
        let f = |i: usize| -> Result<f64> { rec[i].parse().map_err(|_| bad_record(line, CSV_HEADER[i])) };
        let u = |i: usize| -> Result<usize> { rec[i].parse().map_err(|_| bad_record(line, CSV_HEADER[i])) };
        let status = match &rec[13] {
            "ok" => RowStatus::Ok,
            s => RowStatus::Failed(s.strip_prefix("failed: ").unwrap_or(s).to_owned()),
        };
        rows.push(ResultRow {
            function: rec[0].parse::<FunctionId>()?,
            alpha: f(1)?,
            beta: f(2)?,
            gamma: f(3)?,
            epsilon: f(4)?,
            eta: f(5)?,
            n: u(6)?,
            m: u(7)?,
            uniform_error: f(8)?,
            sigma_min: f(9)?,
            kept_count: u(10)?,
            condition_estimate: f(11)?,
            wall_time_ms: f(12)?,
            status,
        });
    }
    Ok(rows)
}

pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let file = File::open(path).map_err(|source| FrameError::Io { path: path.to_owned(), source })?;
    parse_csv(file)
}

/// Singular value `index` of the design matrix at degree `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRow {
    pub n: usize,
    pub index: usize,
    pub sigma: f64,
}

/// Full singular-value spectrum of the design matrix for each degree.
pub fn singular_profile(
    params: JacobiParams,
    gamma: f64,
    eta: f64,
    degrees: &[usize],
    exec: Execution,
) -> Result<Vec<ProfileRow>> {
    let per_degree = exec.map(degrees, |&n| -> Result<Vec<ProfileRow>> {
        let config = FrameConfig::with_oversampling(params, gamma, n, eta, 0.0)?;
        let fact = factorize(&assemble(&config)?, 0.0)?;
        Ok(fact.singular_values().iter().enumerate().map(|(index, &sigma)| ProfileRow { n, index, sigma }).collect())
    });
    let mut out = Vec::new();
    for rows in per_degree {
        out.extend(rows?);
    }
    Ok(out)
}

pub fn write_singular_profile<W: Write>(rows: &[ProfileRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PROFILE_HEADER)?;
    for r in rows {
        w.write_record([r.n.to_string(), r.index.to_string(), real(r.sigma)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_singular_profile(
    params: JacobiParams,
    gamma: f64,
    eta: f64,
    degrees: &[usize],
    path: &Path,
) -> Result<Vec<ProfileRow>> {
    let rows = singular_profile(params, gamma, eta, degrees, Execution::default())?;
    let file = File::create(path).map_err(|source| FrameError::Io { path: path.to_owned(), source })?;
    write_singular_profile(&rows, file).map_err(|source| FrameError::Csv { path: path.to_owned(), source })?;
    Ok(rows)
}
