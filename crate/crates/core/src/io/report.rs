//! Convergence report CSV, one row per eps.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::verification::ConvergenceReport;

pub const REPORT_COLUMNS: [&str; 15] = [
    "eps",
    "error",
    "error_n",
    "error_J",
    "error_S",
    "observed_order",
    "equilibrium_distance",
    "layer_excluded",
    "energy_exponent",
    "linf_f_ratio",
    "linf_g_ratio",
    "n_x",
    "n_v",
    "t_end",
    "dt",
];

/// One parsed report row. The first row has no observed order.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub eps: f64,
    pub error: f64,
    pub error_n: f64,
    pub error_j: f64,
    pub error_s: f64,
    pub observed_order: Option<f64>,
    pub equilibrium_distance: f64,
    pub layer_excluded: bool,
    pub energy_exponent: f64,
    pub linf_f_ratio: f64,
    pub linf_g_ratio: f64,
    pub n_x: usize,
    pub n_v: usize,
    pub t_end: f64,
    pub dt: f64,
}

pub fn write_report<W: Write>(report: &ConvergenceReport, mut out: W) -> Result<()> {
    let csv = |e: std::io::Error| Error::Csv(format!("write failed: {e}"));
    writeln!(out, "{}", REPORT_COLUMNS.join(",")).map_err(csv)?;
    let m = &report.meta;
    for (k, eps) in report.eps_values.iter().enumerate() {
        let order = match k {
            0 => String::new(),
            _ => format!("{:.16e}", report.observed_orders[k - 1]),
        };
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e},{},{:.16e},{:.16e},{:.16e},{},{},{:.16e},{:.16e}",
            eps,
            report.errors[k],
            report.errors_n[k],
            report.errors_j[k],
            report.errors_s[k],
            order,
            report.equilibrium_distance[k],
            report.layer_excluded[k],
            report.energy_exponent[k],
            report.linf[k].f_ratio,
            report.linf[k].g_ratio,
            m.n_x,
            m.n_v,
            m.t_end,
            m.dt,
        )
        .map_err(csv)?;
    }
    out.flush().map_err(csv)
}

pub fn read_report<R: BufRead>(input: R) -> Result<Vec<ReportRow>> {
    let mut lines = input.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => line.map_err(|e| Error::Csv(format!("read failed: {e}")))?,
        None => return Err(Error::Csv("empty input: missing header".into())),
    };
    if header.trim_end() != REPORT_COLUMNS.join(",") {
        return Err(Error::Csv(format!("malformed report header `{header}`")));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Csv(format!("read failed: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        let c: Vec<&str> = line.trim_end().split(',').collect();
        if c.len() != REPORT_COLUMNS.len() {
            return Err(Error::Csv(format!(
                "line {line_no}: expected {} fields, found {}",
                REPORT_COLUMNS.len(),
                c.len()
            )));
        }
        let bad = |k: usize| {
            Error::Csv(format!(
                "line {line_no}: bad value `{}` in column `{}`",
                c[k], REPORT_COLUMNS[k]
            ))
        };
        let f = |k: usize| c[k].parse::<f64>().map_err(|_| bad(k));
        let u = |k: usize| c[k].parse::<usize>().map_err(|_| bad(k));
        rows.push(ReportRow {
            eps: f(0)?,
            error: f(1)?,
            error_n: f(2)?,
            error_j: f(3)?,
            error_s: f(4)?,
            observed_order: if c[5].is_empty() { None } else { Some(f(5)?) },
            equilibrium_distance: f(6)?,
            layer_excluded: c[7].parse().map_err(|_| bad(7))?,
            energy_exponent: f(8)?,
            linf_f_ratio: f(9)?,
            linf_g_ratio: f(10)?,
            n_x: u(11)?,
            n_v: u(12)?,
            t_end: f(13)?,
            dt: f(14)?,
        });
    }
    Ok(rows)
}
