//! Snapshot CSV: one row per cell, per-state scalars repeated on every row.
//!
//! Columns: `t, step, dx, cell, n, J, S, q`, the diagnostics
//! `f_mass, g_mass, f_inf, g_inf, min_f, min_g, l2_energy, equilibrium_distance`,
//! then optionally `f_0..f_{Nv-1}, g_0..g_{Nv-1}`. Floats are written in
//! `{:.16e}` so a write/read round trip is bitwise. A header with no rows
//! reads back as an empty snapshot at `t = 0`.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::state::{compute_moments, SimState};
use crate::verification::Diagnostics;

pub const BASE_COLUMNS: [&str; 16] = [
    "t",
    "step",
    "dx",
    "cell",
    "n",
    "J",
    "S",
    "q",
    "f_mass",
    "g_mass",
    "f_inf",
    "g_inf",
    "min_f",
    "min_g",
    "l2_energy",
    "equilibrium_distance",
];

/// Per-node values of `f` and `g`, row-major `n_x * n_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeFields {
    pub n_v: usize,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub diagnostics: Diagnostics,
    pub dx: f64,
    pub n: Vec<f64>,
    pub j: Vec<f64>,
    pub s: Vec<f64>,
    pub q: Vec<f64>,
    pub fields: Option<NodeFields>,
}

impl Snapshot {
    pub fn from_state(state: &SimState, full_fields: bool) -> Result<Self> {
        let m = compute_moments(state)?;
        Ok(Snapshot {
            diagnostics: Diagnostics::of(state),
            dx: state.dx(),
            n: m.n,
            j: m.j,
            s: m.s,
            q: m.q,
            fields: full_fields.then(|| NodeFields {
                n_v: state.grid().len(),
                f: state.f.values().to_vec(),
                g: state.g.values().to_vec(),
            }),
        })
    }

    pub fn n_x(&self) -> usize {
        self.n.len()
    }

    pub fn t(&self) -> f64 {
        self.diagnostics.t
    }

    pub fn step(&self) -> u64 {
        self.diagnostics.step
    }
}

pub fn write_snapshot<W: Write>(snap: &Snapshot, mut out: W) -> Result<()> {
    let csv = |e: std::io::Error| Error::Csv(format!("write failed: {e}"));
    let mut header: Vec<String> = BASE_COLUMNS.iter().map(|c| c.to_string()).collect();
    if let Some(fields) = &snap.fields {
        header.extend((0..fields.n_v).map(|k| format!("f_{k}")));
        header.extend((0..fields.n_v).map(|k| format!("g_{k}")));
    }
    writeln!(out, "{}", header.join(",")).map_err(csv)?;
    let d = &snap.diagnostics;
    let scalars = [
        d.f_mass,
        d.g_mass,
        d.f_inf,
        d.g_inf,
        d.min_f,
        d.min_g,
        d.l2_energy,
        d.equilibrium_distance,
    ];
    let mut line = String::new();
    for i in 0..snap.n_x() {
        line.clear();
        line.push_str(&format!("{:.16e},{},{:.16e},{}", d.t, d.step, snap.dx, i));
        for v in [snap.n[i], snap.j[i], snap.s[i], snap.q[i]].iter().chain(&scalars) {
            line.push_str(&format!(",{v:.16e}"));
        }
        if let Some(fields) = &snap.fields {
            let row = i * fields.n_v..(i + 1) * fields.n_v;
            for v in fields.f[row.clone()].iter().chain(&fields.g[row]) {
                line.push_str(&format!(",{v:.16e}"));
            }
        }
        writeln!(out, "{line}").map_err(csv)?;
    }
    out.flush().map_err(csv)
}

pub fn read_snapshot<R: BufRead>(input: R) -> Result<Snapshot> {
    let mut lines = input.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => line.map_err(|e| Error::Csv(format!("read failed: {e}")))?,
        None => return Err(Error::Csv("empty input: missing header".into())),
    };
    let columns: Vec<&str> = header.trim_end().split(',').collect();
    let n_v = parse_header(&columns)?;

    let mut snap = Snapshot {
        diagnostics: Diagnostics {
            t: 0.0,
            step: 0,
            f_mass: 0.0,
            g_mass: 0.0,
            f_inf: 0.0,
            g_inf: 0.0,
            min_f: 0.0,
            min_g: 0.0,
            l2_energy: 0.0,
            equilibrium_distance: 0.0,
        },
        dx: 0.0,
        n: Vec::new(),
        j: Vec::new(),
        s: Vec::new(),
        q: Vec::new(),
        fields: n_v.map(|n_v| NodeFields {
            n_v,
            f: Vec::new(),
            g: Vec::new(),
        }),
    };
    let mut first_scalars: Option<Vec<String>> = None;

    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Csv(format!("read failed: {e}")))?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != columns.len() {
            return Err(Error::Csv(format!(
                "line {line_no}: expected {} fields, found {}",
                columns.len(),
                cells.len()
            )));
        }
        let num = |k: usize| -> Result<f64> {
            cells[k].trim().parse::<f64>().map_err(|_| {
                Error::Csv(format!(
                    "line {line_no}: column `{}` is not a number: `{}`",
                    columns[k], cells[k]
                ))
            })
        };
        let int = |k: usize| -> Result<u64> {
            cells[k].trim().parse::<u64>().map_err(|_| {
                Error::Csv(format!(
                    "line {line_no}: column `{}` is not an integer: `{}`",
                    columns[k], cells[k]
                ))
            })
        };
        let cell = int(3)?;
        if cell as usize != snap.n.len() {
            return Err(Error::Csv(format!(
                "line {line_no}: expected cell {}, found {cell}",
                snap.n.len()
            )));
        }
        // per-state scalars: columns 0..3 and 8..16 must agree across rows
        let scalars: Vec<String> = (0..3)
            .chain(8..16)
            .map(|k| cells[k].trim().to_string())
            .collect();
        match &first_scalars {
            None => {
                let d = &mut snap.diagnostics;
                d.t = num(0)?;
                d.step = int(1)?;
                snap.dx = num(2)?;
                d.f_mass = num(8)?;
                d.g_mass = num(9)?;
                d.f_inf = num(10)?;
                d.g_inf = num(11)?;
                d.min_f = num(12)?;
                d.min_g = num(13)?;
                d.l2_energy = num(14)?;
                d.equilibrium_distance = num(15)?;
                first_scalars = Some(scalars);
            }
            Some(first) if *first != scalars => {
                return Err(Error::Csv(format!(
                    "line {line_no}: per-state columns differ from the first row"
                )))
            }
            Some(_) => {}
        }
        snap.n.push(num(4)?);
        snap.j.push(num(5)?);
        snap.s.push(num(6)?);
        snap.q.push(num(7)?);
        if let Some(fields) = &mut snap.fields {
            let base = BASE_COLUMNS.len();
            for k in 0..fields.n_v {
                fields.f.push(num(base + k)?);
            }
            for k in 0..fields.n_v {
                fields.g.push(num(base + fields.n_v + k)?);
            }
        }
    }
    Ok(snap)
}

/// Validates the header; returns the node count of the optional field columns.
fn parse_header(columns: &[&str]) -> Result<Option<usize>> {
    if columns.len() < BASE_COLUMNS.len() {
        return Err(Error::Csv(format!(
            "malformed header: expected at least {} columns, found {}",
            BASE_COLUMNS.len(),
            columns.len()
        )));
    }
    for (k, (got, want)) in columns.iter().zip(BASE_COLUMNS).enumerate() {
        if got.trim() != want {
            return Err(Error::Csv(format!(
                "malformed header: column {k} is `{got}`, expected `{want}`"
            )));
        }
    }
    let extra = &columns[BASE_COLUMNS.len()..];
    if extra.is_empty() {
        return Ok(None);
    }
    if !extra.len().is_multiple_of(2) {
        return Err(Error::Csv(
            "malformed header: f and g node columns differ in count".into(),
        ));
    }
    let n_v = extra.len() / 2;
    for (k, got) in extra.iter().enumerate() {
        let want = if k < n_v {
            format!("f_{k}")
        } else {
            format!("g_{}", k - n_v)
        };
        if got.trim() != want {
            return Err(Error::Csv(format!(
                "malformed header: found `{got}`, expected `{want}`"
            )));
        }
    }
    Ok(Some(n_v))
}

pub fn snapshot_path(dir: &Path, step: u64) -> PathBuf {
    dir.join(format!("snapshot_{step:08}.csv"))
}

pub fn save_snapshot(dir: &Path, snap: &Snapshot) -> Result<PathBuf> {
    let path = snapshot_path(dir, snap.step());
    let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
    write_snapshot(snap, std::io::BufWriter::new(file))?;
    Ok(path)
}

pub fn load_snapshot(path: &Path) -> Result<Snapshot> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_snapshot(BufReader::new(file))
        .map_err(|e| Error::Csv(format!("{}: {e}", path.display())))
}

/// Every `snapshot_*.csv` in `dir`, in step order.
pub fn load_trajectory(dir: &Path) -> Result<Vec<Snapshot>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if name.starts_with("snapshot_") && name.ends_with(".csv") {
            paths.push(path);
        }
    }
    paths.sort();
    let mut snaps = paths
        .iter()
        .map(|p| load_snapshot(p))
        .collect::<Result<Vec<_>>>()?;
    snaps.sort_by_key(|s| s.step());
    Ok(snaps)
}
