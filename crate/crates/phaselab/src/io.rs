//! File formats: signal JSON, grid CSV with 17-significant-digit numbers
//! (lossless double round-trip), and JSON exports for graphs,
//! reconstructions and certificates.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::ambiguity::AmbiguityGrid;
use crate::error::{Error, Result};
use crate::graph::{propagation_order, IslandGraph, PropStep};
use crate::reconstruct::ReconstructionResult;
use crate::signal::{ComplexGrid, ComplexSignal, MeasurementGrid};
use crate::stability::StabilityReport;
use crate::sweep::SweepRow;

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Shared signal JSON shape: {"L": int, "re": [...], "im": [...]}.
#[derive(Serialize, Deserialize)]
struct SignalJson {
    #[serde(rename = "L")]
    l: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

pub fn signal_to_json(x: &ComplexSignal<f64>) -> String {
    let j = SignalJson {
        l: x.len(),
        re: x.values().iter().map(|v| v.re).collect(),
        im: x.values().iter().map(|v| v.im).collect(),
    };
    serde_json::to_string_pretty(&j).expect("plain arrays serialize")
}

pub fn signal_from_json(text: &str) -> Result<ComplexSignal<f64>> {
    let j: SignalJson = serde_json::from_str(text)?;
    if j.re.len() != j.l || j.im.len() != j.l {
        return Err(Error::Parse(format!(
            "signal declares L = {} but carries {} re / {} im entries",
            j.l,
            j.re.len(),
            j.im.len()
        )));
    }
    ComplexSignal::from_re_im(&j.re, &j.im)
}

pub fn write_signal(path: &Path, x: &ComplexSignal<f64>) -> Result<()> {
    Ok(std::fs::write(path, signal_to_json(x))?)
}

pub fn read_signal(path: &Path) -> Result<ComplexSignal<f64>> {
    signal_from_json(&std::fs::read_to_string(path)?)
}

fn real_rows_to_csv<'a>(rows: impl Iterator<Item = &'a [f64]>) -> String {
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        let _ = writeln!(out, "{}", line.join(","));
    }
    out
}

fn csv_to_real_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|cell| {
                cell.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: {e}", i + 1)))
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// L rows by L columns, row index = time shift m.
pub fn measurement_to_csv(m: &MeasurementGrid<f64>) -> String {
    real_rows_to_csv((0..m.l()).map(|r| m.row(r)))
}

pub fn measurement_from_csv(text: &str) -> Result<MeasurementGrid<f64>> {
    let rows = csv_to_real_rows(text)?;
    let l = rows.len();
    if rows.iter().any(|r| r.len() != l) {
        return Err(Error::Parse("measurement grid must be square".into()));
    }
    MeasurementGrid::new(l, rows.into_iter().flatten().collect())
}

pub fn write_measurement(path: &Path, m: &MeasurementGrid<f64>) -> Result<()> {
    Ok(std::fs::write(path, measurement_to_csv(m))?)
}

pub fn read_measurement(path: &Path) -> Result<MeasurementGrid<f64>> {
    measurement_from_csv(&std::fs::read_to_string(path)?)
}

/// Real part, imaginary part and mask CSVs for an ambiguity grid. The
/// mask rows hold 1 (reliable) or 0.
pub fn ambiguity_to_csv(a: &AmbiguityGrid<f64>) -> (String, String, String) {
    let l = a.l();
    let part = |f: &dyn Fn(Complex<f64>) -> f64| {
        let rows: Vec<Vec<f64>> = (0..l)
            .map(|m| a.row(m as i64).iter().map(|&v| f(v)).collect())
            .collect();
        real_rows_to_csv(rows.iter().map(|r| r.as_slice()))
    };
    let mut mask = String::new();
    for m in 0..l {
        let line: Vec<&str> = (0..l)
            .map(|n| if a.reliable(m as i64, n as i64) { "1" } else { "0" })
            .collect();
        let _ = writeln!(mask, "{}", line.join(","));
    }
    (part(&|v| v.re), part(&|v| v.im), mask)
}

/// Rebuilds an L x L complex grid from matching re/im CSVs.
pub fn complex_grid_from_csv(re: &str, im: &str) -> Result<ComplexGrid<f64>> {
    let re = csv_to_real_rows(re)?;
    let im = csv_to_real_rows(im)?;
    let l = re.len();
    if im.len() != l || re.iter().chain(&im).any(|r| r.len() != l) {
        return Err(Error::Parse("re/im grids must be square and match".into()));
    }
    let entries = re
        .into_iter()
        .flatten()
        .zip(im.into_iter().flatten())
        .map(|(a, b)| Complex::new(a, b))
        .collect();
    ComplexGrid::new(l, entries)
}

#[derive(Serialize)]
struct GraphJson<'a> {
    l: usize,
    mode: crate::graph::GraphMode,
    reach: usize,
    delta0: f64,
    vertices: &'a [usize],
    components: &'a [Vec<usize>],
    roots: &'a [usize],
    orders: Vec<&'a [PropStep]>,
}

pub fn graph_to_json(g: &IslandGraph<f64>) -> String {
    let orders: Vec<&[PropStep]> = (0..g.components().len())
        .map(|k| propagation_order(g, k).expect("component index in range"))
        .collect();
    let j = GraphJson {
        l: g.l(),
        mode: g.mode(),
        reach: g.reach(),
        delta0: g.delta0(),
        vertices: g.vertices(),
        components: g.components(),
        roots: g.roots(),
        orders,
    };
    serde_json::to_string_pretty(&j).expect("graph serializes")
}

#[derive(Serialize)]
struct ReconstructionJson<'a> {
    domain: crate::reconstruct::Domain,
    l: usize,
    re: Vec<f64>,
    im: Vec<f64>,
    /// Component index per entry, null off the vertex set.
    membership: Vec<Option<usize>>,
    on_vertex: Vec<bool>,
    islands: usize,
    roots: &'a [usize],
    diagnostics: crate::reconstruct::Diagnostics,
}

pub fn reconstruction_to_json(r: &ReconstructionResult<f64>) -> String {
    let l = r.estimate.len();
    let j = ReconstructionJson {
        domain: r.domain,
        l,
        re: r.estimate.values().iter().map(|v| v.re).collect(),
        im: r.estimate.values().iter().map(|v| v.im).collect(),
        membership: (0..l).map(|i| r.islands.component_of(i)).collect(),
        on_vertex: (0..l).map(|i| r.islands.contains(i)).collect(),
        islands: r.islands.components().len(),
        roots: r.islands.roots(),
        diagnostics: r.diagnostics,
    };
    serde_json::to_string_pretty(&j).expect("reconstruction serializes")
}

pub fn report_to_json(r: &StabilityReport<f64>) -> String {
    serde_json::to_string_pretty(r).expect("report serializes")
}

/// Sweep CSV with a fixed header; booleans as true/false.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("L,K,V,delta0,delta1,reach,lhs,gap,C_main,epsilon,rhs,satisfied\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.l,
            r.islands,
            r.vertex_count,
            fmt_f64(r.delta0),
            fmt_f64(r.delta1),
            r.reach,
            fmt_f64(r.lhs),
            fmt_f64(r.gap),
            fmt_f64(r.constant_main),
            fmt_f64(r.epsilon),
            fmt_f64(r.rhs),
            r.satisfied
        );
    }
    out
}

/// Minimal sweep CSV reader (header + the numeric columns used by
/// scaling analyses).
pub fn sweep_from_csv(text: &str) -> Result<Vec<(usize, usize, f64, bool)>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty sweep CSV".into()))?;
    if !header.starts_with("L,K,V,") {
        return Err(Error::Parse("unexpected sweep CSV header".into()));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 12 {
            return Err(Error::Parse(format!("row {}: expected 12 columns", i + 2)));
        }
        let parse_usize = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| Error::Parse(format!("row {}: {e}", i + 2)))
        };
        let c_main = cells[8]
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("row {}: {e}", i + 2)))?;
        let satisfied = match cells[11] {
            "true" => true,
            "false" => false,
            other => return Err(Error::Parse(format!("row {}: bad boolean {other}", i + 2))),
        };
        out.push((parse_usize(cells[0])?, parse_usize(cells[2])?, c_main, satisfied));
    }
    Ok(out)
}
