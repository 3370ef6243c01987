//! Batch certification sweeps over problem sizes, parallelized with a
//! worker pool capped by the PHASELAB_THREADS environment variable.
//!
//! Each instance certifies an independent random signal pair; results
//! come back in configuration order regardless of completion order, so
//! sweep outputs are deterministic for a fixed seed.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::signals::{make_window, random_signal, Profile, WindowKind};
use crate::stability::{certify, TheoremId};

/// Declarative sweep description. Thresholds are absolute so that the
/// bound constants are comparable across sizes.
#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    pub ls: Vec<usize>,
    pub instances_per_l: usize,
    pub seed: u64,
    pub theorem: TheoremId,
    pub reach: usize,
    pub delta0: f64,
    pub delta1: f64,
    /// Gaussian window width = L / divisor.
    pub window_width_divisor: f64,
    /// Minimum signal magnitude; the default 0.5 keeps every index a
    /// vertex, so |V| = L.
    pub magnitude_floor: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            ls: vec![16, 32, 64, 128, 256],
            instances_per_l: 4,
            seed: 0,
            theorem: TheoremId::TimeMulti,
            reach: 0,
            delta0: 0.05,
            delta1: 1e-3,
            window_width_divisor: 4.0,
            magnitude_floor: 0.5,
        }
    }
}

/// One certified instance; one CSV row.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub l: usize,
    pub instance: usize,
    pub islands: usize,
    pub vertex_count: usize,
    pub delta0: f64,
    pub delta1: f64,
    pub reach: usize,
    pub lhs: f64,
    pub gap: f64,
    pub constant_main: f64,
    pub epsilon: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

/// Worker count: PHASELAB_THREADS when set and positive, otherwise the
/// rayon default.
pub fn worker_count() -> Option<usize> {
    std::env::var("PHASELAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
}

fn run_instance(cfg: &SweepConfig, l: usize, instance: usize) -> Result<SweepRow> {
    let base = cfg
        .seed
        .wrapping_mul(0x9e3779b97f4a7c15)
        .wrapping_add((l as u64) << 20)
        .wrapping_add(instance as u64 * 2);
    let profile = Profile::Floor {
        floor: cfg.magnitude_floor,
    };
    let x = random_signal::<f64>(l, base, &profile)?;
    let y = random_signal::<f64>(l, base.wrapping_add(1), &profile)?;
    let phi = make_window::<f64>(
        &WindowKind::Gaussian {
            center: None,
            width: Some(l as f64 / cfg.window_width_divisor),
            modulation: None,
        },
        l,
    )?;
    let report = certify(&x, &y, &phi, cfg.theorem, cfg.delta0, cfg.delta1, cfg.reach)?;
    Ok(SweepRow {
        l,
        instance,
        islands: report.islands,
        vertex_count: report.vertex_count,
        delta0: report.delta0,
        delta1: report.delta1,
        reach: report.reach,
        lhs: report.lhs,
        gap: report.measurement_gap,
        constant_main: report.constant_main,
        epsilon: report.epsilon,
        rhs: report.rhs,
        satisfied: report.satisfied,
    })
}

/// Runs the full sweep; rows are ordered by (L position, instance index).
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.ls.is_empty() || cfg.instances_per_l == 0 {
        return Err(Error::InvalidParameter(
            "sweep needs at least one size and one instance".into(),
        ));
    }
    let jobs: Vec<(usize, usize)> = cfg
        .ls
        .iter()
        .flat_map(|&l| (0..cfg.instances_per_l).map(move |i| (l, i)))
        .collect();
    let work = || -> Result<Vec<SweepRow>> {
        jobs.par_iter()
            .map(|&(l, i)| run_instance(cfg, l, i))
            .collect()
    };
    match worker_count() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

/// Least-squares slope of log(y) against log(x); quantifies how a bound
/// constant scales with the space dimension.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidParameter(
            "need two or more matching samples".into(),
        ));
    }
    if xs.iter().chain(ys).any(|&v| v <= 0.0) {
        return Err(Error::InvalidParameter(
            "log-log fit needs positive samples".into(),
        ));
    }
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (a, b) in lx.iter().zip(&ly) {
        num += (a - mx) * (b - my);
        den += (a - mx) * (a - mx);
    }
    if den == 0.0 {
        return Err(Error::InvalidParameter(
            "log-log fit needs at least two distinct x values".into(),
        ));
    }
    Ok(num / den)
}
