//! Command-line front end: reproducible experiment runs that write their
//! resolved configuration next to every output file.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use phaselab::ambiguity::ambiguity;
use phaselab::graph::{build_graph, GraphMode, GraphParams};
use phaselab::io;
use phaselab::reconstruct::{reconstruct_freq, reconstruct_li, reconstruct_time, Domain};
use phaselab::signal::ComplexSignal;
use phaselab::signals::{
    add_noise, make_window, random_signal, two_bump, BumpSign, NoiseModel, Profile, WindowKind,
};
use phaselab::stability::{aligned_distance, certify, TheoremId};
use phaselab::sweep::{run_sweep, SweepConfig};
use phaselab::transforms::{dft, frobenius_distance, measure};
use phaselab::{Error, Result};

#[derive(Parser)]
#[command(
    name = "phaselab",
    about = "Phase retrieval from discrete Gabor magnitudes: measurement, reconstruction and stability certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute a spectrogram (optionally noisy) and write it as CSV
    Measure(MeasureArgs),
    /// Reconstruct a signal from a measurement grid
    Reconstruct(ReconstructArgs),
    /// Build and export an island graph
    Islands(IslandsArgs),
    /// Certify one stability bound on a signal pair
    Certify(CertifyArgs),
    /// Batch certification over problem sizes, exported as CSV
    Sweep(SweepArgs),
    /// Export the window ambiguity magnitude grid
    AmbiguityGrid(AmbiguityGridArgs),
    /// Two-bump instability demo: measurement gaps vs aligned distances
    TwoBumpDemo(TwoBumpArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// ambiguity-function propagation over time islands
    Ambiguity,
    /// short-support autocorrelation propagation
    Autocorr,
    /// Fourier-dual propagation over frequency islands
    Frequency,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoremArg {
    Magnitude,
    TimeSingle,
    TimeMulti,
    Frequency,
    WindowStep,
}

impl From<TheoremArg> for TheoremId {
    fn from(t: TheoremArg) -> Self {
        match t {
            TheoremArg::Magnitude => TheoremId::Magnitude,
            TheoremArg::TimeSingle => TheoremId::TimeSingle,
            TheoremArg::TimeMulti => TheoremId::TimeMulti,
            TheoremArg::Frequency => TheoremId::Frequency,
            TheoremArg::WindowStep => TheoremId::WindowStep,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Time,
    Frequency,
    WindowStep,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NoiseModelArg {
    AdditiveGaussian,
    Relative,
}

#[derive(Args)]
struct MeasureArgs {
    /// Signal JSON; omitted: a seeded random floor-profile signal
    #[arg(long)]
    signal: Option<PathBuf>,
    #[arg(long = "L", default_value_t = 16)]
    l: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Window spec, e.g. gaussian, gaussian:center=512,width=32, hamming:support=64
    #[arg(long, default_value = "gaussian")]
    window: String,
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, value_enum, default_value_t = NoiseModelArg::AdditiveGaussian)]
    noise_model: NoiseModelArg,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Measurement grid CSV
    #[arg(long)]
    grid: PathBuf,
    #[arg(long, default_value = "gaussian")]
    window: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Ambiguity)]
    method: MethodArg,
    #[arg(long, default_value_t = 0.1)]
    delta0: f64,
    #[arg(long, default_value_t = 1e-6)]
    delta1: f64,
    #[arg(long = "delta-time", default_value_t = 0)]
    delta_time: usize,
    #[arg(long = "delta-freq", default_value_t = 0)]
    delta_freq: usize,
    /// Ground-truth signal JSON; enables the aligned-distance report
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct IslandsArgs {
    #[arg(long)]
    signal: Option<PathBuf>,
    /// Second signal: vertices then require both magnitudes above delta0
    #[arg(long)]
    signal2: Option<PathBuf>,
    #[arg(long = "L", default_value_t = 16)]
    l: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Time)]
    mode: ModeArg,
    #[arg(long, default_value_t = 0.1)]
    delta0: f64,
    #[arg(long = "delta-time", default_value_t = 0)]
    delta_time: usize,
    #[arg(long = "delta-freq", default_value_t = 0)]
    delta_freq: usize,
    /// Window spec; required for window-step mode (fixes the step)
    #[arg(long)]
    window: Option<String>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    signal: Option<PathBuf>,
    #[arg(long)]
    signal2: Option<PathBuf>,
    #[arg(long = "L", default_value_t = 16)]
    l: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "gaussian")]
    window: String,
    #[arg(long, value_enum)]
    theorem: TheoremArg,
    #[arg(long, default_value_t = 0.05)]
    delta0: f64,
    #[arg(long, default_value_t = 1e-4)]
    delta1: f64,
    #[arg(long = "delta-time", default_value_t = 0)]
    delta_time: usize,
    #[arg(long = "delta-freq", default_value_t = 0)]
    delta_freq: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long = "L", value_delimiter = ',', default_values_t = [16, 32, 64, 128, 256])]
    ls: Vec<usize>,
    #[arg(long, default_value_t = 4)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = TheoremArg::TimeMulti)]
    theorem: TheoremArg,
    #[arg(long, default_value_t = 0.05)]
    delta0: f64,
    #[arg(long, default_value_t = 1e-3)]
    delta1: f64,
    #[arg(long = "delta-time", default_value_t = 0)]
    delta_time: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct AmbiguityGridArgs {
    #[arg(long, default_value = "gaussian")]
    window: String,
    #[arg(long = "L", default_value_t = 1024)]
    l: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct TwoBumpArgs {
    /// Bump separations, comma-separated
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 1.5, 2.0, 2.5, 3.0])]
    lambdas: Vec<f64>,
    #[arg(long = "L", default_value_t = 64)]
    l: usize,
    /// Bump width in grid time units
    #[arg(long, default_value_t = 1.0)]
    width: f64,
    /// Gaussian window width in samples; default L/16
    #[arg(long)]
    window_width: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    delta0: f64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

/// Parses a window spec: `kind[:key=value[,key=value]...]`, kinds
/// gaussian / hamming / hann / rectangular (alias rect), keys center and
/// width (gaussian) or support (the rest).
pub fn parse_window_spec(spec: &str) -> Result<WindowKind> {
    let (kind, rest) = match spec.split_once(':') {
        Some((k, r)) => (k, Some(r)),
        None => (spec, None),
    };
    let mut center = None;
    let mut width = None;
    let mut modulation = None;
    let mut support = None;
    if let Some(rest) = rest {
        for pair in rest.split(',') {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("window option '{pair}' is not key=value")))?;
            match key {
                "center" => {
                    center = Some(value.parse::<f64>().map_err(|e| Error::Parse(e.to_string()))?)
                }
                "width" => {
                    width = Some(value.parse::<f64>().map_err(|e| Error::Parse(e.to_string()))?)
                }
                "modulation" => {
                    modulation =
                        Some(value.parse::<f64>().map_err(|e| Error::Parse(e.to_string()))?)
                }
                "support" => {
                    support =
                        Some(value.parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?)
                }
                other => return Err(Error::Parse(format!("unknown window option '{other}'"))),
            }
        }
    }
    match kind {
        "gaussian" => Ok(WindowKind::Gaussian {
            center,
            width,
            modulation,
        }),
        "hamming" => Ok(WindowKind::Hamming { support }),
        "hann" => Ok(WindowKind::Hann { support }),
        "rectangular" | "rect" => Ok(WindowKind::Rectangular { support }),
        other => Err(Error::Parse(format!("unknown window kind '{other}'"))),
    }
}

fn load_or_random(path: &Option<PathBuf>, l: usize, seed: u64) -> Result<ComplexSignal<f64>> {
    match path {
        Some(p) => io::read_signal(p),
        None => random_signal(l, seed, &Profile::Floor { floor: 0.5 }),
    }
}

fn write_out(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

fn write_config(dir: &Path, config: &serde_json::Value) -> Result<()> {
    write_out(dir, "config.json", &serde_json::to_string_pretty(config).expect("json"))?;
    Ok(())
}

pub fn run() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Measure(a) => cmd_measure(a),
        Cmd::Reconstruct(a) => cmd_reconstruct(a),
        Cmd::Islands(a) => cmd_islands(a),
        Cmd::Certify(a) => cmd_certify(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::AmbiguityGrid(a) => cmd_ambiguity_grid(a),
        Cmd::TwoBumpDemo(a) => cmd_two_bump(a),
    }
}

fn cmd_measure(a: MeasureArgs) -> Result<()> {
    let x = load_or_random(&a.signal, a.l, a.seed)?;
    let kind = parse_window_spec(&a.window)?;
    let phi = make_window(&kind, x.len())?;
    let clean = measure(&x, &phi)?;
    let (m, realized) = if a.noise > 0.0 {
        let model = match a.noise_model {
            NoiseModelArg::AdditiveGaussian => NoiseModel::AdditiveGaussian,
            NoiseModelArg::Relative => NoiseModel::Relative,
        };
        add_noise(&clean, a.noise, model, a.seed)?
    } else {
        (clean, 0.0)
    };
    write_out(&a.out, "signal.json", &io::signal_to_json(&x))?;
    write_out(&a.out, "measurement.csv", &io::measurement_to_csv(&m))?;
    write_config(
        &a.out,
        &json!({
            "command": "measure",
            "signal": a.signal,
            "L": x.len(),
            "seed": a.seed,
            "window": a.window,
            "noise": a.noise,
            "realized_gap": realized,
            "out": a.out,
        }),
    )?;
    println!(
        "wrote {} ({}x{}, realized noise gap {realized:.3e})",
        a.out.join("measurement.csv").display(),
        x.len(),
        x.len()
    );
    Ok(())
}

fn cmd_reconstruct(a: ReconstructArgs) -> Result<()> {
    let m = io::read_measurement(&a.grid)?;
    let kind = parse_window_spec(&a.window)?;
    let phi = make_window(&kind, m.l())?;
    let r = match a.method {
        MethodArg::Ambiguity => reconstruct_time(&m, &phi, a.delta0, a.delta1, a.delta_time)?,
        MethodArg::Autocorr => reconstruct_li(&m, &phi, a.delta0, a.delta1)?,
        MethodArg::Frequency => reconstruct_freq(&m, &phi, a.delta0, a.delta1, a.delta_freq)?,
    };
    write_out(&a.out, "reconstruction.json", &io::reconstruction_to_json(&r))?;
    let mut aligned = None;
    if let Some(truth_path) = &a.truth {
        let truth = io::read_signal(truth_path)?;
        let reference = match r.domain {
            Domain::Time => truth,
            Domain::Frequency => dft(&truth),
        };
        let (d, alphas) = aligned_distance(&reference, &r.estimate, r.islands.components())?;
        write_out(
            &a.out,
            "alignment.json",
            &serde_json::to_string_pretty(&json!({
                "aligned_distance": d,
                "alphas": alphas,
            }))
            .expect("json"),
        )?;
        aligned = Some(d);
    }
    write_config(
        &a.out,
        &json!({
            "command": "reconstruct",
            "grid": a.grid,
            "window": a.window,
            "method": match a.method {
                MethodArg::Ambiguity => "ambiguity",
                MethodArg::Autocorr => "autocorr",
                MethodArg::Frequency => "frequency",
            },
            "delta0": a.delta0,
            "delta1": a.delta1,
            "delta_time": a.delta_time,
            "delta_freq": a.delta_freq,
            "truth": a.truth,
            "out": a.out,
        }),
    )?;
    match aligned {
        Some(d) => println!(
            "reconstructed {} islands, aligned distance {d:.6e}",
            r.islands.components().len()
        ),
        None => println!("reconstructed {} islands", r.islands.components().len()),
    }
    Ok(())
}

fn cmd_islands(a: IslandsArgs) -> Result<()> {
    let x = load_or_random(&a.signal, a.l, a.seed)?;
    let second = match &a.signal2 {
        Some(p) => Some(io::read_signal(p)?),
        None => None,
    };
    let (mode, reach) = match a.mode {
        ModeArg::Time => (GraphMode::Time, a.delta_time),
        ModeArg::Frequency => (GraphMode::Frequency, a.delta_freq),
        ModeArg::WindowStep => {
            let spec = a.window.as_deref().ok_or_else(|| {
                Error::InvalidParameter("window-step mode needs --window".into())
            })?;
            let phi = make_window::<f64>(&parse_window_spec(spec)?, x.len())?;
            let (_, step) = phaselab::graph::window_support(&phi, 0.0)?;
            (GraphMode::WindowStep, step)
        }
    };
    let to_mags = |z: &ComplexSignal<f64>| match mode {
        GraphMode::Frequency => dft(z).magnitudes(),
        _ => z.magnitudes(),
    };
    let mags_x = to_mags(&x);
    let mags_y = second.as_ref().map(|y| to_mags(y));
    let mut vectors: Vec<&[f64]> = vec![&mags_x];
    if let Some(my) = &mags_y {
        vectors.push(my);
    }
    let g = build_graph(
        &vectors,
        GraphParams {
            delta0: a.delta0,
            mode,
            reach,
        },
    )?;
    write_out(&a.out, "islands.json", &io::graph_to_json(&g))?;
    write_config(
        &a.out,
        &json!({
            "command": "islands",
            "signal": a.signal,
            "signal2": a.signal2,
            "L": x.len(),
            "seed": a.seed,
            "mode": match a.mode {
                ModeArg::Time => "time",
                ModeArg::Frequency => "frequency",
                ModeArg::WindowStep => "window-step",
            },
            "delta0": a.delta0,
            "reach": reach,
            "window": a.window,
            "out": a.out,
        }),
    )?;
    println!(
        "{} vertices in {} islands",
        g.vertices().len(),
        g.components().len()
    );
    Ok(())
}

fn cmd_certify(a: CertifyArgs) -> Result<()> {
    let x = load_or_random(&a.signal, a.l, a.seed)?;
    let y = match &a.signal2 {
        Some(p) => io::read_signal(p)?,
        None => random_signal(x.len(), a.seed.wrapping_add(1), &Profile::Floor { floor: 0.5 })?,
    };
    let kind = parse_window_spec(&a.window)?;
    let phi = make_window(&kind, x.len())?;
    let theorem: TheoremId = a.theorem.into();
    let reach = match theorem {
        TheoremId::Frequency => a.delta_freq,
        _ => a.delta_time,
    };
    let report = certify(&x, &y, &phi, theorem, a.delta0, a.delta1, reach)?;
    write_out(&a.out, "report.json", &io::report_to_json(&report))?;
    write_config(
        &a.out,
        &json!({
            "command": "certify",
            "signal": a.signal,
            "signal2": a.signal2,
            "L": x.len(),
            "seed": a.seed,
            "window": a.window,
            "theorem": theorem,
            "delta0": a.delta0,
            "delta1": a.delta1,
            "delta_time": a.delta_time,
            "delta_freq": a.delta_freq,
            "out": a.out,
        }),
    )?;
    println!(
        "lhs {:.6e} <= rhs {:.6e}: satisfied = {}",
        report.lhs, report.rhs, report.satisfied
    );
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> Result<()> {
    let cfg = SweepConfig {
        ls: a.ls.clone(),
        instances_per_l: a.instances,
        seed: a.seed,
        theorem: a.theorem.into(),
        reach: a.delta_time,
        delta0: a.delta0,
        delta1: a.delta1,
        ..SweepConfig::default()
    };
    let rows = run_sweep(&cfg)?;
    write_out(&a.out, "sweep.csv", &io::sweep_to_csv(&rows))?;
    write_config(
        &a.out,
        &json!({
            "command": "sweep",
            "config": cfg,
            "out": a.out,
        }),
    )?;
    let unsatisfied = rows.iter().filter(|r| !r.satisfied).count();
    println!("{} rows, {} unsatisfied", rows.len(), unsatisfied);
    Ok(())
}

fn cmd_ambiguity_grid(a: AmbiguityGridArgs) -> Result<()> {
    let kind = parse_window_spec(&a.window)?;
    let phi = make_window::<f64>(&kind, a.l)?;
    let amb = ambiguity(&phi);
    let mut rows = String::new();
    for m in 0..a.l {
        let line: Vec<String> = (0..a.l)
            .map(|n| format!("{:.16e}", amb.at(m as i64, n as i64).norm()))
            .collect();
        rows.push_str(&line.join(","));
        rows.push('\n');
    }
    write_out(&a.out, "ambiguity_abs.csv", &rows)?;
    write_config(
        &a.out,
        &json!({
            "command": "ambiguity-grid",
            "window": a.window,
            "L": a.l,
            "out": a.out,
        }),
    )?;
    println!("wrote {}", a.out.join("ambiguity_abs.csv").display());
    Ok(())
}

fn cmd_two_bump(a: TwoBumpArgs) -> Result<()> {
    if a.lambdas.is_empty() {
        return Err(Error::InvalidParameter("need at least one lambda".into()));
    }
    let max_lambda = a.lambdas.iter().cloned().fold(0.0, f64::max);
    let half_range = max_lambda + 3.5 * a.width;
    let window_width = a.window_width.unwrap_or(a.l as f64 / 16.0);
    let phi = make_window::<f64>(
        &WindowKind::Gaussian {
            center: None,
            width: Some(window_width),
            modulation: None,
        },
        a.l,
    )?;
    let mut csv =
        String::from("lambda,gap,islands,aligned_global,aligned_per_island\n");
    for &lambda in &a.lambdas {
        let plus: ComplexSignal<f64> =
            two_bump(a.l, lambda, BumpSign::Plus, a.width, Some(half_range))?;
        let minus: ComplexSignal<f64> =
            two_bump(a.l, lambda, BumpSign::Minus, a.width, Some(half_range))?;
        let gap = frobenius_distance(&measure(&plus, &phi)?, &measure(&minus, &phi)?)?;
        let mp = plus.magnitudes();
        let mm = minus.magnitudes();
        let g = build_graph(
            &[&mp, &mm],
            GraphParams {
                delta0: a.delta0,
                mode: GraphMode::Time,
                reach: 0,
            },
        )?;
        let (per_island, _) = aligned_distance(&plus, &minus, g.components())?;
        let union: Vec<usize> = g.components().iter().flatten().cloned().collect();
        let (global, _) = aligned_distance(&plus, &minus, &[union])?;
        csv.push_str(&format!(
            "{},{:.16e},{},{:.16e},{:.16e}\n",
            lambda,
            gap,
            g.components().len(),
            global,
            per_island
        ));
    }
    write_out(&a.out, "two_bump.csv", &csv)?;
    write_config(
        &a.out,
        &json!({
            "command": "two-bump-demo",
            "lambdas": a.lambdas,
            "L": a.l,
            "width": a.width,
            "window_width": window_width,
            "delta0": a.delta0,
            "half_range": half_range,
            "out": a.out,
        }),
    )?;
    println!("wrote {}", a.out.join("two_bump.csv").display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_spec_parsing() {
        assert_eq!(
            parse_window_spec("gaussian").unwrap(),
            WindowKind::Gaussian {
                center: None,
                width: None,
                modulation: None
            }
        );
        assert_eq!(
            parse_window_spec("gaussian:center=512,width=32,modulation=0.25").unwrap(),
            WindowKind::Gaussian {
                center: Some(512.0),
                width: Some(32.0),
                modulation: Some(0.25)
            }
        );
        assert_eq!(
            parse_window_spec("rect:support=5").unwrap(),
            WindowKind::Rectangular { support: Some(5) }
        );
        assert!(parse_window_spec("triangle").is_err());
        assert!(parse_window_spec("gaussian:width").is_err());
        assert!(parse_window_spec("gaussian:sigma=3").is_err());
    }
}
