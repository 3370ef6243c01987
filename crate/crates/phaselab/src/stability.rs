//! Numerical certification of the stability bounds: aligned distances,
//! epsilon residuals, the bound constants of each certificate variant,
//! and the two pointwise inequalities used by the proofs.
//!
//! A certificate compares the semi-global aligned distance between two
//! signals (left-hand side) against a multiple of their measurement gap
//! plus an epsilon residual collecting the Fourier bins excluded by the
//! delta1 threshold (right-hand side). All constants follow the theorem
//! statements verbatim; in particular the window-step variant carries the
//! (2L)^{1/2} factor from its statement, not the |V|/2^{1/2} factor that
//! appears in the proof narration.

use num_complex::Complex;
use serde::Serialize;

use crate::ambiguity::ambiguity;
use crate::error::{Error, Result};
use crate::graph::{build_graph, window_support, GraphMode, GraphParams};
use crate::signal::ComplexSignal;
use crate::transforms::{dft, frobenius_distance, measure};
use crate::Scalar;

/// Certificate variant selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    Magnitude,
    TimeSingle,
    TimeMulti,
    Frequency,
    WindowStep,
}

/// Outcome of one certification run.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "S: Serialize")]
pub struct StabilityReport<S: Scalar> {
    pub theorem: TheoremId,
    pub l: usize,
    pub delta0: S,
    pub delta1: S,
    pub reach: usize,
    /// Number of islands K (0 for the magnitude variant, which has none).
    pub islands: usize,
    /// Total vertex count over all islands.
    pub vertex_count: usize,
    pub lhs: S,
    pub measurement_gap: S,
    pub constant_main: S,
    pub constant_eps: S,
    pub epsilon: S,
    pub rhs: S,
    /// Optimal per-island phases (radians), empty for the magnitude variant.
    pub alphas: Vec<S>,
    pub satisfied: bool,
}

/// Infimum over one unimodular factor per component of the summed
/// component-wise distances, with the optimal phases. For component V_k
/// the closed form is sqrt(||x||^2 + ||y||^2 - 2 |(x, y)|) with norms and
/// the inner product restricted to V_k; the optimal phase is the argument
/// of the restricted inner product (zero when it vanishes).
pub fn aligned_distance<S: Scalar>(
    x: &ComplexSignal<S>,
    y: &ComplexSignal<S>,
    components: &[Vec<usize>],
) -> Result<(S, Vec<S>)> {
    let l = x.len();
    if y.len() != l {
        return Err(Error::DimensionMismatch(format!(
            "signals have lengths {l} and {}",
            y.len()
        )));
    }
    let mut seen = vec![false; l];
    for (k, comp) in components.iter().enumerate() {
        for &v in comp {
            if v >= l {
                return Err(Error::IndexOutOfRange(format!(
                    "vertex {v} in component {k} of a length-{l} signal"
                )));
            }
            if seen[v] {
                return Err(Error::OverlappingComponents(v));
            }
            seen[v] = true;
        }
    }
    let mut total = S::zero();
    let mut alphas = Vec::with_capacity(components.len());
    for comp in components {
        let mut nx = S::zero();
        let mut ny = S::zero();
        let mut ip = Complex::new(S::zero(), S::zero());
        for &v in comp {
            let a = x.at(v as i64);
            let b = y.at(v as i64);
            nx = nx + a.norm_sqr();
            ny = ny + b.norm_sqr();
            ip = ip + a * b.conj();
        }
        let alpha = if ip.norm() == S::zero() {
            S::zero()
        } else {
            ip.arg()
        };
        alphas.push(alpha);
        let two = S::from_f64_lit(2.0);
        let d_sq = (nx + ny - two * ip.norm()).max(S::zero());
        total = total + d_sq.sqrt();
    }
    Ok((total, alphas))
}

fn check_delta1<S: Scalar>(delta1: S) -> Result<()> {
    if delta1 <= S::zero() || !delta1.is_finite() {
        return Err(Error::InvalidParameter("delta1 must be > 0".into()));
    }
    Ok(())
}

fn check_pair<S: Scalar>(
    x: &ComplexSignal<S>,
    y: &ComplexSignal<S>,
    phi: &ComplexSignal<S>,
) -> Result<usize> {
    let l = x.len();
    if y.len() != l || phi.len() != l {
        return Err(Error::DimensionMismatch(format!(
            "lengths {}, {}, {} must agree",
            x.len(),
            y.len(),
            phi.len()
        )));
    }
    Ok(l)
}

/// Residual of magnitude retrieval: root of the sum of
/// |F[|x|^2 - |y|^2](l)|^2 over the bins where |F[|phi|^2](l)| <= delta1.
pub fn epsilon_magnitude<S: Scalar>(
    x: &ComplexSignal<S>,
    y: &ComplexSignal<S>,
    phi: &ComplexSignal<S>,
    delta1: S,
) -> Result<S> {
    check_pair(x, y, phi)?;
    check_delta1(delta1)?;
    let sq = |z: &ComplexSignal<S>| {
        ComplexSignal::new(
            z.values()
                .iter()
                .map(|v| Complex::new(v.norm_sqr(), S::zero()))
                .collect(),
        )
        .expect("squared moduli are finite")
    };
    let fp = dft(&sq(phi));
    let diff = ComplexSignal::new(
        x.values()
            .iter()
            .zip(y.values())
            .map(|(a, b)| Complex::new(a.norm_sqr() - b.norm_sqr(), S::zero()))
            .collect(),
    )?;
    let fd = dft(&diff);
    let mut acc = S::zero();
    for ell in 0..x.len() as i64 {
        if fp.at(ell).norm() <= delta1 {
            acc = acc + fd.at(ell).norm_sqr();
        }
    }
    Ok(acc.sqrt())
}

/// Shared excluded-bin accumulator over ambiguity rows. `transposed`
/// swaps the roles of the row and column index (frequency variant).
fn epsilon_rows<S: Scalar>(
    x: &ComplexSignal<S>,
    y: &ComplexSignal<S>,
    phi: &ComplexSignal<S>,
    delta1: S,
    rows: &[usize],
    weights: &[S],
    transposed: bool,
) -> S {
    let ax = ambiguity(x);
    let ay = ambiguity(y);
    let w = ambiguity(phi);
    let l = x.len();
    let mut acc = S::zero();
    for (&k, &weight) in rows.iter().zip(weights) {
        for ell in 0..l {
            let (m, n) = if transposed { (ell, k) } else { (k, ell) };
            if w.at(m as i64, n as i64).norm() <= delta1 {
                let d = ax.at(m as i64, n as i64) - ay.at(m as i64, n as i64);
                acc = acc + weight * d.norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn check_reach(reach: usize, l: usize) -> Result<()> {
    if reach + 1 > l / 2 {
        return Err(Error::InvalidParameter(format!(
            "reach {reach} outside 0..={} for L = {l}",
            l / 2 - 1
        )));
    }
    Ok(())
}

/// Multi-island time residual: 2 x the excluded-bin energy over ambiguity
/// rows 0..=reach+1, square-rooted.
pub fn epsilon_time<S: Scalar>(
    x: &ComplexSignal<S>,
    y: &ComplexSignal<S>,
    phi: &ComplexSignal<S>,
    delta1: S,
    reach: usize,
) -> Result<S> {
    let l = check_pair(x, y, phi)?;
    check_delta1(delta1)?;
    check_reach(reach, l)?;
    let rows: Vec<usize> = (0..=reach + 1).collect();
    let two = S::from_f64_lit(2.0);
    let weights = vec![two; rows.len()];
    Ok(epsilon_rows(x, y, phi, delta1, &rows, &weights, false))
}

/// Single-island time residual: the zero-shift row enters unweighted, the
/// shift-one row with weight 2.
pub fn epsilon_time_single<S: Scalar>(
    x: &ComplexSignal<S>,
    y: &ComplexSignal<S>,
    phi: &ComplexSignal<S>,
    delta1: S,
) -> Result<S> {
    check_pair(x, y, phi)?;
    check_delta1(delta1)?;
    let weights = [S::one(), S::from_f64_lit(2.0)];
    Ok(epsilon_rows(x, y, phi, delta1, &[0, 1], &weights, false))
}

/// Frequency residual: mirror of [`epsilon_time`] with the shift roles
/// transposed (frequency shift k, time index l).
pub fn epsilon_freq<S: Scalar>(
    x: &ComplexSignal<S>,
    y: &ComplexSignal<S>,
    phi: &ComplexSignal<S>,
    delta1: S,
    reach: usize,
) -> Result<S> {
    let l = check_pair(x, y, phi)?;
    check_delta1(delta1)?;
    check_reach(reach, l)?;
    let rows: Vec<usize> = (0..=reach + 1).collect();
    let two = S::from_f64_lit(2.0);
    let weights = vec![two; rows.len()];
    Ok(epsilon_rows(x, y, phi, delta1, &rows, &weights, true))
}

/// Evaluates one certificate variant on a concrete pair: computes the
/// aligned distance (lhs), the measurement gap, the epsilon residual and
/// the statement's constants, and checks lhs <= rhs with 1e-9 slack.
pub fn certify<S: Scalar>(
    x: &ComplexSignal<S>,
    y: &ComplexSignal<S>,
    phi: &ComplexSignal<S>,
    theorem: TheoremId,
    delta0: S,
    delta1: S,
    reach: usize,
) -> Result<StabilityReport<S>> {
    let l = check_pair(x, y, phi)?;
    if delta0 <= S::zero() || !delta0.is_finite() {
        return Err(Error::InvalidParameter("delta0 must be > 0".into()));
    }
    check_delta1(delta1)?;
    let gap = frobenius_distance(&measure(x, phi)?, &measure(y, phi)?)?;
    let half = S::from_f64_lit(0.5);
    let two = S::from_f64_lit(2.0);

    let mag_x = x.magnitudes();
    let mag_y = y.magnitudes();

    let (lhs, alphas, islands, vertex_count, c_main, c_eps, eps, reach_used) = match theorem {
        TheoremId::Magnitude => {
            let mut acc = S::zero();
            let mut count = 0usize;
            for i in 0..l {
                if mag_x[i] > delta0 && mag_y[i] > delta0 {
                    let d = mag_x[i] - mag_y[i];
                    acc = acc + d * d;
                    count += 1;
                }
            }
            let c_main = S::one() / (two * delta0 * delta1);
            let c_eps = S::one() / (two * delta0);
            let eps = epsilon_magnitude(x, y, phi, delta1)?;
            (acc.sqrt(), Vec::new(), 0, count, c_main, c_eps, eps, 0)
        }
        TheoremId::TimeSingle | TheoremId::TimeMulti => {
            let g = build_graph(
                &[&mag_x, &mag_y],
                GraphParams {
                    delta0,
                    mode: GraphMode::Time,
                    reach,
                },
            )?;
            if theorem == TheoremId::TimeSingle && g.components().len() > 1 {
                return Err(Error::HypothesisViolation(format!(
                    "single-island certificate requires a connected graph, found {} islands",
                    g.components().len()
                )));
            }
            let (lhs, alphas) = aligned_distance(x, y, g.components())?;
            let v: usize = g.components().iter().map(|c| c.len()).sum();
            let inf = mag_x
                .iter()
                .fold(S::zero(), |a, &b| a.max(b))
                .min(mag_y.iter().fold(S::zero(), |a, &b| a.max(b)));
            let bracket = half + inf / delta0 * S::from_f64_lit(v as f64);
            let c_main = bracket / (delta0 * delta1);
            let c_eps = bracket / delta0;
            let eps = if theorem == TheoremId::TimeSingle {
                epsilon_time_single(x, y, phi, delta1)?
            } else {
                epsilon_time(x, y, phi, delta1, reach)?
            };
            (lhs, alphas, g.components().len(), v, c_main, c_eps, eps, reach)
        }
        TheoremId::Frequency => {
            let fx = dft(x);
            let fy = dft(y);
            let fmx = fx.magnitudes();
            let fmy = fy.magnitudes();
            let g = build_graph(
                &[&fmx, &fmy],
                GraphParams {
                    delta0,
                    mode: GraphMode::Frequency,
                    reach,
                },
            )?;
            let (lhs, alphas) = aligned_distance(&fx, &fy, g.components())?;
            let v: usize = g.components().iter().map(|c| c.len()).sum();
            let inf = fmx
                .iter()
                .fold(S::zero(), |a, &b| a.max(b))
                .min(fmy.iter().fold(S::zero(), |a, &b| a.max(b)));
            let bracket = half + inf / delta0 * S::from_f64_lit(v as f64);
            let c_main = bracket / (delta0 * delta1);
            let c_eps = bracket / delta0;
            let eps = epsilon_freq(x, y, phi, delta1, reach)?;
            (lhs, alphas, g.components().len(), v, c_main, c_eps, eps, reach)
        }
        TheoremId::WindowStep => {
            let (n0, step) = window_support(phi, S::zero())?;
            if step == 0 {
                return Err(Error::InvalidParameter(
                    "window support must contain at least two points".into(),
                ));
            }
            let endpoints = (phi.at(n0 as i64) * phi.at((n0 + step) as i64)).norm();
            if endpoints == S::zero() {
                return Err(Error::DegenerateWindowEndpoints);
            }
            let g = build_graph(
                &[&mag_x, &mag_y],
                GraphParams {
                    delta0,
                    mode: GraphMode::WindowStep,
                    reach: step,
                },
            )?;
            let (lhs, alphas) = aligned_distance(x, y, g.components())?;
            let v: usize = g.components().iter().map(|c| c.len()).sum();
            let inf = mag_x
                .iter()
                .fold(S::zero(), |a, &b| a.max(b))
                .min(mag_y.iter().fold(S::zero(), |a, &b| a.max(b)));
            let root_2l = (two * S::from_f64_lit(l as f64)).sqrt();
            let c_main = (S::one() / delta0)
                * (S::one() / (two * delta1)
                    + root_2l * inf / (delta0 * endpoints) * S::from_f64_lit(v as f64));
            let c_eps = S::one() / (two * delta0);
            let eps = epsilon_magnitude(x, y, phi, delta1)?;
            (lhs, alphas, g.components().len(), v, c_main, c_eps, eps, step)
        }
    };

    let rhs = c_main * gap + c_eps * eps;
    let satisfied = lhs <= rhs + S::from_f64_lit(1e-9);
    Ok(StabilityReport {
        theorem,
        l,
        delta0,
        delta1,
        reach: reach_used,
        islands,
        vertex_count,
        lhs,
        measurement_gap: gap,
        constant_main: c_main,
        constant_eps: c_eps,
        epsilon: eps,
        rhs,
        alphas,
        satisfied,
    })
}

/// Pointwise split of a difference into magnitude and phase parts:
/// |a - e^{i alpha} b| <= | |a| - |b| | + min(|a|, |b|) |a/|a| - e^{i alpha} b/|b||
/// for nonzero a, b, with equality |a - e^{i alpha} b| = | |a| - |b| |
/// when either vanishes. Checked with 1e-12 tolerance.
pub fn check_split_inequality<S: Scalar>(a: Complex<S>, b: Complex<S>, alpha: S) -> bool {
    let tol = S::from_f64_lit(1e-12);
    let f = Complex::from_polar(S::one(), alpha);
    let lhs = (a - f * b).norm();
    let mag_part = (a.norm() - b.norm()).abs();
    if a.norm() == S::zero() || b.norm() == S::zero() {
        return (lhs - mag_part).abs() <= tol;
    }
    let phase_part = (a / a.norm() - f * b / b.norm()).norm();
    lhs <= mag_part + a.norm().min(b.norm()) * phase_part + tol
}

/// Pointwise phase-propagation estimate: the phase discrepancy at k is
/// bounded by the discrepancy at l plus twice the correlation mismatch
/// over the larger of |x_k x_l| and |y_k y_l|. Checked with 1e-12
/// tolerance; all four moduli must be positive.
pub fn check_propagation_inequality<S: Scalar>(
    xk: Complex<S>,
    xl: Complex<S>,
    yk: Complex<S>,
    yl: Complex<S>,
    alpha: S,
) -> Result<bool> {
    if [xk, xl, yk, yl].iter().any(|v| v.norm() == S::zero()) {
        return Err(Error::InvalidParameter(
            "propagation inequality needs nonzero moduli".into(),
        ));
    }
    let tol = S::from_f64_lit(1e-12);
    let f = Complex::from_polar(S::one(), alpha);
    let lhs = (xk / xk.norm() - f * yk / yk.norm()).norm();
    let first = (xl / xl.norm() - f * yl / yl.norm()).norm();
    let two = S::from_f64_lit(2.0);
    let second = two * (xk * xl.conj() - yk * yl.conj()).norm()
        / (xk.norm() * xl.norm()).max(yk.norm() * yl.norm());
    Ok(lhs <= first + second + tol)
}
