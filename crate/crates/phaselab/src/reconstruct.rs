//! Phase-propagation reconstruction: magnitudes by thresholded
//! deconvolution, then BFS phase propagation over island graphs driven by
//! local correlations.
//!
//! Three methods share the machinery. The time method divides out the
//! window's ambiguity function and walks time islands; the
//! autocorrelation method exploits a short-support window, whose
//! measurement rows isolate single products x(a + step) conj(x(a)); the
//! frequency method is the Fourier dual of the time method and returns an
//! estimate of the signal's spectrum.

use num_complex::Complex;
use serde::Serialize;

use crate::ambiguity::{estimate_signal_ambiguity, dual_estimate_ambiguity, local_correlations, LocalCorrelation};
use crate::error::{Error, Result};
use crate::graph::{build_graph, window_support, GraphMode, GraphParams, IslandGraph};
use crate::signal::{wrap, ComplexSignal, MeasurementGrid};
use crate::transforms::{dft, dft2_measurements, idft, idft_slice};
use crate::Scalar;

/// Domain the estimate lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    Time,
    Frequency,
}

/// Magnitude profile recovered from the zero-shift deconvolution.
#[derive(Debug, Clone)]
pub struct MagnitudeEstimate<S: Scalar> {
    pub values: Vec<S>,
    /// Negative squared-magnitude samples clamped to zero.
    pub clamped: usize,
    /// Fourier bins excluded because the window factor sat at or below
    /// the threshold.
    pub masked_bins: usize,
}

/// Per-run reconstruction diagnostics.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Diagnostics {
    pub clamped: usize,
    pub masked_bins: usize,
    /// Propagation edges whose correlation modulus fell below
    /// delta0^2 / 2; their phase is still used but flagged.
    pub unreliable_edges: usize,
}

/// Estimate plus the island structure it was propagated over. Entries
/// outside the island vertex set are exactly zero, and each island's
/// phase is only determined up to one unimodular factor.
#[derive(Debug, Clone)]
pub struct ReconstructionResult<S: Scalar> {
    pub estimate: ComplexSignal<S>,
    pub islands: IslandGraph<S>,
    pub domain: Domain,
    pub diagnostics: Diagnostics,
}

impl<S: Scalar> ReconstructionResult<S> {
    /// Inverse DFT of the estimate; the identity map in the time domain.
    pub fn time_estimate(&self) -> ComplexSignal<S> {
        match self.domain {
            Domain::Time => self.estimate.clone(),
            Domain::Frequency => idft(&self.estimate),
        }
    }
}

fn check_sizes<S: Scalar>(m: &MeasurementGrid<S>, phi: &ComplexSignal<S>) -> Result<usize> {
    let l = m.l();
    if phi.len() != l {
        return Err(Error::DimensionMismatch(format!(
            "grid is {l}x{l}, window has length {}",
            phi.len()
        )));
    }
    Ok(l)
}

fn check_thresholds<S: Scalar>(delta0: S, delta1: S) -> Result<()> {
    if delta0 <= S::zero() || !delta0.is_finite() {
        return Err(Error::InvalidParameter("delta0 must be > 0".into()));
    }
    if delta1 <= S::zero() || !delta1.is_finite() {
        return Err(Error::InvalidParameter("delta1 must be > 0".into()));
    }
    Ok(())
}

/// Shared zero-shift deconvolution: divides `numerator(k)` by
/// `divisor(k)` where the divisor clears `delta1`, inverts the DFT and
/// reads off square roots of the (clamped) real parts.
fn magnitudes_from_quotient<S: Scalar>(
    l: usize,
    delta1: S,
    numerator: impl Fn(usize) -> Complex<S>,
    divisor: impl Fn(usize) -> Complex<S>,
) -> MagnitudeEstimate<S> {
    let zero = Complex::new(S::zero(), S::zero());
    let mut quotient = vec![zero; l];
    let mut masked_bins = 0usize;
    for (k, q) in quotient.iter_mut().enumerate() {
        let d = divisor(k);
        if d.norm() > delta1 {
            *q = numerator(k) / d;
        } else {
            masked_bins += 1;
        }
    }
    let sq = idft_slice(&quotient);
    let mut clamped = 0usize;
    let values = sq
        .iter()
        .map(|v| {
            if v.re < S::zero() {
                clamped += 1;
                S::zero()
            } else {
                v.re.sqrt()
            }
        })
        .collect();
    MagnitudeEstimate {
        values,
        clamped,
        masked_bins,
    }
}

/// Recovers |x| from the measurements: `dft2(M)(k, 0)` equals
/// `F[|x|^2](k) conj(F[|phi|^2](k))`, so dividing where the window factor
/// exceeds `delta1` and inverting the DFT yields |x|^2 on the safe bins.
pub fn retrieve_magnitudes<S: Scalar>(
    m: &MeasurementGrid<S>,
    phi: &ComplexSignal<S>,
    delta1: S,
) -> Result<MagnitudeEstimate<S>> {
    let l = check_sizes(m, phi)?;
    if delta1 <= S::zero() || !delta1.is_finite() {
        return Err(Error::InvalidParameter("delta1 must be > 0".into()));
    }
    let fm = dft2_measurements(m);
    let phi_sq =
        ComplexSignal::new(phi.values().iter().map(|v| Complex::new(v.norm_sqr(), S::zero())).collect())?;
    let fp2 = dft(&phi_sq);
    Ok(magnitudes_from_quotient(
        l,
        delta1,
        |k| fm.get(k, 0),
        |k| fp2.at(k as i64).conj(),
    ))
}

/// Fourier-dual magnitude retrieval: recovers |F[x]| from
/// `dft2(M)(0, k) = F[|F[x]|^2](k) conj(F[|F[phi]|^2](k))`.
pub fn retrieve_spectrum_magnitudes<S: Scalar>(
    m: &MeasurementGrid<S>,
    phi: &ComplexSignal<S>,
    delta1: S,
) -> Result<MagnitudeEstimate<S>> {
    let l = check_sizes(m, phi)?;
    if delta1 <= S::zero() || !delta1.is_finite() {
        return Err(Error::InvalidParameter("delta1 must be > 0".into()));
    }
    let fm = dft2_measurements(m);
    let phi_hat = dft(phi);
    let phi_hat_sq = ComplexSignal::new(
        phi_hat
            .values()
            .iter()
            .map(|v| Complex::new(v.norm_sqr(), S::zero()))
            .collect(),
    )?;
    let fp2 = dft(&phi_hat_sq);
    Ok(magnitudes_from_quotient(
        l,
        delta1,
        |k| fm.get(0, k),
        |k| fp2.at(k as i64).conj(),
    ))
}

/// BFS phase propagation. `edge(parent, vertex, step)` must return a
/// complex number whose argument estimates phase(vertex) - phase(parent);
/// its modulus gates the reliability flag at delta0^2 / 2.
fn propagate<S: Scalar>(
    islands: &IslandGraph<S>,
    magnitudes: &[S],
    delta0: S,
    mut edge: impl FnMut(usize, usize, i64) -> Complex<S>,
) -> Result<(ComplexSignal<S>, usize)> {
    let l = islands.l();
    let mut values = vec![Complex::new(S::zero(), S::zero()); l];
    let mut phases = vec![S::zero(); l];
    let mut unreliable = 0usize;
    let floor = delta0 * delta0 / S::from_f64_lit(2.0);
    for k in 0..islands.components().len() {
        for step in crate::graph::propagation_order(islands, k)? {
            let phase = match step.parent {
                None => S::zero(),
                Some(p) => {
                    let r = edge(p, step.vertex, step.step);
                    if r.norm() < floor {
                        unreliable += 1;
                    }
                    phases[p] + r.arg()
                }
            };
            phases[step.vertex] = phase;
            values[step.vertex] = Complex::from_polar(magnitudes[step.vertex], phase);
        }
    }
    Ok((ComplexSignal::new(values)?, unreliable))
}

/// Reconstruction from the ambiguity-function identity: recovers |x| by
/// deconvolution, builds the time island graph with the given reach, then
/// propagates phases along BFS trees using local correlations
/// G_sigma(n) = x(n) conj(x(n - sigma)) for sigma = 1..=reach+1.
pub fn reconstruct_time<S: Scalar>(
    m: &MeasurementGrid<S>,
    phi: &ComplexSignal<S>,
    delta0: S,
    delta1: S,
    reach: usize,
) -> Result<ReconstructionResult<S>> {
    check_sizes(m, phi)?;
    check_thresholds(delta0, delta1)?;
    let mags = retrieve_magnitudes(m, phi, delta1)?;
    let islands = build_graph(
        &[&mags.values],
        GraphParams {
            delta0,
            mode: GraphMode::Time,
            reach,
        },
    )?;
    let shifts: Vec<i64> = (1..=reach as i64 + 1).collect();
    let est = estimate_signal_ambiguity(m, phi, delta1, &shifts)?;
    let corr: Vec<LocalCorrelation<S>> = shifts
        .iter()
        .map(|&s| local_correlations(&est, s))
        .collect();
    let (estimate, unreliable_edges) = propagate(&islands, &mags.values, delta0, |u, v, s| {
        let g = &corr[s.unsigned_abs() as usize - 1];
        if s > 0 {
            // G_s(v) = x(v) conj(x(u))
            g.at(v as i64)
        } else {
            // conj(G_{-s}(u)) = conj(x(u)) x(v)
            g.at(u as i64).conj()
        }
    })?;
    Ok(ReconstructionResult {
        estimate,
        islands,
        domain: Domain::Time,
        diagnostics: Diagnostics {
            clamped: mags.clamped,
            masked_bins: mags.masked_bins,
            unreliable_edges,
        },
    })
}

/// Reconstruction for short-support windows via the autocorrelation
/// identity. With the window supported on the cyclic interval
/// [n0, n0 + step], row a - n0 of the measurements isolates the single
/// product x(a + step) conj(x(a)) at lag `step`, so phases propagate
/// along the window-step graph.
pub fn reconstruct_li<S: Scalar>(
    m: &MeasurementGrid<S>,
    phi: &ComplexSignal<S>,
    delta0: S,
    delta1: S,
) -> Result<ReconstructionResult<S>> {
    let l = check_sizes(m, phi)?;
    check_thresholds(delta0, delta1)?;
    let (n0, step) = window_support(phi, S::zero())?;
    if step == 0 {
        return Err(Error::InvalidParameter(
            "window support must contain at least two points".into(),
        ));
    }
    let lo = phi.at(n0 as i64);
    let hi = phi.at((n0 + step) as i64);
    if lo.norm() == S::zero() || hi.norm() == S::zero() {
        return Err(Error::DegenerateWindowEndpoints);
    }
    let denom = lo * hi.conj();
    let scale = S::from_f64_lit(l as f64).sqrt();

    let mags = retrieve_magnitudes(m, phi, delta1)?;
    let islands = build_graph(
        &[&mags.values],
        GraphParams {
            delta0,
            mode: GraphMode::WindowStep,
            reach: step,
        },
    )?;

    // cache the inverse DFT of each measurement row on demand
    let mut rows: Vec<Option<Vec<Complex<S>>>> = vec![None; l];
    let mut product_at = |a: usize| -> Complex<S> {
        // x(a + step) conj(x(a))
        let r = wrap(a as i64 - n0 as i64, l);
        if rows[r].is_none() {
            let row: Vec<Complex<S>> = m
                .row(r)
                .iter()
                .map(|&v| Complex::new(v, S::zero()))
                .collect();
            rows[r] = Some(idft_slice(&row));
        }
        rows[r].as_ref().unwrap()[step] * scale / denom
    };
    let (estimate, unreliable_edges) = propagate(&islands, &mags.values, delta0, |u, v, s| {
        if s > 0 {
            product_at(u)
        } else {
            product_at(v).conj()
        }
    })?;
    Ok(ReconstructionResult {
        estimate,
        islands,
        domain: Domain::Time,
        diagnostics: Diagnostics {
            clamped: mags.clamped,
            masked_bins: mags.masked_bins,
            unreliable_edges,
        },
    })
}

/// Fourier-dual reconstruction: recovers the signal's spectrum up to one
/// phase per frequency island, using the ambiguity function of the
/// window's spectrum as the divisor. The returned estimate lives in the
/// frequency domain.
pub fn reconstruct_freq<S: Scalar>(
    m: &MeasurementGrid<S>,
    phi: &ComplexSignal<S>,
    delta0: S,
    delta1: S,
    reach: usize,
) -> Result<ReconstructionResult<S>> {
    check_sizes(m, phi)?;
    check_thresholds(delta0, delta1)?;
    let mags = retrieve_spectrum_magnitudes(m, phi, delta1)?;
    let islands = build_graph(
        &[&mags.values],
        GraphParams {
            delta0,
            mode: GraphMode::Frequency,
            reach,
        },
    )?;
    let shifts: Vec<i64> = (1..=reach as i64 + 1).collect();
    let est = dual_estimate_ambiguity(m, phi, delta1, &shifts)?;
    let corr: Vec<LocalCorrelation<S>> = shifts
        .iter()
        .map(|&s| local_correlations(&est, s))
        .collect();
    let (estimate, unreliable_edges) = propagate(&islands, &mags.values, delta0, |u, v, s| {
        let g = &corr[s.unsigned_abs() as usize - 1];
        if s > 0 {
            g.at(v as i64)
        } else {
            g.at(u as i64).conj()
        }
    })?;
    Ok(ReconstructionResult {
        estimate,
        islands,
        domain: Domain::Frequency,
        diagnostics: Diagnostics {
            clamped: mags.clamped,
            masked_bins: mags.masked_bins,
            unreliable_edges,
        },
    })
}
