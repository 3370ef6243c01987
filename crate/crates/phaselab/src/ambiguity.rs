//! The two measurement identities and the thresholded deconvolution that
//! recovers a signal's ambiguity data from its spectrogram.
//!
//! Row m of the measurements, inverse-transformed, is the autocorrelation
//! of the windowed signal x_m (the lag-domain identity). The full 2D
//! Fourier transform of the measurements factors into the ambiguity
//! function of the signal times the ambiguity function of the window
//! (the ambiguity identity); dividing where the window factor is safely
//! above a threshold recovers the signal's ambiguity entries, all other
//! entries are zero-filled and flagged in the mask.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::signal::{wrap, ComplexGrid, ComplexSignal, MeasurementGrid};
use crate::transforms::{dft, dft2_measurements, dgt, idft_slice};
use crate::Scalar;

/// L x L grid of ambiguity values A(m, n) = (x, shift(x, m, n)), with a
/// reliability mask. Masked-out entries are stored as zero; consumers must
/// consult the mask.
#[derive(Debug, Clone)]
pub struct AmbiguityGrid<S: Scalar> {
    entries: ComplexGrid<S>,
    mask: Vec<bool>,
}

impl<S: Scalar> AmbiguityGrid<S> {
    pub fn l(&self) -> usize {
        self.entries.l()
    }

    /// Periodic access to the stored value (zero when masked out).
    pub fn at(&self, m: i64, n: i64) -> Complex<S> {
        self.entries.at(m, n)
    }

    /// True when the entry is reliable.
    pub fn reliable(&self, m: i64, n: i64) -> bool {
        let l = self.l();
        self.mask[wrap(m, l) * l + wrap(n, l)]
    }

    pub fn row(&self, m: i64) -> &[Complex<S>] {
        self.entries.row(wrap(m, self.l()))
    }

    pub fn row_reliable(&self, m: i64) -> bool {
        let l = self.l();
        let m = wrap(m, l);
        self.mask[m * l..(m + 1) * l].iter().all(|&b| b)
    }

    pub fn entries(&self) -> &ComplexGrid<S> {
        &self.entries
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }
}

/// Exact ambiguity function of a signal: A(m, n) = (x, shift(x, m, n)),
/// computed as the DGT of the signal with itself. All entries reliable.
pub fn ambiguity<S: Scalar>(x: &ComplexSignal<S>) -> AmbiguityGrid<S> {
    let entries = dgt(x, x).expect("signal windows itself");
    let mask = vec![true; x.len() * x.len()];
    AmbiguityGrid { entries, mask }
}

/// Inverse DFT of measurement row m: the autocorrelation of the windowed
/// signal x_m, scaled by 1/sqrt(L).
pub fn autocorr_slice<S: Scalar>(
    m: &MeasurementGrid<S>,
    row: usize,
) -> Result<Vec<Complex<S>>> {
    if row >= m.l() {
        return Err(Error::IndexOutOfRange(format!(
            "row {row} of an {}x{} grid",
            m.l(),
            m.l()
        )));
    }
    let complex_row: Vec<Complex<S>> = m
        .row(row)
        .iter()
        .map(|&v| Complex::new(v, S::zero()))
        .collect();
    Ok(idft_slice(&complex_row))
}

/// Local correlation data G_sigma(n) = x(n) conj(x(n - sigma)), obtained
/// as the inverse DFT of one ambiguity row. `degraded` is set when any
/// entry of the source row was unreliable (the inverse DFT mixes the
/// whole row).
#[derive(Debug, Clone)]
pub struct LocalCorrelation<S: Scalar> {
    pub sigma: i64,
    pub values: Vec<Complex<S>>,
    pub degraded: bool,
}

impl<S: Scalar> LocalCorrelation<S> {
    pub fn at(&self, n: i64) -> Complex<S> {
        self.values[wrap(n, self.values.len())]
    }
}

/// Inverse DFT of ambiguity row sigma.
pub fn local_correlations<S: Scalar>(a: &AmbiguityGrid<S>, sigma: i64) -> LocalCorrelation<S> {
    LocalCorrelation {
        sigma,
        values: idft_slice(a.row(sigma)),
        degraded: !a.row_reliable(sigma),
    }
}

fn check_shifts(shifts: &[i64], l: usize) -> Result<()> {
    let half = (l / 2) as i64;
    for &s in shifts {
        if s < -half || s > half {
            return Err(Error::InvalidParameter(format!(
                "shift {s} outside -{half}..={half} for L = {l}"
            )));
        }
    }
    Ok(())
}

fn check_delta1<S: Scalar>(delta1: S) -> Result<()> {
    if delta1 <= S::zero() || !delta1.is_finite() {
        return Err(Error::InvalidParameter(
            "delta1 must be > 0 and finite".into(),
        ));
    }
    Ok(())
}

/// Shared deconvolution core. `numerator(sigma, ell)` supplies the 2D
/// transform entry carrying the product of ambiguities; `window_row` is
/// the window-ambiguity row at shift sigma (the divisor is its conjugate).
fn estimate_rows<S: Scalar>(
    l: usize,
    delta1: S,
    shifts: &[i64],
    window: &ComplexGrid<S>,
    numerator: impl Fn(usize, usize) -> Complex<S>,
) -> AmbiguityGrid<S> {
    let mut entries = ComplexGrid::zeros(l);
    let mut mask = vec![false; l * l];
    let zero = Complex::new(S::zero(), S::zero());
    let two_pi = S::PI() + S::PI();

    let mut positives: Vec<usize> = shifts.iter().map(|&s| s.unsigned_abs() as usize).collect();
    positives.sort_unstable();
    positives.dedup();

    for &sp in &positives {
        // positive-shift row by direct thresholded division
        let mut row_vals = vec![zero; l];
        let mut row_mask = vec![false; l];
        for ell in 0..l {
            let w = window.get(sp, ell);
            if w.norm() > delta1 {
                row_vals[ell] = numerator(sp, ell) / w.conj();
                row_mask[ell] = true;
            }
        }
        let wants_pos = shifts.contains(&(sp as i64));
        let sn = wrap(-(sp as i64), l);
        let wants_neg = sp != 0 && sn != sp && shifts.contains(&-(sp as i64));
        if wants_pos {
            for ell in 0..l {
                entries.set(sp, ell, row_vals[ell]);
                mask[sp * l + ell] = row_mask[ell];
            }
        }
        if wants_neg {
            // negative shifts via the conjugate-symmetry identity
            // A(-m, n) = conj(A(m, -n)) e^{2 pi i m n / L}
            for ell in 0..l {
                let ph = two_pi * S::from_f64_lit((sp * ell) as f64) / S::from_f64_lit(l as f64);
                let src = wrap(-(ell as i64), l);
                entries.set(sn, ell, row_vals[src].conj() * Complex::from_polar(S::one(), ph));
                mask[sn * l + ell] = row_mask[src];
            }
        }
    }
    AmbiguityGrid { entries, mask }
}

/// Recovers the signal's ambiguity entries from the measurements by
/// thresholded division with the window's ambiguity function.
///
/// For each shift sigma and frequency ell with window-ambiguity modulus
/// strictly above `delta1`, the estimate is
/// `dft2(M)(ell, -sigma mod L) / (shift-window factor)`; all other
/// entries are zero-filled and flagged unreliable. Negative shifts come
/// from the positive rows via conjugate symmetry.
pub fn estimate_signal_ambiguity<S: Scalar>(
    m: &MeasurementGrid<S>,
    phi: &ComplexSignal<S>,
    delta1: S,
    shifts: &[i64],
) -> Result<AmbiguityGrid<S>> {
    check_delta1(delta1)?;
    let l = m.l();
    if phi.len() != l {
        return Err(Error::DimensionMismatch(format!(
            "grid is {l}x{l}, window has length {}",
            phi.len()
        )));
    }
    check_shifts(shifts, l)?;
    let fm = dft2_measurements(m);
    let window = dgt(phi, phi)?;
    Ok(estimate_rows(l, delta1, shifts, &window, |sigma, ell| {
        fm.at(ell as i64, -(sigma as i64))
    }))
}

/// Fourier-dual estimate: recovers the ambiguity of the signal's spectrum
/// from `dft2(M)(sigma, ell)` divided by the ambiguity of the window's
/// spectrum, where the divisor modulus exceeds `delta1`.
pub fn dual_estimate_ambiguity<S: Scalar>(
    m: &MeasurementGrid<S>,
    phi: &ComplexSignal<S>,
    delta1: S,
    shifts: &[i64],
) -> Result<AmbiguityGrid<S>> {
    check_delta1(delta1)?;
    let l = m.l();
    if phi.len() != l {
        return Err(Error::DimensionMismatch(format!(
            "grid is {l}x{l}, window has length {}",
            phi.len()
        )));
    }
    check_shifts(shifts, l)?;
    let fm = dft2_measurements(m);
    let phi_hat = dft(phi);
    let window = dgt(&phi_hat, &phi_hat)?;
    Ok(estimate_rows(l, delta1, shifts, &window, |sigma, ell| {
        fm.get(sigma, ell)
    }))
}
