//! Window generators, two-bump test signals, seeded random signals and
//! measurement-noise injection.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::signal::{ComplexSignal, MeasurementGrid};
use crate::transforms::idft;
use crate::Scalar;

/// Window families. `None` parameters select the reference defaults
/// (centre L/2 and width L/32 for the Gaussian, support length 64 for
/// the compactly supported windows).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum WindowKind {
    Gaussian {
        center: Option<f64>,
        width: Option<f64>,
        /// Frequency offset in DFT bins (may be fractional); the window is
        /// multiplied by e^{2 pi i l modulation / L}. Defaults to 0.
        modulation: Option<f64>,
    },
    Hamming {
        support: Option<usize>,
    },
    Hann {
        support: Option<usize>,
    },
    Rectangular {
        support: Option<usize>,
    },
}

impl WindowKind {
    pub fn gaussian() -> Self {
        WindowKind::Gaussian {
            center: None,
            width: None,
            modulation: None,
        }
    }

    /// Gaussian with quarter-sample centre offset and quarter-bin
    /// modulation. A window whose modulus is symmetric about an integer
    /// sample (or whose spectrum is symmetric about an integer bin) has
    /// structurally vanishing ambiguity entries at the Nyquist column of
    /// every odd shift row; the quarter offsets bound all rows away from
    /// zero in both domains, which the deconvolution-based methods need.
    pub fn conditioned_gaussian(l: usize, width: f64) -> Self {
        WindowKind::Gaussian {
            center: Some(l as f64 / 2.0 + 0.25),
            width: Some(width),
            modulation: Some(0.25),
        }
    }
    pub fn hamming() -> Self {
        WindowKind::Hamming { support: None }
    }
    pub fn hann() -> Self {
        WindowKind::Hann { support: None }
    }
    pub fn rectangular() -> Self {
        WindowKind::Rectangular { support: None }
    }
}

fn support_len(support: Option<usize>, l: usize) -> Result<usize> {
    let s = support.unwrap_or(64);
    if s < 2 || s > l {
        return Err(Error::InvalidParameter(format!(
            "window support length {s} must be in 2..={l}"
        )));
    }
    Ok(s)
}

/// Real, nonnegative reference windows. The defaults at L = 1024
/// reproduce the standard examples: a Gaussian e^{-pi (l-512)^2 / 32^2}
/// and Hamming / Hann / rectangular windows on the prefix 0..=63.
pub fn make_window<S: Scalar>(kind: &WindowKind, l: usize) -> Result<ComplexSignal<S>> {
    if l < 2 {
        return Err(Error::InvalidParameter("L must be >= 2".into()));
    }
    let pi = std::f64::consts::PI;
    let values: Vec<f64> = match kind {
        WindowKind::Gaussian {
            center,
            width,
            modulation,
        } => {
            let c = center.unwrap_or(l as f64 / 2.0);
            let w = width.unwrap_or(l as f64 / 32.0);
            if !(w > 0.0) {
                return Err(Error::InvalidParameter("gaussian width must be > 0".into()));
            }
            let f = modulation.unwrap_or(0.0);
            if !f.is_finite() {
                return Err(Error::InvalidParameter(
                    "gaussian modulation must be finite".into(),
                ));
            }
            let values = (0..l)
                .map(|ell| {
                    let mag = (-pi * (ell as f64 - c).powi(2) / (w * w)).exp();
                    let phase = 2.0 * pi * ell as f64 * f / l as f64;
                    Complex::from_polar(S::from_f64_lit(mag), S::from_f64_lit(phase))
                })
                .collect();
            return ComplexSignal::new(values);
        }
        WindowKind::Hamming { support } => {
            let s = support_len(*support, l)?;
            (0..l)
                .map(|ell| {
                    if ell < s {
                        25.0 / 46.0
                            - 21.0 / 46.0 * (2.0 * pi * ell as f64 / (s - 1) as f64).cos()
                    } else {
                        0.0
                    }
                })
                .collect()
        }
        WindowKind::Hann { support } => {
            let s = support_len(*support, l)?;
            (0..l)
                .map(|ell| {
                    if ell < s {
                        0.5 - 0.5 * (2.0 * pi * ell as f64 / (s - 1) as f64).cos()
                    } else {
                        0.0
                    }
                })
                .collect()
        }
        WindowKind::Rectangular { support } => {
            let s = support_len(*support, l)?;
            (0..l).map(|ell| if ell < s { 1.0 } else { 0.0 }).collect()
        }
    };
    ComplexSignal::from_re(&values.iter().map(|&v| S::from_f64_lit(v)).collect::<Vec<_>>())
}

/// Sign of the second bump in [`two_bump`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BumpSign {
    Plus,
    Minus,
}

/// Samples g((t - lambda)/width) +- g((t + lambda)/width), g(t) = e^{-pi t^2},
/// on the symmetric grid t_l = T (2l - L) / L over [-T, T).
///
/// `half_range` fixes T explicitly (needed when comparing several lambda
/// values on one grid); by default T = lambda + 3.5 width, which pushes
/// the bumps below 1e-12 at the boundary.
pub fn two_bump<S: Scalar>(
    l: usize,
    lambda: f64,
    sign: BumpSign,
    width: f64,
    half_range: Option<f64>,
) -> Result<ComplexSignal<S>> {
    if l < 2 {
        return Err(Error::InvalidParameter("L must be >= 2".into()));
    }
    if lambda < 0.0 || !(width > 0.0) {
        return Err(Error::InvalidParameter(
            "two_bump needs lambda >= 0 and width > 0".into(),
        ));
    }
    let t_max = half_range.unwrap_or(lambda + 3.5 * width);
    if !(t_max > 0.0) {
        return Err(Error::InvalidParameter("half_range must be > 0".into()));
    }
    let pi = std::f64::consts::PI;
    let bump = |u: f64| (-pi * u * u / (width * width)).exp();
    let s = match sign {
        BumpSign::Plus => 1.0,
        BumpSign::Minus => -1.0,
    };
    let values: Vec<f64> = (0..l)
        .map(|ell| {
            let t = t_max * (2.0 * ell as f64 - l as f64) / l as f64;
            bump(t - lambda) + s * bump(t + lambda)
        })
        .collect();
    ComplexSignal::from_re(&values.iter().map(|&v| S::from_f64_lit(v)).collect::<Vec<_>>())
}

/// Structural constraints for [`random_signal`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "profile")]
pub enum Profile {
    /// Every entry has modulus in [floor, floor + 1).
    Floor { floor: f64 },
    /// Exact zeros on the cyclic run start..start+len, floor profile elsewhere.
    Gap {
        floor: f64,
        start: usize,
        len: usize,
    },
    /// Spectrum supported (with a floor) on the cyclic band start..start+len.
    BandLimited {
        floor: f64,
        start: usize,
        len: usize,
    },
}

/// Deterministic random signal for a given seed, satisfying the profile.
pub fn random_signal<S: Scalar>(l: usize, seed: u64, profile: &Profile) -> Result<ComplexSignal<S>> {
    if l < 2 {
        return Err(Error::InvalidParameter("L must be >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entry = |rng: &mut ChaCha8Rng, floor: f64| {
        let mag = floor + rng.gen::<f64>();
        let phase = (rng.gen::<f64>() - 0.5) * std::f64::consts::TAU;
        let v = Complex::from_polar(mag, phase);
        Complex::new(S::from_f64_lit(v.re), S::from_f64_lit(v.im))
    };
    match profile {
        Profile::Floor { floor } => {
            if *floor < 0.0 {
                return Err(Error::InconsistentProfile("floor must be >= 0".into()));
            }
            ComplexSignal::new((0..l).map(|_| entry(&mut rng, *floor)).collect())
        }
        Profile::Gap { floor, start, len } => {
            if *floor < 0.0 {
                return Err(Error::InconsistentProfile("floor must be >= 0".into()));
            }
            if *len >= l {
                return Err(Error::InconsistentProfile(format!(
                    "gap of length {len} leaves no support in a length-{l} signal"
                )));
            }
            let zero = Complex::new(S::zero(), S::zero());
            let in_gap: Vec<bool> = {
                let mut b = vec![false; l];
                for k in 0..*len {
                    b[(start + k) % l] = true;
                }
                b
            };
            ComplexSignal::new(
                (0..l)
                    .map(|i| {
                        if in_gap[i] {
                            zero
                        } else {
                            entry(&mut rng, *floor)
                        }
                    })
                    .collect(),
            )
        }
        Profile::BandLimited { floor, start, len } => {
            if *floor < 0.0 {
                return Err(Error::InconsistentProfile("floor must be >= 0".into()));
            }
            if *len == 0 || *len > l {
                return Err(Error::InconsistentProfile(format!(
                    "band length {len} must be in 1..={l}"
                )));
            }
            let zero = Complex::new(S::zero(), S::zero());
            let in_band: Vec<bool> = {
                let mut b = vec![false; l];
                for k in 0..*len {
                    b[(start + k) % l] = true;
                }
                b
            };
            let spectrum = ComplexSignal::new(
                (0..l)
                    .map(|i| {
                        if in_band[i] {
                            entry(&mut rng, *floor)
                        } else {
                            zero
                        }
                    })
                    .collect(),
            )?;
            Ok(idft(&spectrum))
        }
    }
}

/// Noise model for [`add_noise`]. Noise perturbs measurements, not
/// signals, because the stability bounds are stated in the Frobenius
/// distance of measurement grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseModel {
    AdditiveGaussian,
    Relative,
}

/// Perturbs a measurement grid, clamping entries at zero. Returns the
/// perturbed grid and the realized Frobenius gap to the input.
pub fn add_noise<S: Scalar>(
    m: &MeasurementGrid<S>,
    level: f64,
    model: NoiseModel,
    seed: u64,
) -> Result<(MeasurementGrid<S>, S)> {
    if level < 0.0 {
        return Err(Error::InvalidParameter("noise level must be >= 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = m.l();
    let mut gap_sq = 0.0f64;
    let mut entries = Vec::with_capacity(l * l);
    for &v in m.entries() {
        let v64: f64 = num_traits::ToPrimitive::to_f64(&v).unwrap_or(0.0);
        let n: f64 = rng.sample(StandardNormal);
        let perturbed = match model {
            NoiseModel::AdditiveGaussian => v64 + level * n,
            NoiseModel::Relative => v64 * (1.0 + level * n),
        };
        let clamped = perturbed.max(0.0);
        gap_sq += (clamped - v64) * (clamped - v64);
        entries.push(S::from_f64_lit(clamped));
    }
    Ok((
        MeasurementGrid::new(l, entries)?,
        S::from_f64_lit(gap_sq.sqrt()),
    ))
}
