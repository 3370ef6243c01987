//! Periodically indexed signals and square measurement grids.
//!
//! Every index access reduces mod `L`, so negative and out-of-range
//! indices are valid everywhere. Grids are stored row-major with row =
//! time shift `m` and column = frequency bin `n`; that mapping is part
//! of the public contract.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::Scalar;

/// Reduces an arbitrary integer index into `0..l`.
#[inline]
pub fn wrap(index: i64, l: usize) -> usize {
    index.rem_euclid(l as i64) as usize
}

/// A length-`L` complex vector with periodic (mod `L`) indexing.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSignal<S: Scalar> {
    values: Vec<Complex<S>>,
}

impl<S: Scalar> ComplexSignal<S> {
    pub fn new(values: Vec<Complex<S>>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "signal length must be >= 2, got {}",
                values.len()
            )));
        }
        if !values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite("signal"));
        }
        Ok(Self { values })
    }

    pub fn from_re_im(re: &[S], im: &[S]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::DimensionMismatch(format!(
                "re has length {}, im has length {}",
                re.len(),
                im.len()
            )));
        }
        Self::new(
            re.iter()
                .zip(im)
                .map(|(&r, &i)| Complex::new(r, i))
                .collect(),
        )
    }

    /// All-real signal.
    pub fn from_re(re: &[S]) -> Result<Self> {
        Self::new(re.iter().map(|&r| Complex::new(r, S::zero())).collect())
    }

    pub fn zeros(l: usize) -> Result<Self> {
        Self::new(vec![Complex::new(S::zero(), S::zero()); l])
    }

    /// Unit impulse at index `at` (mod `L`).
    pub fn impulse(l: usize, at: i64) -> Result<Self> {
        let mut v = vec![Complex::new(S::zero(), S::zero()); l];
        if l >= 2 {
            v[wrap(at, l)] = Complex::new(S::one(), S::zero());
        }
        Self::new(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Entry at an arbitrary integer index, reduced mod `L`.
    #[inline]
    pub fn at(&self, index: i64) -> Complex<S> {
        self.values[wrap(index, self.len())]
    }

    #[inline]
    pub fn values(&self) -> &[Complex<S>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex<S>> {
        self.values
    }

    pub fn magnitudes(&self) -> Vec<S> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn norm(&self) -> S {
        self.values
            .iter()
            .fold(S::zero(), |acc, v| acc + v.norm_sqr())
            .sqrt()
    }

    pub fn inf_norm(&self) -> S {
        self.values
            .iter()
            .fold(S::zero(), |acc, v| acc.max(v.norm()))
    }

    /// Multiplies every entry by `e^{i alpha}`.
    pub fn rotated(&self, alpha: S) -> Self {
        let f = Complex::from_polar(S::one(), alpha);
        Self {
            values: self.values.iter().map(|v| v * f).collect(),
        }
    }

    /// Cyclic rotation: output(l) = input(l - by).
    pub fn cyclic_shift(&self, by: i64) -> Self {
        let l = self.len();
        Self {
            values: (0..l as i64).map(|i| self.at(i - by)).collect(),
        }
    }
}

/// Standard inner product on C^L, conjugate-linear in the second argument.
pub fn inner_product<S: Scalar>(x: &ComplexSignal<S>, y: &ComplexSignal<S>) -> Complex<S> {
    debug_assert_eq!(x.len(), y.len());
    x.values()
        .iter()
        .zip(y.values())
        .fold(Complex::new(S::zero(), S::zero()), |acc, (a, b)| {
            acc + a * b.conj()
        })
}

/// An `L x L` nonnegative real grid of spectrogram values.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementGrid<S: Scalar> {
    l: usize,
    entries: Vec<S>,
}

impl<S: Scalar> MeasurementGrid<S> {
    pub fn new(l: usize, entries: Vec<S>) -> Result<Self> {
        if entries.len() != l * l {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for an {l}x{l} grid, got {}",
                l * l,
                entries.len()
            )));
        }
        if !entries.iter().all(|v| v.is_finite() && *v >= S::zero()) {
            return Err(Error::NonFinite("measurement grid (entries must be finite and >= 0)"));
        }
        Ok(Self { l, entries })
    }

    pub fn zeros(l: usize) -> Self {
        Self {
            l,
            entries: vec![S::zero(); l * l],
        }
    }

    #[inline]
    pub fn l(&self) -> usize {
        self.l
    }

    #[inline]
    pub fn get(&self, m: usize, n: usize) -> S {
        self.entries[m * self.l + n]
    }

    /// Periodic access.
    #[inline]
    pub fn at(&self, m: i64, n: i64) -> S {
        self.get(wrap(m, self.l), wrap(n, self.l))
    }

    pub fn row(&self, m: usize) -> &[S] {
        &self.entries[m * self.l..(m + 1) * self.l]
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn frobenius_norm(&self) -> S {
        self.entries
            .iter()
            .fold(S::zero(), |acc, v| acc + *v * *v)
            .sqrt()
    }
}

/// Frobenius distance between two grids of equal dimension.
pub fn frobenius_distance<S: Scalar>(
    a: &MeasurementGrid<S>,
    b: &MeasurementGrid<S>,
) -> Result<S> {
    if a.l() != b.l() {
        return Err(Error::DimensionMismatch(format!(
            "grids have sizes {} and {}",
            a.l(),
            b.l()
        )));
    }
    Ok(a.entries
        .iter()
        .zip(&b.entries)
        .fold(S::zero(), |acc, (&x, &y)| {
            let d = x - y;
            acc + d * d
        })
        .sqrt())
}

/// An `L x L` complex grid (Gabor transforms, 2D Fourier transforms).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGrid<S: Scalar> {
    l: usize,
    entries: Vec<Complex<S>>,
}

impl<S: Scalar> ComplexGrid<S> {
    pub fn new(l: usize, entries: Vec<Complex<S>>) -> Result<Self> {
        if entries.len() != l * l {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for an {l}x{l} grid, got {}",
                l * l,
                entries.len()
            )));
        }
        if !entries
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
        {
            return Err(Error::NonFinite("complex grid"));
        }
        Ok(Self { l, entries })
    }

    pub fn zeros(l: usize) -> Self {
        Self {
            l,
            entries: vec![Complex::new(S::zero(), S::zero()); l * l],
        }
    }

    #[inline]
    pub fn l(&self) -> usize {
        self.l
    }

    #[inline]
    pub fn get(&self, m: usize, n: usize) -> Complex<S> {
        self.entries[m * self.l + n]
    }

    #[inline]
    pub fn set(&mut self, m: usize, n: usize, v: Complex<S>) {
        self.entries[m * self.l + n] = v;
    }

    /// Periodic access.
    #[inline]
    pub fn at(&self, m: i64, n: i64) -> Complex<S> {
        self.get(wrap(m, self.l), wrap(n, self.l))
    }

    pub fn row(&self, m: usize) -> &[Complex<S>] {
        &self.entries[m * self.l..(m + 1) * self.l]
    }

    pub fn row_mut(&mut self, m: usize) -> &mut [Complex<S>] {
        &mut self.entries[m * self.l..(m + 1) * self.l]
    }

    pub fn entries(&self) -> &[Complex<S>] {
        &self.entries
    }

    pub fn frobenius_norm(&self) -> S {
        self.entries
            .iter()
            .fold(S::zero(), |acc, v| acc + v.norm_sqr())
            .sqrt()
    }

    /// Entrywise squared modulus.
    pub fn to_measurements(&self) -> MeasurementGrid<S> {
        MeasurementGrid {
            l: self.l,
            entries: self.entries.iter().map(|v| v.norm_sqr()).collect(),
        }
    }
}

impl<S: Scalar> From<&MeasurementGrid<S>> for ComplexGrid<S> {
    fn from(m: &MeasurementGrid<S>) -> Self {
        Self {
            l: m.l,
            entries: m
                .entries
                .iter()
                .map(|&v| Complex::new(v, S::zero()))
                .collect(),
        }
    }
}
