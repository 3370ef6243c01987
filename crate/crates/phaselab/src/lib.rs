//! Phase retrieval of finite signals from discrete Gabor transform magnitudes.
//!
//! The measurements are the squared moduli of a windowed Fourier transform
//! (a spectrogram). This crate recovers the signal up to one unimodular
//! factor per "island" of large entries, using three phase-propagation
//! strategies driven by the ambiguity-function and autocorrelation
//! identities, and numerically certifies semi-global stability bounds on
//! concrete instances.
//!
//! Core math is generic over the scalar type (`f32` or `f64`) through the
//! [`Scalar`] trait; concrete `f64` aliases live at the crate root.

pub mod ambiguity;
pub mod error;
pub mod graph;
pub mod io;
pub mod reconstruct;
pub mod signal;
pub mod signals;
pub mod stability;
pub mod sweep;
pub mod transforms;

pub use error::{Error, Result};
pub use signal::{ComplexGrid, ComplexSignal, MeasurementGrid};

/// Scalar type the transforms are computed in: `f32` or `f64`.
pub trait Scalar: rustfft::FftNum + num_traits::Float + num_traits::FloatConst {
    /// Lossless-enough conversion from a literal or precomputed `f64`.
    fn from_f64_lit(v: f64) -> Self {
        num_traits::FromPrimitive::from_f64(v).expect("finite f64 converts")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

pub type Signal64 = ComplexSignal<f64>;
pub type Signal32 = ComplexSignal<f32>;
pub type Grid64 = MeasurementGrid<f64>;
pub type Grid32 = MeasurementGrid<f32>;
pub type CGrid64 = ComplexGrid<f64>;
pub type AmbiguityGrid64 = ambiguity::AmbiguityGrid<f64>;
pub type StabilityReport64 = stability::StabilityReport<f64>;
