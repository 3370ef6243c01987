//! Shared helpers for integration tests: an independent PRNG, direct-sum
//! oracles written with explicit loops, and island-wise comparison.
#![allow(dead_code)] // shared across test targets; each uses a subset

use num_complex::Complex;
use phaselab::reconstruct::ReconstructionResult;
use phaselab::signal::ComplexSignal;

/// Small deterministic generator, independent of the crate's RNG stack.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg(seed.wrapping_mul(2862933555777941757).wrapping_add(3037000493))
    }

    pub fn uniform(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn complex(&mut self) -> Complex<f64> {
        Complex::new(self.uniform() - 0.5, self.uniform() - 0.5)
    }

    pub fn signal(&mut self, l: usize) -> ComplexSignal<f64> {
        ComplexSignal::new((0..l).map(|_| self.complex()).collect()).unwrap()
    }

    /// Nowhere-vanishing signal with modulus in [floor, floor + 1).
    pub fn floor_signal(&mut self, l: usize, floor: f64) -> ComplexSignal<f64> {
        ComplexSignal::new(
            (0..l)
                .map(|_| {
                    Complex::from_polar(
                        floor + self.uniform(),
                        (self.uniform() - 0.5) * std::f64::consts::TAU,
                    )
                })
                .collect(),
        )
        .unwrap()
    }
}

/// Direct sum for the lag-domain identity: the inverse DFT of measurement
/// row m at lag n, computed without any FFT.
pub fn autocorr_oracle(
    x: &ComplexSignal<f64>,
    phi: &ComplexSignal<f64>,
    m: i64,
    n: i64,
) -> Complex<f64> {
    let l = x.len() as i64;
    let mut acc = Complex::new(0.0, 0.0);
    for ell in 0..l {
        acc += x.at(ell)
            * x.at(ell - n).conj()
            * phi.at(ell - n - m)
            * phi.at(ell - m).conj();
    }
    acc / (l as f64).sqrt()
}

/// Direct product of shift inner products for the ambiguity identity:
/// dft2 of the measurements at (m, n), computed without any FFT.
pub fn ambiguity_oracle(
    x: &ComplexSignal<f64>,
    phi: &ComplexSignal<f64>,
    m: i64,
    n: i64,
) -> Complex<f64> {
    let l = x.len() as i64;
    let tau = std::f64::consts::TAU;
    // (z, Pi_{(-n, m)} z) with the 1/sqrt(L) prefactor of the shift
    let shift_ip = |z: &ComplexSignal<f64>, conj_side: bool| {
        let mut acc = Complex::new(0.0, 0.0);
        for ell in 0..l {
            let phase = Complex::from_polar(1.0, tau * (ell * m) as f64 / l as f64);
            let shifted = z.at(ell + n) * phase / (l as f64).sqrt();
            if conj_side {
                acc += shifted * z.at(ell).conj();
            } else {
                acc += z.at(ell) * shifted.conj();
            }
        }
        acc
    };
    shift_ip(x, false) * shift_ip(phi, true)
}

/// Largest entrywise error between truth and estimate after aligning each
/// island with its optimal unimodular factor.
pub fn max_island_error(truth: &ComplexSignal<f64>, r: &ReconstructionResult<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for comp in r.islands.components() {
        let mut ip = Complex::new(0.0, 0.0);
        for &v in comp {
            ip += truth.at(v as i64) * r.estimate.at(v as i64).conj();
        }
        let f = if ip.norm() == 0.0 {
            Complex::new(1.0, 0.0)
        } else {
            Complex::from_polar(1.0, ip.arg())
        };
        for &v in comp {
            worst = worst.max((truth.at(v as i64) - f * r.estimate.at(v as i64)).norm());
        }
    }
    worst
}
