//! Unitary DFT, time-frequency shifts, the discrete Gabor transform and
//! the magnitude measurement map.
//!
//! Everything carries the 1/sqrt(L) prefactor: the 1D DFT and its inverse
//! are unitary, the 2D transform is the composition of two unitary 1D
//! DFTs (total prefactor 1/L), and the shift operator itself carries
//! 1/sqrt(L) so that `dgt(x, phi)(m, n) = inner_product(x, shift(phi, m, n))`
//! holds exactly. Any FFT backend output is rescaled to match.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::signal::{wrap, ComplexGrid, ComplexSignal, MeasurementGrid};
use crate::Scalar;

fn scale_by_inv_sqrt_l<S: Scalar>(buf: &mut [Complex<S>]) {
    let s = S::one() / S::from_f64_lit(buf.len() as f64).sqrt();
    for v in buf.iter_mut() {
        *v = v.scale(s);
    }
}

/// Unitary DFT: output(k) = L^{-1/2} sum_l x(l) e^{-2 pi i l k / L}.
pub fn dft<S: Scalar>(x: &ComplexSignal<S>) -> ComplexSignal<S> {
    let mut buf = x.values().to_vec();
    FftPlanner::new()
        .plan_fft_forward(buf.len())
        .process(&mut buf);
    scale_by_inv_sqrt_l(&mut buf);
    ComplexSignal::new(buf).expect("finite input stays finite")
}

/// Unitary inverse DFT.
pub fn idft<S: Scalar>(x: &ComplexSignal<S>) -> ComplexSignal<S> {
    let mut buf = x.values().to_vec();
    FftPlanner::new()
        .plan_fft_inverse(buf.len())
        .process(&mut buf);
    scale_by_inv_sqrt_l(&mut buf);
    ComplexSignal::new(buf).expect("finite input stays finite")
}

/// Unitary inverse DFT of a raw row (helper for grid rows).
pub fn idft_slice<S: Scalar>(row: &[Complex<S>]) -> Vec<Complex<S>> {
    let mut buf = row.to_vec();
    FftPlanner::new()
        .plan_fft_inverse(buf.len())
        .process(&mut buf);
    scale_by_inv_sqrt_l(&mut buf);
    buf
}

/// 2D DFT with total prefactor 1/L: two unitary 1D DFTs, separable, so the
/// axis order is immaterial.
pub fn dft2<S: Scalar>(grid: &ComplexGrid<S>) -> ComplexGrid<S> {
    let l = grid.l();
    let mut out = grid.clone();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(l);
    // rows: transform over the column index n'
    for m in 0..l {
        let row = out.row_mut(m);
        fft.process(row);
        scale_by_inv_sqrt_l(row);
    }
    // columns: transform over the row index m'
    let mut col = vec![Complex::new(S::zero(), S::zero()); l];
    for n in 0..l {
        for m in 0..l {
            col[m] = out.get(m, n);
        }
        fft.process(&mut col);
        scale_by_inv_sqrt_l(&mut col);
        for m in 0..l {
            out.set(m, n, col[m]);
        }
    }
    out
}

/// 2D DFT of a real measurement grid.
pub fn dft2_measurements<S: Scalar>(m: &MeasurementGrid<S>) -> ComplexGrid<S> {
    dft2(&ComplexGrid::from(m))
}

/// Time-frequency shift: output(l) = L^{-1/2} x(l - m) e^{2 pi i l n / L}.
///
/// Not unitary: the 1/sqrt(L) prefactor is part of the definition.
pub fn shift<S: Scalar>(x: &ComplexSignal<S>, m: i64, n: i64) -> ComplexSignal<S> {
    let l = x.len();
    let s = S::one() / S::from_f64_lit(l as f64).sqrt();
    let two_pi = S::PI() + S::PI();
    let values = (0..l as i64)
        .map(|ell| {
            let phase =
                two_pi * S::from_f64_lit(ell as f64) * S::from_f64_lit(wrap(n, l) as f64)
                    / S::from_f64_lit(l as f64);
            x.at(ell - m) * Complex::from_polar(s, phase)
        })
        .collect();
    ComplexSignal::new(values).expect("finite input stays finite")
}

/// Discrete Gabor transform, computed as L windowed unitary DFTs.
///
/// output(m, n) = L^{-1/2} sum_l x(l) conj(phi(l - m)) e^{-2 pi i l n / L},
/// stored row-major with row = m (time shift), column = n (frequency).
pub fn dgt<S: Scalar>(x: &ComplexSignal<S>, phi: &ComplexSignal<S>) -> Result<ComplexGrid<S>> {
    let l = x.len();
    if phi.len() != l {
        return Err(Error::DimensionMismatch(format!(
            "signal has length {l}, window has length {}",
            phi.len()
        )));
    }
    let mut out = ComplexGrid::zeros(l);
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(l);
    for m in 0..l {
        let row = out.row_mut(m);
        for (ell, slot) in row.iter_mut().enumerate() {
            *slot = x.at(ell as i64) * phi.at(ell as i64 - m as i64).conj();
        }
        fft.process(row);
        scale_by_inv_sqrt_l(row);
    }
    Ok(out)
}

/// Magnitude measurement map: entrywise squared modulus of the DGT.
pub fn measure<S: Scalar>(
    x: &ComplexSignal<S>,
    phi: &ComplexSignal<S>,
) -> Result<MeasurementGrid<S>> {
    Ok(dgt(x, phi)?.to_measurements())
}

pub use crate::signal::frobenius_distance;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::inner_product as ip;

    const TWO_PI: f64 = std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    /// Deterministic pseudo-random signal, independent of the rand crate.
    fn lcg_signal(l: usize, seed: u64) -> ComplexSignal<f64> {
        let mut s = seed.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        ComplexSignal::new((0..l).map(|_| c(next(), next())).collect()).unwrap()
    }

    fn naive_dft(x: &ComplexSignal<f64>) -> Vec<Complex<f64>> {
        let l = x.len();
        (0..l)
            .map(|k| {
                let mut acc = c(0.0, 0.0);
                for ell in 0..l {
                    let ph = -TWO_PI * (ell * k) as f64 / l as f64;
                    acc += x.at(ell as i64) * Complex::from_polar(1.0, ph);
                }
                acc / (l as f64).sqrt()
            })
            .collect()
    }

    fn naive_idft(x: &ComplexSignal<f64>) -> Vec<Complex<f64>> {
        let l = x.len();
        (0..l)
            .map(|ell| {
                let mut acc = c(0.0, 0.0);
                for k in 0..l {
                    let ph = TWO_PI * (ell * k) as f64 / l as f64;
                    acc += x.at(k as i64) * Complex::from_polar(1.0, ph);
                }
                acc / (l as f64).sqrt()
            })
            .collect()
    }

    fn assert_close(a: Complex<f64>, b: Complex<f64>, tol: f64) {
        assert!(
            (a - b).norm() < tol,
            "expected {b}, got {a} (|diff| = {})",
            (a - b).norm()
        );
    }

    #[test]
    fn dft_impulse_and_constant() {
        let x = ComplexSignal::<f64>::impulse(4, 0).unwrap();
        for v in dft(&x).values() {
            assert_close(*v, c(0.5, 0.0), 1e-12);
        }
        let ones = ComplexSignal::from_re(&[1.0; 4]).unwrap();
        let f = dft(&ones);
        assert_close(f.at(0), c(2.0, 0.0), 1e-12);
        for k in 1..4 {
            assert_close(f.at(k), c(0.0, 0.0), 1e-12);
        }
    }

    #[test]
    fn dft_matches_naive_sum() {
        let x = lcg_signal(8, 7);
        let fast = dft(&x);
        for (a, b) in fast.values().iter().zip(naive_dft(&x)) {
            assert_close(*a, b, 1e-12);
        }
    }

    #[test]
    fn idft_matches_naive_sum_and_inverts() {
        let x = lcg_signal(8, 9);
        for (a, b) in idft(&x).values().iter().zip(naive_idft(&x)) {
            assert_close(*a, b, 1e-12);
        }
        let x = lcg_signal(16, 3);
        for (a, b) in idft(&dft(&x)).values().iter().zip(x.values()) {
            assert_close(*a, *b, 1e-12);
        }
        for (a, b) in dft(&idft(&x)).values().iter().zip(x.values()) {
            assert_close(*a, *b, 1e-12);
        }
        let big = ComplexSignal::from_re(&[2.0, 0.0, 0.0, 0.0]).unwrap();
        for v in idft(&big).values() {
            assert_close(*v, c(1.0, 0.0), 1e-12);
        }
    }

    #[test]
    fn plancherel() {
        let x = lcg_signal(16, 11);
        let rel = (dft(&x).norm() - x.norm()).abs() / x.norm();
        assert!(rel < 1e-10);
    }

    #[test]
    fn dft2_constant_grid_and_plancherel() {
        let l = 8;
        let ones = MeasurementGrid::new(l, vec![1.0; l * l]).unwrap();
        let f = dft2_measurements(&ones);
        assert_close(f.get(0, 0), c(l as f64, 0.0), 1e-10);
        for m in 0..l {
            for n in 0..l {
                if (m, n) != (0, 0) {
                    assert_close(f.get(m, n), c(0.0, 0.0), 1e-10);
                }
            }
        }
        let g = MeasurementGrid::new(
            l,
            lcg_signal(l * l, 5).values().iter().map(|v| v.norm_sqr()).collect(),
        )
        .unwrap();
        let fg = dft2_measurements(&g);
        assert!((fg.frobenius_norm() - g.frobenius_norm()).abs() < 1e-10);
    }

    #[test]
    fn dft2_axis_order_is_immaterial() {
        let l = 8;
        let grid = ComplexGrid::new(l, lcg_signal(l * l, 13).values().to_vec()).unwrap();
        // column-then-row, against the implementation's row-then-column
        let mut alt = grid.clone();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(l);
        let mut col = vec![c(0.0, 0.0); l];
        for n in 0..l {
            for m in 0..l {
                col[m] = alt.get(m, n);
            }
            fft.process(&mut col);
            scale_by_inv_sqrt_l(&mut col);
            for m in 0..l {
                alt.set(m, n, col[m]);
            }
        }
        for m in 0..l {
            let row = alt.row_mut(m);
            fft.process(row);
            scale_by_inv_sqrt_l(row);
        }
        let direct = dft2(&grid);
        for m in 0..l {
            for n in 0..l {
                assert_close(direct.get(m, n), alt.get(m, n), 1e-12);
            }
        }
    }

    #[test]
    fn shift_examples() {
        let x = lcg_signal(8, 1);
        let s = shift(&x, 0, 0);
        for (a, b) in s.values().iter().zip(x.values()) {
            assert_close(*a, b / 8f64.sqrt(), 1e-12);
        }
        let e0 = ComplexSignal::<f64>::impulse(4, 0).unwrap();
        let t = shift(&e0, 1, 0);
        assert_close(t.at(1), c(0.5, 0.0), 1e-12);
        for k in [0, 2, 3] {
            assert_close(t.at(k), c(0.0, 0.0), 1e-12);
        }
    }

    #[test]
    fn shift_matches_dgt_inner_product() {
        let x = lcg_signal(8, 21);
        let grid = dgt(&x, &x).unwrap();
        for m in 0..8 {
            for n in 0..8 {
                assert_close(ip(&x, &shift(&x, m, n)), grid.get(m as usize, n as usize), 1e-12);
            }
        }
    }

    #[test]
    fn dgt_impulse_cases() {
        let l = 8;
        let phi = lcg_signal(l, 2);
        let e0 = ComplexSignal::<f64>::impulse(l, 0).unwrap();
        let v = dgt(&e0, &phi).unwrap();
        // x = e_0: output(m, n) = conj(phi(-m)) / sqrt(L), constant in n
        for m in 0..l {
            for n in 0..l {
                assert_close(
                    v.get(m, n),
                    phi.at(-(m as i64)).conj() / (l as f64).sqrt(),
                    1e-12,
                );
            }
        }
        // phi = e_0: output(m, n) = x(m) e^{-2 pi i m n / L} / sqrt(L)
        let x = lcg_signal(l, 4);
        let w = dgt(&x, &e0).unwrap();
        for m in 0..l {
            for n in 0..l {
                let ph = -TWO_PI * (m * n) as f64 / l as f64;
                assert_close(
                    w.get(m, n),
                    x.at(m as i64) * Complex::from_polar(1.0, ph) / (l as f64).sqrt(),
                    1e-12,
                );
            }
        }
    }

    #[test]
    fn dgt_matches_naive_triple_loop() {
        let l = 8;
        let x = lcg_signal(l, 31);
        let phi = lcg_signal(l, 32);
        let v = dgt(&x, &phi).unwrap();
        for m in 0..l {
            for n in 0..l {
                let mut acc = c(0.0, 0.0);
                for ell in 0..l {
                    let ph = -TWO_PI * (ell * n) as f64 / l as f64;
                    acc += x.at(ell as i64)
                        * phi.at(ell as i64 - m as i64).conj()
                        * Complex::from_polar(1.0, ph);
                }
                assert_close(v.get(m, n), acc / (l as f64).sqrt(), 1e-12);
            }
        }
    }

    #[test]
    fn dgt_rejects_length_mismatch() {
        let x = lcg_signal(8, 1);
        let phi = lcg_signal(4, 1);
        assert!(dgt(&x, &phi).is_err());
        assert!(measure(&x, &phi).is_err());
    }

    #[test]
    fn measure_global_phase_invariance_and_oracle() {
        let l = 8;
        let x = lcg_signal(l, 41);
        let phi = lcg_signal(l, 42);
        let m1 = measure(&x, &phi).unwrap();
        let m2 = measure(&x.rotated(std::f64::consts::PI / 7.0), &phi).unwrap();
        for i in 0..l {
            for j in 0..l {
                assert!((m1.get(i, j) - m2.get(i, j)).abs() < 1e-12);
            }
        }
        let v = dgt(&x, &phi).unwrap();
        for i in 0..l {
            for j in 0..l {
                assert!((m1.get(i, j) - v.get(i, j).norm_sqr()).abs() < 1e-12);
            }
        }
        // x = e_0: M(m, n) = |phi(-m)|^2 / L for all n
        let e0 = ComplexSignal::<f64>::impulse(l, 0).unwrap();
        let me = measure(&e0, &phi).unwrap();
        for m in 0..l {
            for n in 0..l {
                assert!(
                    (me.get(m, n) - phi.at(-(m as i64)).norm_sqr() / l as f64).abs() < 1e-12
                );
            }
        }
    }

    #[test]
    fn fourier_shift_covariance() {
        // dft(shift(x, -n, m)) = shift(dft(x), m, n) * e^{-2 pi i m n / L}
        let l = 8;
        let x = lcg_signal(l, 55);
        for m in 0..l as i64 {
            for n in 0..l as i64 {
                let lhs = dft(&shift(&x, -n, m));
                let rhs = shift(&dft(&x), m, n)
                    .rotated(-TWO_PI * (m * n) as f64 / l as f64);
                for (a, b) in lhs.values().iter().zip(rhs.values()) {
                    assert_close(*a, *b, 1e-12);
                }
            }
        }
    }

    #[test]
    fn f32_backend_agrees_with_f64() {
        let x64 = lcg_signal(16, 77);
        let x32 = ComplexSignal::<f32>::new(
            x64.values()
                .iter()
                .map(|v| Complex::new(v.re as f32, v.im as f32))
                .collect(),
        )
        .unwrap();
        for (a, b) in dft(&x32).values().iter().zip(dft(&x64).values()) {
            assert!((a.re as f64 - b.re).abs() < 1e-5);
            assert!((a.im as f64 - b.im).abs() < 1e-5);
        }
    }
}
