//! Property-based checks of the two measurement identities and the
//! transform conventions, against oracles written with explicit loops.

mod common;

use common::{ambiguity_oracle, autocorr_oracle, Lcg};
use num_complex::Complex;
use phaselab::ambiguity::{ambiguity, autocorr_slice};
use phaselab::signal::ComplexSignal;
use phaselab::transforms::{dft, dft2_measurements, idft, measure};
use proptest::prelude::*;

fn signal_strategy(l: usize) -> impl Strategy<Value = ComplexSignal<f64>> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), l).prop_map(|pairs| {
        ComplexSignal::new(
            pairs
                .into_iter()
                .map(|(re, im)| Complex::new(re, im))
                .collect(),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lag_identity_holds(l in prop::sample::select(vec![4usize, 6, 8, 12]),
                          seed in 0u64..1_000_000) {
        let mut rng = Lcg::new(seed);
        let x = rng.signal(l);
        let phi = rng.signal(l);
        let m = measure(&x, &phi).unwrap();
        for row in 0..l {
            let slice = autocorr_slice(&m, row).unwrap();
            for n in 0..l as i64 {
                let want = autocorr_oracle(&x, &phi, row as i64, n);
                prop_assert!((slice[n as usize] - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn ambiguity_identity_holds(l in prop::sample::select(vec![4usize, 6, 8, 12]),
                                seed in 0u64..1_000_000) {
        let mut rng = Lcg::new(seed);
        let x = rng.signal(l);
        let phi = rng.signal(l);
        let fm = dft2_measurements(&measure(&x, &phi).unwrap());
        for m in 0..l as i64 {
            for n in 0..l as i64 {
                let want = ambiguity_oracle(&x, &phi, m, n);
                prop_assert!((fm.at(m, n) - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn transforms_are_unitary(x in signal_strategy(16)) {
        let fx = dft(&x);
        prop_assert!((fx.norm() - x.norm()).abs() < 1e-10);
        let back = idft(&fx);
        for i in 0..16i64 {
            prop_assert!((back.at(i) - x.at(i)).norm() < 1e-10);
        }
    }

    #[test]
    fn ambiguity_conjugate_symmetry(x in signal_strategy(12)) {
        // A(-m, n) = conj(A(m, -n)) e^{2 pi i m n / L}
        let a = ambiguity(&x);
        let l = 12i64;
        for m in 0..l {
            for n in 0..l {
                let phase = Complex::from_polar(
                    1.0,
                    std::f64::consts::TAU * (m * n) as f64 / l as f64,
                );
                let want = a.at(m, -n).conj() * phase;
                prop_assert!((a.at(-m, n) - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn measurements_are_phase_invariant(x in signal_strategy(12), alpha in 0.0f64..6.28) {
        let phi = Lcg::new(7).signal(12);
        let a = measure(&x, &phi).unwrap();
        let b = measure(&x.rotated(alpha), &phi).unwrap();
        prop_assert!(phaselab::transforms::frobenius_distance(&a, &b).unwrap() < 1e-10);
    }
}
