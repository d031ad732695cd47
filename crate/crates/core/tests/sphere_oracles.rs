use proptest::prelude::*;
use std::f64::consts::PI;
use zonal_core::sphere::{cap_measure, dim_pi, lift, unlift, zonal_integral};

#[test]
fn cap_measure_closed_forms() {
    for i in 1..20 {
        let rho = 0.1 * i as f64;
        let theta = 2.0 * (rho / 2.0).asin();
        // S²: (1 − cos θ)/2; S³: (θ − sin θ cos θ)/π
        assert!((cap_measure(2, rho) - (1.0 - theta.cos()) / 2.0).abs() < 1e-14);
        assert!((cap_measure(3, rho) - (theta - theta.sin() * theta.cos()) / PI).abs() < 1e-14);
    }
}

#[test]
fn small_caps_scale_like_rho_to_the_d() {
    let ratios: Vec<f64> = (2..=10usize)
        .map(|d| {
            let rho = 0.1 / (d as f64).sqrt();
            cap_measure(d, rho) / ((d as f64).powf(-0.5) * rho.powi(d as i32))
        })
        .collect();
    let max = ratios.iter().cloned().fold(0.0, f64::max);
    let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(max / min < 4.0, "{ratios:?}");
}

#[test]
fn zonal_integrals_of_powers() {
    // ∫ t^2 dμ*_d = 1/(d+1), ∫ t^4 = 3/((d+1)(d+3))
    for d in 1..9usize {
        let df = d as f64;
        let two = zonal_integral(|t| t * t, d, 8, 1e-12).unwrap();
        let four = zonal_integral(|t| t.powi(4), d, 8, 1e-12).unwrap();
        assert!((two.value - 1.0 / (df + 1.0)).abs() < 1e-14);
        assert!((four.value - 3.0 / ((df + 1.0) * (df + 3.0))).abs() < 1e-14);
        assert!(!four.accuracy_warning);
    }
}

#[test]
fn dimension_counts_harmonics() {
    // dim Π_n^2 = n², dim Π_n^1 = 2n − 1
    for n in 1..30 {
        assert_eq!(dim_pi(2, n as f64), (n * n) as u128);
        assert_eq!(dim_pi(1, n as f64), (2 * n - 1) as u128);
    }
}

proptest! {
    #[test]
    fn lift_round_trip(x in prop::collection::vec(-50.0f64..50.0, 1..8)) {
        let u = lift(&x);
        let n: f64 = u.coords().iter().map(|c| c * c).sum();
        prop_assert!((n - 1.0).abs() < 1e-12);
        prop_assert!(u.coords()[x.len()] > 0.0);
        let back = unlift(&u).unwrap();
        for (a, b) in back.iter().zip(&x) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }
}
