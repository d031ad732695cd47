//! Kernel values against a Gegenbauer series computed from scratch.

use zonal_core::kernels::{kernel_profile, lebesgue_estimate, KernelKind, LocalizedKernel, ReproducingKernel};
use zonal_core::probes::random_poles;
use zonal_core::quadrature::product_rule;

fn binom(n: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i as f64) / (i as f64 + 1.0))
}

/// `Σ_{ℓ<m} dim(H_ℓ^d) C_ℓ^λ(x) / C_ℓ^λ(1)` with `λ = (d−1)/2`.
fn gegenbauer_kernel(d: usize, m: usize, x: f64) -> f64 {
    let lambda = (d as f64 - 1.0) / 2.0;
    let mut c = vec![1.0, 2.0 * lambda * x];
    for n in 2..m {
        let nf = n as f64;
        let next = (2.0 * x * (nf + lambda - 1.0) * c[n - 1] - (nf + 2.0 * lambda - 2.0) * c[n - 2]) / nf;
        c.push(next);
    }
    (0..m)
        .map(|l| {
            let harmonics = binom((l + d) as f64, d) - if l >= 2 { binom((l + d - 2) as f64, d) } else { 0.0 };
            let at_one = binom(l as f64 + 2.0 * lambda - 1.0, l);
            harmonics * c[l] / at_one
        })
        .sum()
}

#[test]
fn reproducing_kernel_matches_gegenbauer_series() {
    for d in [2usize, 3, 5, 8] {
        for m in [1usize, 2, 3, 7, 12, 20] {
            let k = ReproducingKernel::new(d, m).unwrap();
            for i in 0..=40 {
                let x = -1.0 + i as f64 / 20.0;
                let a = k.eval(x);
                let b = gegenbauer_kernel(d, m, x);
                assert!((a - b).abs() <= 1e-11 * k.at_one(), "d={d} m={m} x={x}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn reproducing_property_on_product_rule() {
    // ∫ K_{d;m}(x·y) P(y) dν(y) = P(x) for P of degree < m
    let rule = product_rule(3, 12).unwrap();
    let k = ReproducingKernel::new(3, 4).unwrap();
    let p = |y: &[f64]| y[0] * y[1] * y[3] - 0.5 * y[2] * y[2] + y[1];
    for x in random_poles(3, 10, 42) {
        let v: f64 = rule.iter().map(|(y, w)| w * p(y) * k.eval(x.dot(y))).sum();
        assert!((v - p(x.coords())).abs() < 1e-11);
    }
}

#[test]
fn localized_kernel_tail_shrinks_with_n() {
    // sup_{θ ≥ 0.5} |Φ(cos θ)| / Φ(1)
    let mut prev = f64::INFINITY;
    for n in [4usize, 8, 16] {
        let k = LocalizedKernel::new(3, n, 2.0).unwrap();
        let tail = (0..400)
            .map(|i| (0.5 + i as f64 * (std::f64::consts::PI - 0.5) / 399.0).cos())
            .map(|x| k.phi(x).abs())
            .fold(0.0, f64::max)
            / k.at_one();
        assert!(tail < prev, "n={n}: {tail} vs {prev}");
        prev = tail;
    }
    assert!(prev < 1e-6);
}

#[test]
fn profile_peaks_at_one() {
    for (d, n, r) in [(2, 3, 1.0), (3, 4, 2.0), (6, 2, 0.5)] {
        let k = LocalizedKernel::new(d, n, r).unwrap();
        for kind in [KernelKind::Phi, KernelKind::PhiTilde] {
            let p = kernel_profile(&k, kind, 257).unwrap();
            let peak = p.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
            assert_eq!(peak, p.values[256].abs());
        }
    }
}

#[test]
fn lebesgue_constant_is_moderate() {
    let k = LocalizedKernel::new(2, 3, 1.0).unwrap();
    let rule = product_rule(2, k.required_order()).unwrap();
    let est = lebesgue_estimate(&k, &rule, 0.0, 32, 1).unwrap();
    assert!(est.value >= 1.0 - 1e-12 && est.value < 5.0, "{}", est.value);
    assert_eq!(est.probe_count, 32);
}
