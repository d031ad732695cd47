//! Quadrature rules against closed-form sphere moments.

use proptest::prelude::*;
use zonal_core::quadrature::{
    budget_to_degree, mz_norm_estimate, product_rule, random_design, tchakaloff_sparsify, verify_exactness, QuadratureRule,
};
use zonal_core::sphere::dim_pi;

fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `∫ Π y_i^{2 a_i} dμ*_d` from the Dirichlet integral.
fn even_moment(d: usize, exponents: &[usize]) -> f64 {
    let total: usize = exponents.iter().sum();
    let mut ln = ln_gamma((d as f64 + 1.0) / 2.0) - ln_gamma((d as f64 + 1.0) / 2.0 + total as f64);
    for &a in exponents {
        ln += ln_gamma(a as f64 + 0.5) - ln_gamma(0.5);
    }
    ln.exp()
}

/// All exponent vectors of length `len` with entries summing to at most `max`.
fn exponent_vectors(len: usize, max: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..=max {
        for mut rest in exponent_vectors(len - 1, max - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[test]
fn product_rules_integrate_monomials() {
    for (d, order) in [(1usize, 9usize), (2, 10), (3, 8), (4, 6)] {
        let rule = product_rule(d, order).unwrap();
        for e in exponent_vectors(d + 1, order) {
            let value = rule.integrate(|y| y.iter().zip(&e).map(|(c, &k)| c.powi(k as i32)).product());
            let expected = if e.iter().all(|k| k % 2 == 0) {
                let half: Vec<usize> = e.iter().map(|k| k / 2).collect();
                even_moment(d, &half)
            } else {
                0.0
            };
            assert!((value - expected).abs() < 1e-13, "d={d} exps={e:?}: {value} vs {expected}");
        }
    }
}

#[test]
fn exactness_verified_and_out_of_order_probe_is_reported() {
    let rule = product_rule(2, 10).unwrap();
    assert!(verify_exactness(&rule, 20, 7).unwrap() < 1e-12);
    // above the declared order the rule is not exact; the residual is merely reported
    let over = zonal_core::quadrature::exactness_residual(&rule, 20, &zonal_core::probes::random_poles(2, 5, 1)).unwrap();
    assert!(over.is_finite());
}

#[test]
fn tchakaloff_on_the_two_sphere() {
    for target in [4usize, 8] {
        let input = product_rule(2, 2 * target).unwrap();
        let out = tchakaloff_sparsify(&input, target).unwrap();
        let dim = dim_pi(2, target as f64) as usize;
        assert!(out.rule.len() <= dim, "{} > {dim}", out.rule.len());
        assert!(out.rule.weights().iter().all(|&w| w >= 0.0));
        assert!(out.residual < 1e-6);
        assert!(verify_exactness(&out.rule, 20, 3).unwrap() < 1e-6);
        // support is a subset of the input support
        for (y, _) in out.rule.iter() {
            assert!((0..input.len()).any(|k| input.point(k) == y));
        }
    }
}

#[test]
fn tchakaloff_fixed_point() {
    let minimal = tchakaloff_sparsify(&product_rule(2, 8).unwrap(), 4).unwrap().rule;
    let again = tchakaloff_sparsify(&minimal, 4).unwrap().rule;
    assert_eq!(minimal.flat_points(), again.flat_points());
    assert_eq!(minimal.weights(), again.weights());
}

#[test]
fn budget_to_degree_matches_direct_arithmetic() {
    for (m, expected) in [(1_000u64, 2usize), (10_000, 3), (100_000, 4)] {
        assert_eq!(budget_to_degree(m, 2.0, 2), expected);
    }
}

#[test]
fn random_design_moments() {
    let m = 1000;
    let design = random_design(2, m, 2024, None).unwrap();
    let mean3: f64 = design.points().map(|y| y[2]).sum::<f64>() / m as f64;
    let second1: f64 = design.points().map(|y| y[0] * y[0]).sum::<f64>() / m as f64;
    assert!(mean3.abs() < 3.3 / (m as f64).sqrt());
    assert!((second1 - 1.0 / 3.0).abs() < 5.0 / (m as f64).sqrt());
}

fn assert_unit_points(rule: &QuadratureRule) {
    for (y, _) in rule.iter() {
        let n: f64 = y.iter().map(|c| c * c).sum();
        assert!((n - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn constructed_rules_are_exact(d in 1usize..5, order in 1usize..9) {
        let rule = product_rule(d, order).unwrap();
        assert_unit_points(&rule);
        prop_assert!((rule.weight_sum() - 1.0).abs() < 1e-10);
        prop_assert!(rule.is_positive());
        prop_assert!(verify_exactness(&rule, 10, order as u64).unwrap() < 1e-8);
        prop_assert_eq!(mz_norm_estimate(&rule, order, 5, 0).unwrap(), 1.0);
    }

    #[test]
    fn sparsified_rules_respect_tchakaloff_bound(target in 1usize..6) {
        let input = product_rule(2, 2 * target + 1).unwrap();
        let out = tchakaloff_sparsify(&input, target).unwrap();
        prop_assert!(out.rule.len() <= dim_pi(2, target as f64) as usize);
        prop_assert!(out.rule.weights().iter().all(|&w| w >= 0.0));
    }

    #[test]
    fn designs_are_seeded_and_unit(d in 1usize..8, m in 1usize..200, seed in any::<u64>()) {
        let a = random_design(d, m, seed, None).unwrap();
        prop_assert_eq!(&a, &random_design(d, m, seed, None).unwrap());
        prop_assert_eq!(a.len(), m);
        for y in a.points() {
            prop_assert_eq!(y.len(), d + 1);
            prop_assert!((y.iter().map(|c| c * c).sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
