//! Quadrature measures on `S^d`.
//!
//! Weights are normalized against the probability measure `μ*_d`, so an exact rule has
//! `Σ w_k = 1`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rand_distr::{Distribution, StandardNormal};

use crate::error::{param, Error, Result};
use crate::jacobi::{gauss_jacobi_rule, JacobiParams};
use crate::kernels::ReproducingKernel;
use crate::nnls::{nnls, ColMatrix};
use crate::probes::{probe_poles, uniform_point};
use crate::sphere::{dim_pi, dot, SpherePoint};

/// Default cap on the number of points a product rule may allocate.
pub const DEFAULT_POINT_CAP: u128 = 5_000_000;

/// Moment-matching tolerance of [`tchakaloff_sparsify`].
pub const SPARSIFY_TOLERANCE: f64 = 1e-6;

/// A discrete signed measure `ν = Σ w_k δ_{y_k}` on `S^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    d: usize,
    /// Row-major, `d + 1` coordinates per point.
    points: Vec<f64>,
    weights: Vec<f64>,
    order: usize,
    positive: bool,
    mz_norm: Option<f64>,
}

impl QuadratureRule {
    /// Builds a rule from flat coordinates. Points are renormalized; the positivity flag
    /// is derived from the weights.
    pub fn new(d: usize, mut points: Vec<f64>, weights: Vec<f64>, order: usize) -> Result<Self> {
        if d == 0 {
            return Err(param("d", 0.0, "sphere dimension must be >= 1"));
        }
        if points.len() != weights.len() * (d + 1) {
            return Err(Error::LengthMismatch {
                expected: weights.len() * (d + 1),
                found: points.len(),
            });
        }
        for p in points.chunks_mut(d + 1) {
            let norm = dot(p, p).sqrt();
            if !(norm.is_finite() && norm > 0.0) {
                return Err(Error::Input(alloc::format!("quadrature point with norm {norm}")));
            }
            if (norm - 1.0).abs() > 1e-15 {
                p.iter_mut().for_each(|c| *c /= norm);
            }
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::Input(alloc::format!("non-finite weight {w}")));
        }
        let positive = weights.iter().all(|&w| w >= 0.0);
        Ok(Self {
            d,
            points,
            weights,
            order,
            positive,
            mz_norm: None,
        })
    }

    /// The zero measure on `S^d`.
    pub fn empty(d: usize) -> Self {
        Self {
            d,
            points: Vec::new(),
            weights: Vec::new(),
            order: 0,
            positive: true,
            mz_norm: None,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Declared exactness order: the rule integrates `Π_order^d` exactly.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn mz_norm(&self) -> Option<f64> {
        self.mz_norm
    }

    pub fn set_mz_norm(&mut self, value: f64) {
        self.mz_norm = Some(value);
    }

    pub fn point(&self, k: usize) -> &[f64] {
        &self.points[k * (self.d + 1)..(k + 1) * (self.d + 1)]
    }

    pub fn flat_points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `(y_k, w_k)` pairs in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.points.chunks(self.d + 1).zip(self.weights.iter().copied())
    }

    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        self.iter().map(|(y, w)| w * f(y)).sum()
    }

    /// Copy with weight `k` replaced; the positivity flag is recomputed.
    pub fn with_weight(&self, k: usize, weight: f64) -> Self {
        let mut out = self.clone();
        out.weights[k] = weight;
        out.positive = out.weights.iter().all(|&w| w >= 0.0);
        out.mz_norm = None;
        out
    }
}

/// Number of points [`product_rule`] would allocate.
pub fn product_rule_size(d: usize, order: usize) -> u128 {
    let levels = ((order + 2) / 2) as u128;
    (order as u128 + 1) * levels.pow(d.saturating_sub(1) as u32)
}

/// Positive rule exact on `Π_order^d`, built down the recursion
/// `dμ*_d = (ω_{d-1}/ω_d) dμ*_{d-1}(x') sin^{d-1}θ dθ`: Gauss–Gegenbauer nodes in
/// `cos θ` at each level `k ≥ 2` and `order + 1` equispaced angles on `S¹`.
pub fn product_rule(d: usize, order: usize) -> Result<QuadratureRule> {
    product_rule_with_cap(d, order, DEFAULT_POINT_CAP)
}

pub fn product_rule_with_cap(d: usize, order: usize, cap: u128) -> Result<QuadratureRule> {
    if d == 0 {
        return Err(param("d", 0.0, "sphere dimension must be >= 1"));
    }
    if order == 0 {
        return Err(param("order", 0.0, "order must be >= 1"));
    }
    let requested = product_rule_size(d, order);
    if requested > cap {
        return Err(Error::Budget { requested, cap });
    }

    let circle = order + 1;
    let mut points = Vec::with_capacity(circle * 2);
    let mut weights = Vec::with_capacity(circle);
    for j in 0..circle {
        let theta = 2.0 * PI * j as f64 / circle as f64;
        points.push(theta.sin());
        points.push(theta.cos());
        weights.push(1.0 / circle as f64);
    }

    let levels = (order + 2) / 2;
    for k in 2..=d {
        let a = k as f64 / 2.0 - 1.0;
        let gauss = gauss_jacobi_rule(JacobiParams::new(a, a)?, levels)?;
        let mass: f64 = gauss.weights.iter().sum();
        let mut next_points = Vec::with_capacity(weights.len() * levels * (k + 1));
        let mut next_weights = Vec::with_capacity(weights.len() * levels);
        for (&t, &gw) in gauss.nodes.iter().zip(&gauss.weights) {
            let sin = (1.0 - t * t).max(0.0).sqrt();
            for (x, &w) in points.chunks(k).zip(&weights) {
                next_points.extend(x.iter().map(|c| c * sin));
                next_points.push(t);
                next_weights.push(w * gw / mass);
            }
        }
        points = next_points;
        weights = next_weights;
    }
    QuadratureRule::new(d, points, weights, order)
}

/// `max_pole |Σ_k w_k K_{d;m}(a·y_k) − 1|`: zero for a rule exact on `Π_m^d`.
pub fn exactness_residual(rule: &QuadratureRule, m: usize, poles: &[SpherePoint]) -> Result<f64> {
    let kernel = ReproducingKernel::new(rule.d(), m.max(1))?;
    Ok(poles
        .iter()
        .map(|a| {
            let s: f64 = rule.iter().map(|(y, w)| w * kernel.eval(a.dot(y))).sum();
            (s - 1.0).abs()
        })
        .fold(0.0, f64::max))
}

/// Maximum reproduction residual over `trials` random poles and random degrees
/// `m ∈ [1, order]`.
pub fn verify_exactness(rule: &QuadratureRule, trials: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = rule.order().max(1);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let m = 1 + (rng.next_u64() % order as u64) as usize;
        let pole = uniform_point(rule.d(), &mut rng);
        worst = worst.max(exactness_residual(rule, m, core::slice::from_ref(&pole))?);
    }
    Ok(worst)
}

/// A sparsified rule together with its moment residual.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsifiedRule {
    pub rule: QuadratureRule,
    /// `max_j |∫ φ_j dν_out − ∫ φ_j dν_in|` over the moment basis.
    pub residual: f64,
}

/// Extracts a positive rule supported on at most `dim Π_target^d` of the input points
/// with the same moments against `{1} ∪ {K_{d;target}(a_j ·)}`. The `dim` poles `a_j` are
/// a Halton set; poles drawn from the input support can sit on few latitude circles and
/// then fail to span `Π_target^d`. Solved by Lawson–Hanson NNLS.
pub fn tchakaloff_sparsify(rule: &QuadratureRule, target_order: usize) -> Result<SparsifiedRule> {
    if target_order == 0 {
        return Err(param("target_order", 0.0, "must be >= 1"));
    }
    let dim = dim_pi(rule.d(), target_order as f64) as usize;
    if rule.is_positive() && rule.len() <= dim {
        let mut out = rule.clone();
        out.order = target_order;
        return Ok(SparsifiedRule { rule: out, residual: 0.0 });
    }
    let kernel = ReproducingKernel::new(rule.d(), target_order)?;
    let poles = probe_poles(rule.d(), dim, 0);
    let rows = poles.len() + 1;
    let columns = (0..rule.len()).map(|k| {
        let y = rule.point(k);
        let mut col = Vec::with_capacity(rows);
        col.push(1.0);
        col.extend(poles.iter().map(|a| kernel.eval(a.dot(y))));
        col
    });
    let matrix = ColMatrix::from_columns(rows, columns);
    let moments = matrix.mul_vec(rule.weights());
    let solution = nnls(&matrix, &moments, 10 * dim);
    let achieved = matrix.mul_vec(&solution.x);
    let residual = achieved
        .iter()
        .zip(&moments)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if !(residual < SPARSIFY_TOLERANCE) {
        return Err(Error::Sparsification { residual });
    }
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for (k, &w) in solution.x.iter().enumerate() {
        if w > 0.0 {
            points.extend_from_slice(rule.point(k));
            weights.push(w);
        }
    }
    if weights.len() > dim {
        return Err(Error::Sparsification { residual });
    }
    let mut out = QuadratureRule::new(rule.d(), points, weights, target_order)?;
    out.mz_norm = Some(1.0);
    Ok(SparsifiedRule { rule: out, residual })
}

/// Sampled lower bound on `|||ν|||_{d;n}`, the smallest `c` with
/// `∫|P|² d|ν| ≤ c ∫|P|² dμ*` on `Π_{n/2}^d`.
///
/// Positive rules of order `≥ n` return exactly 1. Otherwise the ratio is maximized over
/// `P ≡ 1` and `trials` random zonal combinations `Σ c_i K_{d;⌊n/2⌋}(a_i ·)`, whose
/// `L²(μ*)` norms are exact through the reproducing property.
pub fn mz_norm_estimate(rule: &QuadratureRule, n: usize, trials: usize, seed: u64) -> Result<f64> {
    if rule.is_positive() && rule.order() >= n && (rule.weight_sum() - 1.0).abs() < 1e-10 {
        return Ok(1.0);
    }
    let mut best: f64 = rule.weights().iter().map(|w| w.abs()).sum();
    let half = n / 2;
    if half < 1 {
        return Ok(best);
    }
    let kernel = ReproducingKernel::new(rule.d(), half)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = 4usize;
    for _ in 0..trials {
        let centers: Vec<SpherePoint> = (0..terms).map(|_| uniform_point(rule.d(), &mut rng)).collect();
        let coeffs: Vec<f64> = (0..terms).map(|_| StandardNormal.sample(&mut rng)).collect();
        let mut exact = 0.0;
        for (ci, ai) in coeffs.iter().zip(&centers) {
            for (cj, aj) in coeffs.iter().zip(&centers) {
                exact += ci * cj * kernel.eval(ai.dot(aj.coords()));
            }
        }
        if exact <= 0.0 {
            continue;
        }
        let discrete: f64 = rule
            .iter()
            .map(|(y, w)| {
                let p: f64 = coeffs.iter().zip(&centers).map(|(c, a)| c * kernel.eval(a.dot(y))).sum();
                w.abs() * p * p
            })
            .sum();
        best = best.max(discrete / exact);
    }
    Ok(best)
}

/// Sampling density `f_0` against `μ*_d` with a known upper bound, used for rejection.
#[derive(Clone, Copy)]
pub struct SamplingDensity<'a> {
    pub density: &'a dyn Fn(&[f64]) -> f64,
    /// `sup f_0`; the expected acceptance rate is `1 / upper_bound` for unit-mean densities.
    pub upper_bound: f64,
}

/// Minimum acceptance rate tolerated by rejection sampling.
pub const MIN_ACCEPTANCE: f64 = 1e-4;

/// i.i.d. sample `C = {y_1, …, y_M}` from `f_0 dμ*_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomDesign {
    d: usize,
    seed: u64,
    points: Vec<f64>,
}

impl RandomDesign {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.points.len() / (self.d + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, k: usize) -> &[f64] {
        &self.points[k * (self.d + 1)..(k + 1) * (self.d + 1)]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.points.chunks(self.d + 1)
    }

    /// The equal-weight rule `(1/M) Σ δ_{y_j}` (declared order 0: no exactness claimed).
    pub fn to_rule(&self) -> QuadratureRule {
        let m = self.len();
        QuadratureRule {
            d: self.d,
            points: self.points.clone(),
            weights: vec![1.0 / m as f64; m],
            order: 0,
            positive: true,
            mz_norm: None,
        }
    }
}

pub fn random_design(d: usize, sample_count: usize, seed: u64, density: Option<SamplingDensity<'_>>) -> Result<RandomDesign> {
    if d == 0 {
        return Err(param("d", 0.0, "sphere dimension must be >= 1"));
    }
    if sample_count == 0 {
        return Err(param("sample_count", 0.0, "must be >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(sample_count * (d + 1));
    match density {
        None => {
            for _ in 0..sample_count {
                points.extend(uniform_point(d, &mut rng).into_coords());
            }
        }
        Some(SamplingDensity { density, upper_bound }) => {
            if !(upper_bound > 0.0) || 1.0 / upper_bound < MIN_ACCEPTANCE {
                return Err(Error::DensityTooPeaked {
                    acceptance: 1.0 / upper_bound,
                });
            }
            let max_attempts = (sample_count as f64 / MIN_ACCEPTANCE).ceil() as u64;
            let mut attempts = 0u64;
            let mut accepted = 0usize;
            while accepted < sample_count {
                if attempts >= max_attempts {
                    return Err(Error::DensityTooPeaked {
                        acceptance: accepted as f64 / attempts as f64,
                    });
                }
                attempts += 1;
                let y = uniform_point(d, &mut rng);
                let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
                if u * upper_bound < density(y.coords()) {
                    points.extend(y.into_coords());
                    accepted += 1;
                }
            }
        }
    }
    Ok(RandomDesign { d, seed, points })
}

/// Degree `n ≈ (M / (log M + (2r+d) log d))^{1/(2r+d)}` matched to a sample budget,
/// floored and at least 1.
pub fn budget_to_degree(sample_count: u64, r: f64, d: usize) -> usize {
    let m = sample_count.max(2) as f64;
    let exponent = 2.0 * r + d as f64;
    let denom = m.ln() + exponent * (d as f64).ln();
    let n = (m / denom).powf(1.0 / exponent).floor();
    if n.is_finite() && n >= 1.0 {
        n as usize
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn product_rule_basic_moments() {
        for d in 1..=4 {
            let rule = product_rule(d, 6).unwrap();
            assert_eq!(rule.len() as u128, product_rule_size(d, 6));
            assert!(rule.is_positive());
            assert_relative_eq!(rule.weight_sum(), 1.0, epsilon = 1e-14);
            for i in 0..=d {
                let m = rule.integrate(|y| y[i] * y[i]);
                assert_relative_eq!(m, 1.0 / (d as f64 + 1.0), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn product_rule_budget_guard() {
        match product_rule_with_cap(5, 40, 1000) {
            Err(Error::Budget { requested, cap }) => {
                assert_eq!(requested, product_rule_size(5, 40));
                assert_eq!(cap, 1000);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
        assert!(product_rule(2, 0).is_err());
        assert!(product_rule(0, 3).is_err());
    }

    #[test]
    fn perturbed_rule_is_detected() {
        let rule = product_rule(2, 6).unwrap();
        assert!(verify_exactness(&rule, 20, 1).unwrap() < 1e-12);
        let bad = rule.with_weight(3, rule.weights()[3] + 1e-3);
        assert!(verify_exactness(&bad, 20, 1).unwrap() > 1e-5);
    }

    #[test]
    fn budget_to_degree_examples() {
        assert_eq!(budget_to_degree(10_000, 2.0, 2), 3);
        assert_eq!(budget_to_degree(10_000, 2.0, 400), 1);
        let mut prev = 0;
        for m in [2u64, 10, 100, 1000, 10_000, 100_000, 1_000_000] {
            let n = budget_to_degree(m, 1.0, 3);
            assert!(n >= prev);
            prev = n;
        }
    }

    #[test]
    fn mz_norm_of_positive_exact_rule_is_one() {
        let rule = product_rule(3, 8).unwrap();
        assert_eq!(mz_norm_estimate(&rule, 8, 10, 3).unwrap(), 1.0);
    }

    #[test]
    fn mz_norm_detects_signed_rules() {
        let rule = product_rule(2, 8).unwrap();
        let w0 = rule.weights()[0];
        let w1 = rule.weights()[1];
        // negate one weight, compensate on its neighbour to keep the total mass
        let signed = rule.with_weight(0, -w0).with_weight(1, w1 + 2.0 * w0);
        assert_relative_eq!(signed.weight_sum(), 1.0, epsilon = 1e-14);
        assert!(!signed.is_positive());
        assert!(mz_norm_estimate(&signed, 8, 10, 3).unwrap() > 1.0);
    }

    #[test]
    fn mz_norm_of_undersampled_equal_weight_rule_exceeds_one() {
        let design = random_design(2, 5, 9, None).unwrap();
        // dim Π_5^2 = 25 > 5 points; Π_{10/2}
        assert!(mz_norm_estimate(&design.to_rule(), 10, 50, 4).unwrap() > 1.0);
    }

    #[test]
    fn random_design_is_reproducible() {
        let a = random_design(3, 40, 5, None).unwrap();
        assert_eq!(a, random_design(3, 40, 5, None).unwrap());
        assert_ne!(a, random_design(3, 40, 6, None).unwrap());
        for y in a.points() {
            assert!((dot(y, y) - 1.0).abs() < 1e-12);
        }
        assert!(random_design(3, 0, 5, None).is_err());
    }

    #[test]
    fn rejection_sampling() {
        // f_0(y) = 1 + y_3 has unit mean on S² and sup 2
        let f = |y: &[f64]| 1.0 + y[2];
        let design = random_design(
            2,
            4000,
            1,
            Some(SamplingDensity {
                density: &f,
                upper_bound: 2.0,
            }),
        )
        .unwrap();
        // E[y_3] under f_0 dμ* is ∫ y_3² dμ* = 1/3
        let mean: f64 = design.points().map(|y| y[2]).sum::<f64>() / 4000.0;
        assert!((mean - 1.0 / 3.0).abs() < 4.0 / 4000f64.sqrt());
        let peaked = |_: &[f64]| 1.0;
        let err = random_design(
            2,
            10,
            1,
            Some(SamplingDensity {
                density: &peaked,
                upper_bound: 1e5,
            }),
        );
        assert!(matches!(err, Err(Error::DensityTooPeaked { .. })));
    }
}
