//! Orthonormalized Jacobi polynomials.
//!
//! The families `p_k^{(α,β)}` are orthonormal on `[-1, 1]` against the weight
//! `(1-t)^α (1+t)^β`. They are evaluated with the three-term recurrence in the
//! shifted variable `(1+t)/2`; ratios `R_n = p_n / p_n(1)` have their own
//! recurrence which never forms the (possibly huge) value at 1.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::LN_2;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{param, Error, Result};
use crate::tridiag;

/// Exponent pair `(α, β)` of the Jacobi weight `(1-t)^α (1+t)^β`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > -1.0) {
            return Err(param("alpha", alpha, "must be finite and > -1"));
        }
        if !(beta.is_finite() && beta > -1.0) {
            return Err(param("beta", beta, "must be finite and > -1"));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The weight `(1-t)^α (1+t)^β`.
    pub fn weight(&self, t: f64) -> f64 {
        (1.0 - t).powf(self.alpha) * (1.0 + t).powf(self.beta)
    }

    /// Natural log of the total mass `∫ (1-t)^α (1+t)^β dt`.
    pub fn ln_mass(&self) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        (a + b + 1.0) * LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0)
    }

    pub fn mass(&self) -> f64 {
        self.ln_mass().exp()
    }

    /// The constant `p_0^{(α,β)}`.
    pub fn p0(&self) -> f64 {
        (-0.5 * self.ln_mass()).exp()
    }

    /// Off-diagonal coefficient `ρ_k` of the recurrence
    /// `((1+t)/2) p_k = ρ_k p_{k+1} + d_k p_k + ρ_{k-1} p_{k-1}`.
    pub fn rho(&self, k: usize) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        if k == 0 {
            return ((a + 1.0) * (b + 1.0) / (a + b + 3.0)).sqrt() / (a + b + 2.0);
        }
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let num = (k + 1.0) * (k + a + 1.0) * (k + b + 1.0) * (k + a + b + 1.0);
        let den = (s + 1.0) * (s + 2.0) * (s + 2.0) * (s + 3.0);
        (num / den).sqrt()
    }

    /// Diagonal coefficient `d_k` of the shifted recurrence.
    pub fn diag(&self, k: usize) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        if k == 0 {
            return 0.5 + (b - a) / (2.0 * (a + b + 2.0));
        }
        let s = 2.0 * k as f64 + a + b;
        0.5 + (b * b - a * a) / (2.0 * s * (s + 2.0))
    }
}

/// `ln Γ(x)` for positive `x`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Values `p_0(t), …, p_n(t)` of one orthonormal family at one abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoJacobiTable {
    pub params: JacobiParams,
    pub degree_max: usize,
    pub t: f64,
    pub values: Vec<f64>,
}

impl OrthoJacobiTable {
    /// `p_degree_max(t)`.
    pub fn last(&self) -> f64 {
        self.values[self.degree_max]
    }
}

pub fn eval_ortho_jacobi(params: JacobiParams, degree_max: usize, t: f64) -> Result<OrthoJacobiTable> {
    if !t.is_finite() {
        return Err(Error::Input(alloc::format!("abscissa must be finite, got {t}")));
    }
    let x = 0.5 * (1.0 + t);
    let mut values = Vec::with_capacity(degree_max + 1);
    values.push(params.p0());
    let mut prev = 0.0;
    let mut prev_rho = 0.0;
    for k in 0..degree_max {
        let rho = params.rho(k);
        let cur = values[k];
        let next = ((x - params.diag(k)) * cur - prev_rho * prev) / rho;
        values.push(next);
        prev = cur;
        prev_rho = rho;
    }
    Ok(OrthoJacobiTable {
        params,
        degree_max,
        t,
        values,
    })
}

/// `ln p_ℓ^{(α,β)}(1)` from the closed Gamma-function form.
pub fn ln_jacobi_at_one(params: JacobiParams, degree: usize) -> f64 {
    let (a, b) = (params.alpha, params.beta);
    if degree == 0 {
        return -0.5 * params.ln_mass();
    }
    let l = degree as f64;
    0.5 * ((2.0 * l + a + b + 1.0).ln() - (a + b + 1.0) * LN_2 + ln_gamma(l + a + 1.0)
        + ln_gamma(l + a + b + 1.0)
        - ln_gamma(l + 1.0)
        - ln_gamma(l + b + 1.0))
        - ln_gamma(a + 1.0)
}

pub fn jacobi_at_one(params: JacobiParams, degree: usize) -> Result<f64> {
    exp_checked("p_l(1)", ln_jacobi_at_one(params, degree))
}

/// `ln K_n^{(α,β)}(1) = ln Σ_{ℓ<n} p_ℓ(1)²`.
pub fn ln_kernel_at_one(params: JacobiParams, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(param("n", 0.0, "kernel degree must be >= 1"));
    }
    let (a, b) = (params.alpha, params.beta);
    let n = n as f64;
    Ok(ln_gamma(n + a + 1.0) + ln_gamma(n + a + b + 1.0)
        - (a + b + 1.0) * LN_2
        - ln_gamma(a + 1.0)
        - ln_gamma(a + 2.0)
        - ln_gamma(n)
        - ln_gamma(n + b))
}

pub fn kernel_at_one(params: JacobiParams, n: usize) -> Result<f64> {
    exp_checked("K_n(1)", ln_kernel_at_one(params, n)?)
}

fn exp_checked(what: &'static str, log_value: f64) -> Result<f64> {
    let v = log_value.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Range { what, log_value })
    }
}

/// Christoffel–Darboux kernel `K_n^{(α,β)}(x) = Σ_{ℓ<n} p_ℓ(1) p_ℓ(x)`, evaluated in the
/// single-product form through the family `(α+1, β)`.
pub fn christoffel_kernel(params: JacobiParams, n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(param("n", 0.0, "kernel degree must be >= 1"));
    }
    let shifted = JacobiParams::new(params.alpha + 1.0, params.beta)?;
    let (a, b) = (params.alpha, params.beta);
    let scale = (2.0 * a + 2.0) / (2.0 * n as f64 + a + b);
    let at_one = jacobi_at_one(shifted, n - 1)?;
    let at_x = eval_ortho_jacobi(shifted, n - 1, x)?.last();
    Ok(scale * at_one * at_x)
}

/// Precomputed three-term recurrence for the normalized ratios
/// `R_k(x) = p_k(x) / p_k(1)`, `k ≤ degree`.
///
/// Accepts `β = -1` as the polynomial limit of the family, which is needed by the
/// localized kernels on `S²`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioRecurrence {
    alpha: f64,
    beta: f64,
    // R_k = (a_k x + b_k) R_{k-1} - c_k R_{k-2}, k = 1..=degree
    steps: Vec<[f64; 3]>,
}

impl RatioRecurrence {
    pub fn new(alpha: f64, beta: f64, degree: usize) -> Result<Self> {
        if !(alpha.is_finite() && alpha > -1.0) {
            return Err(param("alpha", alpha, "must be finite and > -1"));
        }
        if !(beta.is_finite() && beta >= -1.0) {
            return Err(param("beta", beta, "must be finite and >= -1"));
        }
        let (a, b) = (alpha, beta);
        let mut steps = Vec::with_capacity(degree);
        if degree >= 1 {
            // R_1 = ((α+β+2) x + α - β) / (2(α+1)); the general step is 0/0 here when α+β = 0.
            let den = 2.0 * (a + 1.0);
            steps.push([(a + b + 2.0) / den, (a - b) / den, 0.0]);
        }
        for n in 2..=degree {
            let nf = n as f64;
            let s = 2.0 * nf + a + b;
            let den = 2.0 * (nf + a + b) * (s - 2.0) * (nf + a);
            let ax = (s - 1.0) * s * (s - 2.0) / den;
            let bx = (s - 1.0) * (a * a - b * b) / den;
            let c = 2.0 * s * (nf + b - 1.0) * (nf - 1.0) / den;
            steps.push([ax, bx, c]);
        }
        Ok(Self {
            alpha,
            beta,
            steps,
        })
    }

    pub fn degree(&self) -> usize {
        self.steps.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `R_degree(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let mut prev = 0.0;
        let mut cur = 1.0;
        for &[a, b, c] in &self.steps {
            let next = (a * x + b) * cur - c * prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// `R_0(x), …, R_degree(x)`.
    pub fn eval_all(&self, x: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(1.0);
        let mut prev = 0.0;
        for &[a, b, c] in &self.steps {
            let cur = *out.last().unwrap();
            out.push((a * x + b) * cur - c * prev);
            prev = cur;
        }
        out
    }
}

/// `R_0(x), …, R_{degree_max}(x)` with `R_n = p_n / p_n(1)`.
pub fn eval_ratio_jacobi(params: JacobiParams, degree_max: usize, x: f64) -> Result<Vec<f64>> {
    if !x.is_finite() {
        return Err(Error::Input(alloc::format!("abscissa must be finite, got {x}")));
    }
    Ok(RatioRecurrence::new(params.alpha, params.beta, degree_max)?.eval_all(x))
}

/// Linearization coefficients `C(ℓ; k, j)` with `P_k P̃_j = Σ_ℓ C(ℓ; k, j) P_ℓ`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProductExpansionTable {
    pub family: JacobiParams,
    pub cofamily: JacobiParams,
    pub k_max: usize,
    pub j_max: usize,
    /// `coefficients[k][j][ℓ]` for `ℓ ≤ k + j`.
    pub coefficients: Vec<Vec<Vec<f64>>>,
}

impl ProductExpansionTable {
    /// `C(ℓ; k, j)`, zero outside the stored support.
    pub fn get(&self, l: isize, k: isize, j: isize) -> f64 {
        if l < 0 || k < 0 || j < 0 || l > k + j {
            return 0.0;
        }
        let (l, k, j) = (l as usize, k as usize, j as usize);
        if k > self.k_max || j > self.j_max {
            return 0.0;
        }
        self.coefficients[k][j][l]
    }
}

/// Fills the linearization table with the five-point recurrence
/// `ρ̃_j C(ℓ;k,j+1) = ρ_{ℓ-1} C(ℓ-1;k,j) + (d_ℓ - d̃_j) C(ℓ;k,j) + ρ_ℓ C(ℓ+1;k,j) - ρ̃_{j-1} C(ℓ;k,j-1)`,
/// both families orthonormal in the shifted variable.
pub fn product_coefficients(
    family: JacobiParams,
    cofamily: JacobiParams,
    k_max: usize,
    j_max: usize,
) -> Result<ProductExpansionTable> {
    let l_max = k_max + j_max + 1;
    let rho: Vec<f64> = (0..=l_max).map(|l| family.rho(l)).collect();
    let dia: Vec<f64> = (0..=l_max).map(|l| family.diag(l)).collect();
    let co_rho: Vec<f64> = (0..=j_max).map(|j| cofamily.rho(j)).collect();
    let co_dia: Vec<f64> = (0..=j_max).map(|j| cofamily.diag(j)).collect();
    let scale = rho.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    let mut coefficients = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        // rows[j][ℓ], ℓ ≤ k + j
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(j_max + 1);
        let mut first = vec![0.0; k + 1];
        first[k] = cofamily.p0();
        rows.push(first);
        for j in 0..j_max {
            if co_rho[j].abs() <= f64::EPSILON * scale {
                return Err(Error::DegenerateRecurrence { index: j });
            }
            let cur = &rows[j];
            let at = |row: &Vec<f64>, l: isize| -> f64 {
                if l < 0 {
                    0.0
                } else {
                    row.get(l as usize).copied().unwrap_or(0.0)
                }
            };
            let mut next = vec![0.0; k + j + 2];
            for (l, slot) in next.iter_mut().enumerate() {
                let li = l as isize;
                let mut acc = (dia[l] - co_dia[j]) * at(cur, li) + rho[l] * at(cur, li + 1);
                if l > 0 {
                    acc += rho[l - 1] * at(cur, li - 1);
                }
                if j > 0 {
                    acc -= co_rho[j - 1] * at(&rows[j - 1], li);
                }
                *slot = acc / co_rho[j];
            }
            rows.push(next);
        }
        coefficients.push(rows);
    }
    Ok(ProductExpansionTable {
        family,
        cofamily,
        k_max,
        j_max,
        coefficients,
    })
}

/// Gauss–Jacobi rule for the weight `(1-t)^α (1+t)^β`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GaussJacobiRule {
    pub params: JacobiParams,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussJacobiRule {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// `Σ w_i f(t_i) ≈ ∫ f(t) (1-t)^α (1+t)^β dt`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

/// Golub–Welsch: nodes are the eigenvalues of the symmetric Jacobi matrix, weights the
/// squared first eigenvector components times the total mass.
pub fn gauss_jacobi_rule(params: JacobiParams, node_count: usize) -> Result<GaussJacobiRule> {
    if node_count == 0 {
        return Err(param("node_count", 0.0, "must be >= 1"));
    }
    // Jacobi matrix in t = 2x - 1: diagonal 2 d_k - 1, off-diagonal 2 ρ_k.
    let mut diag: Vec<f64> = (0..node_count).map(|k| 2.0 * params.diag(k) - 1.0).collect();
    let mut off: Vec<f64> = (0..node_count)
        .map(|k| if k + 1 < node_count { 2.0 * params.rho(k) } else { 0.0 })
        .collect();
    let mut first = vec![0.0; node_count];
    first[0] = 1.0;
    tridiag::eigen_first_components(&mut diag, &mut off, &mut first)?;

    // Christoffel numbers 1/Σ_{j<N} p_j(t)² keep relative accuracy for the tiny endpoint
    // weights, where mass·v0² does not.
    let mut pairs: Vec<(f64, f64)> = diag
        .into_iter()
        .map(|t| {
            let table = eval_ortho_jacobi(params, node_count - 1, t)?;
            let s: f64 = table.values.iter().map(|v| v * v).sum();
            Ok((t, 1.0 / s))
        })
        .collect::<Result<_>>()?;
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(GaussJacobiRule {
        params,
        nodes,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn legendre() -> JacobiParams {
        JacobiParams::new(0.0, 0.0).unwrap()
    }

    #[test]
    fn rejects_non_integrable_exponents() {
        assert!(JacobiParams::new(-1.0, 0.0).is_err());
        assert!(JacobiParams::new(0.0, -1.5).is_err());
        assert!(JacobiParams::new(f64::NAN, 0.0).is_err());
        assert!(eval_ortho_jacobi(legendre(), 2, f64::INFINITY).is_err());
    }

    #[test]
    fn legendre_constant_and_linear() {
        let t = eval_ortho_jacobi(legendre(), 0, 0.3).unwrap();
        assert_relative_eq!(t.values[0], 0.5f64.sqrt(), epsilon = 1e-15);
        let t = eval_ortho_jacobi(legendre(), 1, 1.0).unwrap();
        assert_relative_eq!(t.values[1], 1.5f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn value_at_one_closed_forms() {
        assert_relative_eq!(jacobi_at_one(legendre(), 1).unwrap(), 1.5f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(jacobi_at_one(legendre(), 0).unwrap(), 0.5f64.sqrt(), epsilon = 1e-15);
        let p = JacobiParams::new(2.0, 1.0).unwrap();
        let rec = eval_ortho_jacobi(p, 10, 1.0).unwrap().last();
        assert_relative_eq!(jacobi_at_one(p, 10).unwrap(), rec, max_relative = 1e-12);
    }

    #[test]
    fn kernel_at_one_small_cases() {
        assert_relative_eq!(kernel_at_one(legendre(), 4).unwrap(), 8.0, max_relative = 1e-13);
        let p = JacobiParams::new(1.0, 1.0).unwrap();
        assert_relative_eq!(kernel_at_one(p, 1).unwrap(), 0.75, max_relative = 1e-13);
        assert!(kernel_at_one(p, 0).is_err());
    }

    #[test]
    fn overflow_is_reported_on_log_scale() {
        let p = JacobiParams::new(400.0, 0.0).unwrap();
        match kernel_at_one(p, 2000) {
            Err(Error::Range { log_value, .. }) => assert!(log_value > 709.0),
            other => panic!("expected range error, got {other:?}"),
        }
    }

    #[test]
    fn ratio_examples() {
        let r = eval_ratio_jacobi(legendre(), 2, 0.0).unwrap();
        assert_relative_eq!(r[2], -0.5, epsilon = 1e-15);
        let p = JacobiParams::new(3.5, -0.5).unwrap();
        for v in eval_ratio_jacobi(p, 25, 1.0).unwrap() {
            assert_relative_eq!(v, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ratio_limit_family_beta_minus_one() {
        // P_n^{(α,-1)} = const · (1+x) P_{n-1}^{(α,1)}, so R_n vanishes at x = -1.
        let rec = RatioRecurrence::new(2.0, -1.0, 7).unwrap();
        assert!(rec.eval(-1.0).abs() < 1e-12);
        assert_relative_eq!(rec.eval(1.0), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn christoffel_kernel_at_one_is_half_n_squared_for_legendre() {
        for n in 1..12 {
            let k = christoffel_kernel(legendre(), n, 1.0).unwrap();
            assert_relative_eq!(k, (n * n) as f64 / 2.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn two_point_gauss_legendre() {
        let rule = gauss_jacobi_rule(legendre(), 2).unwrap();
        let s = 1.0 / 3.0f64.sqrt();
        assert_relative_eq!(rule.nodes[0], -s, epsilon = 1e-15);
        assert_relative_eq!(rule.nodes[1], s, epsilon = 1e-15);
        assert_relative_eq!(rule.weights[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(rule.weights[1], 1.0, epsilon = 1e-14);
        assert!(gauss_jacobi_rule(legendre(), 0).is_err());
    }

    #[test]
    fn one_node_rule_is_the_mean() {
        let p = JacobiParams::new(1.0, 0.0).unwrap();
        let rule = gauss_jacobi_rule(p, 1).unwrap();
        // mean of t under (1-t): -1/3
        assert_relative_eq!(rule.nodes[0], -1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(rule.weights[0], 2.0, epsilon = 1e-14);
    }

    #[test]
    fn product_table_support() {
        let t = product_coefficients(legendre(), legendre(), 4, 4).unwrap();
        assert_relative_eq!(t.get(0, 0, 0), 0.5f64.sqrt(), epsilon = 1e-15);
        assert_eq!(t.get(9, 4, 4), 0.0);
        assert_eq!(t.get(-1, 2, 2), 0.0);
        assert_eq!(t.get(1, -1, 2), 0.0);
    }
}
