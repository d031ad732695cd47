//! Localized zonal kernels.
//!
//! `Φ̃_{d;n,r}(x) = K_{d;(d+2)n}(x) · R_{dn}^{(d/2+r, d/2-2)}(x)` and
//! `Φ_{d;n,r}(x) = Φ̃_{d;n,r}(x) · ((1+x)/2)^n`, where `K_{d;m}` is the reproducing
//! kernel of `Π_m^d` and `R` a Jacobi ratio polynomial normalized to 1 at `x = 1`.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{param, Result};
use crate::jacobi::RatioRecurrence;
use crate::probes::probe_poles;
use crate::quadrature::QuadratureRule;
use crate::sphere::{dim_pi, dim_pi_f64, SpherePoint};

/// The reproducing kernel `K_{d;m}` of `Π_m^d` as a function of `x·y`.
///
/// Stored in ratio form `K_{d;m}(x) = dim(Π_m^d) · R_{m-1}^{(d/2, d/2-1)}(x)`, which is
/// the Christoffel–Darboux product form divided through by its value at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ReproducingKernel {
    d: usize,
    degree: usize,
    at_one: f64,
    ratio: RatioRecurrence,
}

impl ReproducingKernel {
    pub fn new(d: usize, degree: usize) -> Result<Self> {
        if d == 0 {
            return Err(param("d", 0.0, "sphere dimension must be >= 1"));
        }
        if degree == 0 {
            return Err(param("degree", 0.0, "kernel degree must be >= 1"));
        }
        let half = d as f64 / 2.0;
        let ratio = RatioRecurrence::new(half, half - 1.0, degree - 1)?;
        let exact = dim_pi(d, degree as f64);
        let at_one = if exact < (1u128 << 100) {
            exact as f64
        } else {
            dim_pi_f64(d, degree)
        };
        Ok(Self {
            d,
            degree,
            at_one,
            ratio,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `K_{d;m}(1) = dim Π_m^d`.
    pub fn at_one(&self) -> f64 {
        self.at_one
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.at_one * self.ratio.eval(x.clamp(-1.0, 1.0))
    }
}

/// Which of the two localized kernels to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum KernelKind {
    /// `Φ_{d;n,r}`, with the `((1+x)/2)^n` damping factor.
    Phi,
    /// `Φ̃_{d;n,r}`.
    PhiTilde,
}

/// The `(d, n, r)` localized kernel with cached recurrence tables.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizedKernel {
    d: usize,
    n: usize,
    r: f64,
    reproducing: ReproducingKernel,
    localizer: RatioRecurrence,
}

impl LocalizedKernel {
    /// `d ≥ 2`; on `S²` the localizing family has `β = -1` and is taken as the
    /// polynomial limit of the ratio recurrence.
    pub fn new(d: usize, n: usize, r: f64) -> Result<Self> {
        if d < 2 {
            return Err(param("d", d as f64, "localized kernels need d >= 2"));
        }
        if n == 0 {
            return Err(param("n", 0.0, "degree parameter must be >= 1"));
        }
        if !(r.is_finite() && r >= 0.0) {
            return Err(param("r", r, "smoothness parameter must be finite and >= 0"));
        }
        let half = d as f64 / 2.0;
        Ok(Self {
            d,
            n,
            r,
            reproducing: ReproducingKernel::new(d, (d + 2) * n)?,
            localizer: RatioRecurrence::new(half + r, half - 2.0, d * n)?,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Quadrature order `2(d+2)n` under which the operators reproduce `Π_n^d`.
    pub fn required_order(&self) -> usize {
        2 * (self.d + 2) * self.n
    }

    /// Value at `x = 1`, equal to `dim Π_{(d+2)n}^d` for both kernels.
    pub fn at_one(&self) -> f64 {
        self.reproducing.at_one()
    }

    pub fn phi_tilde(&self, x: f64) -> f64 {
        let x = x.clamp(-1.0, 1.0);
        self.reproducing.eval(x) * self.localizer.eval(x)
    }

    pub fn phi(&self, x: f64) -> f64 {
        let x = x.clamp(-1.0, 1.0);
        self.phi_tilde(x) * (0.5 * (1.0 + x)).powi(self.n as i32)
    }

    pub fn eval(&self, kind: KernelKind, x: f64) -> f64 {
        match kind {
            KernelKind::Phi => self.phi(x),
            KernelKind::PhiTilde => self.phi_tilde(x),
        }
    }
}

/// Tabulated kernel values on a Chebyshev-spaced grid of `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KernelProfile {
    pub d: usize,
    pub n: usize,
    pub r: f64,
    pub kind: KernelKind,
    /// Ascending, with exact endpoints -1 and 1.
    pub abscissae: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn kernel_profile(kernel: &LocalizedKernel, kind: KernelKind, grid_size: usize) -> Result<KernelProfile> {
    if grid_size < 2 {
        return Err(param("grid_size", grid_size as f64, "need at least 2 abscissae"));
    }
    let last = grid_size - 1;
    let abscissae: Vec<f64> = (0..grid_size)
        .map(|i| match i {
            0 => -1.0,
            i if i == last => 1.0,
            i => -(PI * i as f64 / last as f64).cos(),
        })
        .collect();
    let values = abscissae.iter().map(|&x| kernel.eval(kind, x)).collect();
    Ok(KernelProfile {
        d: kernel.d,
        n: kernel.n,
        r: kernel.r,
        kind,
        abscissae,
        values,
    })
}

/// `Σ_k |w_k| |Φ̃(x·y_k)| (1 - x·y_k)^{s/2}` at one pole `x`.
pub fn lebesgue_sum(kernel: &LocalizedKernel, rule: &QuadratureRule, s: f64, x: &[f64]) -> f64 {
    rule.iter()
        .map(|(y, w)| {
            let t = crate::sphere::dot(x, y).clamp(-1.0, 1.0);
            let damping = if s == 0.0 { 1.0 } else { (1.0 - t).max(0.0).powf(0.5 * s) };
            w.abs() * kernel.phi_tilde(t).abs() * damping
        })
        .sum()
}

/// Outcome of [`lebesgue_estimate`]; a lower bound on the supremum over all poles.
#[derive(Debug, Clone, PartialEq)]
pub struct LebesgueEstimate {
    pub value: f64,
    pub argmax: SpherePoint,
    pub probe_count: usize,
    pub seed: u64,
}

pub fn lebesgue_estimate(
    kernel: &LocalizedKernel,
    rule: &QuadratureRule,
    s: f64,
    probe_count: usize,
    seed: u64,
) -> Result<LebesgueEstimate> {
    if rule.d() != kernel.d() {
        return Err(crate::Error::DimensionMismatch {
            expected: kernel.d(),
            found: rule.d(),
        });
    }
    let mut best = (f64::NEG_INFINITY, SpherePoint::pole(kernel.d()));
    for pole in probe_poles(kernel.d(), probe_count.max(1), seed) {
        let v = lebesgue_sum(kernel, rule, s, pole.coords());
        if v > best.0 {
            best = (v, pole);
        }
    }
    Ok(LebesgueEstimate {
        value: best.0,
        argmax: best.1,
        probe_count: probe_count.max(1),
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn value_at_one_is_dimension() {
        let k = LocalizedKernel::new(3, 1, 0.0).unwrap();
        assert_relative_eq!(k.phi_tilde(1.0), 55.0, max_relative = 1e-12);
        assert_relative_eq!(k.phi(1.0), 55.0, max_relative = 1e-12);
        assert_eq!(k.phi(-1.0), 0.0);
        assert_eq!(k.required_order(), 10);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(LocalizedKernel::new(1, 4, 1.0).is_err());
        assert!(LocalizedKernel::new(3, 0, 1.0).is_err());
        assert!(LocalizedKernel::new(3, 2, -1.0).is_err());
        assert!(LocalizedKernel::new(3, 2, f64::NAN).is_err());
    }

    #[test]
    fn reproducing_kernel_at_one() {
        let k = ReproducingKernel::new(2, 5).unwrap();
        assert_relative_eq!(k.eval(1.0), 25.0, max_relative = 1e-13);
        assert!(ReproducingKernel::new(2, 0).is_err());
    }

    #[test]
    fn profile_layout() {
        let k = LocalizedKernel::new(4, 2, 1.0).unwrap();
        let p = kernel_profile(&k, KernelKind::Phi, 33).unwrap();
        assert_eq!(p.abscissae[0], -1.0);
        assert_eq!(*p.abscissae.last().unwrap(), 1.0);
        assert!(p.abscissae.windows(2).all(|w| w[0] < w[1]));
        assert_relative_eq!(*p.values.last().unwrap(), dim_pi(4, 12.0) as f64, max_relative = 1e-13);
        assert!(kernel_profile(&k, KernelKind::Phi, 1).is_err());
    }

    #[test]
    fn single_point_rule_lebesgue_sum() {
        let k = LocalizedKernel::new(3, 2, 1.0).unwrap();
        let pole = SpherePoint::pole(3);
        let rule = QuadratureRule::new(3, pole.coords().to_vec(), alloc::vec![1.0], 1).unwrap();
        assert_relative_eq!(lebesgue_sum(&k, &rule, 0.0, pole.coords()), k.at_one(), max_relative = 1e-14);
        assert_eq!(lebesgue_sum(&k, &rule, 1.0, pole.coords()), 0.0);
    }
}
