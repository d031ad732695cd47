//! Kernel approximation operators on `S^d`.
//!
//! `σ(ν, f)(x) = Σ_k w_k f(y_k) Φ(x·y_k)` and its `Φ̃` twin, the cap-truncated operator,
//! the Monte-Carlo estimator, and the probe-based error measurements built on them.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{param, Error, Result};
use crate::kernels::{KernelKind, LocalizedKernel};
use crate::probes::probe_poles;
use crate::quadrature::{QuadratureRule, RandomDesign};
use crate::sphere::{chordal_from_dot, dim_pi, dim_pi_f64, dot, SpherePoint};

/// Truncation radius `δ_n = √(16 r ln n / n)`; needs `n ≥ 2`.
pub fn delta_n(n: usize, r: f64) -> Result<f64> {
    if n < 2 {
        return Err(param("n", n as f64, "automatic radius needs n >= 2"));
    }
    let n = n as f64;
    Ok((16.0 * r * n.ln() / n).sqrt())
}

/// Kernel parameters `(d, n, r)` plus the localization radius.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxConfig {
    kernel: LocalizedKernel,
    delta_n: f64,
}

impl ApproxConfig {
    /// Config with the automatic radius `δ_n`.
    pub fn new(d: usize, n: usize, r: f64) -> Result<Self> {
        let kernel = LocalizedKernel::new(d, n, r)?;
        Ok(Self {
            delta_n: delta_n(n, r)?,
            kernel,
        })
    }

    pub fn with_delta(d: usize, n: usize, r: f64, delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(param("delta_n", delta, "must be finite and >= 0"));
        }
        Ok(Self {
            kernel: LocalizedKernel::new(d, n, r)?,
            delta_n: delta,
        })
    }

    pub fn kernel(&self) -> &LocalizedKernel {
        &self.kernel
    }

    pub fn d(&self) -> usize {
        self.kernel.d()
    }

    pub fn n(&self) -> usize {
        self.kernel.n()
    }

    pub fn r(&self) -> f64 {
        self.kernel.r()
    }

    pub fn delta_n(&self) -> f64 {
        self.delta_n
    }
}

/// A continuous function on `S^d`.
///
/// Implementations must be deterministic and safe to evaluate concurrently.
pub trait TargetFunction: Sync {
    fn eval(&self, y: &[f64]) -> f64;

    fn label(&self) -> String {
        String::from("f")
    }

    /// Known smoothness index, if any.
    fn smoothness(&self) -> Option<f64> {
        None
    }

    /// Points where the function is least smooth. Error probes always include them,
    /// since the sup error concentrates there.
    fn singular_points(&self) -> Vec<SpherePoint> {
        Vec::new()
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> TargetFunction for F {
    fn eval(&self, y: &[f64]) -> f64 {
        self(y)
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

fn check_point(d: usize, x: &[f64]) -> Result<()> {
    check_dim(d + 1, x.len())
}

/// `Σ_k w_k v_k K(x·y_k)` with the samples `v_k = f(y_k)` already taken. Terms are added
/// in rule order.
pub fn sigma_from_values(config: &ApproxConfig, kind: KernelKind, rule: &QuadratureRule, values: &[f64], x: &[f64]) -> Result<f64> {
    check_dim(config.d(), rule.d())?;
    check_point(config.d(), x)?;
    if values.len() != rule.len() {
        return Err(Error::LengthMismatch {
            expected: rule.len(),
            found: values.len(),
        });
    }
    let k = config.kernel();
    let mut acc = 0.0;
    for ((y, w), v) in rule.iter().zip(values) {
        acc += w * v * k.eval(kind, dot(x, y));
    }
    Ok(acc)
}

/// Several sample vectors against one pole, sharing the kernel evaluations.
pub fn sigma_many(config: &ApproxConfig, kind: KernelKind, rule: &QuadratureRule, values: &[&[f64]], x: &[f64]) -> Result<Vec<f64>> {
    check_dim(config.d(), rule.d())?;
    check_point(config.d(), x)?;
    if let Some(bad) = values.iter().find(|v| v.len() != rule.len()) {
        return Err(Error::LengthMismatch {
            expected: rule.len(),
            found: bad.len(),
        });
    }
    let k = config.kernel();
    let mut out = vec![0.0; values.len()];
    for (i, (y, w)) in rule.iter().enumerate() {
        let kw = w * k.eval(kind, dot(x, y));
        for (o, v) in out.iter_mut().zip(values) {
            *o += kw * v[i];
        }
    }
    Ok(out)
}

/// Samples `f(y_k)` in rule order.
pub fn sample<F: TargetFunction + ?Sized>(rule: &QuadratureRule, f: &F) -> Vec<f64> {
    rule.iter().map(|(y, _)| f.eval(y)).collect()
}

fn sigma_kind<F: TargetFunction + ?Sized>(config: &ApproxConfig, kind: KernelKind, rule: &QuadratureRule, f: &F, x: &[f64]) -> Result<f64> {
    check_dim(config.d(), rule.d())?;
    check_point(config.d(), x)?;
    let k = config.kernel();
    Ok(rule.iter().map(|(y, w)| w * f.eval(y) * k.eval(kind, dot(x, y))).sum())
}

/// `σ_{d;n,r}(ν, f)(x)`.
pub fn sigma<F: TargetFunction + ?Sized>(config: &ApproxConfig, rule: &QuadratureRule, f: &F, x: &[f64]) -> Result<f64> {
    sigma_kind(config, KernelKind::Phi, rule, f, x)
}

/// `σ̃_{d;n,r}(ν, f)(x)`, a polynomial of degree below `2(d+2)n` in `x`.
pub fn sigma_tilde<F: TargetFunction + ?Sized>(config: &ApproxConfig, rule: &QuadratureRule, f: &F, x: &[f64]) -> Result<f64> {
    sigma_kind(config, KernelKind::PhiTilde, rule, f, x)
}

/// Value of the cap-truncated operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalValue {
    pub value: f64,
    pub points_used: usize,
    /// No quadrature point fell inside the cap; `value` is 0.
    pub empty_neighborhood: bool,
}

/// `σ` restricted to the quadrature points with `|x − y_k| ≤ δ_n`.
pub fn sigma_local<F: TargetFunction + ?Sized>(config: &ApproxConfig, rule: &QuadratureRule, f: &F, x: &[f64]) -> Result<LocalValue> {
    check_dim(config.d(), rule.d())?;
    check_point(config.d(), x)?;
    let k = config.kernel();
    let (mut value, mut used) = (0.0, 0usize);
    for (y, w) in rule.iter() {
        let t = dot(x, y);
        if chordal_from_dot(t) <= config.delta_n() {
            value += w * f.eval(y) * k.phi(t);
            used += 1;
        }
    }
    Ok(LocalValue {
        value,
        points_used: used,
        empty_neighborhood: used == 0,
    })
}

/// One pass over the rule giving, for each sample vector, the full operator value and its
/// cap-truncated part at `x`. Kernel values are shared across the vectors.
pub fn localization_split(config: &ApproxConfig, rule: &QuadratureRule, values: &[&[f64]], x: &[f64]) -> Result<Vec<(f64, LocalValue)>> {
    check_dim(config.d(), rule.d())?;
    check_point(config.d(), x)?;
    if let Some(bad) = values.iter().find(|v| v.len() != rule.len()) {
        return Err(Error::LengthMismatch {
            expected: rule.len(),
            found: bad.len(),
        });
    }
    let k = config.kernel();
    let mut full = vec![0.0; values.len()];
    let mut local = vec![0.0; values.len()];
    let mut used = 0usize;
    for (i, (y, w)) in rule.iter().enumerate() {
        let t = dot(x, y);
        let phi = k.phi(t);
        let inside = chordal_from_dot(t) <= config.delta_n();
        used += inside as usize;
        for (j, v) in values.iter().enumerate() {
            let term = w * v[i] * phi;
            full[j] += term;
            if inside {
                local[j] += term;
            }
        }
    }
    Ok(full
        .into_iter()
        .zip(local)
        .map(|(f, l)| {
            (
                f,
                LocalValue {
                    value: l,
                    points_used: used,
                    empty_neighborhood: used == 0,
                },
            )
        })
        .collect())
}

/// Monte-Carlo estimator `(1/M) Σ_j f(y_j) Φ(x·y_j)`.
pub fn sigma_hat<F: TargetFunction + ?Sized>(config: &ApproxConfig, design: &RandomDesign, f: &F, x: &[f64]) -> Result<f64> {
    check_dim(config.d(), design.d())?;
    check_point(config.d(), x)?;
    let k = config.kernel();
    let sum: f64 = design.points().map(|y| f.eval(y) * k.phi(dot(x, y))).sum();
    Ok(sum / design.len() as f64)
}

/// Sample count `M` from the budget relation with proportionality constant 1, using
/// `D = dim Π_{2(d+2)n}^d`. `norm_ratio` is `‖f‖_∞ / ‖f_0 f‖_∞`.
pub fn sample_budget(config: &ApproxConfig, epsilon: f64, norm_ratio: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(param("epsilon", epsilon, "failure probability must lie in (0, 1)"));
    }
    if !(norm_ratio.is_finite() && norm_ratio > 0.0) {
        return Err(param("norm_ratio", norm_ratio, "must be finite and > 0"));
    }
    let d = config.d() as f64;
    let order = config.kernel().required_order();
    let exact = dim_pi(config.d(), order as f64);
    let dn = if exact < (1u128 << 100) {
        exact as f64
    } else {
        dim_pi_f64(config.d(), order)
    };
    let logs = dn.ln() + (d + 1.0) * d.ln() + d * (16.0 * core::f64::consts::E / core::f64::consts::PI).ln() + (1.0 / epsilon).ln();
    let m = 2f64.powf(-d) * d.powf(-1.0 / 3.0) * norm_ratio * dn.powf((2.0 * config.r() + d) / d) * logs;
    Ok(m.ceil())
}

/// Probe-based sup-norm deviation; a lower bound on the true sup.
#[derive(Debug, Clone, PartialEq)]
pub struct SupError {
    pub value: f64,
    pub argmax: SpherePoint,
    pub probe_count: usize,
    pub seed: u64,
}

/// Low-discrepancy probe poles followed by the singular points of `f`.
pub fn error_probes<F: TargetFunction + ?Sized>(d: usize, f: &F, probes: usize, seed: u64) -> Vec<SpherePoint> {
    let mut poles = probe_poles(d, probes.max(1), seed);
    poles.extend(f.singular_points().into_iter().filter(|p| p.dim() == d));
    poles
}

/// `max |f − g|` over [`error_probes`].
pub fn sup_error<F, G>(d: usize, f: &F, approx: G, probes: usize, seed: u64) -> SupError
where
    F: TargetFunction + ?Sized,
    G: Fn(&[f64]) -> f64,
{
    let poles = error_probes(d, f, probes, seed);
    sup_error_at(&poles, f, approx, seed)
}

/// As [`sup_error`] over caller-supplied poles.
pub fn sup_error_at<F, G>(poles: &[SpherePoint], f: &F, approx: G, seed: u64) -> SupError
where
    F: TargetFunction + ?Sized,
    G: Fn(&[f64]) -> f64,
{
    let mut best = (f64::NEG_INFINITY, 0usize);
    for (i, p) in poles.iter().enumerate() {
        let e = (f.eval(p.coords()) - approx(p.coords())).abs();
        if e > best.0 || e.is_nan() {
            best = (e, i);
        }
    }
    SupError {
        value: best.0.max(0.0),
        argmax: poles[best.1].clone(),
        probe_count: poles.len(),
        seed,
    }
}

pub mod catalog {
    //! Test functions of known smoothness.

    use super::TargetFunction;
    use crate::kernels::ReproducingKernel;
    use crate::probes::probe_poles;
    use crate::sphere::{dot, SpherePoint};
    use alloc::format;
    use alloc::string::String;
    use alloc::vec::Vec;

    #[cfg(not(feature = "std"))]
    use num_traits::Float;

    /// `(1 − x·p)^{r/2}`: smoothness `r` at `p`, analytic elsewhere. A polynomial when `r`
    /// is an even integer.
    #[derive(Debug, Clone, PartialEq)]
    pub struct CapPower {
        pub pole: SpherePoint,
        pub r: f64,
    }

    impl TargetFunction for CapPower {
        fn eval(&self, y: &[f64]) -> f64 {
            (1.0 - self.pole.dot(y)).max(0.0).powf(0.5 * self.r)
        }

        fn label(&self) -> String {
            format!("cap_power(r={})", self.r)
        }

        fn smoothness(&self) -> Option<f64> {
            Some(self.r)
        }

        fn singular_points(&self) -> Vec<SpherePoint> {
            alloc::vec![self.pole.clone()]
        }
    }

    const RIDGE_PROBES: usize = 256;

    /// `(x·p − c)_+^r`: a ridge of smoothness `r` along the circle `x·p = c`.
    #[derive(Debug, Clone, PartialEq)]
    pub struct TruncatedPower {
        pub pole: SpherePoint,
        pub level: f64,
        pub r: f64,
    }

    impl TargetFunction for TruncatedPower {
        fn eval(&self, y: &[f64]) -> f64 {
            (self.pole.dot(y) - self.level).max(0.0).powf(self.r)
        }

        fn label(&self) -> String {
            format!("truncated_power(c={}, r={})", self.level, self.r)
        }

        fn smoothness(&self) -> Option<f64> {
            Some(self.r)
        }

        /// Probe points projected onto the ridge `x·p = c`.
        fn singular_points(&self) -> Vec<SpherePoint> {
            let d = self.pole.dim();
            let p = self.pole.coords();
            let c = self.level.clamp(-1.0, 1.0);
            let s = (1.0 - c * c).sqrt();
            probe_poles(d, RIDGE_PROBES, 7919)
                .into_iter()
                .filter_map(|q| {
                    let t = dot(q.coords(), p);
                    let tangent: Vec<f64> = q.coords().iter().zip(p).map(|(a, b)| a - t * b).collect();
                    let norm = dot(&tangent, &tangent).sqrt();
                    (norm > 1e-6).then(|| {
                        let v = tangent.iter().zip(p).map(|(a, b)| c * b + s * a / norm).collect();
                        SpherePoint::new(v).expect("unit vector")
                    })
                })
                .collect()
        }
    }

    /// `exp(x·a)`, entire.
    #[derive(Debug, Clone, PartialEq)]
    pub struct ExpRidge {
        pub direction: Vec<f64>,
    }

    impl TargetFunction for ExpRidge {
        fn eval(&self, y: &[f64]) -> f64 {
            dot(&self.direction, y).exp()
        }

        fn label(&self) -> String {
            String::from("exp_ridge")
        }
    }

    /// `weight·(1 − x·p)^{r/2} + (x·q)^3`: a single cusp of order `r` at `p` on top of a
    /// cubic.
    #[derive(Debug, Clone, PartialEq)]
    pub struct CuspPlusPolynomial {
        pub cusp: SpherePoint,
        pub r: f64,
        pub weight: f64,
        pub axis: SpherePoint,
    }

    impl TargetFunction for CuspPlusPolynomial {
        fn eval(&self, y: &[f64]) -> f64 {
            let cusp = (1.0 - self.cusp.dot(y)).max(0.0).powf(0.5 * self.r);
            self.weight * cusp + self.axis.dot(y).powi(3)
        }

        fn label(&self) -> String {
            format!("cusp_plus_cubic(r={})", self.r)
        }

        fn smoothness(&self) -> Option<f64> {
            Some(self.r)
        }

        fn singular_points(&self) -> Vec<SpherePoint> {
            alloc::vec![self.cusp.clone()]
        }
    }

    /// `Σ_i c_i K_{d;m}(a_i·x)`, a polynomial of degree below `m`.
    #[derive(Debug, Clone, PartialEq)]
    pub struct ZonalCombination {
        pub kernel: ReproducingKernel,
        pub centers: Vec<SpherePoint>,
        pub coefficients: Vec<f64>,
    }

    impl ZonalCombination {
        /// Sup norm bound `Σ |c_i| K(1)`.
        pub fn norm_bound(&self) -> f64 {
            self.coefficients.iter().map(|c| c.abs()).sum::<f64>() * self.kernel.at_one()
        }
    }

    impl TargetFunction for ZonalCombination {
        fn eval(&self, y: &[f64]) -> f64 {
            self.centers
                .iter()
                .zip(&self.coefficients)
                .map(|(a, c)| c * self.kernel.eval(a.dot(y)))
                .sum()
        }

        fn label(&self) -> String {
            format!("zonal_combination(m={})", self.kernel.degree())
        }
    }
}
