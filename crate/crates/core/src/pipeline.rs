//! Operator approximation for functions on the circle.
//!
//! Inputs are encoded by scaled Fourier coefficients, lifted onto `S^d`, and the operator
//! is approximated componentwise by `σ` with precomputed output features as data.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::approx::ApproxConfig;
use crate::error::{param, Error, Result};
use crate::kernels::KernelKind;
use crate::quadrature::QuadratureRule;
use crate::sphere::{dot, lift};

/// Default admissibility threshold on the last lifted coordinate.
pub const DEFAULT_EPS_CAP: f64 = 0.1;

/// Slack on the unit-ball bound for scaled input features.
pub const FEATURE_NORM_TOLERANCE: f64 = 1e-9;

/// Real trigonometric polynomial `c_0 + 2 Σ_{0<k<n} Re(c_k e^{ikt})`, stored through its
/// complex coefficients `c_k`, `k ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    re: Vec<f64>,
    im: Vec<f64>,
}

impl TrigPoly {
    /// `coefficients[k] = (Re c_k, Im c_k)`; the imaginary part of `c_0` is ignored.
    pub fn new(coefficients: &[(f64, f64)]) -> Self {
        let re = coefficients.iter().map(|c| c.0).collect();
        let mut im: Vec<f64> = coefficients.iter().map(|c| c.1).collect();
        if let Some(first) = im.first_mut() {
            *first = 0.0;
        }
        Self { re, im }
    }

    /// `Σ_k (a_k cos kt + b_k sin kt)` with `a_0` the constant term.
    pub fn from_cos_sin(cos: &[f64], sin: &[f64]) -> Self {
        let n = cos.len().max(sin.len());
        let mut re = vec![0.0; n];
        let mut im = vec![0.0; n];
        for k in 0..n {
            let a = cos.get(k).copied().unwrap_or(0.0);
            let b = sin.get(k).copied().unwrap_or(0.0);
            if k == 0 {
                re[0] = a;
            } else {
                re[k] = 0.5 * a;
                im[k] = -0.5 * b;
            }
        }
        Self { re, im }
    }

    /// Number of stored modes; the degree is at most `mode_count − 1`.
    pub fn mode_count(&self) -> usize {
        self.re.len()
    }

    pub fn coefficient(&self, k: usize) -> (f64, f64) {
        (self.re.get(k).copied().unwrap_or(0.0), self.im.get(k).copied().unwrap_or(0.0))
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = self.re.first().copied().unwrap_or(0.0);
        for k in 1..self.re.len() {
            let (s, c) = (k as f64 * t).sin_cos();
            acc += 2.0 * (self.re[k] * c - self.im[k] * s);
        }
        acc
    }
}

/// Encoder/decoder keeping the modes `|k| < n_enc` scaled by `λ`.
///
/// Features are ordered `[λ c_0, λ Re c_1, λ Im c_1, …]`, `2 n_enc − 1` reals.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FourierCodec {
    mode_count: usize,
    feature_scale: f64,
}

impl FourierCodec {
    pub fn new(mode_count: usize, feature_scale: f64) -> Result<Self> {
        if mode_count == 0 {
            return Err(param("mode_count", 0.0, "must be >= 1"));
        }
        if !(feature_scale.is_finite() && feature_scale > 0.0) {
            return Err(param("feature_scale", feature_scale, "must be finite and > 0"));
        }
        Ok(Self {
            mode_count,
            feature_scale,
        })
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn feature_scale(&self) -> f64 {
        self.feature_scale
    }

    pub fn feature_dim(&self) -> usize {
        2 * self.mode_count - 1
    }

    /// Size of the sampling grid; exact for inputs of degree below `3 n_enc`.
    pub fn grid_size(&self) -> usize {
        4 * self.mode_count
    }

    /// Discrete Fourier coefficients on the uniform grid, scaled.
    pub fn encode<F: Fn(f64) -> f64 + ?Sized>(&self, f: &F) -> Vec<f64> {
        let l = self.grid_size();
        let samples: Vec<f64> = (0..l).map(|j| f(TAU * j as f64 / l as f64)).collect();
        let mut out = Vec::with_capacity(self.feature_dim());
        let lambda = self.feature_scale / l as f64;
        out.push(lambda * samples.iter().sum::<f64>());
        for k in 1..self.mode_count {
            let (mut re, mut im) = (0.0, 0.0);
            for (j, v) in samples.iter().enumerate() {
                // k·j reduced mod l keeps the angle small
                let angle = TAU * ((k * j) % l) as f64 / l as f64;
                let (s, c) = angle.sin_cos();
                re += v * c;
                im -= v * s;
            }
            out.push(lambda * re);
            out.push(lambda * im);
        }
        out
    }

    pub fn decode(&self, features: &[f64]) -> Result<TrigPoly> {
        if features.len() != self.feature_dim() {
            return Err(Error::LengthMismatch {
                expected: self.feature_dim(),
                found: features.len(),
            });
        }
        let inv = 1.0 / self.feature_scale;
        let mut coefficients = Vec::with_capacity(self.mode_count);
        coefficients.push((features[0] * inv, 0.0));
        for pair in features[1..].chunks(2) {
            coefficients.push((pair[0] * inv, pair[1] * inv));
        }
        Ok(TrigPoly::new(&coefficients))
    }
}

/// A map from functions on the circle to functions on the circle.
pub trait OperatorOracle: Sync {
    /// `𝓕(F)(t)`.
    fn eval(&self, input: &dyn Fn(f64) -> f64, t: f64) -> f64;

    fn label(&self) -> String;

    /// How the oracle's Lipschitz constant depends on the input class.
    fn lipschitz_note(&self) -> String {
        String::new()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IdentityOracle;

impl OperatorOracle for IdentityOracle {
    fn eval(&self, input: &dyn Fn(f64) -> f64, t: f64) -> f64 {
        input(t)
    }

    fn label(&self) -> String {
        String::from("identity")
    }

    fn lipschitz_note(&self) -> String {
        String::from("1")
    }
}

/// `F ↦ F²`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SquareOracle;

impl OperatorOracle for SquareOracle {
    fn eval(&self, input: &dyn Fn(f64) -> f64, t: f64) -> f64 {
        let v = input(t);
        v * v
    }

    fn label(&self) -> String {
        String::from("square")
    }

    fn lipschitz_note(&self) -> String {
        String::from("2 sup|F| on the bounded input class")
    }
}

/// `F ↦ F(· − shift) · g`.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslateMultiplyOracle {
    pub shift: f64,
    pub multiplier: TrigPoly,
}

impl OperatorOracle for TranslateMultiplyOracle {
    fn eval(&self, input: &dyn Fn(f64) -> f64, t: f64) -> f64 {
        input(t - self.shift) * self.multiplier.eval(t)
    }

    fn label(&self) -> String {
        String::from("translate_multiply")
    }

    fn lipschitz_note(&self) -> String {
        String::from("sup|g|")
    }
}

/// Kernel parameters of a dataset; `d` is the input feature dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KernelSpec {
    pub d: usize,
    pub n: usize,
    pub r: f64,
}

/// Precomputed data of the prefabricated approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorDataset {
    pub codec_in: FourierCodec,
    pub codec_out: FourierCodec,
    pub rule: QuadratureRule,
    pub kernel: KernelSpec,
    /// Row `k` holds the `m` output features `z_k`; flat, row-major.
    pub z_table: Vec<f64>,
    /// Indices of quadrature points below the admissible cap; their rows are zero.
    pub clamp_report: Vec<usize>,
    pub eps_cap: f64,
}

impl OperatorDataset {
    /// Output feature count `m`.
    pub fn output_dim(&self) -> usize {
        self.codec_out.feature_dim()
    }

    pub fn z(&self, k: usize) -> &[f64] {
        let m = self.output_dim();
        &self.z_table[k * m..(k + 1) * m]
    }

    /// `(d + m)·N`: intrinsic point coordinates plus output features per quadrature point.
    pub fn parameter_count(&self) -> usize {
        (self.kernel.d + self.output_dim()) * self.rule.len()
    }

    pub fn config(&self) -> Result<ApproxConfig> {
        ApproxConfig::with_delta(self.kernel.d, self.kernel.n, self.kernel.r, 2.0)
    }

    /// Checks the structural invariants of a dataset read from elsewhere.
    pub fn validate(&self) -> Result<()> {
        let d = self.codec_in.feature_dim();
        if self.kernel.d != d || self.rule.d() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: if self.kernel.d != d { self.kernel.d } else { self.rule.d() },
            });
        }
        let expected = self.rule.len() * self.output_dim();
        if self.z_table.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: self.z_table.len(),
            });
        }
        if let Some(&bad) = self.clamp_report.iter().find(|&&k| k >= self.rule.len()) {
            return Err(Error::Input(alloc::format!("clamp index {bad} out of range")));
        }
        Ok(())
    }
}

/// Runs the oracle on the input function encoded by every admissible quadrature point.
pub fn precompute<O: OperatorOracle + ?Sized>(
    oracle: &O,
    codec_in: FourierCodec,
    codec_out: FourierCodec,
    rule: QuadratureRule,
    kernel: KernelSpec,
    eps_cap: f64,
) -> Result<OperatorDataset> {
    let d = codec_in.feature_dim();
    if rule.d() != d {
        return Err(Error::DimensionMismatch { expected: d, found: rule.d() });
    }
    if kernel.d != d {
        return Err(Error::DimensionMismatch { expected: d, found: kernel.d });
    }
    if !(eps_cap > 0.0 && eps_cap < 1.0) {
        return Err(param("eps_cap", eps_cap, "must lie in (0, 1)"));
    }
    // fail early on bad kernel parameters
    ApproxConfig::with_delta(kernel.d, kernel.n, kernel.r, 2.0)?;
    let m = codec_out.feature_dim();
    let mut z_table = vec![0.0; rule.len() * m];
    let mut clamp_report = Vec::new();
    for (k, (y, _)) in rule.iter().enumerate() {
        let last = y[d];
        if last < eps_cap {
            clamp_report.push(k);
            continue;
        }
        let features: Vec<f64> = y[..d].iter().map(|u| u / last).collect();
        let f_k = codec_in.decode(&features)?;
        let input = |t: f64| f_k.eval(t);
        let z = codec_out.encode(&|t: f64| oracle.eval(&input, t));
        z_table[k * m..(k + 1) * m].copy_from_slice(&z);
    }
    if clamp_report.len() == rule.len() {
        return Err(Error::DegenerateDataset);
    }
    Ok(OperatorDataset {
        codec_in,
        codec_out,
        rule,
        kernel,
        z_table,
        clamp_report,
        eps_cap,
    })
}

/// Result of applying a dataset to one input.
#[derive(Debug, Clone, PartialEq)]
pub struct Applied {
    pub output: TrigPoly,
    pub output_features: Vec<f64>,
    /// Euclidean norm of the scaled input features.
    pub feature_norm: f64,
    /// The input lies outside the unit feature ball the dataset was built for.
    pub out_of_class: bool,
}

/// `decode_out(Σ_k w_k z_k Φ(x·y_k))` with `x` the lifted input features.
pub fn apply<F: Fn(f64) -> f64 + ?Sized>(dataset: &OperatorDataset, input: &F) -> Result<Applied> {
    let features = dataset.codec_in.encode(input);
    let feature_norm = dot(&features, &features).sqrt();
    let x = lift(&features);
    let config = dataset.config()?;
    let kernel = config.kernel();
    let m = dataset.output_dim();
    let mut b = vec![0.0; m];
    for (k, (y, w)) in dataset.rule.iter().enumerate() {
        let phi = kernel.eval(KernelKind::Phi, dot(x.coords(), y));
        for (acc, z) in b.iter_mut().zip(dataset.z(k)) {
            *acc += w * z * phi;
        }
    }
    Ok(Applied {
        output: dataset.codec_out.decode(&b)?,
        output_features: b,
        feature_norm,
        out_of_class: feature_norm > 1.0 + FEATURE_NORM_TOLERANCE,
    })
}
