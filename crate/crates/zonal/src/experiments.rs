//! Experiment runners. Each takes a serde config (every field has a default) and returns a
//! [`Table`]; probe loops run on the rayon pool, and results are collected in probe order so
//! tables are identical for any thread count.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use zonal_core::approx::catalog::{CapPower, CuspPlusPolynomial, ExpRidge, TruncatedPower};
use zonal_core::approx::{
    error_probes, localization_split, sample, sigma_from_values, sigma_hat, ApproxConfig, TargetFunction,
};
use zonal_core::kernels::{kernel_profile, lebesgue_sum, KernelKind, LocalizedKernel};
use zonal_core::pipeline::{
    apply, precompute, FourierCodec, IdentityOracle, KernelSpec, OperatorDataset, OperatorOracle, SquareOracle,
    TranslateMultiplyOracle, TrigPoly,
};
use zonal_core::probes::{probe_poles, random_poles};
use zonal_core::quadrature::{
    budget_to_degree, mz_norm_estimate, product_rule, random_design, tchakaloff_sparsify, verify_exactness,
    QuadratureRule,
};
use zonal_core::sphere::{dim_pi, SpherePoint};
use zonal_core::stats::{linear_fit, log_log_fit, LineFit};

use crate::error::{Error, Result};
use crate::table::{config_hash, fmt_f64, Table};
use crate::thresholds::Thresholds;

/// Catalog functions addressable from config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    CapPower {
        #[serde(default)]
        pole: Option<Vec<f64>>,
        r: f64,
    },
    TruncatedPower {
        #[serde(default)]
        pole: Option<Vec<f64>>,
        #[serde(default)]
        level: f64,
        r: f64,
    },
    ExpRidge {
        direction: Vec<f64>,
    },
    CuspPlusCubic {
        #[serde(default)]
        cusp: Option<Vec<f64>>,
        r: f64,
        #[serde(default = "one")]
        weight: f64,
        #[serde(default)]
        axis: Option<Vec<f64>>,
    },
}

fn one() -> f64 {
    1.0
}

/// Generic-position pole used when a config leaves it out.
pub fn default_pole(d: usize) -> SpherePoint {
    let coords = match d {
        2 => vec![0.2, 0.3, 0.9],
        3 => vec![0.1, 0.2, -0.3, 0.9],
        _ => (0..=d).map(|i| if i == d { 1.0 } else { 0.1 * (i + 1) as f64 }).collect(),
    };
    SpherePoint::new(coords).expect("nonzero")
}

fn default_axis(d: usize) -> SpherePoint {
    let coords = (0..=d).map(|i| if i == d { 0.5 } else if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    SpherePoint::new(coords).expect("nonzero")
}

fn point_or(d: usize, given: &Option<Vec<f64>>, fallback: fn(usize) -> SpherePoint) -> Result<SpherePoint> {
    match given {
        None => Ok(fallback(d)),
        Some(v) if v.len() != d + 1 => Err(Error::Config(format!("point {v:?} needs {} coordinates", d + 1))),
        Some(v) => Ok(SpherePoint::new(v.clone())?),
    }
}

impl FunctionSpec {
    pub fn build(&self, d: usize) -> Result<Box<dyn TargetFunction>> {
        Ok(match self {
            Self::CapPower { pole, r } => Box::new(CapPower {
                pole: point_or(d, pole, default_pole)?,
                r: *r,
            }),
            Self::TruncatedPower { pole, level, r } => Box::new(TruncatedPower {
                pole: point_or(d, pole, default_pole)?,
                level: *level,
                r: *r,
            }),
            Self::ExpRidge { direction } => {
                if direction.len() != d + 1 {
                    return Err(Error::Config(format!("direction needs {} coordinates", d + 1)));
                }
                Box::new(ExpRidge {
                    direction: direction.clone(),
                })
            }
            Self::CuspPlusCubic { cusp, r, weight, axis } => Box::new(CuspPlusPolynomial {
                cusp: point_or(d, cusp, default_pole)?,
                r: *r,
                weight: *weight,
                axis: point_or(d, axis, default_axis)?,
            }),
        })
    }
}

fn approx_config(d: usize, n: usize, r: f64) -> Result<ApproxConfig> {
    // δ_n is undefined at n = 1; a radius of 2 covers the sphere
    Ok(if n >= 2 {
        ApproxConfig::new(d, n, r)?
    } else {
        ApproxConfig::with_delta(d, n, r, 2.0)?
    })
}

fn rule_for(config: &ApproxConfig) -> Result<QuadratureRule> {
    Ok(product_rule(config.d(), config.kernel().required_order())?)
}

fn int(v: impl ToString) -> String {
    v.to_string()
}

fn fit_or_nan(fit: Option<LineFit>) -> (f64, f64) {
    fit.map_or((f64::NAN, f64::NAN), |f| (f.slope, f.r_squared))
}

// ---------------------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelProfileConfig {
    pub d: usize,
    pub n: usize,
    pub r: f64,
    pub kind: KernelKind,
    pub grid: usize,
}

impl Default for KernelProfileConfig {
    fn default() -> Self {
        Self {
            d: 3,
            n: 4,
            r: 2.0,
            kind: KernelKind::Phi,
            grid: 257,
        }
    }
}

pub fn run_kernel_profile(c: &KernelProfileConfig) -> Result<Table> {
    let kernel = LocalizedKernel::new(c.d, c.n, c.r)?;
    let profile = kernel_profile(&kernel, c.kind, c.grid)?;
    let peak = *profile.values.last().expect("grid >= 2");
    let kind = match c.kind {
        KernelKind::Phi => "phi",
        KernelKind::PhiTilde => "phi_tilde",
    };
    let mut t = Table::new("kernel_profile", config_hash(c), 0);
    for (x, v) in profile.abscissae.iter().zip(&profile.values) {
        t.push(vec![int(c.d), int(c.n), fmt_f64(c.r), kind.into(), fmt_f64(*x), fmt_f64(*v), fmt_f64(v / peak)]);
    }
    Ok(t)
}

// ---------------------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub d: usize,
    pub order: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            d: 2,
            order: 8,
            trials: 20,
            seed: 0,
        }
    }
}

pub fn run_quadrature_build(c: &QuadratureConfig) -> Result<(Table, QuadratureRule)> {
    let rule = product_rule(c.d, c.order)?;
    let residual = verify_exactness(&rule, c.trials, c.seed)?;
    let mut t = Table::new("quadrature_build", config_hash(c), c.seed);
    t.push(vec![
        int(c.d),
        int(c.order),
        int(rule.len()),
        int(rule.is_positive()),
        fmt_f64(rule.weight_sum()),
        int(c.trials),
        int(c.seed),
        fmt_f64(residual),
    ]);
    Ok((t, rule))
}

/// Exactness and Marcinkiewicz–Zygmund check of an existing rule.
pub fn run_quadrature_verify(rule: &QuadratureRule, trials: usize, seed: u64) -> Result<Table> {
    let residual = verify_exactness(rule, trials, seed)?;
    let mz = mz_norm_estimate(rule, rule.order(), trials, seed)?;
    let hash = config_hash(&(rule.d(), rule.order(), rule.len(), trials, seed));
    let mut t = Table::new("quadrature_verify", hash, seed);
    t.push(vec![
        int(rule.d()),
        int(rule.order()),
        int(rule.len()),
        int(rule.is_positive()),
        int(trials),
        int(seed),
        fmt_f64(residual),
        fmt_f64(mz),
    ]);
    Ok(t)
}

pub fn run_quadrature_sparsify(rule: &QuadratureRule, target: usize, trials: usize, seed: u64) -> Result<(Table, QuadratureRule)> {
    let out = tchakaloff_sparsify(rule, target)?;
    let exactness = verify_exactness(&out.rule, trials, seed)?;
    let min_weight = out.rule.weights().iter().copied().fold(f64::INFINITY, f64::min);
    let hash = config_hash(&(rule.d(), rule.order(), rule.len(), target, trials, seed));
    let mut t = Table::new("quadrature_sparsify", hash, seed);
    t.push(vec![
        int(rule.d()),
        int(target),
        int(rule.len()),
        int(out.rule.len()),
        int(dim_pi(rule.d(), target as f64)),
        fmt_f64(min_weight),
        fmt_f64(out.residual),
        fmt_f64(exactness),
    ]);
    Ok((t, out.rule))
}

// ---------------------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fit {
    /// `log e` against `log n`: algebraic rates.
    LogLog,
    /// `log e` against `n`: geometric rates.
    SemiLog,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergeConfig {
    pub d: usize,
    pub ns: Vec<usize>,
    /// Kernel smoothness.
    pub r: f64,
    pub function: FunctionSpec,
    pub probes: usize,
    pub seed: u64,
    pub fit: Fit,
    /// Probes within this chordal distance of a singular point count as "near".
    pub near_radius: Option<f64>,
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        Self::preset("smooth").expect("known preset")
    }
}

impl ConvergeConfig {
    pub const PRESETS: [&'static str; 4] = ["smooth", "smooth_r2", "analytic", "adaptivity"];

    pub fn preset(name: &str) -> Result<Self> {
        let base = Self {
            d: 2,
            ns: vec![4, 6, 8, 12, 16],
            r: 1.0,
            function: FunctionSpec::CapPower { pole: None, r: 1.0 },
            probes: 400,
            seed: 0,
            fit: Fit::LogLog,
            near_radius: None,
        };
        Ok(match name {
            "smooth" => base,
            // (1 − x·p) is itself a polynomial, so r = 2 uses a ridge instead of a cap power
            "smooth_r2" => Self {
                r: 2.0,
                function: FunctionSpec::TruncatedPower {
                    pole: None,
                    level: 0.0,
                    r: 2.0,
                },
                ..base
            },
            "analytic" => Self {
                d: 3,
                ns: (2..=10).collect(),
                function: FunctionSpec::ExpRidge {
                    direction: vec![1.2, -2.0, 1.6, 2.8],
                },
                probes: 100,
                fit: Fit::SemiLog,
                ..base
            },
            "adaptivity" => Self {
                r: 2.0,
                function: FunctionSpec::CuspPlusCubic {
                    cusp: None,
                    r: 1.0,
                    weight: 1.0,
                    axis: None,
                },
                near_radius: Some(1.0),
                ..base
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown preset {other:?}; expected one of {:?}",
                    Self::PRESETS
                )))
            }
        })
    }
}

/// Per-degree errors of a convergence run, before tabulation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergeRun {
    pub ns: Vec<usize>,
    pub rule_points: Vec<usize>,
    pub error: Vec<f64>,
    pub error_near: Vec<f64>,
    pub error_far: Vec<f64>,
    pub fit: Option<LineFit>,
    pub fit_far: Option<LineFit>,
    pub target_slope: f64,
}

pub fn converge(c: &ConvergeConfig, thresholds: &Thresholds) -> Result<ConvergeRun> {
    if c.ns.len() < 2 {
        return Err(Error::Config(String::from("converge needs at least two degrees")));
    }
    let f = c.function.build(c.d)?;
    let probes = error_probes(c.d, f.as_ref(), c.probes, c.seed);
    let singular = f.singular_points();
    let near: Vec<bool> = match c.near_radius {
        Some(rho) => probes
            .iter()
            .map(|q| singular.iter().any(|s| s.chordal_distance(q.coords()) <= rho))
            .collect(),
        None => vec![false; probes.len()],
    };
    let truth: Vec<f64> = probes.par_iter().map(|q| f.eval(q.coords())).collect();
    let mut run = ConvergeRun {
        ns: c.ns.clone(),
        rule_points: Vec::new(),
        error: Vec::new(),
        error_near: Vec::new(),
        error_far: Vec::new(),
        fit: None,
        fit_far: None,
        target_slope: 0.0,
    };
    for &n in &c.ns {
        let config = approx_config(c.d, n, c.r)?;
        let rule = rule_for(&config)?;
        let values = sample(&rule, f.as_ref());
        let errs = probes
            .par_iter()
            .zip(&truth)
            .map(|(q, v)| Ok((v - sigma_from_values(&config, KernelKind::Phi, &rule, &values, q.coords())?).abs()))
            .collect::<Result<Vec<f64>>>()?;
        let max_where = |want: bool| {
            errs.iter()
                .zip(&near)
                .filter(|(_, &is_near)| is_near == want)
                .map(|(e, _)| *e)
                .fold(f64::NAN, f64::max)
        };
        run.rule_points.push(rule.len());
        run.error.push(errs.iter().copied().fold(0.0, f64::max));
        if c.near_radius.is_some() {
            run.error_near.push(max_where(true));
            run.error_far.push(max_where(false));
        } else {
            run.error_near.push(f64::NAN);
            run.error_far.push(f64::NAN);
        }
    }
    let xs: Vec<f64> = c.ns.iter().map(|&n| n as f64).collect();
    run.fit = match c.fit {
        Fit::LogLog => log_log_fit(&xs, &run.error),
        Fit::SemiLog => linear_fit(&xs, &run.error.iter().map(|e| e.ln()).collect::<Vec<_>>()),
    };
    if c.near_radius.is_some() {
        run.fit_far = log_log_fit(&xs, &run.error_far);
    }
    run.target_slope = match c.fit {
        Fit::LogLog => {
            let s = f.smoothness().map_or(c.r, |s| s.min(c.r));
            thresholds.smooth_slope_factor * s
        }
        Fit::SemiLog => 0.0,
    };
    Ok(run)
}

pub fn run_converge(c: &ConvergeConfig, thresholds: &Thresholds) -> Result<Table> {
    let run = converge(c, thresholds)?;
    let label = c.function.build(c.d)?.label();
    let (slope, r2) = fit_or_nan(run.fit);
    let (slope_far, _) = fit_or_nan(run.fit_far);
    let fit = match c.fit {
        Fit::LogLog => "log_log",
        Fit::SemiLog => "semi_log",
    };
    let mut t = Table::new("converge", config_hash(c), c.seed);
    for i in 0..run.ns.len() {
        t.push(vec![
            int(c.d),
            int(run.ns[i]),
            fmt_f64(c.r),
            label.clone(),
            int(run.rule_points[i]),
            int(c.probes),
            int(c.seed),
            fmt_f64(run.error[i]),
            fmt_f64(run.error_near[i]),
            fmt_f64(run.error_far[i]),
            fit.into(),
            fmt_f64(slope),
            fmt_f64(r2),
            fmt_f64(slope_far),
            fmt_f64(run.target_slope),
        ]);
    }
    Ok(t)
}

// ---------------------------------------------------------------------------------------

fn default_functions() -> Vec<FunctionSpec> {
    vec![
        FunctionSpec::CapPower { pole: None, r: 1.0 },
        FunctionSpec::TruncatedPower {
            pole: None,
            level: 0.0,
            r: 2.0,
        },
        FunctionSpec::ExpRidge {
            direction: vec![0.5, -0.5, 0.5, 0.5],
        },
        FunctionSpec::CuspPlusCubic {
            cusp: None,
            r: 1.0,
            weight: 1.0,
            axis: None,
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LocalizeConfig {
    pub d: usize,
    pub ns: Vec<usize>,
    pub r: f64,
    pub functions: Vec<FunctionSpec>,
    pub points: usize,
    pub seed: u64,
}

impl Default for LocalizeConfig {
    fn default() -> Self {
        Self {
            d: 3,
            ns: vec![8, 16],
            r: 1.0,
            functions: default_functions(),
            points: 20,
            seed: 0,
        }
    }
}

pub fn run_localize(c: &LocalizeConfig) -> Result<Table> {
    let fs = c.functions.iter().map(|s| s.build(c.d)).collect::<Result<Vec<_>>>()?;
    let xs = random_poles(c.d, c.points, c.seed);
    let mut t = Table::new("localize", config_hash(c), c.seed);
    for &n in &c.ns {
        let config = approx_config(c.d, n, c.r)?;
        let rule = rule_for(&config)?;
        let values: Vec<Vec<f64>> = fs.iter().map(|f| sample(&rule, f.as_ref())).collect();
        let refs: Vec<&[f64]> = values.iter().map(Vec::as_slice).collect();
        let splits = xs
            .par_iter()
            .map(|x| Ok(localization_split(&config, &rule, &refs, x.coords())?))
            .collect::<Result<Vec<_>>>()?;
        for (i, f) in fs.iter().enumerate() {
            let diff = splits.iter().map(|s| (s[i].0 - s[i].1.value).abs()).fold(0.0, f64::max);
            let used = splits.iter().map(|s| s[i].1.points_used).min().unwrap_or(0);
            t.push(vec![
                int(c.d),
                int(n),
                fmt_f64(c.r),
                fmt_f64(config.delta_n()),
                f.label(),
                int(c.points),
                int(c.seed),
                fmt_f64(diff),
                int(used),
                fmt_f64((n as f64).powf(-2.0 * c.r)),
            ]);
        }
    }
    Ok(t)
}

// ---------------------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LebesgueConfig {
    pub d: usize,
    pub ns: Vec<usize>,
    pub r: f64,
    pub s_values: Vec<f64>,
    pub probes: usize,
    pub seed: u64,
}

impl Default for LebesgueConfig {
    fn default() -> Self {
        Self {
            d: 3,
            ns: vec![4, 8, 16],
            r: 1.0,
            s_values: vec![0.0, 1.0],
            probes: 16,
            seed: 0,
        }
    }
}

pub fn run_lebesgue(c: &LebesgueConfig) -> Result<Table> {
    let poles = probe_poles(c.d, c.probes.max(1), c.seed);
    let mut t = Table::new("lebesgue", config_hash(c), c.seed);
    for &n in &c.ns {
        let config = approx_config(c.d, n, c.r)?;
        let rule = rule_for(&config)?;
        for &s in &c.s_values {
            let estimate = poles
                .par_iter()
                .map(|x| lebesgue_sum(config.kernel(), &rule, s, x.coords()))
                .collect::<Vec<_>>()
                .into_iter()
                .fold(0.0, f64::max);
            t.push(vec![
                int(c.d),
                int(n),
                fmt_f64(c.r),
                fmt_f64(s),
                int(rule.len()),
                int(c.probes),
                int(c.seed),
                fmt_f64(estimate),
                fmt_f64(estimate * (n as f64).powf(s)),
            ]);
        }
    }
    Ok(t)
}

// ---------------------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MonteCarloConfig {
    pub d: usize,
    pub r: f64,
    pub ms: Vec<u64>,
    /// Number of independent designs per budget, seeded `seed, seed + 1, ...`.
    pub seeds: u64,
    pub seed: u64,
    pub probes: usize,
    pub function: FunctionSpec,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        Self {
            d: 2,
            r: 2.0,
            ms: vec![1_000, 10_000, 100_000],
            seeds: 5,
            seed: 0,
            probes: 200,
            function: FunctionSpec::TruncatedPower {
                pole: None,
                level: 0.0,
                r: 2.0,
            },
        }
    }
}

pub fn run_montecarlo(c: &MonteCarloConfig) -> Result<Table> {
    if c.seeds == 0 || c.ms.len() < 2 {
        return Err(Error::Config(String::from("montecarlo needs seeds >= 1 and at least two budgets")));
    }
    let f = c.function.build(c.d)?;
    let probes = error_probes(c.d, f.as_ref(), c.probes, c.seed);
    let truth: Vec<f64> = probes.iter().map(|q| f.eval(q.coords())).collect();
    let mut rows = Vec::new();
    for &m in &c.ms {
        let n = budget_to_degree(m, c.r, c.d);
        let config = approx_config(c.d, n, c.r)?;
        let mut errs = Vec::new();
        for s in 0..c.seeds {
            let design = random_design(c.d, m as usize, c.seed + s, None)?;
            let e = probes
                .par_iter()
                .zip(&truth)
                .map(|(q, v)| Ok((v - sigma_hat(&config, &design, f.as_ref(), q.coords())?).abs()))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            errs.push(e);
        }
        let mean = errs.iter().sum::<f64>() / errs.len() as f64;
        let min = errs.iter().copied().fold(f64::INFINITY, f64::min);
        let max = errs.iter().copied().fold(0.0, f64::max);
        rows.push((m, n, mean, min, max));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.0 as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let (slope, r2) = fit_or_nan(log_log_fit(&xs, &ys));
    let target = -c.r / (2.0 * c.r + c.d as f64);
    let mut t = Table::new("montecarlo", config_hash(c), c.seed);
    for (m, n, mean, min, max) in rows {
        t.push(vec![
            int(c.d),
            fmt_f64(c.r),
            int(m),
            int(n),
            int(c.seeds),
            fmt_f64(mean),
            fmt_f64(min),
            fmt_f64(max),
            fmt_f64(slope),
            fmt_f64(r2),
            fmt_f64(target),
        ]);
    }
    Ok(t)
}

// ---------------------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OracleSpec {
    Identity,
    Square,
    Translate {
        shift: f64,
        multiplier_cos: Vec<f64>,
        #[serde(default)]
        multiplier_sin: Vec<f64>,
    },
}

impl OracleSpec {
    fn build(&self) -> Box<dyn OperatorOracle> {
        match self {
            Self::Identity => Box::new(IdentityOracle),
            Self::Square => Box::new(SquareOracle),
            Self::Translate {
                shift,
                multiplier_cos,
                multiplier_sin,
            } => Box::new(TranslateMultiplyOracle {
                shift: *shift,
                multiplier: TrigPoly::from_cos_sin(multiplier_cos, multiplier_sin),
            }),
        }
    }

    /// Output modes needed for a band-limited image of inputs with `modes_in` modes.
    fn output_modes(&self, modes_in: usize) -> usize {
        match self {
            Self::Identity => modes_in,
            Self::Square => 2 * modes_in - 1,
            Self::Translate {
                multiplier_cos,
                multiplier_sin,
                ..
            } => modes_in + multiplier_cos.len().max(multiplier_sin.len()).max(1) - 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub oracle: OracleSpec,
    pub ns: Vec<usize>,
    pub r: f64,
    pub modes_in: usize,
    pub modes_out: Option<usize>,
    pub feature_scale: f64,
    /// The product rule has order `rule_order_factor · n`.
    pub rule_order_factor: usize,
    pub eps_cap: f64,
    /// Test input `Σ a_k cos kt + Σ b_k sin kt`.
    pub input_cos: Vec<f64>,
    pub input_sin: Vec<f64>,
    pub grid: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self::preset("square").expect("known preset")
    }
}

impl PipelineConfig {
    pub const PRESETS: [&'static str; 3] = ["square", "identity", "translate"];

    pub fn preset(name: &str) -> Result<Self> {
        let base = Self {
            oracle: OracleSpec::Square,
            ns: vec![4],
            r: 1.0,
            modes_in: 2,
            modes_out: None,
            feature_scale: 2.0,
            rule_order_factor: 10,
            eps_cap: zonal_core::pipeline::DEFAULT_EPS_CAP,
            input_cos: vec![0.0, 0.5],
            input_sin: vec![],
            grid: 200,
        };
        Ok(match name {
            "square" => base,
            "identity" => Self {
                oracle: OracleSpec::Identity,
                ns: vec![2, 4, 8],
                input_cos: vec![0.1, 0.3],
                input_sin: vec![0.0, 0.2],
                ..base
            },
            "translate" => Self {
                oracle: OracleSpec::Translate {
                    shift: 0.4,
                    multiplier_cos: vec![1.0, 0.5],
                    multiplier_sin: vec![],
                },
                input_cos: vec![0.1, 0.3],
                input_sin: vec![0.0, 0.2],
                ..base
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown preset {other:?}; expected one of {:?}",
                    Self::PRESETS
                )))
            }
        })
    }
}

/// A pipeline table together with the datasets it was computed from, one per degree.
pub struct PipelineRun {
    pub table: Table,
    pub datasets: Vec<OperatorDataset>,
}

pub fn run_pipeline(c: &PipelineConfig) -> Result<PipelineRun> {
    let oracle = c.oracle.build();
    let codec_in = FourierCodec::new(c.modes_in, c.feature_scale)?;
    let codec_out = FourierCodec::new(c.modes_out.unwrap_or(c.oracle.output_modes(c.modes_in)), c.feature_scale)?;
    let input = TrigPoly::from_cos_sin(&c.input_cos, &c.input_sin);
    let input_fn = |t: f64| input.eval(t);
    let zero = |_: f64| 0.0;
    let grid: Vec<f64> = (0..c.grid.max(1)).map(|j| TAU * j as f64 / c.grid.max(1) as f64).collect();
    let reference: Vec<f64> = grid.iter().map(|&t| oracle.eval(&input_fn, t)).collect();
    let zero_reference: Vec<f64> = grid.iter().map(|&t| oracle.eval(&zero, t)).collect();
    let mut table = Table::new("pipeline_demo", config_hash(c), 0);
    let mut datasets = Vec::new();
    for &n in &c.ns {
        let rule = product_rule(codec_in.feature_dim(), c.rule_order_factor * n)?;
        let kernel = KernelSpec {
            d: codec_in.feature_dim(),
            n,
            r: c.r,
        };
        let ds = precompute(oracle.as_ref(), codec_in, codec_out, rule, kernel, c.eps_cap)?;
        let out = apply(&ds, &input_fn)?;
        let out_zero = apply(&ds, &zero)?;
        let sup = |p: &TrigPoly, reference: &[f64]| {
            grid.iter()
                .zip(reference)
                .map(|(&t, v)| (p.eval(t) - v).abs())
                .fold(0.0, f64::max)
        };
        table.push(vec![
            oracle.label(),
            int(n),
            int(ds.rule.len()),
            int(ds.clamp_report.len()),
            fmt_f64(out.feature_norm),
            int(out.out_of_class),
            fmt_f64(sup(&out.output, &reference)),
            fmt_f64(sup(&out_zero.output, &zero_reference)),
        ]);
        datasets.push(ds);
    }
    Ok(PipelineRun { table, datasets })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn configs_accept_partial_json() {
        let c: ConvergeConfig = serde_json::from_str(r#"{"ns": [2, 3]}"#).unwrap();
        assert_eq!(c.ns, vec![2, 3]);
        assert_eq!(c.d, 2);
        let c: LocalizeConfig =
            serde_json::from_str(r#"{"functions": [{"kind": "cap_power", "r": 3}]}"#).unwrap();
        assert_eq!(c.functions.len(), 1);
        assert!(serde_json::from_str::<LebesgueConfig>(r#"{"typo": 1}"#).is_err());
    }

    #[test]
    fn wrong_point_length_is_a_config_error() {
        let spec = FunctionSpec::CapPower {
            pole: Some(vec![1.0, 0.0]),
            r: 1.0,
        };
        assert!(matches!(spec.build(2), Err(Error::Config(_))));
    }

    #[test]
    fn small_converge_run_decreases() {
        let c = ConvergeConfig {
            ns: vec![2, 4],
            probes: 20,
            ..ConvergeConfig::default()
        };
        let run = converge(&c, &Thresholds::frozen()).unwrap();
        assert!(run.error[1] < run.error[0]);
    }

    #[test]
    fn presets_are_known() {
        for p in ConvergeConfig::PRESETS {
            ConvergeConfig::preset(p).unwrap();
        }
        for p in PipelineConfig::PRESETS {
            PipelineConfig::preset(p).unwrap();
        }
        assert!(ConvergeConfig::preset("nope").is_err());
    }
}
