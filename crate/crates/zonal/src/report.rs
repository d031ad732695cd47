//! Pass/fail summary over experiment CSVs.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::table::{read_table, ParsedTable};
use crate::thresholds::Thresholds;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub path: PathBuf,
    pub experiment: String,
    pub rows: usize,
    pub pass: bool,
    pub metrics: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub thresholds_version: u32,
    pub experiments: Vec<ExperimentSummary>,
    pub all_pass: bool,
}

pub fn report_summary(paths: &[impl AsRef<Path>], thresholds: &Thresholds) -> Result<Summary> {
    let experiments = paths
        .iter()
        .map(|p| summarize(&read_table(p.as_ref())?, thresholds))
        .collect::<Result<Vec<_>>>()?;
    Ok(Summary {
        thresholds_version: thresholds.version,
        all_pass: experiments.iter().all(|e| e.pass),
        experiments,
    })
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn summarize(t: &ParsedTable, th: &Thresholds) -> Result<ExperimentSummary> {
    let (pass, metrics) = match t.experiment.as_str() {
        "kernel_profile" => {
            let v = t.floats("value")?;
            let peak = v.last().copied().unwrap_or(f64::NAN);
            let others = max(&v[..v.len().saturating_sub(1)].iter().map(|x| x.abs()).collect::<Vec<_>>());
            (peak > 0.0 && others <= peak, json!({ "peak": peak, "max_abs_elsewhere": others }))
        }
        "quadrature_build" | "quadrature_verify" => {
            let r = max(&t.floats("max_residual")?);
            (r <= th.quadrature_exactness, json!({ "max_residual": r }))
        }
        "quadrature_sparsify" => {
            let out = t.floats("output_points")?;
            let dim = t.floats("dim")?;
            let w = min(&t.floats("min_weight")?);
            let res = max(&t.floats("moment_residual")?);
            let ok = out.iter().zip(&dim).all(|(o, d)| o <= d) && w >= 0.0 && res <= th.sparsify_residual;
            (ok, json!({ "min_weight": w, "moment_residual": res }))
        }
        "converge" => {
            let slope = t.floats("slope")?.first().copied().unwrap_or(f64::NAN);
            let r2 = t.floats("r_squared")?.first().copied().unwrap_or(f64::NAN);
            let target = t.floats("target_slope")?.first().copied().unwrap_or(f64::NAN);
            let semilog = t.strings("fit")?.first() == Some(&"semi_log");
            let mut ok = slope <= target && (!semilog || (slope < 0.0 && r2 > th.analytic_r_squared));
            let slope_far = t.floats("slope_far")?.first().copied().unwrap_or(f64::NAN);
            if !slope_far.is_nan() {
                // adaptivity: far errors decay at the kernel rate and stay below near errors
                let r = t.floats("r")?[0];
                let ns = t.floats("n")?;
                let near = t.floats("error_near")?;
                let far = t.floats("error_far")?;
                ok &= slope_far <= th.adaptivity_far_slope_factor * r;
                ok &= (0..ns.len()).filter(|&i| ns[i] >= 8.0).all(|i| far[i] < near[i]);
            }
            (ok, json!({ "slope": slope, "r_squared": r2, "target_slope": target, "slope_far": slope_far }))
        }
        "localize" => {
            let diff = t.floats("max_abs_diff")?;
            let bound = t.floats("bound")?;
            let ok = diff.iter().zip(&bound).all(|(d, b)| *d <= th.localization_abs && d <= b);
            (ok, json!({ "max_abs_diff": max(&diff) }))
        }
        "lebesgue" => {
            let s = t.floats("s")?;
            let est = t.floats("estimate")?;
            let scaled = t.floats("scaled")?;
            let pick = |want: f64, v: &[f64]| -> Vec<f64> {
                s.iter().zip(v).filter(|(x, _)| **x == want).map(|(_, y)| *y).collect()
            };
            let l0 = pick(0.0, &est);
            let l1 = pick(1.0, &scaled);
            let ratio = l0.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
            let band = if l1.is_empty() { 1.0 } else { max(&l1) / min(&l1) };
            let ok = ratio <= th.lebesgue_s0_ratio && band <= th.lebesgue_s1_band;
            (ok, json!({ "s0_max_ratio": ratio, "s1_band": band }))
        }
        "montecarlo" => {
            let slope = t.floats("slope")?[0];
            let target = t.floats("target_slope")?[0];
            let ok = (slope - target).abs() <= th.montecarlo_slope_tolerance;
            (ok, json!({ "slope": slope, "target_slope": target }))
        }
        "pipeline_demo" => {
            let oracles = t.strings("oracle")?;
            let err = t.floats("sup_error")?;
            let zero = max(&t.floats("zero_input_error")?);
            let mut ok = zero <= th.pipeline_zero_input;
            match oracles.first().copied() {
                Some("square") => ok &= max(&err) <= th.pipeline_square,
                Some("identity") => {
                    ok &= err.windows(2).all(|w| w[1] <= w[0] * (1.0 + th.pipeline_identity_slack));
                }
                _ => {}
            }
            (ok, json!({ "sup_error": err, "zero_input_error": zero }))
        }
        // parse_table already rejected unknown experiments
        other => unreachable!("unknown experiment {other}"),
    };
    Ok(ExperimentSummary {
        path: t.path.clone(),
        experiment: t.experiment.clone(),
        rows: t.rows.len(),
        pass,
        metrics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_list_gives_empty_summary() {
        let s = report_summary(&[] as &[PathBuf], &Thresholds::frozen()).unwrap();
        assert!(s.experiments.is_empty());
        assert!(s.all_pass);
    }
}
