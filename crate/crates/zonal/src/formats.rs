//! JSON file formats for rules, datasets, Gauss–Jacobi rules and kernel profiles.
//!
//! Floats are written in shortest round-trip form and parsed with correct rounding, so
//! write-then-read is bit-exact.

use std::fs;
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use zonal_core::jacobi::GaussJacobiRule;
use zonal_core::pipeline::{FourierCodec, KernelSpec, OperatorDataset};
use zonal_core::quadrature::QuadratureRule;

use crate::error::{Error, Result};

/// `{d, order, positive, points: [[...]], weights: [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleFile {
    pub d: usize,
    pub order: usize,
    pub positive: bool,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mz_norm: Option<f64>,
}

impl From<&QuadratureRule> for RuleFile {
    fn from(rule: &QuadratureRule) -> Self {
        Self {
            d: rule.d(),
            order: rule.order(),
            positive: rule.is_positive(),
            points: rule.iter().map(|(y, _)| y.to_vec()).collect(),
            weights: rule.weights().to_vec(),
            mz_norm: rule.mz_norm(),
        }
    }
}

impl RuleFile {
    /// Rebuilds the rule, checking shape and the stored positivity flag.
    pub fn to_rule(&self) -> Result<QuadratureRule> {
        if let Some(bad) = self.points.iter().find(|p| p.len() != self.d + 1) {
            return Err(Error::Format(format!(
                "rule point has {} coordinates, expected {}",
                bad.len(),
                self.d + 1
            )));
        }
        let flat = self.points.iter().flatten().copied().collect();
        let mut rule = QuadratureRule::new(self.d, flat, self.weights.clone(), self.order)?;
        if rule.is_positive() != self.positive {
            return Err(Error::Format(String::from("positive flag disagrees with weights")));
        }
        if let Some(v) = self.mz_norm {
            rule.set_mz_norm(v);
        }
        Ok(rule)
    }
}

/// Prefabricated operator dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetFile {
    pub codec_in: FourierCodec,
    pub codec_out: FourierCodec,
    pub rule: RuleFile,
    pub kernel: KernelSpec,
    pub z_table: Vec<Vec<f64>>,
    pub clamp_report: Vec<usize>,
    pub eps_cap: f64,
}

impl From<&OperatorDataset> for DatasetFile {
    fn from(ds: &OperatorDataset) -> Self {
        Self {
            codec_in: ds.codec_in,
            codec_out: ds.codec_out,
            rule: RuleFile::from(&ds.rule),
            kernel: ds.kernel,
            z_table: (0..ds.rule.len()).map(|k| ds.z(k).to_vec()).collect(),
            clamp_report: ds.clamp_report.clone(),
            eps_cap: ds.eps_cap,
        }
    }
}

impl DatasetFile {
    pub fn to_dataset(&self) -> Result<OperatorDataset> {
        // serde bypasses the codec constructor checks
        let codec_in = FourierCodec::new(self.codec_in.mode_count(), self.codec_in.feature_scale())?;
        let codec_out = FourierCodec::new(self.codec_out.mode_count(), self.codec_out.feature_scale())?;
        let ds = OperatorDataset {
            codec_in,
            codec_out,
            rule: self.rule.to_rule()?,
            kernel: self.kernel,
            z_table: self.z_table.iter().flatten().copied().collect(),
            clamp_report: self.clamp_report.clone(),
            eps_cap: self.eps_cap,
        };
        ds.validate()?;
        Ok(ds)
    }
}

/// Nodes and weights of a Gauss–Jacobi rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussJacobiFile {
    pub alpha: f64,
    pub beta: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl From<&GaussJacobiRule> for GaussJacobiFile {
    fn from(rule: &GaussJacobiRule) -> Self {
        Self {
            alpha: rule.params.alpha(),
            beta: rule.params.beta(),
            nodes: rule.nodes.clone(),
            weights: rule.weights.clone(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)? + "\n").map_err(|e| Error::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use zonal_core::quadrature::product_rule;

    #[test]
    fn rule_round_trip_is_bit_exact() {
        let rule = product_rule(3, 7).unwrap();
        let text = to_json(&RuleFile::from(&rule)).unwrap();
        let back = from_json::<RuleFile>(&text).unwrap().to_rule().unwrap();
        assert_eq!(back, rule);
    }

    #[test]
    fn malformed_rules_are_rejected() {
        let mut file = RuleFile::from(&product_rule(2, 3).unwrap());
        file.points[0].pop();
        assert!(file.to_rule().is_err());
        let mut file = RuleFile::from(&product_rule(2, 3).unwrap());
        file.positive = false;
        assert!(file.to_rule().is_err());
    }
}
