//! CSV experiment tables.
//!
//! Layout: `#`-prefixed provenance lines, one header row, then the body. The first comment
//! line is `# experiment=<name> config_hash=<hex> seed=<seed>`; run time goes on its own
//! `# elapsed_s=` line so bodies stay byte-identical across runs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Header of every experiment CSV; the stable, documented schemas.
pub const SCHEMAS: &[(&str, &[&str])] = &[
    ("kernel_profile", &["d", "n", "r", "kind", "x", "value", "relative"]),
    (
        "quadrature_build",
        &["d", "order", "points", "positive", "weight_sum", "trials", "seed", "max_residual"],
    ),
    (
        "quadrature_verify",
        &["d", "order", "points", "positive", "trials", "seed", "max_residual", "mz_norm"],
    ),
    (
        "quadrature_sparsify",
        &[
            "d",
            "target_order",
            "input_points",
            "output_points",
            "dim",
            "min_weight",
            "moment_residual",
            "exactness_residual",
        ],
    ),
    (
        "converge",
        &[
            "d",
            "n",
            "r",
            "function",
            "rule_points",
            "probes",
            "seed",
            "error",
            "error_near",
            "error_far",
            "fit",
            "slope",
            "r_squared",
            "slope_far",
            "target_slope",
        ],
    ),
    (
        "localize",
        &["d", "n", "r", "delta_n", "function", "points", "seed", "max_abs_diff", "min_points_used", "bound"],
    ),
    (
        "lebesgue",
        &["d", "n", "r", "s", "rule_points", "probes", "seed", "estimate", "scaled"],
    ),
    (
        "montecarlo",
        &[
            "d",
            "r",
            "m",
            "n",
            "seeds",
            "mean_error",
            "min_error",
            "max_error",
            "slope",
            "r_squared",
            "target_slope",
        ],
    ),
    (
        "pipeline_demo",
        &[
            "oracle",
            "n",
            "rule_points",
            "clamped",
            "feature_norm",
            "out_of_class",
            "sup_error",
            "zero_input_error",
        ],
    ),
];

pub fn schema(experiment: &str) -> Option<&'static [&'static str]> {
    SCHEMAS.iter().find(|(name, _)| *name == experiment).map(|(_, h)| *h)
}

/// First 16 hex digits of SHA-256 over the compact JSON form of a config.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    let json = serde_json::to_string(config).expect("configs serialize");
    let digest = Sha256::digest(json.as_bytes());
    digest[..8].iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Floats in shortest round-trip scientific form.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        String::from("nan")
    } else {
        format!("{v:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub experiment: &'static str,
    pub config_hash: String,
    pub seed: u64,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(experiment: &'static str, config_hash: String, seed: u64) -> Self {
        assert!(schema(experiment).is_some(), "unknown experiment {experiment}");
        Self {
            experiment,
            config_hash,
            seed,
            rows: Vec::new(),
        }
    }

    pub fn header(&self) -> &'static [&'static str] {
        schema(self.experiment).expect("checked in new")
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header().len(), "row width for {}", self.experiment);
        self.rows.push(row);
    }

    /// Header and body, without comment lines.
    pub fn body(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(self.header()).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    pub fn render(&self, elapsed: Option<Duration>) -> String {
        let mut out = format!(
            "# experiment={} config_hash={} seed={}\n",
            self.experiment, self.config_hash, self.seed
        );
        if let Some(e) = elapsed {
            let _ = writeln!(out, "# elapsed_s={:.3}", e.as_secs_f64());
        }
        out + &self.body()
    }

    pub fn write(&self, path: &Path, elapsed: Option<Duration>) -> Result<()> {
        fs::write(path, self.render(elapsed)).map_err(|e| Error::io(path, e))
    }
}

/// A CSV read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTable {
    pub path: PathBuf,
    pub experiment: String,
    pub config_hash: Option<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ParsedTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Numeric column; parse failures name the offending line.
    pub fn floats(&self, name: &str) -> Result<Vec<f64>> {
        let idx = self.column(name).ok_or_else(|| Error::Format(format!("missing column {name}")))?;
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row[idx].parse::<f64>().map_err(|_| Error::Parse {
                    path: self.path.clone(),
                    line: i as u64 + 2,
                    message: format!("column {name}: not a number: {:?}", row[idx]),
                })
            })
            .collect()
    }

    pub fn strings(&self, name: &str) -> Result<Vec<&str>> {
        let idx = self.column(name).ok_or_else(|| Error::Format(format!("missing column {name}")))?;
        Ok(self.rows.iter().map(|r| r[idx].as_str()).collect())
    }
}

pub fn parse_table(path: &Path, text: &str) -> Result<ParsedTable> {
    let mut experiment = None;
    let mut config_hash = None;
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        for token in line.trim_start_matches('#').split_whitespace() {
            if let Some(v) = token.strip_prefix("experiment=") {
                experiment = Some(v.to_string());
            } else if let Some(v) = token.strip_prefix("config_hash=") {
                config_hash = Some(v.to_string());
            }
        }
    }
    let experiment = experiment.ok_or_else(|| Error::Parse {
        path: path.to_path_buf(),
        line: 1,
        message: String::from("missing '# experiment=' provenance line"),
    })?;
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let parse_err = |e: csv::Error| {
        let line = e.position().map(|p| p.line()).unwrap_or(0);
        Error::Parse {
            path: path.to_path_buf(),
            line,
            message: e.to_string(),
        }
    };
    let header: Vec<String> = reader.headers().map_err(parse_err)?.iter().map(String::from).collect();
    if let Some(expected) = schema(&experiment) {
        if header != expected {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: text.lines().take_while(|l| l.starts_with('#')).count() as u64 + 1,
                message: format!("header {header:?} does not match the {experiment} schema {expected:?}"),
            });
        }
    } else {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!("unknown experiment {experiment:?}"),
        });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        rows.push(record.map_err(parse_err)?.iter().map(String::from).collect());
    }
    Ok(ParsedTable {
        path: path.to_path_buf(),
        experiment,
        config_hash,
        header,
        rows,
    })
}

pub fn read_table(path: &Path) -> Result<ParsedTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_table(path, &text)
}
