use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use zonal::experiments::{
    run_converge, run_kernel_profile, run_lebesgue, run_localize, run_montecarlo, run_pipeline,
    run_quadrature_build, run_quadrature_sparsify, run_quadrature_verify, ConvergeConfig, KernelProfileConfig,
    LebesgueConfig, LocalizeConfig, MonteCarloConfig, PipelineConfig, QuadratureConfig,
};
use zonal::formats::{read_json, write_json, DatasetFile, RuleFile};
use zonal::report::report_summary;
use zonal::table::Table;
use zonal::thresholds::Thresholds;

/// Localized zonal kernel approximation on spheres: experiments and reports.
#[derive(Parser)]
#[command(name = "zonal", version)]
struct Cli {
    /// JSON config for the subcommand; omitted fields keep their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV and JSON artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate Φ or Φ̃ on [-1, 1].
    KernelProfile,
    /// Build, verify or sparsify quadrature rules.
    Quadrature {
        #[command(subcommand)]
        action: QuadratureAction,
    },
    /// Sup-norm error against degree, with a fitted rate.
    Converge {
        /// One of smooth, smooth_r2, analytic, adaptivity; `--config` overrides fields.
        #[arg(long, default_value = "smooth")]
        preset: String,
    },
    /// Compare the global and localized operators.
    Localize,
    /// Estimate weighted Lebesgue constants.
    Lebesgue,
    /// Monte-Carlo estimator error against sample budget.
    Montecarlo,
    /// Prefabricated operator approximation.
    Pipeline {
        #[command(subcommand)]
        action: PipelineAction,
    },
    /// Summarize experiment CSVs as pass/fail JSON on stdout.
    Report {
        files: Vec<PathBuf>,
        /// Alternative thresholds file.
        #[arg(long)]
        thresholds: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum QuadratureAction {
    /// Product Gauss rule; writes `rule.json`.
    Build,
    /// Check exactness of a rule file.
    Verify {
        rule: PathBuf,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Tchakaloff compression of a rule file; writes `sparse_rule.json`.
    Sparsify {
        rule: PathBuf,
        #[arg(long)]
        target: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

#[derive(Subcommand)]
enum PipelineAction {
    /// Precompute and apply a dataset; writes `dataset_<preset>.json` for the last degree.
    Demo {
        /// One of square, identity, translate; `--config` overrides fields.
        #[arg(long, default_value = "square")]
        preset: String,
    },
}

fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> anyhow::Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => Ok(read_json(p).with_context(|| format!("reading config {}", p.display()))?),
    }
}

/// Config file fields layered over a preset.
fn load_over<T: DeserializeOwned + serde::Serialize>(base: T, path: Option<&Path>) -> anyhow::Result<T> {
    let Some(p) = path else { return Ok(base) };
    let mut merged = serde_json::to_value(base)?;
    let patch: serde_json::Value = read_json(p).with_context(|| format!("reading config {}", p.display()))?;
    let (Some(m), serde_json::Value::Object(patch)) = (merged.as_object_mut(), patch) else {
        bail!("config {} must be a JSON object", p.display());
    };
    m.extend(patch);
    Ok(serde_json::from_value(merged)?)
}

struct Ctx {
    out: PathBuf,
    started: Instant,
}

impl Ctx {
    fn emit(&self, table: &Table, name: &str) -> anyhow::Result<()> {
        let path = self.out.join(name);
        table.write(&path, Some(self.started.elapsed()))?;
        println!("{}", path.display());
        Ok(())
    }
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    if !matches!(cli.command, Command::Report { .. }) {
        fs::create_dir_all(&cli.out).with_context(|| format!("creating {}", cli.out.display()))?;
    }
    let ctx = Ctx {
        out: cli.out.clone(),
        started: Instant::now(),
    };
    let config = cli.config.as_deref();
    let thresholds = Thresholds::frozen();
    match cli.command {
        Command::KernelProfile => {
            let c: KernelProfileConfig = load(config)?;
            ctx.emit(&run_kernel_profile(&c)?, "kernel_profile.csv")?;
        }
        Command::Quadrature { action } => match action {
            QuadratureAction::Build => {
                let mut c: QuadratureConfig = load(config)?;
                c.seed = cli.seed.unwrap_or(c.seed);
                let (table, rule) = run_quadrature_build(&c)?;
                write_json(&ctx.out.join("rule.json"), &RuleFile::from(&rule))?;
                ctx.emit(&table, "quadrature_build.csv")?;
            }
            QuadratureAction::Verify { rule, trials } => {
                let rule = read_json::<RuleFile>(&rule)?.to_rule()?;
                ctx.emit(&run_quadrature_verify(&rule, trials, cli.seed.unwrap_or(0))?, "quadrature_verify.csv")?;
            }
            QuadratureAction::Sparsify { rule, target, trials } => {
                let rule = read_json::<RuleFile>(&rule)?.to_rule()?;
                let (table, sparse) = run_quadrature_sparsify(&rule, target, trials, cli.seed.unwrap_or(0))?;
                write_json(&ctx.out.join("sparse_rule.json"), &RuleFile::from(&sparse))?;
                ctx.emit(&table, "quadrature_sparsify.csv")?;
            }
        },
        Command::Converge { preset } => {
            let mut c = load_over(ConvergeConfig::preset(&preset)?, config)?;
            c.seed = cli.seed.unwrap_or(c.seed);
            ctx.emit(&run_converge(&c, &thresholds)?, &format!("converge_{preset}.csv"))?;
        }
        Command::Localize => {
            let mut c: LocalizeConfig = load(config)?;
            c.seed = cli.seed.unwrap_or(c.seed);
            ctx.emit(&run_localize(&c)?, "localize.csv")?;
        }
        Command::Lebesgue => {
            let mut c: LebesgueConfig = load(config)?;
            c.seed = cli.seed.unwrap_or(c.seed);
            ctx.emit(&run_lebesgue(&c)?, "lebesgue.csv")?;
        }
        Command::Montecarlo => {
            let mut c: MonteCarloConfig = load(config)?;
            c.seed = cli.seed.unwrap_or(c.seed);
            ctx.emit(&run_montecarlo(&c)?, "montecarlo.csv")?;
        }
        Command::Pipeline {
            action: PipelineAction::Demo { preset },
        } => {
            let c = load_over(PipelineConfig::preset(&preset)?, config)?;
            let run = run_pipeline(&c)?;
            if let Some(ds) = run.datasets.last() {
                write_json(&ctx.out.join(format!("dataset_{preset}.json")), &DatasetFile::from(ds))?;
            }
            ctx.emit(&run.table, &format!("pipeline_{preset}.csv"))?;
        }
        Command::Report { files, thresholds: alt } => {
            let th = match alt {
                Some(p) => Thresholds::from_json(&fs::read_to_string(&p).with_context(|| p.display().to_string())?)?,
                None => thresholds,
            };
            let summary = report_summary(&files, &th)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
            if !summary.all_pass {
                std::process::exit(2);
            }
        }
    }
    Ok(())
}
