//! Command-line front end.

pub mod config;
pub mod runner;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{PartialConfig, RunConfig};
pub use runner::{run_experiment, RunReport, Setup};

use crate::error::Result;
use crate::problems::ExperimentId;
use crate::pushforward::EmbeddingMode;
use crate::schemes::ExtensionMode;

#[derive(Debug, Parser)]
#[command(name = "surfembed", version, about = "Hyperbolic conservation laws on implicit curves and surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an experiment over one or more grid sizes.
    Run(RunArgs),
    /// List the experiment catalog.
    List,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Experiment id, positional or via --experiment.
    #[arg(value_name = "EXPERIMENT")]
    pub id: Option<String>,
    #[arg(long)]
    pub experiment: Option<String>,
    /// Points per axis, comma separated for a convergence sweep.
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub order: Option<String>,
    #[arg(long)]
    pub cfl: Option<f64>,
    /// pushforward or straightforward.
    #[arg(long)]
    pub embedding: Option<String>,
    /// neumann or exact.
    #[arg(long)]
    pub extension: Option<String>,
    #[arg(long = "t-final")]
    pub t_final: Option<f64>,
    /// Number of equally spaced output times.
    #[arg(long)]
    pub snapshots: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key = value file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl RunArgs {
    pub fn to_partial(&self) -> Result<PartialConfig> {
        let experiment = match self.experiment.as_deref().or(self.id.as_deref()) {
            Some(s) => Some(s.parse::<ExperimentId>()?),
            None => None,
        };
        Ok(PartialConfig {
            experiment,
            n: self.n.as_deref().map(config::parse_n_list).transpose()?,
            order: self.order.as_deref().map(config::parse_order).transpose()?,
            cfl: self.cfl,
            embedding: self.embedding.as_deref().map(str::parse::<EmbeddingMode>).transpose()?,
            extension: self.extension.as_deref().map(str::parse::<ExtensionMode>).transpose()?,
            t_final: self.t_final,
            snapshots: self.snapshots,
            out: self.out.clone(),
        })
    }

    /// Flags over file over environment over defaults.
    pub fn resolve(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(p) => PartialConfig::from_file(p)?,
            None => PartialConfig::default(),
        };
        let env_out = std::env::var_os(config::OUT_ENV).map(PathBuf::from);
        self.to_partial()?.over(file).resolve(env_out)
    }
}

pub fn list_experiments() -> String {
    ExperimentId::ALL
        .iter()
        .map(|id| format!("{:<5} {}\n", id.name(), id.description()))
        .collect()
}
