//! Experiment configuration: flat `key = value` files with CLI overrides.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};

use latred_core::solvers::SolverChoice;
use latred_core::{Family, Mode};

/// Parses a solver name plus a trial count into a [`SolverChoice`].
pub fn parse_solver(name: &str, trials: u32) -> Result<SolverChoice> {
    Ok(match name {
        "brute-force" | "brute" => SolverChoice::BruteForce,
        "branch-and-bound" | "bnb" => SolverChoice::BranchAndBound,
        "greedy" => SolverChoice::BidirectionalGreedy {
            randomized: false,
            repeats: 1,
        },
        "random-greedy" | "rgreedy" => SolverChoice::BidirectionalGreedy {
            randomized: true,
            repeats: trials.max(1),
        },
        "local-search" => SolverChoice::LocalSearch {
            restarts: trials.max(1),
        },
        "random-permutation" | "random-perm" => SolverChoice::RandomPermutation {
            trials: trials.max(1),
        },
        other => bail!("unknown solver '{}'", other),
    })
}

/// Everything a sweep needs. Scale grids are interpreted in ratio space by
/// default (converted per instance through the lattice margins) or as
/// absolute scales.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub family: Family,
    pub n: usize,
    pub mode: Mode,
    /// Instances per sweep.
    pub cases: usize,
    /// Master seed; every case, grid point, and draw derives from it.
    pub master_seed: u64,
    /// Base seed for instance generation; defaults to the master seed.
    pub instance_seed: Option<u64>,
    /// Scale grid (ratios in `[0,1]` or absolute scales).
    pub grid: Vec<f64>,
    pub grid_is_ratio: bool,
    /// Noise draws per grid point (reduction sweeps).
    pub draws: usize,
    /// Runs per randomized solver (best-of).
    pub trials: u32,
    /// Inner solver of the perturbation pipeline.
    pub solver: String,
    /// Baseline solver run on the full problem.
    pub baseline: String,
    pub out: Option<PathBuf>,
    /// Also emit per-run raw rows.
    pub raw: bool,
    /// Measure wall time (disable for byte-reproducible output).
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            family: Family::SubsetSelection,
            n: 20,
            mode: Mode::Maximize,
            cases: 10,
            master_seed: 0,
            instance_seed: None,
            grid: vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0],
            grid_is_ratio: true,
            draws: 10,
            trials: 5,
            solver: "branch-and-bound".into(),
            baseline: "branch-and-bound".into(),
            out: None,
            raw: false,
            timing: true,
        }
    }
}

impl ExperimentConfig {
    pub fn inner_choice(&self) -> Result<SolverChoice> {
        parse_solver(&self.solver, self.trials)
    }

    pub fn baseline_choice(&self) -> Result<SolverChoice> {
        parse_solver(&self.baseline, self.trials)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            bail!("scale grid is empty");
        }
        if self.cases == 0 || self.draws == 0 {
            bail!("cases and draws must be at least 1");
        }
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        if self.grid_is_ratio {
            if let Some(p) = self.grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                bail!("ratio {} outside [0, 1]", p);
            }
        } else if let Some(t) = self.grid.iter().find(|t| **t < 0.0) {
            bail!("absolute scale {} is negative", t);
        }
        if self.mode == Mode::Minimize
            && matches!(
                self.family,
                Family::SubsetSelection | Family::GaussianMi | Family::Cut
            )
        {
            bail!(
                "{} has a trivial zero minimum; minimization sweeps use logdet or half-products",
                self.family
            );
        }
        self.inner_choice()?;
        self.baseline_choice()?;
        Ok(())
    }

    /// Applies one `key = value` pair.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "family" => self.family = Family::from_str(value)?,
            "n" => self.n = value.parse().context("n")?,
            "mode" => self.mode = Mode::from_str(value)?,
            "cases" => self.cases = value.parse().context("cases")?,
            "master_seed" | "seed" => self.master_seed = value.parse().context("seed")?,
            "instance_seed" => self.instance_seed = Some(value.parse().context("instance_seed")?),
            "grid" => {
                self.grid = value
                    .split(',')
                    .map(|p| p.trim().parse::<f64>().context("grid entry"))
                    .collect::<Result<_>>()?
            }
            "grid_kind" => {
                self.grid_is_ratio = match value {
                    "ratio" => true,
                    "absolute" => false,
                    _ => bail!("grid_kind must be ratio or absolute"),
                }
            }
            "draws" => self.draws = value.parse().context("draws")?,
            "trials" => self.trials = value.parse().context("trials")?,
            "solver" => self.solver = value.to_owned(),
            "baseline" => self.baseline = value.to_owned(),
            "out" => self.out = Some(PathBuf::from(value)),
            "raw" => self.raw = value.parse().context("raw")?,
            "timing" => self.timing = value.parse().context("timing")?,
            other => bail!("unknown config key '{}'", other),
        }
        Ok(())
    }

    /// Reads a flat `key = value` file; `#` starts a comment.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.merge_file(path)?;
        Ok(cfg)
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("line {}: expected key = value", lineno + 1))?;
            self.apply(key.trim(), value.trim())
                .with_context(|| format!("line {}", lineno + 1))?;
        }
        Ok(())
    }
}
