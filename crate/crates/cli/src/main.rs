//! `latred`: lattice reduction and perturbation toolkit for unconstrained
//! submodular optimization.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use latred_core::families::LogDetSymmetric;
use latred_core::instances::{self, InstanceParams};
use latred_core::perturb;
use latred_core::reduction::reduce_in;
use latred_core::solvers::solve_on_lattice;
use latred_core::{Family, Lattice, Mode, Oracle};

use latred_cli::config::{parse_solver, ExperimentConfig};
use latred_cli::io;
use latred_cli::sweeps::{self, core_and_stats, run_opt_experiment, run_reduction_sweep};
use latred_cli::timing::timed;
use latred_cli::verify;

#[derive(Parser)]
#[command(
    name = "latred",
    version,
    about = "Lattice reduction and perturbation toolkit for unconstrained submodular optimization"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// How an instance is specified: a generated family or a feature table
/// turned into a log-det kernel.
#[derive(Args)]
struct InstanceArgs {
    /// Objective family: subset-selection, gaussian-mi, logdet,
    /// half-products, cut, modular.
    #[arg(long, default_value = "subset-selection")]
    family: String,
    /// Ground-set size of generated instances.
    #[arg(long, default_value_t = 20)]
    n: usize,
    /// Instance seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Build a log-det instance from this numeric feature CSV instead of
    /// generating one.
    #[arg(long)]
    features: Option<PathBuf>,
    /// RBF bandwidth for --features.
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Diagonal jitter for --features.
    #[arg(long, default_value_t = 1e-8)]
    jitter: f64,
}

impl InstanceArgs {
    fn build(&self) -> Result<(Oracle, String)> {
        if let Some(path) = &self.features {
            let rows = io::read_features(path)?;
            let f = LogDetSymmetric::from_features(&rows, self.gamma, self.jitter)?;
            return Ok((f.oracle(), format!("logdet:{}", path.display())));
        }
        let family = Family::from_str(&self.family)?;
        let f = instances::generate(family, self.n, self.seed)?;
        Ok((f, family.to_string()))
    }
}

#[derive(Args)]
struct SweepOverrides {
    /// Flat key = value config file; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    mode: Option<String>,
    /// Comma-separated scale grid.
    #[arg(long)]
    grid: Option<String>,
    /// Interpret the grid as absolute scales instead of ratios.
    #[arg(long)]
    absolute_grid: bool,
    #[arg(long)]
    draws: Option<usize>,
    #[arg(long)]
    cases: Option<usize>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    solver: Option<String>,
    #[arg(long)]
    baseline: Option<String>,
    #[arg(long)]
    trials: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write per-run rows next to the aggregate file.
    #[arg(long)]
    raw: bool,
    /// Report zero wall times (byte-reproducible output).
    #[arg(long)]
    no_timing: bool,
}

impl SweepOverrides {
    fn build(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(v) = &self.family {
            cfg.apply("family", v)?;
        }
        if let Some(v) = self.n {
            cfg.apply("n", &v.to_string())?;
        }
        if let Some(v) = &self.mode {
            cfg.apply("mode", v)?;
        }
        if let Some(v) = &self.grid {
            cfg.apply("grid", v)?;
        }
        if self.absolute_grid {
            cfg.apply("grid_kind", "absolute")?;
        }
        if let Some(v) = self.draws {
            cfg.apply("draws", &v.to_string())?;
        }
        if let Some(v) = self.cases {
            cfg.apply("cases", &v.to_string())?;
        }
        if let Some(v) = self.seed {
            cfg.apply("master_seed", &v.to_string())?;
        }
        if let Some(v) = &self.solver {
            cfg.apply("solver", v)?;
        }
        if let Some(v) = &self.baseline {
            cfg.apply("baseline", v)?;
        }
        if let Some(v) = self.trials {
            cfg.apply("trials", &v.to_string())?;
        }
        if let Some(v) = &self.out {
            cfg.out = Some(v.clone());
        }
        if self.raw {
            cfg.raw = true;
        }
        if self.no_timing {
            cfg.timing = false;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance and write its parameters as matrix/vector files.
    Gen {
        #[command(flatten)]
        inst: InstanceArgs,
        /// Output stem; files get .matrix.txt / .a.txt / ... suffixes.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the exact reduction and export the iteration trace.
    Reduce {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, default_value = "max")]
        mode: String,
        /// Trace CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full perturb-reduce-solve pipeline once.
    PerturbReduce {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, default_value = "max")]
        mode: String,
        /// Absolute perturbation scale.
        #[arg(long, conflicts_with = "pt_ratio")]
        t: Option<f64>,
        /// Perturbation scale ratio in [0, 1], converted through the
        /// instance margins.
        #[arg(long)]
        pt_ratio: Option<f64>,
        #[arg(long, default_value = "brute-force")]
        solver: String,
        /// Trials/restarts for randomized solvers.
        #[arg(long, default_value_t = 5)]
        trials: u32,
        /// Noise seed (defaults to the instance seed).
        #[arg(long)]
        noise_seed: Option<u64>,
        /// Also compute a brute-force reference and report the loss.
        #[arg(long)]
        with_reference: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a single solver on the full problem.
    Solve {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, default_value = "max")]
        mode: String,
        #[arg(long, default_value = "brute-force")]
        solver: String,
        #[arg(long, default_value_t = 5)]
        trials: u32,
        /// Solver seed.
        #[arg(long, default_value_t = 0)]
        solver_seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduction-rate sweep over a perturbation-scale grid.
    SweepReduction {
        #[command(flatten)]
        sweep: SweepOverrides,
    },
    /// Optimization sweep: perturbation pipeline vs a baseline solver.
    SweepOpt {
        #[command(flatten)]
        sweep: SweepOverrides,
    },
    /// Bound-vs-empirical sweep: closed-form rate and mistake bounds next
    /// to their Monte Carlo estimates.
    SweepBounds {
        #[command(flatten)]
        sweep: SweepOverrides,
    },
    /// Run the self-check property suites.
    Verify,
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn raw_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep");
    let ext = out.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    out.with_file_name(format!("{}-raw.{}", stem, ext))
}

fn emit_sweep(out: &Option<PathBuf>, result: sweeps::SweepOutput) -> Result<()> {
    write_or_print(out, &result.aggregate)?;
    if let Some(raw) = result.raw {
        match out {
            Some(path) => {
                let rp = raw_path(path);
                std::fs::write(&rp, raw).with_context(|| format!("writing {}", rp.display()))?;
                eprintln!("wrote {}", rp.display());
            }
            None => print!("{}", raw),
        }
    }
    Ok(())
}

fn cmd_gen(inst: &InstanceArgs, out: &Path) -> Result<()> {
    if inst.features.is_some() {
        bail!("gen writes generated instances; feature kernels already live in a file");
    }
    let family = Family::from_str(&inst.family)?;
    let params = instances::generate_params(family, inst.n, inst.seed)?;
    let stem = out.to_str().context("output stem must be valid UTF-8")?;
    let mut written: Vec<String> = Vec::new();
    match &params {
        InstanceParams::SubsetSelection { m, lambda } => {
            let p = PathBuf::from(format!("{}.matrix.txt", stem));
            io::write_matrix(&p, m)?;
            written.push(p.display().to_string());
            println!("lambda {}", lambda);
        }
        InstanceParams::GaussianMi { sigma } => {
            let p = PathBuf::from(format!("{}.matrix.txt", stem));
            io::write_matrix(&p, sigma)?;
            written.push(p.display().to_string());
        }
        InstanceParams::LogDet { k } => {
            let p = PathBuf::from(format!("{}.matrix.txt", stem));
            io::write_matrix(&p, k)?;
            written.push(p.display().to_string());
        }
        InstanceParams::HalfProducts { a, b, c } => {
            for (name, v) in [("a", a), ("b", b), ("c", c)] {
                let p = PathBuf::from(format!("{}.{}.txt", stem, name));
                io::write_vector(&p, v)?;
                written.push(p.display().to_string());
            }
        }
        InstanceParams::Cut { w } => {
            let p = PathBuf::from(format!("{}.matrix.txt", stem));
            io::write_matrix(&p, w)?;
            written.push(p.display().to_string());
        }
        InstanceParams::Modular { w } => {
            let p = PathBuf::from(format!("{}.w.txt", stem));
            io::write_vector(&p, w)?;
            written.push(p.display().to_string());
        }
    }
    for p in written {
        println!("wrote {}", p);
    }
    Ok(())
}

fn cmd_reduce(inst: &InstanceArgs, mode: &str, out: &Option<PathBuf>) -> Result<()> {
    let (f, label) = inst.build()?;
    let mode = Mode::from_str(mode)?;
    let full = Lattice::full(f.ground());
    let (lat, trace) = reduce_in(&f, &full, mode);
    eprintln!(
        "{} n={} {}: rate {} after {} iterations; lower=[{}] upper=[{}]",
        label,
        f.n(),
        mode,
        trace.final_rate,
        trace.iteration_count(),
        lat.lower(),
        lat.upper()
    );
    write_or_print(out, &sweeps::trace_csv(&trace)?)
}

#[allow(clippy::too_many_arguments)]
fn cmd_perturb_reduce(
    inst: &InstanceArgs,
    mode: &str,
    t: Option<f64>,
    pt_ratio: Option<f64>,
    solver: &str,
    trials: u32,
    noise_seed: Option<u64>,
    with_reference: bool,
    out: &Option<PathBuf>,
) -> Result<()> {
    let (f, label) = inst.build()?;
    let mode = Mode::from_str(mode)?;
    let choice = parse_solver(solver, trials)?;
    let (t, ratio) = match (t, pt_ratio) {
        (Some(t), None) => (t, None),
        (None, Some(p)) => {
            let (_, stats) = core_and_stats(&f, mode)?;
            (perturb::scale_for_ratio(&stats, p).max(0.0), Some(p))
        }
        (None, None) => bail!("one of --t or --pt-ratio is required"),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let seed = noise_seed.unwrap_or(inst.seed);
    let full = Lattice::full(f.ground());
    let (run, secs) = timed(|| perturb::optimize(&f, &full, mode, t, seed, choice));
    let run = run?;
    let reference = if with_reference {
        Some(latred_core::solvers::brute_force(&f, mode)?.value)
    } else {
        None
    };
    eprintln!(
        "{} n={} {}: value {} at [{}], rate {}",
        label,
        f.n(),
        mode,
        run.value,
        run.solution,
        run.noisy_pass.final_rate
    );
    write_or_print(
        out,
        &sweeps::outcome_csv(&label, mode, &run, ratio, reference, secs)?,
    )
}

fn cmd_solve(
    inst: &InstanceArgs,
    mode: &str,
    solver: &str,
    trials: u32,
    solver_seed: u64,
    out: &Option<PathBuf>,
) -> Result<()> {
    let (f, label) = inst.build()?;
    let mode = Mode::from_str(mode)?;
    let choice = parse_solver(solver, trials)?;
    let full = Lattice::full(f.ground());
    let (rep, secs) = timed(|| solve_on_lattice(&f, &full, mode, choice, solver_seed));
    let mut rep = rep?;
    rep.wall_seconds = secs;
    eprintln!(
        "{} n={} {} via {}: value {} at [{}]",
        label,
        f.n(),
        mode,
        choice.name(),
        rep.value,
        rep.solution
    );
    write_or_print(
        out,
        &sweeps::solve_report_csv(choice.name(), f.n(), &rep, solver_seed)?,
    )
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Gen { inst, out } => {
            cmd_gen(&inst, &out)?;
        }
        Cmd::Reduce { inst, mode, out } => {
            cmd_reduce(&inst, &mode, &out)?;
        }
        Cmd::PerturbReduce {
            inst,
            mode,
            t,
            pt_ratio,
            solver,
            trials,
            noise_seed,
            with_reference,
            out,
        } => {
            cmd_perturb_reduce(
                &inst,
                &mode,
                t,
                pt_ratio,
                &solver,
                trials,
                noise_seed,
                with_reference,
                &out,
            )?;
        }
        Cmd::Solve {
            inst,
            mode,
            solver,
            trials,
            solver_seed,
            out,
        } => {
            cmd_solve(&inst, &mode, &solver, trials, solver_seed, &out)?;
        }
        Cmd::SweepReduction { sweep } => {
            let cfg = sweep.build()?;
            let result = run_reduction_sweep(&cfg)?;
            emit_sweep(&cfg.out, result)?;
        }
        Cmd::SweepOpt { sweep } => {
            let cfg = sweep.build()?;
            let (result, _) = run_opt_experiment(&cfg)?;
            emit_sweep(&cfg.out, result)?;
        }
        Cmd::SweepBounds { sweep } => {
            let cfg = sweep.build()?;
            let result = sweeps::run_bound_sweep(&cfg)?;
            emit_sweep(&cfg.out, result)?;
        }
        Cmd::Verify => {
            let ok = verify::run_all(&mut std::io::stdout())?;
            if !ok {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage problems exit with 1; --help/--version print and exit 0.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(1)
        }
    }
}
