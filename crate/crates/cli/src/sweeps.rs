//! Experiment sweeps: reduction-rate curves over a perturbation-scale grid,
//! and optimization comparisons of the perturbation pipeline against a
//! baseline solver on the full problem.
//!
//! Scale grids given in ratio space are converted per instance through the
//! margin statistics of the exact-reduction core lattice (the sublattice on
//! which the function is irreducible), so a ratio of zero perturbs below
//! every margin and a ratio of one reaches the largest margin.
//!
//! Reduction sweeps parallelize over draws with deterministically derived
//! seeds; row order is independent of scheduling. Optimization sweeps run
//! serially so the reported time ratios stay meaningful.

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use latred_core::instances;
use latred_core::noise::derive_seed;
use latred_core::perturb::{self, scale_for_ratio, scale_ratio, Perturbation};
use latred_core::reduction::{lattice_stats, reduce_in, LatticeStats, ReductionTrace};
use latred_core::solvers::{solve_on_lattice, SolveReport};
use latred_core::{Lattice, Mode, Oracle};

use crate::config::ExperimentConfig;
use crate::csvout::{fmt_f64, CsvWriter};
use crate::metrics::relative_error;
use crate::timing::timed;

/// CSV text produced by a sweep: the aggregate table plus, behind the `raw`
/// flag, the per-run table it was computed from.
pub struct SweepOutput {
    pub aggregate: String,
    pub raw: Option<String>,
}

/// Builds the worker pool honoring `LATRED_THREADS` (0 = serial; unset =
/// one worker per core).
pub fn worker_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var("LATRED_THREADS") {
        Ok(s) => {
            let k: usize = s.parse().context("LATRED_THREADS must be an integer")?;
            k.max(1)
        }
        Err(_) => 0, // rayon default
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("building worker pool")
}

fn generate_case(cfg: &ExperimentConfig, case: usize) -> Result<Oracle> {
    let base = cfg.instance_seed.unwrap_or(cfg.master_seed);
    Ok(instances::generate(
        cfg.family,
        cfg.n,
        derive_seed(base, case as u64),
    )?)
}

/// Exact-reduction core of an instance plus margin statistics for grid
/// conversion. On the (irreducible) core the minimum margin is nonnegative,
/// so every ratio in `[0, 1]` maps to a valid scale. When the exact pass
/// already decides everything the core is a point; the full-lattice margins
/// are used instead and scales are clamped at zero.
pub fn core_and_stats(f: &Oracle, mode: Mode) -> Result<(Lattice, LatticeStats)> {
    let full = Lattice::full(f.ground());
    let (core, _) = reduce_in(f, &full, mode);
    let stats = if core.free_count() > 0 {
        lattice_stats(f, &core)?
    } else {
        lattice_stats(f, &full)?
    };
    Ok((core, stats))
}

fn grid_scales(cfg: &ExperimentConfig, stats: &LatticeStats) -> Vec<(f64, f64)> {
    // (t, ratio) pairs; the ratio column is best-effort for absolute grids.
    cfg.grid
        .iter()
        .map(|&v| {
            if cfg.grid_is_ratio {
                (scale_for_ratio(stats, v).max(0.0), v)
            } else {
                let p = scale_ratio(stats, v).unwrap_or(f64::NAN);
                (v, p)
            }
        })
        .collect()
}

fn ratio_field(p: f64) -> String {
    if p.is_nan() {
        String::new()
    } else {
        fmt_f64(p)
    }
}

const CHECKPOINTS: [&str; 5] = ["1", "2", "3", "4", "last"];

/// Rates after iterations 1-4 and the last iteration of one perturbed
/// reduction.
fn checkpoint_rates(trace: &ReductionTrace) -> [f64; 5] {
    [
        trace.rate_after(1),
        trace.rate_after(2),
        trace.rate_after(3),
        trace.rate_after(4),
        trace.final_rate,
    ]
}

/// Reduction-rate sweep: for every case, grid point, and noise draw, run
/// the perturbed reduction from the exact core lattice and record the
/// average rates after iterations 1-4 and the last iteration.
pub fn run_reduction_sweep(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let pool = worker_pool()?;
    let mut agg = CsvWriter::new(Vec::new());
    agg.schema("reduction-sweep")?;
    agg.row([
        "family",
        "n",
        "case",
        "t",
        "pt_ratio",
        "checkpoint",
        "mean_rate",
        "draws",
    ])?;
    let mut raw = CsvWriter::new(Vec::new());
    raw.schema("reduction-sweep-raw")?;
    raw.row([
        "family",
        "n",
        "case",
        "t",
        "pt_ratio",
        "draw",
        "rate_1",
        "rate_2",
        "rate_3",
        "rate_4",
        "rate_last",
    ])?;

    for case in 0..cfg.cases {
        let f = generate_case(cfg, case)?;
        let (core, stats) = core_and_stats(&f, cfg.mode)?;
        let scales = grid_scales(cfg, &stats);
        let case_seed = derive_seed(cfg.master_seed, case as u64);

        for (gidx, &(t, ratio)) in scales.iter().enumerate() {
            let point_seed = derive_seed(case_seed, 1000 + gidx as u64);
            let per_draw: Vec<[f64; 5]> = pool.install(|| {
                (0..cfg.draws)
                    .into_par_iter()
                    .map(|draw| -> Result<[f64; 5]> {
                        let noise =
                            Perturbation::draw(cfg.n, t, derive_seed(point_seed, draw as u64))?;
                        let g = f.perturb(&noise);
                        let (_, trace) = reduce_in(&g, &core, cfg.mode);
                        Ok(checkpoint_rates(&trace))
                    })
                    .collect::<Result<Vec<_>>>()
            })?;

            for (draw, rates) in per_draw.iter().enumerate() {
                let mut fields = vec![
                    cfg.family.to_string(),
                    cfg.n.to_string(),
                    case.to_string(),
                    fmt_f64(t),
                    ratio_field(ratio),
                    draw.to_string(),
                ];
                fields.extend(rates.iter().map(|&r| fmt_f64(r)));
                raw.row(fields)?;
            }
            for (ck, label) in CHECKPOINTS.iter().enumerate() {
                let mean = per_draw.iter().map(|r| r[ck]).sum::<f64>() / per_draw.len() as f64;
                agg.row([
                    cfg.family.to_string(),
                    cfg.n.to_string(),
                    case.to_string(),
                    fmt_f64(t),
                    ratio_field(ratio),
                    (*label).to_string(),
                    fmt_f64(mean),
                    cfg.draws.to_string(),
                ])?;
            }
        }
    }

    Ok(SweepOutput {
        aggregate: String::from_utf8(agg.into_inner()).expect("csv is utf-8"),
        raw: cfg
            .raw
            .then(|| String::from_utf8(raw.into_inner()).expect("csv is utf-8")),
    })
}

/// One per-case, per-grid-point record of an optimization sweep.
#[derive(Clone, Debug)]
pub struct OptRun {
    pub case: usize,
    pub t: f64,
    pub ratio: f64,
    pub rate_iter1: f64,
    pub rate_final: f64,
    pub value_baseline: f64,
    pub value_reduced: f64,
    pub rel_err: f64,
    pub evals_baseline: u64,
    pub f_queries: u64,
    pub g_queries: u64,
    pub secs_baseline: f64,
    pub secs_reduced: f64,
    pub time_ratio: f64,
    pub seed: u64,
}

/// Optimization sweep: per case, solve the full problem with the baseline
/// solver, then run the perturbation pipeline at every grid scale and
/// record relative error, reduction rates, and the time ratio. Runs
/// serially so timings are comparable.
pub fn run_opt_experiment(cfg: &ExperimentConfig) -> Result<(SweepOutput, Vec<OptRun>)> {
    cfg.validate()?;
    let mode = cfg.mode;
    let inner = cfg.inner_choice()?;
    let baseline = cfg.baseline_choice()?;

    let mut runs: Vec<OptRun> = Vec::new();
    for case in 0..cfg.cases {
        let f = generate_case(cfg, case)?;
        let full = Lattice::full(f.ground());
        let case_seed = derive_seed(cfg.master_seed, case as u64);

        let (base_rep, secs_baseline) = {
            let before = f.query_count();
            let (rep, secs) =
                timed(|| solve_on_lattice(&f, &full, mode, baseline, derive_seed(case_seed, 7)));
            let mut rep = rep?;
            rep.evals = f.query_count() - before;
            (rep, if cfg.timing { secs } else { 0.0 })
        };
        if base_rep.value == 0.0 {
            bail!(
                "case {} has a zero baseline optimum; relative error is undefined",
                case
            );
        }

        let (_, stats) = core_and_stats(&f, mode)?;
        let scales = grid_scales(cfg, &stats);

        for (gidx, &(t, ratio)) in scales.iter().enumerate() {
            let seed = derive_seed(case_seed, 2000 + gidx as u64);
            let (out, secs) = timed(|| perturb::optimize(&f, &full, mode, t, seed, inner));
            let out = out?;
            let secs_reduced = if cfg.timing { secs } else { 0.0 };
            let time_ratio = if secs_baseline > 0.0 {
                secs_reduced / secs_baseline
            } else {
                0.0
            };
            runs.push(OptRun {
                case,
                t,
                ratio,
                rate_iter1: out.noisy_pass.rate_after(1),
                rate_final: out.noisy_pass.final_rate,
                value_baseline: base_rep.value,
                value_reduced: out.value,
                rel_err: relative_error(base_rep.value, out.value)?,
                evals_baseline: base_rep.evals,
                f_queries: out.f_queries,
                g_queries: out.g_queries,
                secs_baseline,
                secs_reduced,
                time_ratio,
                seed,
            });
        }
    }

    let mut raw = CsvWriter::new(Vec::new());
    raw.schema("opt-sweep-raw")?;
    raw.row([
        "family",
        "n",
        "mode",
        "case",
        "t",
        "pt_ratio",
        "rate_iter1",
        "rate_final",
        "value_baseline",
        "value_reduced",
        "rel_err",
        "evals_baseline",
        "f_queries",
        "g_queries",
        "secs_baseline",
        "secs_reduced",
        "time_ratio",
        "seed",
    ])?;
    for r in &runs {
        raw.row([
            cfg.family.to_string(),
            cfg.n.to_string(),
            mode.to_string(),
            r.case.to_string(),
            fmt_f64(r.t),
            ratio_field(r.ratio),
            fmt_f64(r.rate_iter1),
            fmt_f64(r.rate_final),
            fmt_f64(r.value_baseline),
            fmt_f64(r.value_reduced),
            fmt_f64(r.rel_err),
            r.evals_baseline.to_string(),
            r.f_queries.to_string(),
            r.g_queries.to_string(),
            fmt_f64(r.secs_baseline),
            fmt_f64(r.secs_reduced),
            fmt_f64(r.time_ratio),
            r.seed.to_string(),
        ])?;
    }

    let mut agg = CsvWriter::new(Vec::new());
    agg.schema("opt-sweep")?;
    agg.row([
        "family",
        "n",
        "mode",
        "grid_index",
        "pt_ratio",
        "mean_t",
        "mean_rel_err",
        "mean_rate_iter1",
        "mean_rate_final",
        "mean_time_ratio",
        "cases",
    ])?;
    let points = cfg.grid.len();
    for gidx in 0..points {
        let slice: Vec<&OptRun> = runs.iter().skip(gidx).step_by(points).collect();
        let count = slice.len() as f64;
        let mean = |sel: &dyn Fn(&OptRun) -> f64| -> f64 {
            slice.iter().map(|r| sel(r)).sum::<f64>() / count
        };
        agg.row([
            cfg.family.to_string(),
            cfg.n.to_string(),
            mode.to_string(),
            gidx.to_string(),
            ratio_field(if cfg.grid_is_ratio {
                cfg.grid[gidx]
            } else {
                f64::NAN
            }),
            fmt_f64(mean(&|r| r.t)),
            fmt_f64(mean(&|r| r.rel_err)),
            fmt_f64(mean(&|r| r.rate_iter1)),
            fmt_f64(mean(&|r| r.rate_final)),
            fmt_f64(mean(&|r| r.time_ratio)),
            slice.len().to_string(),
        ])?;
    }

    Ok((
        SweepOutput {
            aggregate: String::from_utf8(agg.into_inner()).expect("csv is utf-8"),
            raw: cfg
                .raw
                .then(|| String::from_utf8(raw.into_inner()).expect("csv is utf-8")),
        },
        runs,
    ))
}

/// Bound-vs-empirical sweep: for every case and grid scale, Monte Carlo
/// estimates of the first-iteration reduction rate and mistake count next
/// to their closed-form bounds. Needs an exhaustive reference optimum, so
/// the ground set must fit the brute-force cap.
pub fn run_bound_sweep(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let pool = worker_pool()?;
    let mut agg = CsvWriter::new(Vec::new());
    agg.schema("bound-sweep")?;
    agg.row([
        "config",
        "t",
        "pt_ratio",
        "bound",
        "bound_value",
        "empirical_mean",
        "empirical_stderr",
        "draws",
    ])?;
    let mut raw = CsvWriter::new(Vec::new());
    raw.schema("bound-sweep-raw")?;
    raw.row([
        "config",
        "t",
        "pt_ratio",
        "draw",
        "first_rate",
        "first_mistakes",
    ])?;

    for case in 0..cfg.cases {
        let f = generate_case(cfg, case)?;
        let config_id = format!("{}-n{}-case{}", cfg.family, cfg.n, case);
        let (core, stats) = core_and_stats(&f, cfg.mode)?;
        if core.free_count() == 0 {
            bail!("{}: fully reduced without perturbation", config_id);
        }
        let reference = latred_core::solvers::brute_force(&f, cfg.mode)?;
        let scales = grid_scales(cfg, &stats);
        let case_seed = derive_seed(cfg.master_seed, case as u64);

        for (gidx, &(t, ratio)) in scales.iter().enumerate() {
            let point_seed = derive_seed(case_seed, 3000 + gidx as u64);
            let samples: Vec<(f64, f64)> = pool.install(|| {
                (0..cfg.draws)
                    .into_par_iter()
                    .map(|draw| -> Result<(f64, f64)> {
                        let noise =
                            Perturbation::draw(cfg.n, t, derive_seed(point_seed, draw as u64))?;
                        let g = f.perturb(&noise);
                        let (_, trace) = reduce_in(&g, &core, cfg.mode);
                        let first_rate =
                            trace.first_iteration_reduced() as f64 / core.free_count() as f64;
                        let mistakes =
                            latred_core::bounds::mistaken_counts(&reference.solution, &trace)?
                                .per_iteration[0] as f64;
                        Ok((first_rate, mistakes))
                    })
                    .collect::<Result<Vec<_>>>()
            })?;
            for (draw, (rate, mistakes)) in samples.iter().enumerate() {
                raw.row([
                    config_id.clone(),
                    fmt_f64(t),
                    ratio_field(ratio),
                    draw.to_string(),
                    fmt_f64(*rate),
                    fmt_f64(*mistakes),
                ])?;
            }
            let rates: Vec<f64> = samples.iter().map(|s| s.0).collect();
            let mistakes: Vec<f64> = samples.iter().map(|s| s.1).collect();
            let rate_bound = latred_core::bounds::expected_rate_bound(&stats, t)?.raw;
            let mistake_bound = latred_core::bounds::expected_mistakes_bound(
                t,
                stats.free_count,
                stats.endpoint_avg,
                reference.value,
                cfg.mode,
            )?;
            for (name, bound, xs) in [
                ("rate-lower-bound", rate_bound, &rates),
                ("mistakes-upper-bound", mistake_bound, &mistakes),
            ] {
                let (mean, se) = mean_stderr(xs);
                agg.row([
                    config_id.clone(),
                    fmt_f64(t),
                    ratio_field(ratio),
                    name.to_string(),
                    fmt_f64(bound),
                    fmt_f64(mean),
                    fmt_f64(se),
                    cfg.draws.to_string(),
                ])?;
            }
        }
    }

    Ok(SweepOutput {
        aggregate: String::from_utf8(agg.into_inner()).expect("csv is utf-8"),
        raw: cfg
            .raw
            .then(|| String::from_utf8(raw.into_inner()).expect("csv is utf-8")),
    })
}

fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Trace export: one row per iteration with endpoint sizes, committed-set
/// sizes, and the rate after the iteration.
pub fn trace_csv(trace: &ReductionTrace) -> Result<String> {
    let mut w = CsvWriter::new(Vec::new());
    w.schema("reduction-trace")?;
    w.row(["iter", "x_size", "y_size", "u_size", "d_size", "rate"])?;
    for (k, rec) in trace.iterations.iter().enumerate() {
        w.row([
            k.to_string(),
            rec.lower.len().to_string(),
            rec.upper.len().to_string(),
            rec.neg_entry.len().to_string(),
            rec.pos_exit.len().to_string(),
            fmt_f64(rec.rate),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()).expect("csv is utf-8"))
}

/// Solver-report export: solver, n, value, set, evals, seconds, seed, exact.
pub fn solve_report_csv(solver: &str, n: usize, rep: &SolveReport, seed: u64) -> Result<String> {
    let mut w = CsvWriter::new(Vec::new());
    w.schema("solve-report")?;
    w.row([
        "solver", "n", "value", "set", "evals", "seconds", "seed", "exact",
    ])?;
    w.row([
        solver.to_string(),
        n.to_string(),
        fmt_f64(rep.value),
        rep.solution.to_string(),
        rep.evals.to_string(),
        fmt_f64(rep.wall_seconds),
        seed.to_string(),
        rep.exact.to_string(),
    ])?;
    Ok(String::from_utf8(w.into_inner()).expect("csv is utf-8"))
}

/// Pipeline-outcome export: scale, ratio, final rate, value, loss against a
/// reference optimum when one is supplied, query counts, and wall time.
#[allow(clippy::too_many_arguments)]
pub fn outcome_csv(
    family: &str,
    mode: Mode,
    out: &perturb::Outcome,
    ratio: Option<f64>,
    reference_value: Option<f64>,
    wall_seconds: f64,
) -> Result<String> {
    let mut w = CsvWriter::new(Vec::new());
    w.schema("perturb-reduce")?;
    w.row([
        "family",
        "mode",
        "t",
        "pt_ratio",
        "rate_final",
        "value",
        "set",
        "loss",
        "f_queries",
        "g_queries",
        "seconds",
    ])?;
    let loss = reference_value
        .map(|r| match mode {
            Mode::Minimize => out.value - r,
            Mode::Maximize => r - out.value,
        })
        .map(fmt_f64)
        .unwrap_or_default();
    w.row([
        family.to_string(),
        mode.to_string(),
        fmt_f64(out.perturbation.scale()),
        ratio.map(fmt_f64).unwrap_or_default(),
        fmt_f64(out.noisy_pass.final_rate),
        fmt_f64(out.value),
        out.solution.to_string(),
        loss,
        out.f_queries.to_string(),
        out.g_queries.to_string(),
        fmt_f64(wall_seconds),
    ])?;
    Ok(String::from_utf8(w.into_inner()).expect("csv is utf-8"))
}
