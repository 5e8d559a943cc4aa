//! Runtime self-checks behind the `verify` subcommand: fast versions of the
//! library's property suites. Any failure is a solver or bound violation
//! and maps to exit code 2.

use anyhow::Result;

use latred_core::bounds::loss_bounds;
use latred_core::instances;
use latred_core::noise::derive_seed;
use latred_core::oracle::verify_submodularity;
use latred_core::perturb::{self, Perturbation};
use latred_core::reduction::{lattice_stats, reduce_in, reducibility_index};
use latred_core::solvers::{branch_and_bound_max, brute_force, SolverChoice};
use latred_core::{ElementSet, Family, Lattice, Mode, Oracle};

use crate::config::ExperimentConfig;
use crate::sweeps::run_reduction_sweep;

pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, run: impl FnOnce() -> Result<()>) -> CheckResult {
    match run() {
        Ok(()) => CheckResult {
            name,
            pass: true,
            detail: String::new(),
        },
        Err(e) => CheckResult {
            name,
            pass: false,
            detail: e.to_string(),
        },
    }
}

const FAMILIES: [Family; 4] = [
    Family::SubsetSelection,
    Family::GaussianMi,
    Family::LogDet,
    Family::HalfProducts,
];

fn gen(family: Family, n: usize, seed: u64) -> Result<Oracle> {
    Ok(instances::generate(family, n, seed)?)
}

fn all_optima(f: &Oracle, mode: Mode) -> (f64, Vec<ElementSet>) {
    let n = f.n();
    let ground = f.ground();
    let mut best = f64::NAN;
    let mut sets: Vec<ElementSet> = Vec::new();
    for mask in 0..(1u64 << n) {
        let x = ElementSet::from_mask(ground, mask);
        let v = f.eval(&x);
        if sets.is_empty() || mode.better(v, best) {
            best = v;
            sets.clear();
            sets.push(x);
        } else if v == best {
            sets.push(x);
        }
    }
    (best, sets)
}

fn families_are_submodular() -> Result<()> {
    for family in FAMILIES {
        for seed in 0..10u64 {
            let f = gen(family, 7, seed)?;
            anyhow::ensure!(
                verify_submodularity(&f)?,
                "{} instance {} violates diminishing returns",
                family,
                seed
            );
        }
    }
    Ok(())
}

fn optima_preserved() -> Result<()> {
    for (k, family) in FAMILIES.iter().cycle().take(20).enumerate() {
        let n = 6 + k % 4;
        let f = gen(*family, n, 50 + k as u64)?;
        let full = Lattice::full(f.ground());
        for mode in [Mode::Minimize, Mode::Maximize] {
            let (_, optima) = all_optima(&f, mode);
            let (_, trace) = reduce_in(&f, &full, mode);
            for rec in &trace.iterations {
                let lat = Lattice::new(rec.lower.clone(), rec.upper.clone())?;
                for opt in &optima {
                    anyhow::ensure!(
                        lat.contains(opt),
                        "{} case {}: optimum left the lattice",
                        family,
                        k
                    );
                }
            }
        }
    }
    Ok(())
}

fn sign_index_is_sharp() -> Result<()> {
    let mut checked = 0;
    for k in 0..80u64 {
        let family = FAMILIES[(k % 4) as usize];
        let f = gen(family, 6 + (k % 5) as usize, 100 + k)?;
        let full = Lattice::full(f.ground());
        let report = reducibility_index(&f, &full)?;
        if report.signs.iter().any(|&s| s == 0) {
            continue;
        }
        for mode in [Mode::Minimize, Mode::Maximize] {
            let (_, trace) = reduce_in(&f, &full, mode);
            let first = &trace.iterations[0];
            let shrank = !(first.neg_entry.is_empty() && first.pos_exit.is_empty());
            anyhow::ensure!(
                report.reducible == shrank,
                "case {}: sign index {} but first iteration shrank = {}",
                k,
                report.index,
                shrank
            );
        }
        checked += 1;
    }
    anyhow::ensure!(checked >= 50, "too few strict-sign cases ({})", checked);
    Ok(())
}

fn small_noise_keeps_irreducibility() -> Result<()> {
    for family in [Family::SubsetSelection, Family::GaussianMi, Family::LogDet] {
        let f = gen(family, 8, 7)?;
        let full = Lattice::full(f.ground());
        anyhow::ensure!(!reducibility_index(&f, &full)?.reducible);
        let stats = lattice_stats(&f, &full)?;
        let t = 0.999 * stats.min_margin;
        for seed in 0..25u64 {
            let g = f.perturb(&Perturbation::draw(8, t, seed)?);
            anyhow::ensure!(
                !reducibility_index(&g, &full)?.reducible,
                "{} seed {}: reducible below the margin",
                family,
                seed
            );
        }
    }
    Ok(())
}

fn losses_respect_noise_bound() -> Result<()> {
    for k in 0..40u64 {
        let family = FAMILIES[(k % 4) as usize];
        let f = gen(family, 8, 200 + k)?;
        let full = Lattice::full(f.ground());
        let stats = lattice_stats(&f, &full)?;
        let t = 0.6 * stats.max_margin;
        let mode = if k % 2 == 0 {
            Mode::Maximize
        } else {
            Mode::Minimize
        };
        let (best, optima) = all_optima(&f, mode);
        let out = perturb::optimize(&f, &full, mode, t, k, SolverChoice::BruteForce)?;
        let loss = match mode {
            Mode::Minimize => out.value - best,
            Mode::Maximize => best - out.value,
        };
        let b = loss_bounds(&out.perturbation, &out.noisy_pass, &optima[0])?;
        anyhow::ensure!(
            loss <= b.exact + 1e-9 && b.exact <= b.coarse + 1e-9,
            "case {}: loss {} vs bounds ({}, {})",
            k,
            loss,
            b.exact,
            b.coarse
        );
    }
    Ok(())
}

fn solvers_agree() -> Result<()> {
    for k in 0..12u64 {
        let family = FAMILIES[(k % 4) as usize];
        let f = gen(family, 8 + (k % 4) as usize, 300 + k)?;
        let exact = brute_force(&f, Mode::Maximize)?;
        let bnb = branch_and_bound_max(&f, &Lattice::full(f.ground()))?;
        anyhow::ensure!(
            exact.value == bnb.value,
            "{} case {}: {} vs {}",
            family,
            k,
            exact.value,
            bnb.value
        );
    }
    Ok(())
}

fn sweeps_are_reproducible() -> Result<()> {
    let mut cfg = ExperimentConfig::default();
    cfg.family = Family::Cut;
    cfg.n = 10;
    cfg.cases = 1;
    cfg.draws = 3;
    cfg.grid = vec![0.0, 0.5, 1.0];
    cfg.master_seed = derive_seed(12, 0);
    cfg.raw = true;
    let a = run_reduction_sweep(&cfg)?;
    let b = run_reduction_sweep(&cfg)?;
    anyhow::ensure!(a.aggregate == b.aggregate, "aggregate output differs");
    anyhow::ensure!(a.raw == b.raw, "raw output differs");
    Ok(())
}

/// Runs every check, printing one PASS/FAIL line per suite. Returns true
/// when everything passed.
pub fn run_all(out: &mut dyn std::io::Write) -> Result<bool> {
    let results = [
        check("objective families are submodular", families_are_submodular),
        check("reduction preserves every optimum", optima_preserved),
        check(
            "sign index matches first-iteration progress",
            sign_index_is_sharp,
        ),
        check(
            "sub-margin noise keeps irreducibility",
            small_noise_keeps_irreducibility,
        ),
        check(
            "losses stay within the realized-noise bound",
            losses_respect_noise_bound,
        ),
        check("branch-and-bound agrees with enumeration", solvers_agree),
        check("sweeps are byte-reproducible", sweeps_are_reproducible),
    ];
    let mut ok = true;
    for r in &results {
        if r.pass {
            writeln!(out, "PASS {}", r.name)?;
        } else {
            ok = false;
            writeln!(out, "FAIL {}: {}", r.name, r.detail)?;
        }
    }
    Ok(ok)
}
