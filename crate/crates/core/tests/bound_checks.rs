//! Monte Carlo validation of the closed-form bounds on the triangle-cut
//! configuration with hand-derived statistics (margins 2, curvature 2,
//! gain sum 6, three elements).

use latred_core::bounds::{
    expected_mistakes_bound, expected_mistakes_for_iteration, expected_rate_bound, mistaken_counts,
    probabilistic_loss_bound,
};
use latred_core::families::CutFunction;
use latred_core::perturb::{self, Perturbation};
use latred_core::reduction::{lattice_stats, reduce_max};
use latred_core::solvers::SolverChoice;
use latred_core::{Lattice, Mode, Oracle};

mod common;
use common::{all_optima, close, instance, mean_stderr};

fn triangle() -> Oracle {
    CutFunction::unit_complete(3).oracle()
}

// At t = 4 the rate bound is exactly 1/2, and the first-iteration rate of
// the perturbed reduction is a Bernoulli(1/2) average: the empirical mean
// over 10^3 draws stays within three standard errors of the bound.
#[test]
fn first_iteration_rate_respects_the_expectation_bound() {
    let f = triangle();
    let full = Lattice::full(f.ground());
    let stats = lattice_stats(&f, &full).unwrap();
    let t = 4.0;
    let bound = expected_rate_bound(&stats, t).unwrap();
    assert!(close(bound.raw, 0.5, 1e-12));

    let draws = 1000u64;
    let mut rates = Vec::with_capacity(draws as usize);
    for seed in 0..draws {
        let noise = Perturbation::draw(3, t, seed).unwrap();
        let g = f.perturb(&noise);
        let (_, trace) = reduce_max(&g, &full);
        rates.push(trace.first_iteration_reduced() as f64 / full.free_count() as f64);
    }
    let (mean, se) = mean_stderr(&rates);
    assert!(
        mean >= bound.raw - 3.0 * se,
        "mean {} below bound {} - 3se {}",
        mean,
        bound.raw,
        se
    );
}

// Expected mistakes in the first maximization iteration at t = 4: the bound
// is 1.0 and the true expectation is 0.75.
#[test]
fn first_iteration_mistakes_respect_the_bound() {
    let f = triangle();
    let full = Lattice::full(f.ground());
    let (opt, optima) = all_optima(&f, Mode::Maximize);
    let reference = optima[0].clone();
    assert_eq!(opt, 2.0);

    let t = 4.0;
    let bound = expected_mistakes_bound(t, 3, 0.0, opt, Mode::Maximize).unwrap();
    assert!(close(bound, 1.0, 1e-12));

    let draws = 1000u64;
    let mut firsts = Vec::with_capacity(draws as usize);
    for seed in 0..draws {
        let noise = Perturbation::draw(3, t, seed).unwrap();
        let g = f.perturb(&noise);
        let (_, trace) = reduce_max(&g, &full);
        let rep = mistaken_counts(&reference, &trace).unwrap();
        firsts.push(rep.per_iteration[0] as f64);
        // The trace-driven variant recomputes the same bound.
        let recomputed = expected_mistakes_for_iteration(&f, &trace, 1, t, opt).unwrap();
        assert!(close(recomputed, bound, 1e-12));
    }
    let (mean, se) = mean_stderr(&firsts);
    assert!(
        mean <= bound + 3.0 * se,
        "mean {} above bound {} + 3se {}",
        mean,
        bound,
        se
    );
}

// Enormous scales drive the expected first-iteration mistakes toward n/2.
#[test]
fn huge_scales_approach_half_the_elements() {
    let f = triangle();
    let full = Lattice::full(f.ground());
    let (_, optima) = all_optima(&f, Mode::Maximize);
    let reference = optima[0].clone();
    let stats = lattice_stats(&f, &full).unwrap();
    let t = 100.0 * stats.max_margin;

    let draws = 1000u64;
    let mut firsts = Vec::with_capacity(draws as usize);
    for seed in 0..draws {
        let noise = Perturbation::draw(3, t, seed).unwrap();
        let g = f.perturb(&noise);
        let (_, trace) = reduce_max(&g, &full);
        firsts.push(mistaken_counts(&reference, &trace).unwrap().per_iteration[0] as f64);
    }
    let (mean, _) = mean_stderr(&firsts);
    let half = 3.0 / 2.0;
    assert!(
        (mean - half).abs() <= 0.1 * half,
        "mean {} not within 10% of {}",
        mean,
        half
    );
}

// The per-iteration mistakes bound evaluated from trace records agrees with
// the closed form applied to that iteration's working lattice, for every
// recorded iteration of multi-iteration runs.
#[test]
fn iteration_bounds_read_the_right_lattice() {
    let f = instance(common::PROTOCOL_FAMILIES[0], 10, 3);
    let full = Lattice::full(f.ground());
    let (opt, _) = all_optima(&f, Mode::Maximize);
    let mut saw_multi_iteration = false;
    for seed in 0..30u64 {
        let stats = lattice_stats(&f, &full).unwrap();
        let t = 0.8 * stats.max_margin;
        let noise = Perturbation::draw(10, t, seed).unwrap();
        let g = f.perturb(&noise);
        let (_, trace) = reduce_max(&g, &full);
        if trace.iteration_count() >= 3 {
            saw_multi_iteration = true;
        }
        for k in 1..=trace.iteration_count() {
            let rec = &trace.iterations[k - 1];
            let free = rec.upper.minus(&rec.lower).len();
            let mid = 0.5 * (f.eval(&rec.lower) + f.eval(&rec.upper));
            let direct = expected_mistakes_bound(t, free, mid, opt, Mode::Maximize).unwrap();
            let from_trace = expected_mistakes_for_iteration(&f, &trace, k, t, opt).unwrap();
            assert!(close(direct, from_trace, 1e-12));
        }
        assert!(expected_mistakes_for_iteration(&f, &trace, 0, t, opt).is_err());
        assert!(
            expected_mistakes_for_iteration(&f, &trace, trace.iteration_count() + 1, t, opt)
                .is_err()
        );
    }
    assert!(
        saw_multi_iteration,
        "test never exercised a later iteration"
    );
}

// High-probability loss bound: over seeded maximization runs at n = 10 the
// fraction of runs whose loss exceeds the bound stays below delta plus
// Monte Carlo slack.
#[test]
fn loss_exceeds_the_probabilistic_bound_rarely() {
    let delta = 0.1;
    let runs_total = 500u64;
    let mut violations = 0u64;
    for run in 0..runs_total {
        let family = common::PROTOCOL_FAMILIES[(run % 4) as usize];
        let f = instance(family, 10, 2000 + run / 8);
        let full = Lattice::full(f.ground());
        let stats = lattice_stats(&f, &full).unwrap();
        let t = 0.5 * (stats.min_margin + stats.max_margin);
        let (opt, optima) = all_optima(&f, Mode::Maximize);
        let out = perturb::maximize(&f, &full, t, run, SolverChoice::BruteForce).unwrap();
        let loss = opt - out.value;
        let mistaken = mistaken_counts(&optima[0], &out.noisy_pass).unwrap().total;
        let bound = probabilistic_loss_bound(t, mistaken, 10, delta).unwrap();
        if loss >= bound && loss > 0.0 {
            violations += 1;
        }
    }
    let fraction = violations as f64 / runs_total as f64;
    let se = (delta * (1.0 - delta) / runs_total as f64).sqrt();
    assert!(
        fraction <= delta + 3.0 * se,
        "violation fraction {} above {}",
        fraction,
        delta + 3.0 * se
    );
}
