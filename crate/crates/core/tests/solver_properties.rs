//! Solver agreement and guarantee checks against exhaustive enumeration.

use latred_core::oracle::verify_submodularity;
use latred_core::solvers::{
    bidirectional_greedy, branch_and_bound_max, brute_force, brute_force_on, contract_to_lattice,
};
use latred_core::{ElementSet, Family, Lattice, Mode};

mod common;
use common::{all_optima, close, instance, GENERATED_FAMILIES, PROTOCOL_FAMILIES};

#[test]
fn branch_and_bound_agrees_with_enumeration() {
    for family in GENERATED_FAMILIES {
        for seed in 0..12u64 {
            let n = 8 + (seed % 5) as usize; // 8..=12
            let f = instance(family, n, seed);
            let exact = brute_force(&f, Mode::Maximize).unwrap();
            let bnb = branch_and_bound_max(&f, &Lattice::full(f.ground())).unwrap();
            assert_eq!(
                exact.value, bnb.value,
                "{} seed {}: {} vs {}",
                family, seed, exact.value, bnb.value
            );
        }
    }
}

#[test]
fn branch_and_bound_respects_sublattices() {
    for seed in 0..10u64 {
        let f = instance(Family::Cut, 10, seed);
        let g = f.ground();
        let l = Lattice::new(
            ElementSet::from_indices(g, [2]),
            ElementSet::from_indices(g, [0, 2, 3, 5, 6, 8, 9]),
        )
        .unwrap();
        let bnb = branch_and_bound_max(&f, &l).unwrap();
        let exact = brute_force_on(&f, &l, Mode::Maximize).unwrap();
        assert_eq!(bnb.value, exact.value);
        assert!(l.contains(&bnb.solution));
    }
}

// The modular upper bound used for pruning: f(X) <= f(S) + sum of positive
// entry gains, for every X in the lattice.
#[test]
fn pruning_bound_is_valid_on_every_lattice_member() {
    for family in PROTOCOL_FAMILIES {
        let f = instance(family, 9, 17);
        let g = f.ground();
        let lower = ElementSet::from_indices(g, [1, 5]);
        let upper = ElementSet::from_indices(g, [0, 1, 2, 4, 5, 7, 8]);
        let l = Lattice::new(lower.clone(), upper.clone()).unwrap();
        let free: Vec<usize> = l.free().iter().collect();
        let gains = f.entry_gains(&lower, &free);
        let bound = f.eval(&lower) + gains.iter().map(|&v| v.max(0.0)).sum::<f64>();
        // Enumerate the whole interval.
        let count = free.len();
        for mask in 0..(1u64 << count) {
            let mut x = lower.clone();
            for (k, &i) in free.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    x.insert(i);
                }
            }
            assert!(
                f.eval(&x) <= bound + 1e-9,
                "{}: member beats the modular bound",
                family
            );
        }
    }
}

#[test]
fn contraction_preserves_submodularity_and_optima() {
    for family in PROTOCOL_FAMILIES {
        let f = instance(family, 9, 23);
        let g = f.ground();
        let l = Lattice::new(
            ElementSet::from_indices(g, [0, 4]),
            ElementSet::from_indices(g, [0, 2, 3, 4, 6, 8]),
        )
        .unwrap();
        let sub = contract_to_lattice(&f, &l).unwrap();
        assert_eq!(verify_submodularity(&sub.oracle), Ok(true), "{}", family);

        // Double enumeration: optimum over the interval equals optimum of
        // the contraction, and the argmax maps back into the interval.
        for mode in [Mode::Minimize, Mode::Maximize] {
            let inner = brute_force(&sub.oracle, mode).unwrap();
            let mut best = f64::NAN;
            let free: Vec<usize> = l.free().iter().collect();
            for mask in 0..(1u64 << free.len()) {
                let mut x = l.lower().clone();
                for (k, &i) in free.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        x.insert(i);
                    }
                }
                let v = f.eval(&x);
                if best.is_nan() || mode.better(v, best) {
                    best = v;
                }
            }
            assert!(close(inner.value, best, 1e-12), "{} {}", family, mode);
            let expanded = sub.expand(&inner.solution);
            assert!(l.contains(&expanded));
            assert!(close(f.eval(&expanded), best, 1e-12));
        }
    }
}

#[test]
fn randomized_greedy_meets_half_opt_in_expectation() {
    // Nonnegative instances; the guarantee is 1/2 OPT in expectation, the
    // test allows 0.45 with a few thousand runs.
    for (k, family) in [Family::Cut, Family::SubsetSelection]
        .iter()
        .cycle()
        .take(6)
        .enumerate()
    {
        let f = instance(*family, 10, 40 + k as u64);
        let l = Lattice::full(f.ground());
        let (opt, _) = all_optima(&f, Mode::Maximize);
        assert!(opt > 0.0);
        let runs = 3000u64;
        let mut acc = 0.0;
        for seed in 0..runs {
            acc += bidirectional_greedy(&f, &l, true, seed).value;
        }
        let mean = acc / runs as f64;
        assert!(
            mean >= 0.45 * opt,
            "{} case {}: mean {} below 0.45 * {}",
            family,
            k,
            mean,
            opt
        );
    }
}

#[test]
fn deterministic_greedy_is_within_third_of_opt() {
    // The deterministic variant guarantees OPT/3 on nonnegative functions.
    for seed in 0..10u64 {
        let f = instance(Family::Cut, 10, seed);
        let l = Lattice::full(f.ground());
        let (opt, _) = all_optima(&f, Mode::Maximize);
        let rep = bidirectional_greedy(&f, &l, false, 0);
        assert!(rep.value >= opt / 3.0 - 1e-9, "seed {}", seed);
    }
}

#[test]
fn solvers_never_leave_the_lattice() {
    use latred_core::solvers::{random_local_search, random_permutation_solver};
    let f = instance(Family::HalfProducts, 11, 3);
    let g = f.ground();
    let l = Lattice::new(
        ElementSet::from_indices(g, [1, 2]),
        ElementSet::from_indices(g, [1, 2, 4, 5, 7, 9, 10]),
    )
    .unwrap();
    for seed in 0..10u64 {
        for mode in [Mode::Minimize, Mode::Maximize] {
            let a = random_local_search(&f, &l, mode, seed, 2);
            assert!(l.contains(&a.solution));
            let b = random_permutation_solver(&f, &l, mode, seed, 3);
            assert!(l.contains(&b.solution));
        }
        let c = bidirectional_greedy(&f, &l, true, seed);
        assert!(l.contains(&c.solution));
    }
}

#[test]
fn local_search_never_loses_to_its_start() {
    // Start from the lattice lower bound: strict improvement only.
    let f = instance(Family::LogDet, 9, 8);
    let l = Lattice::full(f.ground());
    for seed in 0..10u64 {
        let rep = latred_core::solvers::random_local_search(&f, &l, Mode::Maximize, seed, 1);
        // A 1-flip local optimum: no single flip improves.
        let free: Vec<usize> = l.free().iter().collect();
        for &i in &free {
            let delta = if rep.solution.contains(i) {
                -f.marginal(i, &rep.solution.without(i))
            } else {
                f.marginal(i, &rep.solution)
            };
            assert!(delta <= 1e-9, "flip {} improves a local optimum", i);
        }
    }
}
