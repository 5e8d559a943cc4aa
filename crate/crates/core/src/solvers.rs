//! Inner and reference optimizers: exhaustive search, lattice
//! branch-and-bound maximization, bi-directional greedy, random local
//! search, random permutation, and lattice contraction so any solver can
//! run on a reduced lattice.

use alloc::collections::BinaryHeap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::Rng;

use crate::error::{Error, Result};
use crate::noise::{derive_seed, rng_from_seed};
use crate::oracle::{Family, Oracle, SetFunction};
use crate::reduction::reduce_max;
use crate::set::{ElementSet, Lattice};
use crate::Mode;

/// Outcome of one solver invocation. `value` always equals a fresh oracle
/// evaluation of `solution`; `wall_seconds` is filled by the harness timing
/// wrapper and stays 0 here.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub solution: ElementSet,
    pub value: f64,
    pub evals: u64,
    pub wall_seconds: f64,
    pub trials: u64,
    pub exact: bool,
}

/// Replaces `best` when `(value, solution)` is strictly better under `mode`,
/// breaking value ties toward the numerically smaller membership mask.
fn keep_best(mode: Mode, best: &mut Option<(f64, ElementSet)>, value: f64, solution: ElementSet) {
    let replace = match best {
        None => true,
        Some((bv, bs)) => {
            mode.better(value, *bv) || (value == *bv && solution.mask_cmp(bs) == Ordering::Less)
        }
    };
    if replace {
        *best = Some((value, solution));
    }
}

/// A set-function view of `f` restricted to a lattice: the contraction
/// `f'(Z) = f(S ∪ embed(Z))` over the free elements of `[S, T]`.
struct Contracted {
    parent: Oracle,
    base: ElementSet,
    members: Vec<usize>,
}

impl Contracted {
    fn expand(&self, z: &ElementSet) -> ElementSet {
        let mut x = self.base.clone();
        for k in z.iter() {
            x.insert(self.members[k]);
        }
        x
    }

    fn translate(&self, items: &[usize]) -> Vec<usize> {
        items.iter().map(|&k| self.members[k]).collect()
    }
}

impl SetFunction for Contracted {
    fn n(&self) -> usize {
        self.members.len()
    }

    fn eval(&self, z: &ElementSet) -> f64 {
        self.parent.eval(&self.expand(z))
    }

    fn marginal(&self, k: usize, base: &ElementSet) -> f64 {
        self.parent.marginal(self.members[k], &self.expand(base))
    }

    fn entry_gains(&self, base: &ElementSet, items: &[usize], out: &mut Vec<f64>) {
        *out = self
            .parent
            .entry_gains(&self.expand(base), &self.translate(items));
    }

    fn exit_gains(&self, base: &ElementSet, items: &[usize], out: &mut Vec<f64>) {
        *out = self
            .parent
            .exit_gains(&self.expand(base), &self.translate(items));
    }
}

/// A contracted problem: an oracle over the free elements of a lattice plus
/// the embedding back into the original ground set.
pub struct ContractedProblem {
    pub oracle: Oracle,
    base: ElementSet,
    members: Vec<usize>,
}

impl ContractedProblem {
    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    /// Maps a solution of the contracted problem back: `X = S ∪ embed(Z)`.
    pub fn expand(&self, z: &ElementSet) -> ElementSet {
        let mut x = self.base.clone();
        for k in z.iter() {
            x.insert(self.members[k]);
        }
        x
    }
}

/// Restricts `f` to `[S, T]`: the returned oracle ranges over a ground set
/// of size `|T \ S|` with `f'(Z) = f(S ∪ Z)`. Submodularity is preserved and
/// optima correspond one-to-one under [`ContractedProblem::expand`].
/// Queries are forwarded to (and counted on) the parent oracle.
pub fn contract_to_lattice(f: &Oracle, l: &Lattice) -> Result<ContractedProblem> {
    assert_eq!(f.n(), l.ground().len(), "ground-set size mismatch");
    let members: Vec<usize> = l.free().iter().collect();
    if members.is_empty() {
        return Err(Error::EmptyFreeSet);
    }
    let base = l.lower().clone();
    let inner = Contracted {
        parent: f.clone(),
        base: base.clone(),
        members: members.clone(),
    };
    Ok(ContractedProblem {
        oracle: Oracle::new(Family::Contracted, Arc::new(inner)),
        base,
        members,
    })
}

/// Default cap on exhaustive enumeration.
pub const BRUTE_FORCE_CAP: usize = 24;

/// Exhaustive optimization over all `2^n` subsets. Deterministic tie-break:
/// the optimum with the numerically smallest membership mask.
pub fn brute_force(f: &Oracle, mode: Mode) -> Result<SolveReport> {
    brute_force_capped(f, mode, BRUTE_FORCE_CAP)
}

/// [`brute_force`] with an explicit cap on the ground-set size.
pub fn brute_force_capped(f: &Oracle, mode: Mode, cap: usize) -> Result<SolveReport> {
    let n = f.n();
    if n > cap.min(63) {
        return Err(Error::GroundSetTooLarge {
            n,
            cap: cap.min(63),
        });
    }
    let ground = f.ground();
    let before = f.query_count();
    let mut best: Option<(f64, ElementSet)> = None;
    for mask in 0..(1u64 << n) {
        let x = ElementSet::from_mask(ground, mask);
        let v = f.eval(&x);
        // Ascending mask order plus strict improvement keeps the smallest
        // optimal mask.
        match &best {
            Some((bv, _)) if !mode.better(v, *bv) => {}
            _ => best = Some((v, x)),
        }
    }
    let (value, solution) = best.expect("ground set is nonempty");
    Ok(SolveReport {
        solution,
        value,
        evals: f.query_count() - before,
        wall_seconds: 0.0,
        trials: 1,
        exact: true,
    })
}

/// Exhaustive optimization restricted to a lattice, via contraction.
pub fn brute_force_on(f: &Oracle, l: &Lattice, mode: Mode) -> Result<SolveReport> {
    let before = f.query_count();
    if l.is_point() {
        let value = f.eval(l.lower());
        return Ok(SolveReport {
            solution: l.lower().clone(),
            value,
            evals: f.query_count() - before,
            wall_seconds: 0.0,
            trials: 1,
            exact: true,
        });
    }
    if l.lower().is_empty() && l.upper().len() == f.n() {
        return brute_force(f, mode);
    }
    let sub = contract_to_lattice(f, l)?;
    let rep = brute_force_capped(&sub.oracle, mode, BRUTE_FORCE_CAP)?;
    Ok(SolveReport {
        solution: sub.expand(&rep.solution),
        value: rep.value,
        evals: f.query_count() - before,
        wall_seconds: 0.0,
        trials: 1,
        exact: true,
    })
}

/// Default node budget for branch-and-bound.
pub const BNB_NODE_BUDGET: usize = 2_000_000;

struct BnbNode {
    bound: f64,
    seq: u64,
    lattice: Lattice,
}

impl PartialEq for BnbNode {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.seq == other.seq
    }
}
impl Eq for BnbNode {}
impl PartialOrd for BnbNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for BnbNode {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap on bound; FIFO among equal bounds for determinism.
        self.bound
            .partial_cmp(&other.bound)
            .expect("node bounds are finite")
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Exact maximization of a submodular `f` over a lattice by best-first
/// branch-and-bound.
///
/// Every node first runs the maximization reduction on its lattice; a point
/// lattice is a leaf. Open nodes are bounded by the modular upper bound
/// `f(S) + Σ_{i free} max(0, f(i|S))`, pruned against the incumbent, and
/// split on the element with the largest combined endpoint marginal
/// magnitude into `[S+i, T]` and `[S, T-i]`.
pub fn branch_and_bound_max(f: &Oracle, l: &Lattice) -> Result<SolveReport> {
    branch_and_bound_max_budgeted(f, l, BNB_NODE_BUDGET)
}

/// [`branch_and_bound_max`] with an explicit node budget. Exceeding the
/// budget is an error, never a silent approximation.
pub fn branch_and_bound_max_budgeted(
    f: &Oracle,
    l: &Lattice,
    budget: usize,
) -> Result<SolveReport> {
    let before = f.query_count();
    let mut best: Option<(f64, ElementSet)> = None;
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    heap.push(BnbNode {
        bound: f64::INFINITY,
        seq,
        lattice: l.clone(),
    });
    let mut nodes = 0usize;

    while let Some(node) = heap.pop() {
        if let Some((inc, _)) = &best {
            // Best-first order: once the largest stored bound cannot beat
            // the incumbent, nothing left can.
            if node.bound <= *inc {
                break;
            }
        }
        nodes += 1;
        if nodes > budget {
            return Err(Error::NodeBudgetExceeded { budget });
        }

        let (lat, _) = reduce_max(f, &node.lattice);
        if lat.is_point() {
            let v = f.eval(lat.lower());
            keep_best(Mode::Maximize, &mut best, v, lat.lower().clone());
            continue;
        }

        let free: Vec<usize> = lat.free().iter().collect();
        let entry = f.entry_gains(lat.lower(), &free);
        let exit = f.exit_gains(lat.upper(), &free);
        let lower_value = f.eval(lat.lower());
        let upper_value = f.eval(lat.upper());
        // Both endpoints are feasible; use them to tighten the incumbent.
        keep_best(Mode::Maximize, &mut best, lower_value, lat.lower().clone());
        keep_best(Mode::Maximize, &mut best, upper_value, lat.upper().clone());

        let bound = lower_value + entry.iter().map(|&a| a.max(0.0)).sum::<f64>();
        if let Some((inc, _)) = &best {
            if bound <= *inc {
                continue;
            }
        }

        // Branch on the free element with the largest endpoint marginal
        // magnitude; ties go to the smallest index.
        let mut pick = 0usize;
        let mut score = f64::NEG_INFINITY;
        for k in 0..free.len() {
            let s = libm::fabs(entry[k]) + libm::fabs(exit[k]);
            if s > score {
                score = s;
                pick = k;
            }
        }
        let i = free[pick];
        for child in [
            Lattice::new(lat.lower().with(i), lat.upper().clone()),
            Lattice::new(lat.lower().clone(), lat.upper().without(i)),
        ] {
            let child = child.expect("branch endpoints stay nested");
            seq += 1;
            heap.push(BnbNode {
                bound,
                seq,
                lattice: child,
            });
        }
    }

    let (value, solution) = best.expect("search always reaches a leaf");
    Ok(SolveReport {
        solution,
        value,
        evals: f.query_count() - before,
        wall_seconds: 0.0,
        trials: 1,
        exact: true,
    })
}

/// One bi-directional greedy pass over the free elements of `[S, T]` in
/// index order, maintaining `(X, Y) = (S, T)`.
///
/// At element `i` let `a = f(i|X)` and `b = -f(i|Y-i)`. The deterministic
/// rule accepts `i` iff `a >= b`; the randomized rule accepts with
/// probability `a⁺ / (a⁺ + b⁺)`, accepting outright when both clipped
/// values are zero.
pub fn bidirectional_greedy(f: &Oracle, l: &Lattice, randomized: bool, seed: u64) -> SolveReport {
    let before = f.query_count();
    let mut rng = rng_from_seed(seed);
    let mut accepted = l.lower().clone();
    let mut remaining = l.upper().clone();
    for i in l.free().iter() {
        let a = f.marginal(i, &accepted);
        let b = -f.marginal(i, &remaining.without(i));
        let take = if randomized {
            let (ap, bp) = (a.max(0.0), b.max(0.0));
            if ap + bp == 0.0 {
                true
            } else {
                rng.gen::<f64>() < ap / (ap + bp)
            }
        } else {
            a >= b
        };
        if take {
            accepted.insert(i);
        } else {
            remaining.remove(i);
        }
    }
    debug_assert_eq!(accepted, remaining);
    let value = f.eval(&accepted);
    SolveReport {
        solution: accepted,
        value,
        evals: f.query_count() - before,
        wall_seconds: 0.0,
        trials: 1,
        exact: false,
    }
}

/// Steepest single-flip local search inside `[S, T]` from uniform random
/// starts; the best local optimum over `restarts` runs is returned.
pub fn random_local_search(
    f: &Oracle,
    l: &Lattice,
    mode: Mode,
    seed: u64,
    restarts: u32,
) -> SolveReport {
    let before = f.query_count();
    let restarts = restarts.max(1);
    let free: Vec<usize> = l.free().iter().collect();
    let mut best: Option<(f64, ElementSet)> = None;
    for r in 0..restarts {
        let mut rng = rng_from_seed(derive_seed(seed, r as u64));
        let mut cur = l.lower().clone();
        for &i in &free {
            if rng.gen::<bool>() {
                cur.insert(i);
            }
        }
        loop {
            let adds: Vec<usize> = free.iter().copied().filter(|&i| !cur.contains(i)).collect();
            let drops: Vec<usize> = free.iter().copied().filter(|&i| cur.contains(i)).collect();
            let add_gains = f.entry_gains(&cur, &adds);
            let drop_gains = f.exit_gains(&cur, &drops);
            // Steepest strictly improving flip; adds are scanned before
            // drops and ties keep the first candidate, so the walk is
            // deterministic.
            let mut flip: Option<(f64, usize, bool)> = None;
            for (k, &i) in adds.iter().enumerate() {
                let delta = add_gains[k];
                if mode.is_improvement(delta)
                    && flip.map_or(true, |(d, _, _)| mode.better(delta, d))
                {
                    flip = Some((delta, i, true));
                }
            }
            for (k, &i) in drops.iter().enumerate() {
                let delta = -drop_gains[k];
                if mode.is_improvement(delta)
                    && flip.map_or(true, |(d, _, _)| mode.better(delta, d))
                {
                    flip = Some((delta, i, false));
                }
            }
            match flip {
                Some((_, i, true)) => cur.insert(i),
                Some((_, i, false)) => cur.remove(i),
                None => break,
            }
        }
        let v = f.eval(&cur);
        keep_best(mode, &mut best, v, cur);
    }
    let (value, solution) = best.expect("at least one restart runs");
    SolveReport {
        solution,
        value,
        evals: f.query_count() - before,
        wall_seconds: 0.0,
        trials: restarts as u64,
        exact: false,
    }
}

/// Greedy acceptance along uniformly random permutations of the free
/// elements, starting from `S`; the best result over `trials` permutations
/// is returned.
pub fn random_permutation_solver(
    f: &Oracle,
    l: &Lattice,
    mode: Mode,
    seed: u64,
    trials: u32,
) -> SolveReport {
    let before = f.query_count();
    let trials = trials.max(1);
    let free: Vec<usize> = l.free().iter().collect();
    let mut best: Option<(f64, ElementSet)> = None;
    for tr in 0..trials {
        let mut rng = rng_from_seed(derive_seed(seed, tr as u64));
        let mut perm = free.clone();
        // Fisher-Yates.
        for k in (1..perm.len()).rev() {
            let j = rng.gen_range(0..=k);
            perm.swap(k, j);
        }
        let mut cur = l.lower().clone();
        for &i in &perm {
            if mode.is_improvement(f.marginal(i, &cur)) {
                cur.insert(i);
            }
        }
        let v = f.eval(&cur);
        keep_best(mode, &mut best, v, cur);
    }
    let (value, solution) = best.expect("at least one trial runs");
    SolveReport {
        solution,
        value,
        evals: f.query_count() - before,
        wall_seconds: 0.0,
        trials: trials as u64,
        exact: false,
    }
}

/// Inner-solver selection for the perturbation pipeline and the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverChoice {
    BruteForce,
    BranchAndBound,
    /// Bi-directional greedy; the randomized variant keeps the best of
    /// `repeats` passes.
    BidirectionalGreedy {
        randomized: bool,
        repeats: u32,
    },
    LocalSearch {
        restarts: u32,
    },
    RandomPermutation {
        trials: u32,
    },
}

impl SolverChoice {
    pub fn name(&self) -> &'static str {
        match self {
            SolverChoice::BruteForce => "brute-force",
            SolverChoice::BranchAndBound => "branch-and-bound",
            SolverChoice::BidirectionalGreedy {
                randomized: true, ..
            } => "random-greedy",
            SolverChoice::BidirectionalGreedy {
                randomized: false, ..
            } => "greedy",
            SolverChoice::LocalSearch { .. } => "local-search",
            SolverChoice::RandomPermutation { .. } => "random-permutation",
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(
            self,
            SolverChoice::BruteForce | SolverChoice::BranchAndBound
        )
    }
}

/// Runs the chosen solver on `f` restricted to `l`.
pub fn solve_on_lattice(
    f: &Oracle,
    l: &Lattice,
    mode: Mode,
    choice: SolverChoice,
    seed: u64,
) -> Result<SolveReport> {
    match choice {
        SolverChoice::BruteForce => brute_force_on(f, l, mode),
        SolverChoice::BranchAndBound => {
            if mode != Mode::Maximize {
                return Err(Error::InvalidParam(
                    "branch-and-bound solves maximization only",
                ));
            }
            branch_and_bound_max(f, l)
        }
        SolverChoice::BidirectionalGreedy {
            randomized,
            repeats,
        } => {
            if mode != Mode::Maximize {
                return Err(Error::InvalidParam(
                    "bi-directional greedy solves maximization only",
                ));
            }
            let repeats = if randomized { repeats.max(1) } else { 1 };
            let before = f.query_count();
            let mut best: Option<(f64, ElementSet)> = None;
            for r in 0..repeats {
                let rep = bidirectional_greedy(f, l, randomized, derive_seed(seed, r as u64));
                keep_best(mode, &mut best, rep.value, rep.solution);
            }
            let (value, solution) = best.expect("at least one pass runs");
            Ok(SolveReport {
                solution,
                value,
                evals: f.query_count() - before,
                wall_seconds: 0.0,
                trials: repeats as u64,
                exact: false,
            })
        }
        SolverChoice::LocalSearch { restarts } => {
            Ok(random_local_search(f, l, mode, seed, restarts))
        }
        SolverChoice::RandomPermutation { trials } => {
            Ok(random_permutation_solver(f, l, mode, seed, trials))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{CutFunction, HalfProducts};
    use crate::modular::ModularWeights;

    fn modular_oracle() -> Oracle {
        Oracle::modular(ModularWeights::new(alloc::vec![-1.0, 2.0, -3.0]))
    }

    fn triangle() -> Oracle {
        CutFunction::unit_complete(3).oracle()
    }

    #[test]
    fn brute_force_examples() {
        let f = modular_oracle();
        let g = f.ground();
        let max = brute_force(&f, Mode::Maximize).unwrap();
        assert_eq!(max.solution, ElementSet::singleton(g, 1));
        assert_eq!(max.value, 2.0);
        assert!(max.exact);
        assert_eq!(max.evals, 8);

        let cut = triangle();
        let rep = brute_force(&cut, Mode::Maximize).unwrap();
        assert_eq!(rep.value, 2.0);
        // Lexicographic tie-break among the six optimal cuts.
        assert_eq!(rep.solution, ElementSet::singleton(cut.ground(), 0));

        let hp = HalfProducts::new(
            alloc::vec![1.0, 1.0],
            alloc::vec![1.0, 1.0],
            alloc::vec![0.5, 0.5],
        )
        .unwrap()
        .oracle();
        let rep = brute_force(&hp, Mode::Maximize).unwrap();
        assert_eq!(rep.value, 0.5);
        assert_eq!(rep.solution, ElementSet::singleton(hp.ground(), 0));
    }

    #[test]
    fn brute_force_refuses_large_ground_sets() {
        let f = Oracle::custom(30, |x| x.len() as f64);
        assert!(matches!(
            brute_force(&f, Mode::Maximize),
            Err(Error::GroundSetTooLarge { .. })
        ));
    }

    #[test]
    fn contraction_identity_on_full_lattice() {
        let f = triangle();
        let l = Lattice::full(f.ground());
        let sub = contract_to_lattice(&f, &l).unwrap();
        assert_eq!(sub.member_count(), 3);
        let g = sub.oracle.ground();
        for mask in 0..8u64 {
            let z = ElementSet::from_mask(g, mask);
            assert_eq!(sub.oracle.eval(&z), f.eval(&sub.expand(&z)));
        }
        assert_eq!(sub.oracle.eval(&ElementSet::empty(g)), f.eval(l.lower()));
    }

    #[test]
    fn contraction_requires_free_elements() {
        let f = triangle();
        let point = Lattice::point(ElementSet::empty(f.ground()));
        assert!(matches!(
            contract_to_lattice(&f, &point),
            Err(Error::EmptyFreeSet)
        ));
    }

    #[test]
    fn branch_and_bound_on_small_instances() {
        let f = triangle();
        let rep = branch_and_bound_max(&f, &Lattice::full(f.ground())).unwrap();
        assert_eq!(rep.value, 2.0);
        assert!(rep.exact);

        // Modular weights are fully reduced at the root: no branching.
        let w = modular_oracle();
        let rep = branch_and_bound_max(&w, &Lattice::full(w.ground())).unwrap();
        assert_eq!(rep.value, 2.0);
        assert_eq!(rep.solution, ElementSet::singleton(w.ground(), 1));
    }

    #[test]
    fn bnb_budget_is_enforced() {
        let f = triangle();
        assert!(matches!(
            branch_and_bound_max_budgeted(&f, &Lattice::full(f.ground()), 1),
            Err(Error::NodeBudgetExceeded { .. })
        ));
    }

    #[test]
    fn deterministic_greedy_hand_trace() {
        // Triangle cut, order (0,1,2): accept 0, reject 1, accept 2.
        let f = triangle();
        let rep = bidirectional_greedy(&f, &Lattice::full(f.ground()), false, 0);
        assert_eq!(rep.solution, ElementSet::from_indices(f.ground(), [0, 2]));
        assert_eq!(rep.value, 2.0);
    }

    #[test]
    fn greedy_accepts_everything_for_positive_modular() {
        let f = Oracle::modular(ModularWeights::new(alloc::vec![0.5, 1.0, 0.25]));
        for seed in 0..5 {
            let rep = bidirectional_greedy(&f, &Lattice::full(f.ground()), true, seed);
            assert_eq!(rep.solution.len(), 3, "b⁺ is always 0 here");
        }
    }

    #[test]
    fn local_search_solves_modular_from_any_start() {
        let f = modular_oracle();
        for seed in 0..10 {
            let rep = random_local_search(&f, &Lattice::full(f.ground()), Mode::Maximize, seed, 1);
            assert_eq!(rep.value, 2.0);
            let rep = random_local_search(&f, &Lattice::full(f.ground()), Mode::Minimize, seed, 1);
            assert_eq!(rep.value, -4.0);
        }
    }

    #[test]
    fn local_search_on_triangle_cut() {
        let f = triangle();
        let rep = random_local_search(&f, &Lattice::full(f.ground()), Mode::Maximize, 7, 3);
        assert_eq!(rep.value, 2.0);
    }

    #[test]
    fn random_permutation_examples() {
        let f = modular_oracle();
        let rep = random_permutation_solver(&f, &Lattice::full(f.ground()), Mode::Maximize, 3, 1);
        assert_eq!(rep.value, 2.0);
        let rep = random_permutation_solver(&f, &Lattice::full(f.ground()), Mode::Minimize, 3, 1);
        assert_eq!(rep.value, -4.0);

        let cut = triangle();
        for seed in 0..12 {
            let rep = random_permutation_solver(
                &cut,
                &Lattice::full(cut.ground()),
                Mode::Maximize,
                seed,
                1,
            );
            assert_eq!(rep.value, 2.0, "any permutation reaches a max cut");
        }
    }

    #[test]
    fn randomized_solvers_are_seed_deterministic() {
        let f = triangle();
        let l = Lattice::full(f.ground());
        let a = bidirectional_greedy(&f, &l, true, 99);
        let b = bidirectional_greedy(&f, &l, true, 99);
        assert_eq!(a.solution, b.solution);
        let a = random_local_search(&f, &l, Mode::Maximize, 5, 4);
        let b = random_local_search(&f, &l, Mode::Maximize, 5, 4);
        assert_eq!(a.solution, b.solution);
        let a = random_permutation_solver(&f, &l, Mode::Maximize, 5, 4);
        let b = random_permutation_solver(&f, &l, Mode::Maximize, 5, 4);
        assert_eq!(a.solution, b.solution);
    }

    #[test]
    fn reported_values_are_fresh_evaluations() {
        let f = triangle();
        let l = Lattice::full(f.ground());
        for rep in [
            brute_force(&f, Mode::Maximize).unwrap(),
            branch_and_bound_max(&f, &l).unwrap(),
            bidirectional_greedy(&f, &l, true, 1),
            random_local_search(&f, &l, Mode::Maximize, 1, 2),
            random_permutation_solver(&f, &l, Mode::Minimize, 1, 2),
        ] {
            assert_eq!(rep.value, f.eval(&rep.solution));
        }
    }
}
