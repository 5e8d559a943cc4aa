//! Solution-space reduction for unconstrained submodular optimization.
//!
//! Both directions keep a working interval `[X, Y]` and, in every iteration,
//! batch-evaluate two marginal sweeps against the iteration-entry lattice:
//! the entry gains `f(i | X)` and the exit gains `f(i | Y - i)` of all free
//! elements. Elements with negative entry gain and elements with positive
//! exit gain are then committed in one step; minimization promotes the
//! former into `X` and evicts the latter from `Y`, maximization does the
//! opposite. The returned lattice contains every optimizer of the input
//! lattice whenever the function is submodular.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::set::{ElementSet, GroundSet, Lattice};
use crate::Mode;

#[inline]
pub(crate) fn sgn(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// One reduction iteration: the working lattice it entered with, the two
/// sign sets it committed, and the ground-set reduction rate afterwards.
#[derive(Clone, Debug)]
pub struct IterationRecord {
    /// Lower endpoint `X` entering the iteration.
    pub lower: ElementSet,
    /// Upper endpoint `Y` entering the iteration.
    pub upper: ElementSet,
    /// Free elements with `f(i | X) < -tol`.
    pub neg_entry: ElementSet,
    /// Free elements with `f(i | Y - i) > tol`.
    pub pos_exit: ElementSet,
    /// `1 - |free| / n` after applying this iteration.
    pub rate: f64,
}

impl IterationRecord {
    /// Elements committed to the lower endpoint by this iteration.
    pub fn added(&self, mode: Mode) -> &ElementSet {
        match mode {
            Mode::Minimize => &self.neg_entry,
            Mode::Maximize => &self.pos_exit,
        }
    }

    /// Elements evicted from the upper endpoint by this iteration.
    pub fn removed(&self, mode: Mode) -> &ElementSet {
        match mode {
            Mode::Minimize => &self.pos_exit,
            Mode::Maximize => &self.neg_entry,
        }
    }
}

/// Complete record of one reduction run.
#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub mode: Mode,
    pub initial: Lattice,
    pub finished: Lattice,
    /// Per-iteration records, including the terminal vacuous iteration.
    pub iterations: Vec<IterationRecord>,
    /// Elements whose membership this run decided.
    pub reduced: ElementSet,
    /// `1 - |free| / n` of the finished lattice.
    pub final_rate: f64,
    /// Marginal-gain queries issued (two sweeps per iteration).
    pub marginal_evals: u64,
}

impl ReductionTrace {
    pub fn iteration_count(&self) -> usize {
        self.iterations.len()
    }

    /// Ground-set reduction rate after iteration `k`; `k = 0` is the rate of
    /// the initial lattice, and `k` past termination reports the final rate.
    pub fn rate_after(&self, k: usize) -> f64 {
        if k == 0 {
            let n = self.initial.ground().len() as f64;
            return 1.0 - self.initial.free_count() as f64 / n;
        }
        match self.iterations.get(k - 1) {
            Some(rec) => rec.rate,
            None => self.final_rate,
        }
    }

    /// Number of initially-free elements decided by the first iteration.
    pub fn first_iteration_reduced(&self) -> usize {
        self.iterations
            .first()
            .map(|r| r.neg_entry.union(&r.pos_exit).len())
            .unwrap_or(0)
    }
}

fn reduce(f: &Oracle, start: &Lattice, mode: Mode, tol: f64) -> (Lattice, ReductionTrace) {
    assert_eq!(
        f.n(),
        start.ground().len(),
        "ground-set size mismatch: {} vs {}",
        f.n(),
        start.ground().len()
    );
    assert!(tol >= 0.0, "tolerance must be nonnegative");
    let ground = start.ground();
    let n = ground.len() as f64;
    let mut lower = start.lower().clone();
    let mut upper = start.upper().clone();
    let mut iterations = Vec::new();
    let mut marginal_evals = 0u64;
    let budget = start.free_count() + 1;

    loop {
        let free: Vec<usize> = upper.minus(&lower).iter().collect();
        let entry = f.entry_gains(&lower, &free);
        let exit = f.exit_gains(&upper, &free);
        marginal_evals += 2 * free.len() as u64;

        let mut neg_entry = ElementSet::empty(ground);
        let mut pos_exit = ElementSet::empty(ground);
        for (k, &i) in free.iter().enumerate() {
            if entry[k] < -tol {
                neg_entry.insert(i);
            }
            if exit[k] > tol {
                pos_exit.insert(i);
            }
        }
        // Overlap cannot happen for a submodular function; dropping it keeps
        // the working interval well formed for arbitrary callers.
        pos_exit = pos_exit.minus(&neg_entry);

        let record_lower = lower.clone();
        let record_upper = upper.clone();
        match mode {
            Mode::Minimize => {
                lower = lower.union(&neg_entry);
                upper = upper.minus(&pos_exit);
            }
            Mode::Maximize => {
                upper = upper.minus(&neg_entry);
                lower = lower.union(&pos_exit);
            }
        }
        let rate = 1.0 - upper.minus(&lower).len() as f64 / n;
        let done = neg_entry.is_empty() && pos_exit.is_empty();
        iterations.push(IterationRecord {
            lower: record_lower,
            upper: record_upper,
            neg_entry,
            pos_exit,
            rate,
        });
        if done {
            break;
        }
        assert!(
            iterations.len() <= budget,
            "reduction failed to terminate within {} iterations",
            budget
        );
    }

    let finished = Lattice::new(lower, upper).expect("reduction keeps lower within upper");
    let reduced = start.free().minus(&finished.free());
    let final_rate = 1.0 - finished.free_count() as f64 / n;
    let trace = ReductionTrace {
        mode,
        initial: start.clone(),
        finished: finished.clone(),
        iterations,
        reduced,
        final_rate,
        marginal_evals,
    };
    (finished, trace)
}

/// Reduction for minimization. The output lattice contains every minimizer
/// of a submodular `f` within `start`.
pub fn reduce_min(f: &Oracle, start: &Lattice) -> (Lattice, ReductionTrace) {
    reduce(f, start, Mode::Minimize, 0.0)
}

/// Reduction for maximization. The output lattice contains every maximizer
/// of a submodular `f` within `start`.
pub fn reduce_max(f: &Oracle, start: &Lattice) -> (Lattice, ReductionTrace) {
    reduce(f, start, Mode::Maximize, 0.0)
}

/// Direction-dispatching variant of [`reduce_min`]/[`reduce_max`].
pub fn reduce_in(f: &Oracle, start: &Lattice, mode: Mode) -> (Lattice, ReductionTrace) {
    reduce(f, start, mode, 0.0)
}

/// Reduction with an explicit sign tolerance: marginals in `[-tol, tol]`
/// are treated as zero. The default elsewhere is an exact zero threshold.
pub fn reduce_with_tolerance(
    f: &Oracle,
    start: &Lattice,
    mode: Mode,
    tol: f64,
) -> (Lattice, ReductionTrace) {
    reduce(f, start, mode, tol)
}

/// Per-element sign products over the free set of a lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducibilityReport {
    /// Free elements in index order.
    pub free: Vec<usize>,
    /// `sgn(f(i|S)) * sgn(f(i|T-i))` per free element, in `free` order.
    pub signs: Vec<i8>,
    /// Maximum sign product.
    pub index: i8,
    /// True iff the maximum sign product is positive.
    pub reducible: bool,
}

/// Decides reducibility from endpoint marginal signs: the function is
/// reducible on `[S, T]` exactly when some free element has
/// `sgn(f(i|S)) * sgn(f(i|T-i)) > 0`.
pub fn reducibility_index(f: &Oracle, l: &Lattice) -> Result<ReducibilityReport> {
    let free: Vec<usize> = l.free().iter().collect();
    if free.is_empty() {
        return Err(Error::EmptyFreeSet);
    }
    let entry = f.entry_gains(l.lower(), &free);
    let exit = f.exit_gains(l.upper(), &free);
    let signs: Vec<i8> = entry
        .iter()
        .zip(exit.iter())
        .map(|(&a, &b)| sgn(a) * sgn(b))
        .collect();
    let index = *signs.iter().max().expect("free set is nonempty");
    Ok(ReducibilityReport {
        free,
        signs,
        index,
        reducible: index > 0,
    })
}

/// Margin and curvature statistics of a lattice.
#[derive(Clone, Copy, Debug)]
pub struct LatticeStats {
    /// `m = min_i min(f(i|S), -f(i|T-i))`.
    pub min_margin: f64,
    /// `M = max_i max(f(i|S), -f(i|T-i))`.
    pub max_margin: f64,
    /// `max over positive entry gains of (f(i|S) - f(i|T-i)) / f(i|S)`;
    /// absent when no element has a positive entry gain.
    pub curvature: Option<f64>,
    /// Sum of entry gains over the free set.
    pub entry_gain_sum: f64,
    /// Number of free elements.
    pub free_count: usize,
    /// `(f(S) + f(T)) / 2`.
    pub endpoint_avg: f64,
}

/// Computes [`LatticeStats`] with one marginal sweep per endpoint plus two
/// evaluations.
pub fn lattice_stats(f: &Oracle, l: &Lattice) -> Result<LatticeStats> {
    let free: Vec<usize> = l.free().iter().collect();
    if free.is_empty() {
        return Err(Error::EmptyFreeSet);
    }
    let entry = f.entry_gains(l.lower(), &free);
    let exit = f.exit_gains(l.upper(), &free);
    let mut min_margin = f64::INFINITY;
    let mut max_margin = f64::NEG_INFINITY;
    let mut curvature: Option<f64> = None;
    let mut entry_gain_sum = 0.0;
    for k in 0..free.len() {
        let (a, b) = (entry[k], -exit[k]);
        min_margin = min_margin.min(a.min(b));
        max_margin = max_margin.max(a.max(b));
        entry_gain_sum += a;
        if a > 0.0 {
            let c = (entry[k] - exit[k]) / entry[k];
            curvature = Some(curvature.map_or(c, |p: f64| p.max(c)));
        }
    }
    let endpoint_avg = 0.5 * (f.eval(l.lower()) + f.eval(l.upper()));
    Ok(LatticeStats {
        min_margin,
        max_margin,
        curvature,
        entry_gain_sum,
        free_count: free.len(),
        endpoint_avg,
    })
}

/// The reduction rate `1 - |T' \ S'| / n` of `after`, which must be nested
/// inside `before`.
pub fn reduction_rate(before: &Lattice, after: &Lattice, ground: GroundSet) -> Result<f64> {
    if before.ground() != ground || after.ground() != ground {
        return Err(Error::GroundSetMismatch {
            left: before.ground().len(),
            right: ground.len(),
        });
    }
    if !before.contains_lattice(after) {
        return Err(Error::LatticeNotNested);
    }
    Ok(1.0 - after.free_count() as f64 / ground.len() as f64)
}
