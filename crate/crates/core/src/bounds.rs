//! Closed-form evaluators for the reducibility-gain and performance-loss
//! guarantees, plus measurement of mistakenly reduced elements.
//!
//! All evaluators are pure arithmetic; Monte Carlo validation lives in the
//! test suites. Logarithms are natural throughout. Bounds are reported raw,
//! with clamping to presentation ranges kept separate.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::perturb::Perturbation;
use crate::reduction::{LatticeStats, ReductionTrace};
use crate::set::ElementSet;
use crate::Mode;

/// Lower bound on the expected reduction rate of the perturbed function.
#[derive(Clone, Copy, Debug)]
pub struct RateBound {
    /// `1 - c k / (2 t s)`, possibly negative.
    pub raw: f64,
    /// Raw value clamped to `[0, 1]` for presentation.
    pub clamped: f64,
}

/// Expected-reduction-rate lower bound from curvature, entry-gain sum, and
/// free count: `1 - c k / (2 t s)`. Requires a positive scale and a defined
/// curvature (statistics of an irreducible lattice).
pub fn expected_rate_bound(stats: &LatticeStats, t: f64) -> Result<RateBound> {
    if !(t > 0.0) {
        return Err(Error::InvalidParam("scale must be positive"));
    }
    if stats.free_count == 0 {
        return Err(Error::EmptyFreeSet);
    }
    let c = stats.curvature.ok_or(Error::CurvatureUndefined)?;
    let raw = 1.0 - c * stats.entry_gain_sum / (2.0 * t * stats.free_count as f64);
    Ok(RateBound {
        raw,
        clamped: raw.clamp(0.0, 1.0),
    })
}

/// Additive bounds on the perturbation-induced performance loss.
#[derive(Clone, Copy, Debug)]
pub struct LossBounds {
    /// Realized-noise bound: for minimization `-r(X_t \ ref) + r(ref \ Y_t)`,
    /// for maximization `r(X_t \ ref) - r(ref \ Y_t)`.
    pub exact: f64,
    /// Scale bound `n · t · R_t`; never smaller than `exact`.
    pub coarse: f64,
}

/// Evaluates both loss bounds for a traced reduction run of the perturbed
/// function. `reference` must be an optimum of the unperturbed problem and
/// must lie in the trace's initial lattice.
pub fn loss_bounds(
    noise: &Perturbation,
    trace: &ReductionTrace,
    reference: &ElementSet,
) -> Result<LossBounds> {
    if !trace.initial.contains(reference) {
        return Err(Error::InvalidParam("reference outside the initial lattice"));
    }
    let fixed_in = trace.finished.lower().minus(reference);
    let dropped = reference.minus(trace.finished.upper());
    let r = noise.weights();
    let exact = match trace.mode {
        Mode::Minimize => -r.eval(&fixed_in) + r.eval(&dropped),
        Mode::Maximize => r.eval(&fixed_in) - r.eval(&dropped),
    };
    let n = trace.initial.ground().len() as f64;
    let coarse = n * noise.scale() * trace.final_rate;
    Ok(LossBounds { exact, coarse })
}

/// High-probability loss bound `t sqrt(2 K (n + ln(1/δ)))` where `K` is the
/// number of mistakenly reduced elements. Holds with probability at least
/// `1 - δ` over the noise draw.
pub fn probabilistic_loss_bound(t: f64, mistaken: usize, n: usize, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParam("delta must lie in (0, 1)"));
    }
    Ok(t * libm::sqrt(2.0 * mistaken as f64 * (n as f64 + libm::log(1.0 / delta))))
}

/// Expected number of mistakenly reduced elements committed by one
/// iteration: `n_prev / 2 - gap / t`, where `n_prev` is the free count
/// entering the iteration, `mid_prev` the average of the endpoint values of
/// its working lattice, and the gap is `mid - f(ref)` for minimization and
/// `f(ref) - mid` for maximization. With the initial lattice's statistics
/// this is the first-iteration bound.
pub fn expected_mistakes_bound(
    t: f64,
    free_entering: usize,
    mid_prev: f64,
    reference_value: f64,
    mode: Mode,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParam("scale must be positive"));
    }
    let gap = match mode {
        Mode::Minimize => mid_prev - reference_value,
        Mode::Maximize => reference_value - mid_prev,
    };
    Ok(free_entering as f64 / 2.0 - gap / t)
}

/// [`expected_mistakes_bound`] for iteration `k` (1-based) of a traced run,
/// reading `n_{k-1}` and the endpoint average from the iteration-entry
/// lattice. Costs two oracle evaluations.
pub fn expected_mistakes_for_iteration(
    f: &crate::oracle::Oracle,
    trace: &ReductionTrace,
    k: usize,
    t: f64,
    reference_value: f64,
) -> Result<f64> {
    let rec = trace
        .iterations
        .get(
            k.checked_sub(1)
                .ok_or(Error::InvalidParam("iteration is 1-based"))?,
        )
        .ok_or(Error::InvalidParam("iteration beyond the trace"))?;
    let free = rec.upper.minus(&rec.lower).len();
    let mid = 0.5 * (f.eval(&rec.lower) + f.eval(&rec.upper));
    expected_mistakes_bound(t, free, mid, reference_value, trace.mode)
}

/// Mistakenly reduced elements of a traced run, measured against a chosen
/// optimum of the unperturbed problem.
#[derive(Clone, Debug)]
pub struct MistakenReport {
    /// Contraction of the reference into the final lattice:
    /// `(ref ∪ X_t) ∩ Y_t`, the nearest lattice member to the reference.
    pub contraction: ElementSet,
    /// `|contraction △ ref|`: total mistakenly reduced elements.
    pub total: usize,
    /// Mistakes committed per iteration (same order as the trace).
    pub per_iteration: Vec<usize>,
}

/// Counts mistaken reductions: elements fixed in that the reference
/// excludes, plus elements evicted that the reference contains.
pub fn mistaken_counts(reference: &ElementSet, trace: &ReductionTrace) -> Result<MistakenReport> {
    if !trace.initial.contains(reference) {
        return Err(Error::InvalidParam("reference outside the initial lattice"));
    }
    let contraction = reference
        .union(trace.finished.lower())
        .intersect(trace.finished.upper());
    let total = contraction.sym_diff(reference).len();
    let per_iteration = trace
        .iterations
        .iter()
        .map(|rec| {
            let wrong_in = rec.added(trace.mode).minus(reference).len();
            let wrong_out = rec.removed(trace.mode).intersect(reference).len();
            wrong_in + wrong_out
        })
        .collect();
    Ok(MistakenReport {
        contraction,
        total,
        per_iteration,
    })
}

/// Closed-form scale suggestions for maximization, assuming the first
/// iteration dominates the mistake count.
#[derive(Clone, Copy, Debug)]
pub enum ScaleRule {
    /// Keep the expected mistake fraction below `eps`:
    /// `t = 2 (f(ref) - F) / (n (1 - 2 eps))` with `eps ∈ (0, 1/2)`.
    MistakeFraction { eps: f64 },
    /// Target the approximation ratio `1 - delta`:
    /// `t = 2 ((1 + delta) f(ref) - F) / n` with `delta > 0`.
    ApproxRatio { delta: f64 },
}

/// Suggested perturbation scale under the chosen rule; `mid` is the average
/// of the endpoint values (`F`).
pub fn suggest_scale(reference_value: f64, mid: f64, n: usize, rule: ScaleRule) -> Result<f64> {
    match rule {
        ScaleRule::MistakeFraction { eps } => {
            if !(eps > 0.0 && eps < 0.5) {
                return Err(Error::InvalidParam("eps must lie in (0, 1/2)"));
            }
            let numer = 2.0 * (reference_value - mid);
            if !(numer > 0.0) {
                return Err(Error::InvalidParam(
                    "reference value must exceed the endpoint average",
                ));
            }
            Ok(numer / (n as f64 * (1.0 - 2.0 * eps)))
        }
        ScaleRule::ApproxRatio { delta } => {
            if !(delta > 0.0) {
                return Err(Error::InvalidParam("delta must be positive"));
            }
            let numer = 2.0 * ((1.0 + delta) * reference_value - mid);
            if !(numer > 0.0) {
                return Err(Error::InvalidParam(
                    "scaled reference must exceed the endpoint average",
                ));
            }
            Ok(numer / n as f64)
        }
    }
}
