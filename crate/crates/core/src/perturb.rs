//! Perturbation of set functions and the perturb-reduce-solve pipelines.
//!
//! An irreducible function gains reducibility when a modular noise term is
//! added: the perturbed function stays submodular, its reduction shrinks the
//! lattice, and the original function is then optimized on the smaller
//! lattice. Each pipeline run draws the noise once; if the perturbed
//! function happens to stay irreducible the vacuous reduction is kept, never
//! redrawn.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::modular::ModularWeights;
use crate::noise::{derive_seed, uniform_noise};
use crate::oracle::{Family, Oracle, SetFunction};
use crate::reduction::{reduce_in, reducibility_index, LatticeStats, ReductionTrace};
use crate::set::{ElementSet, Lattice};
use crate::solvers::{solve_on_lattice, SolveReport, SolverChoice};
use crate::Mode;

/// A realized modular noise vector with its scale and provenance.
#[derive(Clone, Debug)]
pub struct Perturbation {
    weights: ModularWeights,
    t: f64,
    seed: Option<u64>,
}

impl Perturbation {
    /// Draws `n` weights uniform on `[-t, t]` from the seed.
    pub fn draw(n: usize, t: f64, seed: u64) -> Result<Self> {
        Ok(Self {
            weights: uniform_noise(n, t, seed)?,
            t,
            seed: Some(seed),
        })
    }

    /// Wraps an explicit weight vector (used by hand-traced tests); every
    /// weight must lie in `[-t, t]`.
    pub fn from_weights(weights: ModularWeights, t: f64) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(Error::NegativeScale { t });
        }
        if weights.max_abs() > t {
            return Err(Error::InvalidParam("noise weight exceeds the scale"));
        }
        Ok(Self {
            weights,
            t,
            seed: None,
        })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            weights: ModularWeights::zeros(n),
            t: 0.0,
            seed: None,
        }
    }

    #[inline]
    pub fn weights(&self) -> &ModularWeights {
        &self.weights
    }

    #[inline]
    pub fn scale(&self) -> f64 {
        self.t
    }

    #[inline]
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// `r(X) = Σ_{i∈X} r_i`.
    pub fn eval(&self, x: &ElementSet) -> f64 {
        self.weights.eval(x)
    }
}

struct Shifted {
    inner: Arc<dyn SetFunction>,
    shift: ModularWeights,
}

impl SetFunction for Shifted {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn eval(&self, x: &ElementSet) -> f64 {
        self.inner.eval(x) + self.shift.eval(x)
    }

    fn marginal(&self, i: usize, base: &ElementSet) -> f64 {
        self.inner.marginal(i, base) + self.shift.weight(i)
    }

    fn entry_gains(&self, base: &ElementSet, items: &[usize], out: &mut Vec<f64>) {
        self.inner.entry_gains(base, items, out);
        for (v, &i) in out.iter_mut().zip(items) {
            *v += self.shift.weight(i);
        }
    }

    fn exit_gains(&self, base: &ElementSet, items: &[usize], out: &mut Vec<f64>) {
        self.inner.exit_gains(base, items, out);
        for (v, &i) in out.iter_mut().zip(items) {
            *v += self.shift.weight(i);
        }
    }
}

impl Oracle {
    /// The perturbed oracle `g = f + r`. Submodularity is preserved since
    /// the shift is modular. The returned handle has fresh counters: queries
    /// against `g` are not charged to `f`.
    pub fn perturb(&self, noise: &Perturbation) -> Oracle {
        assert_eq!(
            self.n(),
            noise.weights().n(),
            "ground-set size mismatch: {} vs {}",
            self.n(),
            noise.weights().n()
        );
        Oracle::new(
            Family::Perturbed,
            Arc::new(Shifted {
                inner: Arc::clone(self.raw()),
                shift: noise.weights().clone(),
            }),
        )
    }
}

/// Normalized perturbation scale `P(t) = (t - m) / (M - m)` for the margin
/// statistics of a lattice.
pub fn scale_ratio(stats: &LatticeStats, t: f64) -> Result<f64> {
    let span = stats.max_margin - stats.min_margin;
    if !(span > 0.0) {
        return Err(Error::DegenerateMargins);
    }
    Ok((t - stats.min_margin) / span)
}

/// Inverse of [`scale_ratio`]: the absolute scale at ratio `p`, i.e.
/// `t = m + p (M - m)`.
pub fn scale_for_ratio(stats: &LatticeStats, p: f64) -> f64 {
    stats.min_margin + p * (stats.max_margin - stats.min_margin)
}

/// Everything one perturb-reduce-solve run produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    /// The returned solution; always a member of `lattice`.
    pub solution: ElementSet,
    /// Value of the *original* objective at `solution`.
    pub value: f64,
    /// Final reduced lattice handed to the inner solver.
    pub lattice: Lattice,
    /// The noise draw used in the perturbed pass.
    pub perturbation: Perturbation,
    /// Trace of the exact pass (present when the input was reducible).
    pub plain_pass: Option<ReductionTrace>,
    /// Trace of the perturbed pass.
    pub noisy_pass: ReductionTrace,
    /// Inner-solver report on the reduced lattice.
    pub inner: SolveReport,
    /// Original-oracle queries made by this run (reduction, solve, audit).
    pub f_queries: u64,
    /// Perturbed-oracle queries made by this run.
    pub g_queries: u64,
}

fn run(
    f: &Oracle,
    start: &Lattice,
    noise: Perturbation,
    choice: SolverChoice,
    inner_seed: u64,
    mode: Mode,
) -> Result<Outcome> {
    assert_eq!(f.n(), start.ground().len(), "ground-set size mismatch");
    let f_before = f.query_count();

    // Exact reduction first, when the sign index witnesses reducibility.
    let mut lattice = start.clone();
    let mut plain_pass = None;
    if lattice.free_count() > 0 {
        let report = reducibility_index(f, &lattice)?;
        if report.reducible {
            let (reduced, trace) = reduce_in(f, &lattice, mode);
            lattice = reduced;
            plain_pass = Some(trace);
        }
    }

    // One noise draw; reduce the perturbed function on what remains.
    let g = f.perturb(&noise);
    let g_before = g.query_count();
    let (reduced, noisy_pass) = reduce_in(&g, &lattice, mode);
    lattice = reduced;

    // Solve the original objective (never the perturbed one) on the final
    // lattice.
    let inner = solve_on_lattice(f, &lattice, mode, choice, inner_seed)?;
    debug_assert!(lattice.contains(&inner.solution));

    Ok(Outcome {
        solution: inner.solution.clone(),
        value: inner.value,
        lattice,
        perturbation: noise,
        plain_pass,
        noisy_pass,
        inner,
        f_queries: f.query_count() - f_before,
        g_queries: g.query_count() - g_before,
    })
}

/// Perturbation-reduction minimization: exact reduction, perturbed
/// reduction with a fresh uniform draw at scale `t`, then the inner solver
/// on the reduced lattice. The caller guarantees all minimizers lie in
/// `start`.
pub fn minimize(
    f: &Oracle,
    start: &Lattice,
    t: f64,
    seed: u64,
    choice: SolverChoice,
) -> Result<Outcome> {
    let noise = Perturbation::draw(f.n(), t, seed)?;
    run(
        f,
        start,
        noise,
        choice,
        derive_seed(seed, 1),
        Mode::Minimize,
    )
}

/// [`minimize`] with an explicit, pre-built noise vector.
pub fn minimize_with(
    f: &Oracle,
    start: &Lattice,
    noise: Perturbation,
    choice: SolverChoice,
) -> Result<Outcome> {
    let inner_seed = derive_seed(noise.seed().unwrap_or(0), 1);
    run(f, start, noise, choice, inner_seed, Mode::Minimize)
}

/// Perturbation-reduction maximization; mirror of [`minimize`].
pub fn maximize(
    f: &Oracle,
    start: &Lattice,
    t: f64,
    seed: u64,
    choice: SolverChoice,
) -> Result<Outcome> {
    let noise = Perturbation::draw(f.n(), t, seed)?;
    run(
        f,
        start,
        noise,
        choice,
        derive_seed(seed, 1),
        Mode::Maximize,
    )
}

/// [`maximize`] with an explicit, pre-built noise vector.
pub fn maximize_with(
    f: &Oracle,
    start: &Lattice,
    noise: Perturbation,
    choice: SolverChoice,
) -> Result<Outcome> {
    let inner_seed = derive_seed(noise.seed().unwrap_or(0), 1);
    run(f, start, noise, choice, inner_seed, Mode::Maximize)
}

/// Direction-dispatching variant of [`minimize`]/[`maximize`].
pub fn optimize(
    f: &Oracle,
    start: &Lattice,
    mode: Mode,
    t: f64,
    seed: u64,
    choice: SolverChoice,
) -> Result<Outcome> {
    match mode {
        Mode::Minimize => minimize(f, start, t, seed, choice),
        Mode::Maximize => maximize(f, start, t, seed, choice),
    }
}
