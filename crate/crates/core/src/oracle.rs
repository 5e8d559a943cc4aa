//! The set-function oracle abstraction: evaluation, marginal gains, query
//! counting, and an exhaustive submodularity verifier.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::modular::ModularWeights;
use crate::set::{ElementSet, GroundSet};

/// A real-valued set function over a fixed ground set.
///
/// `eval` must be pure: the same set always yields the same value.
/// Implementations may override `marginal` and the batch variants with
/// closed-form fast paths, which must agree with the two-evaluation
/// definition to 1e-9 relative accuracy.
pub trait SetFunction: Send + Sync {
    fn n(&self) -> usize;

    fn eval(&self, x: &ElementSet) -> f64;

    /// Marginal gain `f(i | base) = f(base + i) - f(base)`; requires
    /// `i ∉ base`.
    fn marginal(&self, i: usize, base: &ElementSet) -> f64 {
        debug_assert!(!base.contains(i), "marginal requires i not in base");
        self.eval(&base.with(i)) - self.eval(base)
    }

    /// `f(i | base)` for each `i` in `items` (all outside `base`).
    fn entry_gains(&self, base: &ElementSet, items: &[usize], out: &mut Vec<f64>) {
        out.clear();
        out.extend(items.iter().map(|&i| self.marginal(i, base)));
    }

    /// `f(i | base - i)` for each `i` in `items` (all inside `base`).
    fn exit_gains(&self, base: &ElementSet, items: &[usize], out: &mut Vec<f64>) {
        out.clear();
        out.extend(items.iter().map(|&i| self.marginal(i, &base.without(i))));
    }
}

/// Family tag carried by every oracle, used in reports and CSV output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    SubsetSelection,
    GaussianMi,
    LogDet,
    HalfProducts,
    Cut,
    Modular,
    Perturbed,
    Contracted,
    Custom,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::SubsetSelection => "subset-selection",
            Family::GaussianMi => "gaussian-mi",
            Family::LogDet => "logdet",
            Family::HalfProducts => "half-products",
            Family::Cut => "cut",
            Family::Modular => "modular",
            Family::Perturbed => "perturbed",
            Family::Contracted => "contracted",
            Family::Custom => "custom",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "subset-selection" => Ok(Family::SubsetSelection),
            "gaussian-mi" => Ok(Family::GaussianMi),
            "logdet" => Ok(Family::LogDet),
            "half-products" => Ok(Family::HalfProducts),
            "cut" => Ok(Family::Cut),
            "modular" => Ok(Family::Modular),
            _ => Err(Error::UnknownFamily),
        }
    }
}

/// A counted handle to a set function.
///
/// Clones share the underlying function *and* the query counters, so every
/// evaluation made through any clone is visible in one place. Counters are
/// atomic; concurrent probes never lose counts.
#[derive(Clone)]
pub struct Oracle {
    f: Arc<dyn SetFunction>,
    family: Family,
    evals: Arc<AtomicU64>,
    marginals: Arc<AtomicU64>,
}

impl Oracle {
    pub fn new(family: Family, f: Arc<dyn SetFunction>) -> Self {
        Self {
            f,
            family,
            evals: Arc::new(AtomicU64::new(0)),
            marginals: Arc::new(AtomicU64::new(0)),
        }
    }

    /// Wraps a plain closure as a custom oracle (mostly for tests).
    pub fn custom<F>(n: usize, f: F) -> Self
    where
        F: Fn(&ElementSet) -> f64 + Send + Sync + 'static,
    {
        struct Fn_<F> {
            n: usize,
            f: F,
        }
        impl<F: Fn(&ElementSet) -> f64 + Send + Sync> SetFunction for Fn_<F> {
            fn n(&self) -> usize {
                self.n
            }
            fn eval(&self, x: &ElementSet) -> f64 {
                (self.f)(x)
            }
        }
        Self::new(Family::Custom, Arc::new(Fn_ { n, f }))
    }

    pub fn modular(w: ModularWeights) -> Self {
        Self::new(Family::Modular, Arc::new(w))
    }

    #[inline]
    pub fn family(&self) -> Family {
        self.family
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.f.n()
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet::new(self.f.n()).expect("oracle ground set is valid")
    }

    /// Shared access to the raw (uncounted) function.
    pub fn raw(&self) -> &Arc<dyn SetFunction> {
        &self.f
    }

    fn check(&self, x: &ElementSet) {
        assert_eq!(
            self.f.n(),
            x.ground_len(),
            "ground-set size mismatch: {} vs {}",
            self.f.n(),
            x.ground_len()
        );
    }

    /// Evaluates `f(x)`, incrementing the evaluation counter exactly once.
    pub fn eval(&self, x: &ElementSet) -> f64 {
        self.check(x);
        self.evals.fetch_add(1, Ordering::Relaxed);
        self.f.eval(x)
    }

    /// Marginal gain `f(i | base)`, counted as one marginal query.
    pub fn marginal(&self, i: usize, base: &ElementSet) -> f64 {
        self.check(base);
        assert!(!base.contains(i), "marginal requires i not in base");
        self.marginals.fetch_add(1, Ordering::Relaxed);
        self.f.marginal(i, base)
    }

    /// `f(i | base)` for all `items` outside `base`; counted as
    /// `items.len()` marginal queries.
    pub fn entry_gains(&self, base: &ElementSet, items: &[usize]) -> Vec<f64> {
        self.check(base);
        self.marginals
            .fetch_add(items.len() as u64, Ordering::Relaxed);
        let mut out = Vec::new();
        self.f.entry_gains(base, items, &mut out);
        out
    }

    /// `f(i | base - i)` for all `items` inside `base`; counted as
    /// `items.len()` marginal queries.
    pub fn exit_gains(&self, base: &ElementSet, items: &[usize]) -> Vec<f64> {
        self.check(base);
        self.marginals
            .fetch_add(items.len() as u64, Ordering::Relaxed);
        let mut out = Vec::new();
        self.f.exit_gains(base, items, &mut out);
        out
    }

    /// Number of `eval` calls made through this handle (and its clones).
    pub fn eval_count(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    /// Number of marginal-gain queries made through this handle.
    pub fn marginal_count(&self) -> u64 {
        self.marginals.load(Ordering::Relaxed)
    }

    /// Total oracle work: evaluations plus marginal queries.
    pub fn query_count(&self) -> u64 {
        self.eval_count() + self.marginal_count()
    }
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Oracle")
            .field("family", &self.family)
            .field("n", &self.f.n())
            .field("evals", &self.eval_count())
            .field("marginals", &self.marginal_count())
            .finish()
    }
}

/// Cap for the exhaustive submodularity check.
pub const VERIFY_CAP: usize = 14;

/// Exhaustively checks the diminishing-return property:
/// `f(i|A) >= f(i|B) - 1e-9` for all `A ⊆ B ⊆ N`, `i ∉ B`.
///
/// Tabulates all `2^n` values first, so it costs `2^n` evaluations plus
/// `O(n 3^n)` table lookups. Refuses ground sets larger than [`VERIFY_CAP`].
pub fn verify_submodularity(f: &Oracle) -> Result<bool> {
    let n = f.n();
    if n > VERIFY_CAP {
        return Err(Error::GroundSetTooLarge { n, cap: VERIFY_CAP });
    }
    let ground = f.ground();
    let size = 1usize << n;
    let mut table = Vec::with_capacity(size);
    for mask in 0..size as u64 {
        table.push(f.eval(&ElementSet::from_mask(ground, mask)));
    }
    let full = size as u64 - 1;
    for b in 0..=full {
        let outside = full & !b;
        let mut rest = outside;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest &= rest - 1;
            let gain_b = table[(b | bit) as usize] - table[b as usize];
            // Enumerate subsets a ⊆ b.
            let mut a = b;
            loop {
                let gain_a = table[(a | bit) as usize] - table[a as usize];
                if gain_a < gain_b - 1e-9 {
                    return Ok(false);
                }
                if a == 0 {
                    break;
                }
                a = (a - 1) & b;
            }
        }
    }
    Ok(true)
}

/// Opt-in memoization wrapper keyed by the membership mask. Safe for
/// concurrent readers and writers. Marginal fast paths of the inner function
/// are preserved and not cached.
#[cfg(feature = "std")]
pub struct Memoized {
    inner: Arc<dyn SetFunction>,
    cache: std::sync::RwLock<std::collections::HashMap<ElementSet, f64>>,
}

#[cfg(feature = "std")]
impl SetFunction for Memoized {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn eval(&self, x: &ElementSet) -> f64 {
        if let Some(&v) = self.cache.read().expect("memo lock").get(x) {
            return v;
        }
        let v = self.inner.eval(x);
        self.cache.write().expect("memo lock").insert(x.clone(), v);
        v
    }

    fn marginal(&self, i: usize, base: &ElementSet) -> f64 {
        self.inner.marginal(i, base)
    }

    fn entry_gains(&self, base: &ElementSet, items: &[usize], out: &mut Vec<f64>) {
        self.inner.entry_gains(base, items, out)
    }

    fn exit_gains(&self, base: &ElementSet, items: &[usize], out: &mut Vec<f64>) {
        self.inner.exit_gains(base, items, out)
    }
}

#[cfg(feature = "std")]
impl Oracle {
    /// A memoizing view of this oracle with fresh counters. Repeated
    /// evaluations of the same set hit the cache but still count as queries.
    pub fn memoized(&self) -> Oracle {
        Oracle::new(
            self.family,
            Arc::new(Memoized {
                inner: Arc::clone(&self.f),
                cache: std::sync::RwLock::new(std::collections::HashMap::new()),
            }),
        )
    }
}
