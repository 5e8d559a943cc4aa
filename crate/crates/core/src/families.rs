//! The objective families: subset selection, Gaussian mutual information,
//! symmetrized log-determinant, negative half-products, and graph cut.
//!
//! Every family implements [`SetFunction`] with closed-form marginal fast
//! paths that agree with the two-evaluation definition. The two
//! determinant-based families share a factorization engine: extensions go
//! through Schur complements, deletions through the inverse-diagonal
//! identity, so a whole batch of marginals costs one factorization per
//! endpoint instead of two evaluations per element.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::oracle::{Family, Oracle, SetFunction};
use crate::set::ElementSet;

#[inline]
fn ln_checked(x: f64) -> f64 {
    assert!(
        x > 0.0 && x.is_finite(),
        "principal submatrix not positive definite (pivot {})",
        x
    );
    libm::log(x)
}

fn members(x: &ElementSet) -> Vec<usize> {
    x.iter().collect()
}

/// `f(X) = Σ_{i∈N} Σ_{j∈X} M_ij − λ Σ_{i,j∈X} M_ij` with `M` nonnegative
/// symmetric and `λ ∈ [0.5, 1]`.
#[derive(Clone, Debug)]
pub struct SubsetSelection {
    m: SymMatrix,
    lambda: f64,
    col_sums: Vec<f64>,
}

impl SubsetSelection {
    pub fn new(m: SymMatrix, lambda: f64) -> Result<Self> {
        if !(0.5..=1.0).contains(&lambda) {
            return Err(Error::InvalidParam("lambda must lie in [0.5, 1]"));
        }
        for i in 0..m.n() {
            for j in 0..m.n() {
                if m.get(i, j) < 0.0 {
                    return Err(Error::InvalidParam("matrix entries must be nonnegative"));
                }
            }
        }
        let col_sums = (0..m.n()).map(|j| m.col_sum(j)).collect();
        Ok(Self {
            m,
            lambda,
            col_sums,
        })
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.m
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn oracle(self) -> Oracle {
        Oracle::new(Family::SubsetSelection, Arc::new(self))
    }
}

impl SetFunction for SubsetSelection {
    fn n(&self) -> usize {
        self.m.n()
    }

    fn eval(&self, x: &ElementSet) -> f64 {
        let mut cover = 0.0;
        let mut pair = 0.0;
        for j in x.iter() {
            cover += self.col_sums[j];
            for i in x.iter() {
                pair += self.m.get(i, j);
            }
        }
        cover - self.lambda * pair
    }

    fn marginal(&self, i: usize, base: &ElementSet) -> f64 {
        let inner: f64 = base.iter().map(|a| self.m.get(a, i)).sum();
        self.col_sums[i] - self.lambda * (self.m.get(i, i) + 2.0 * inner)
    }
}

/// Shared engine for the two determinant-based families.
#[derive(Clone, Debug)]
struct PsdKernel {
    k: SymMatrix,
}

impl PsdKernel {
    fn new(k: SymMatrix) -> Result<Self> {
        let all: Vec<usize> = (0..k.n()).collect();
        if k.cholesky_sub(&all).is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self { k })
    }

    fn n(&self) -> usize {
        self.k.n()
    }

    /// `log det K_X + log det K_{N∖X}` with `det K_∅ = 1`.
    fn sym_value(&self, x: &ElementSet) -> f64 {
        let ld = |idx: &[usize]| -> f64 {
            if idx.is_empty() {
                0.0
            } else {
                self.k
                    .cholesky_sub(idx)
                    .expect("principal submatrix not positive definite")
                    .logdet()
            }
        };
        ld(&members(x)) + ld(&members(&x.complement()))
    }

    /// Gains of the symmetrized log-det for adding each item to `base`.
    fn sym_entry_gains(&self, base: &ElementSet, items: &[usize], out: &mut Vec<f64>) {
        out.clear();
        if items.is_empty() {
            return;
        }
        let base_idx = members(base);
        let chol_base = self
            .k
            .cholesky_sub(&base_idx)
            .expect("principal submatrix not positive definite");
        // All items live in the complement; deleting i from it uses
        // (K_C^{-1})_{ii}.
        let comp = base.complement();
        let comp_idx = members(&comp);
        let chol_comp = self
            .k
            .cholesky_sub(&comp_idx)
            .expect("principal submatrix not positive definite");
        let inv_diag = chol_comp.inverse_diagonal();
        let mut pos = alloc::vec![usize::MAX; self.n()];
        for (p, &i) in comp_idx.iter().enumerate() {
            pos[i] = p;
        }
        for &i in items {
            debug_assert!(!base.contains(i));
            let grow = ln_checked(self.k.schur_extend(&chol_base, &base_idx, i));
            let shrink = ln_checked(inv_diag[pos[i]]);
            out.push(grow + shrink);
        }
    }

    /// Gains `f(i | base - i)` of the symmetrized log-det for items inside
    /// `base`.
    fn sym_exit_gains(&self, base: &ElementSet, items: &[usize], out: &mut Vec<f64>) {
        out.clear();
        if items.is_empty() {
            return;
        }
        let base_idx = members(base);
        let chol_base = self
            .k
            .cholesky_sub(&base_idx)
            .expect("principal submatrix not positive definite");
        let inv_diag = chol_base.inverse_diagonal();
        let mut pos = alloc::vec![usize::MAX; self.n()];
        for (p, &i) in base_idx.iter().enumerate() {
            pos[i] = p;
        }
        let comp = base.complement();
        let comp_idx = members(&comp);
        let chol_comp = self
            .k
            .cholesky_sub(&comp_idx)
            .expect("principal submatrix not positive definite");
        for &i in items {
            debug_assert!(base.contains(i));
            let shrink = ln_checked(inv_diag[pos[i]]);
            let grow = ln_checked(self.k.schur_extend(&chol_comp, &comp_idx, i));
            out.push(-shrink - grow);
        }
    }
}

/// Symmetrized log-determinant `f(X) = log det K_X + log det K_{N∖X}` for a
/// positive definite `K`.
#[derive(Clone, Debug)]
pub struct LogDetSymmetric {
    kern: PsdKernel,
}

impl LogDetSymmetric {
    pub fn new(k: SymMatrix) -> Result<Self> {
        Ok(Self {
            kern: PsdKernel::new(k)?,
        })
    }

    /// Default diagonal jitter for kernels built from data.
    pub const DEFAULT_JITTER: f64 = 1e-8;

    /// Builds an RBF similarity kernel `K_ij = exp(-γ ||x_i - x_j||²)`
    /// (plus `jitter` on the diagonal) from raw feature rows.
    pub fn from_features(rows: &[Vec<f64>], gamma: f64, jitter: f64) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(Error::InvalidParam("kernel bandwidth must be positive"));
        }
        if !(jitter >= 0.0) {
            return Err(Error::InvalidParam("jitter must be nonnegative"));
        }
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidParam("feature table is empty"));
        }
        let dim = rows[0].len();
        for r in rows {
            if r.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: r.len(),
                });
            }
        }
        let k = SymMatrix::from_fn(n, |i, j| {
            let d2: f64 = rows[i]
                .iter()
                .zip(rows[j].iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            libm::exp(-gamma * d2) + if i == j { jitter } else { 0.0 }
        })?;
        Self::new(k)
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.kern.k
    }

    pub fn oracle(self) -> Oracle {
        Oracle::new(Family::LogDet, Arc::new(self))
    }
}

impl SetFunction for LogDetSymmetric {
    fn n(&self) -> usize {
        self.kern.n()
    }

    fn eval(&self, x: &ElementSet) -> f64 {
        self.kern.sym_value(x)
    }

    fn marginal(&self, i: usize, base: &ElementSet) -> f64 {
        let mut out = Vec::with_capacity(1);
        self.kern.sym_entry_gains(base, &[i], &mut out);
        out[0]
    }

    fn entry_gains(&self, base: &ElementSet, items: &[usize], out: &mut Vec<f64>) {
        self.kern.sym_entry_gains(base, items, out)
    }

    fn exit_gains(&self, base: &ElementSet, items: &[usize], out: &mut Vec<f64>) {
        self.kern.sym_exit_gains(base, items, out)
    }
}

/// Gaussian mutual information `f(X) = h(X) + h(N∖X)` where `h` is the
/// differential entropy of the Gaussian with covariance `Σ_X`:
/// `h(X) = ½ log((2πe)^{|X|} det Σ_X)`, `h(∅) = 0`.
#[derive(Clone, Debug)]
pub struct GaussianMutualInfo {
    kern: PsdKernel,
}

impl GaussianMutualInfo {
    pub fn new(sigma: SymMatrix) -> Result<Self> {
        Ok(Self {
            kern: PsdKernel::new(sigma)?,
        })
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.kern.k
    }

    pub fn oracle(self) -> Oracle {
        Oracle::new(Family::GaussianMi, Arc::new(self))
    }

    #[inline]
    fn ln_two_pi_e() -> f64 {
        libm::log(2.0 * core::f64::consts::PI * core::f64::consts::E)
    }
}

impl SetFunction for GaussianMutualInfo {
    fn n(&self) -> usize {
        self.kern.n()
    }

    fn eval(&self, x: &ElementSet) -> f64 {
        // h(X) + h(N∖X) = ½ n log(2πe) + ½ (log det Σ_X + log det Σ_{N∖X});
        // the first term is constant because |X| + |N∖X| = n.
        0.5 * self.kern.n() as f64 * Self::ln_two_pi_e() + 0.5 * self.kern.sym_value(x)
    }

    fn marginal(&self, i: usize, base: &ElementSet) -> f64 {
        let mut out = Vec::with_capacity(1);
        self.kern.sym_entry_gains(base, &[i], &mut out);
        0.5 * out[0]
    }

    fn entry_gains(&self, base: &ElementSet, items: &[usize], out: &mut Vec<f64>) {
        self.kern.sym_entry_gains(base, items, out);
        for v in out.iter_mut() {
            *v *= 0.5;
        }
    }

    fn exit_gains(&self, base: &ElementSet, items: &[usize], out: &mut Vec<f64>) {
        self.kern.sym_exit_gains(base, items, out);
        for v in out.iter_mut() {
            *v *= 0.5;
        }
    }
}

/// Negative half-products `f(X) = c(X) − Σ_{i,j∈X, i<j} a_i b_j` with
/// nonnegative `a`, `b`, `c`; the pair ordering is element index order.
#[derive(Clone, Debug)]
pub struct HalfProducts {
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
}

impl HalfProducts {
    pub fn new(a: Vec<f64>, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() || a.len() != c.len() {
            return Err(Error::Dimension {
                expected: a.len(),
                got: b.len().max(c.len()),
            });
        }
        if a.iter().chain(&b).chain(&c).any(|&v| v < 0.0) {
            return Err(Error::InvalidParam(
                "half-products vectors must be nonnegative",
            ));
        }
        Ok(Self { a, b, c })
    }

    pub fn vectors(&self) -> (&[f64], &[f64], &[f64]) {
        (&self.a, &self.b, &self.c)
    }

    pub fn oracle(self) -> Oracle {
        Oracle::new(Family::HalfProducts, Arc::new(self))
    }
}

impl SetFunction for HalfProducts {
    fn n(&self) -> usize {
        self.a.len()
    }

    fn eval(&self, x: &ElementSet) -> f64 {
        let mut value = 0.0;
        let mut a_prefix = 0.0;
        for j in x.iter() {
            value += self.c[j] - self.b[j] * a_prefix;
            a_prefix += self.a[j];
        }
        value
    }

    fn marginal(&self, i: usize, base: &ElementSet) -> f64 {
        let mut before = 0.0;
        let mut after = 0.0;
        for j in base.iter() {
            if j < i {
                before += self.a[j];
            } else {
                after += self.b[j];
            }
        }
        self.c[i] - self.b[i] * before - self.a[i] * after
    }
}

/// Graph cut `f(X) = Σ_{i∈X, j∉X} W_ij` for a symmetric nonnegative weight
/// matrix with zero diagonal.
#[derive(Clone, Debug)]
pub struct CutFunction {
    w: SymMatrix,
    degrees: Vec<f64>,
}

impl CutFunction {
    pub fn new(w: SymMatrix) -> Result<Self> {
        for i in 0..w.n() {
            if w.get(i, i) != 0.0 {
                return Err(Error::InvalidParam("cut weights must have zero diagonal"));
            }
            for j in 0..w.n() {
                if w.get(i, j) < 0.0 {
                    return Err(Error::InvalidParam("cut weights must be nonnegative"));
                }
            }
        }
        let degrees = (0..w.n()).map(|i| w.col_sum(i)).collect();
        Ok(Self { w, degrees })
    }

    /// Complete graph with unit edge weights.
    pub fn unit_complete(n: usize) -> Self {
        let w = SymMatrix::from_fn(n, |i, j| if i == j { 0.0 } else { 1.0 })
            .expect("complete graph weights are symmetric");
        Self::new(w).expect("unit weights are valid")
    }

    pub fn weights(&self) -> &SymMatrix {
        &self.w
    }

    pub fn oracle(self) -> Oracle {
        Oracle::new(Family::Cut, Arc::new(self))
    }
}

impl SetFunction for CutFunction {
    fn n(&self) -> usize {
        self.w.n()
    }

    fn eval(&self, x: &ElementSet) -> f64 {
        let mut total = 0.0;
        let mut inner = 0.0;
        for i in x.iter() {
            total += self.degrees[i];
            for j in x.iter() {
                inner += self.w.get(i, j);
            }
        }
        total - inner
    }

    fn marginal(&self, i: usize, base: &ElementSet) -> f64 {
        let adj: f64 = base.iter().map(|j| self.w.get(j, i)).sum();
        self.degrees[i] - 2.0 * adj
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::{ElementSet, GroundSet};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * 1.0_f64.max(a.abs()).max(b.abs())
    }

    fn unit_diag_three() -> SubsetSelection {
        let m = SymMatrix::from_fn(3, |i, j| if i == j { 1.0 } else { 0.5 }).unwrap();
        SubsetSelection::new(m, 0.7).unwrap()
    }

    #[test]
    fn subset_selection_values() {
        let f = unit_diag_three();
        let g = GroundSet::new(3).unwrap();
        assert_eq!(f.eval(&ElementSet::empty(g)), 0.0);
        assert!(close(f.eval(&ElementSet::singleton(g, 0)), 1.3, 1e-12));
        assert!(close(f.eval(&ElementSet::full(g)), 1.8, 1e-12));
        // f(0 | {1,2}) = 2 - 0.7 * 3 = -0.1
        let a = ElementSet::from_indices(g, [1, 2]);
        assert!(close(f.marginal(0, &a), -0.1, 1e-12));
    }

    #[test]
    fn subset_selection_rejects_bad_lambda() {
        let m = SymMatrix::identity(3);
        assert!(SubsetSelection::new(m.clone(), 0.4).is_err());
        assert!(SubsetSelection::new(m, 1.1).is_err());
    }

    #[test]
    fn logdet_values() {
        let g = GroundSet::new(2).unwrap();
        let k = SymMatrix::from_fn(2, |i, j| if i == j { 2.0 } else { 1.0 }).unwrap();
        let f = LogDetSymmetric::new(k).unwrap();
        // X = {0}: log 2 + log 2 = log 4
        assert!(close(
            f.eval(&ElementSet::singleton(g, 0)),
            4.0f64.ln(),
            1e-12
        ));
        // X = ∅: log det K_N = log 3
        assert!(close(f.eval(&ElementSet::empty(g)), 3.0f64.ln(), 1e-12));

        let id = LogDetSymmetric::new(SymMatrix::identity(5)).unwrap();
        let g5 = GroundSet::new(5).unwrap();
        for mask in 0..32u64 {
            assert!(id.eval(&ElementSet::from_mask(g5, mask)).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_mi_values() {
        let g = GroundSet::new(4).unwrap();
        let f = GaussianMutualInfo::new(SymMatrix::identity(4)).unwrap();
        let expect = 2.0 * (2.0 * core::f64::consts::PI * core::f64::consts::E).ln();
        for mask in 0..16u64 {
            assert!(close(
                f.eval(&ElementSet::from_mask(g, mask)),
                expect,
                1e-12
            ));
        }

        let g2 = GroundSet::new(2).unwrap();
        let rho = SymMatrix::from_fn(2, |i, j| if i == j { 1.0 } else { 0.6 }).unwrap();
        let f2 = GaussianMutualInfo::new(rho).unwrap();
        let one = (2.0 * core::f64::consts::PI * core::f64::consts::E).ln();
        assert!(close(f2.eval(&ElementSet::singleton(g2, 0)), one, 1e-12));
    }

    #[test]
    fn symmetric_families_are_complement_invariant() {
        let g = GroundSet::new(6).unwrap();
        let k = SymMatrix::from_fn(6, |i, j| {
            if i == j {
                2.0
            } else {
                0.3 / (1.0 + (i as f64 - j as f64).abs())
            }
        })
        .unwrap();
        let ld = LogDetSymmetric::new(k.clone()).unwrap();
        let mi = GaussianMutualInfo::new(k).unwrap();
        let cut = CutFunction::unit_complete(6);
        for mask in 0..64u64 {
            let x = ElementSet::from_mask(g, mask);
            let xc = x.complement();
            assert!(close(ld.eval(&x), ld.eval(&xc), 1e-9));
            assert!(close(mi.eval(&x), mi.eval(&xc), 1e-9));
            assert!(close(cut.eval(&x), cut.eval(&xc), 1e-9));
        }
    }

    #[test]
    fn half_products_values() {
        let g = GroundSet::new(2).unwrap();
        let f = HalfProducts::new(
            alloc::vec![1.0, 1.0],
            alloc::vec![1.0, 1.0],
            alloc::vec![0.5, 0.5],
        )
        .unwrap();
        assert_eq!(f.eval(&ElementSet::empty(g)), 0.0);
        assert!(close(f.eval(&ElementSet::full(g)), 0.0, 1e-12));
        assert!(close(f.eval(&ElementSet::singleton(g, 0)), 0.5, 1e-12));
    }

    #[test]
    fn cut_values() {
        let g = GroundSet::new(3).unwrap();
        let f = CutFunction::unit_complete(3);
        assert_eq!(f.eval(&ElementSet::singleton(g, 0)), 2.0);
        assert_eq!(f.eval(&ElementSet::full(g)), 0.0);
        assert_eq!(f.eval(&ElementSet::from_indices(g, [0, 1])), 2.0);
        assert_eq!(f.marginal(0, &ElementSet::empty(g)), 2.0);
    }

    #[test]
    fn rbf_ingest_orthogonal_unit_vectors() {
        // Two orthogonal unit vectors: ||x - y||² = 2.
        let rows = alloc::vec![alloc::vec![1.0, 0.0], alloc::vec![0.0, 1.0]];
        let f = LogDetSymmetric::from_features(&rows, 1.0, 1e-6).unwrap();
        let k = f.matrix();
        assert!(close(k.get(0, 1), (-2.0f64).exp(), 1e-12));
        assert!(close(k.get(0, 0), 1.0 + 1e-6, 1e-12));
    }

    #[test]
    fn rbf_ingest_rejects_duplicates_without_jitter() {
        let rows = alloc::vec![alloc::vec![0.5, 0.5], alloc::vec![0.5, 0.5]];
        assert_eq!(
            LogDetSymmetric::from_features(&rows, 1.0, 0.0).unwrap_err(),
            Error::NotPositiveDefinite
        );
        // Jitter restores definiteness.
        assert!(LogDetSymmetric::from_features(&rows, 1.0, 1e-8).is_ok());
    }

    #[test]
    fn fast_paths_match_eval_difference() {
        let k = SymMatrix::from_fn(5, |i, j| {
            if i == j {
                1.5
            } else {
                0.4 / (1.0 + (i + j) as f64)
            }
        })
        .unwrap();
        let g = GroundSet::new(5).unwrap();
        let fams: Vec<alloc::boxed::Box<dyn SetFunction>> = alloc::vec![
            alloc::boxed::Box::new(
                SubsetSelection::new(
                    SymMatrix::from_fn(5, |i, j| if i == j { 1.0 } else { 0.3 }).unwrap(),
                    0.7,
                )
                .unwrap()
            ),
            alloc::boxed::Box::new(LogDetSymmetric::new(k.clone()).unwrap()),
            alloc::boxed::Box::new(GaussianMutualInfo::new(k).unwrap()),
            alloc::boxed::Box::new(
                HalfProducts::new(
                    alloc::vec![0.2, 0.3, 0.1, 0.4, 0.25],
                    alloc::vec![0.15, 0.2, 0.45, 0.3, 0.1],
                    alloc::vec![1.5, 2.0, 3.0, 1.0, 2.5],
                )
                .unwrap(),
            ),
            alloc::boxed::Box::new(CutFunction::unit_complete(5)),
        ];
        for f in &fams {
            for mask in 0..32u64 {
                let base = ElementSet::from_mask(g, mask);
                for i in 0..5 {
                    if base.contains(i) {
                        continue;
                    }
                    let fast = f.marginal(i, &base);
                    let slow = f.eval(&base.with(i)) - f.eval(&base);
                    assert!(
                        close(fast, slow, 1e-9),
                        "fast path {} vs {} at i={} base={:?}",
                        fast,
                        slow,
                        i,
                        base
                    );
                }
            }
        }
    }
}
