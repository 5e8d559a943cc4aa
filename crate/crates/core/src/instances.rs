//! Seeded random instance generators for every family, following the
//! experimental protocol: subset selection uses a symmetrized uniform
//! matrix with unit diagonal and λ = 0.7, half-products draws `a, b` in
//! `(0.1, 0.5)` and `c` in `(1, 5)`, the determinant families build their
//! matrices from random data.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::families::{
    CutFunction, GaussianMutualInfo, HalfProducts, LogDetSymmetric, SubsetSelection,
};
use crate::linalg::SymMatrix;
use crate::modular::ModularWeights;
use crate::noise::{rng_from_seed, standard_normal};
use crate::oracle::{Family, Oracle};

/// λ used by generated subset-selection instances.
pub const SUBSET_SELECTION_LAMBDA: f64 = 0.7;

/// Feature dimension for generated log-det kernels.
const LOGDET_FEATURE_DIM: usize = 10;

/// RBF bandwidth for generated log-det kernels.
const LOGDET_GAMMA: f64 = 1.0;

/// The raw parameters of a generated instance, exposed so the harness can
/// persist them in the plain-text matrix and vector formats.
#[derive(Clone, Debug)]
pub enum InstanceParams {
    SubsetSelection {
        m: SymMatrix,
        lambda: f64,
    },
    GaussianMi {
        sigma: SymMatrix,
    },
    LogDet {
        k: SymMatrix,
    },
    HalfProducts {
        a: Vec<f64>,
        b: Vec<f64>,
        c: Vec<f64>,
    },
    Cut {
        w: SymMatrix,
    },
    Modular {
        w: Vec<f64>,
    },
}

impl InstanceParams {
    pub fn oracle(self) -> Result<Oracle> {
        Ok(match self {
            InstanceParams::SubsetSelection { m, lambda } => {
                SubsetSelection::new(m, lambda)?.oracle()
            }
            InstanceParams::GaussianMi { sigma } => GaussianMutualInfo::new(sigma)?.oracle(),
            InstanceParams::LogDet { k } => LogDetSymmetric::new(k)?.oracle(),
            InstanceParams::HalfProducts { a, b, c } => HalfProducts::new(a, b, c)?.oracle(),
            InstanceParams::Cut { w } => CutFunction::new(w)?.oracle(),
            InstanceParams::Modular { w } => Oracle::modular(ModularWeights::new(w)),
        })
    }
}

/// Generates the parameters of a seeded instance of the named family.
pub fn generate_params(family: Family, n: usize, seed: u64) -> Result<InstanceParams> {
    match family {
        Family::SubsetSelection => {
            let m = random_symmetric(n, seed, 1.0);
            Ok(InstanceParams::SubsetSelection {
                m: SymMatrix::from_rows(&m)?,
                lambda: SUBSET_SELECTION_LAMBDA,
            })
        }
        Family::GaussianMi => {
            // Covariance of 2n random Gaussian samples: positive definite
            // with probability one.
            let mut rng = rng_from_seed(seed);
            let d = 2 * n.max(2);
            let mut g = alloc::vec![0.0; n * d];
            for v in g.iter_mut() {
                *v = standard_normal(&mut rng);
            }
            let sigma = SymMatrix::from_fn(n, |i, j| {
                let mut acc = 0.0;
                for k in 0..d {
                    acc += g[i * d + k] * g[j * d + k];
                }
                acc / d as f64
            })?;
            Ok(InstanceParams::GaussianMi { sigma })
        }
        Family::LogDet => {
            // RBF kernel of n random points in the unit cube, with the
            // default diagonal jitter.
            let mut rng = rng_from_seed(seed);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..LOGDET_FEATURE_DIM).map(|_| rng.gen::<f64>()).collect())
                .collect();
            let lds = LogDetSymmetric::from_features(
                &rows,
                LOGDET_GAMMA,
                LogDetSymmetric::DEFAULT_JITTER,
            )?;
            Ok(InstanceParams::LogDet {
                k: lds.matrix().clone(),
            })
        }
        Family::HalfProducts => {
            let mut rng = rng_from_seed(seed);
            let a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..0.5)).collect();
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..0.5)).collect();
            let c: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..5.0)).collect();
            Ok(InstanceParams::HalfProducts { a, b, c })
        }
        Family::Cut => {
            let w = random_symmetric(n, seed, 0.0);
            Ok(InstanceParams::Cut {
                w: SymMatrix::from_rows(&w)?,
            })
        }
        Family::Modular => {
            let mut rng = rng_from_seed(seed);
            let w: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            Ok(InstanceParams::Modular { w })
        }
        _ => Err(Error::UnknownFamily),
    }
}

/// Generates a seeded instance of the named family.
pub fn generate(family: Family, n: usize, seed: u64) -> Result<Oracle> {
    generate_params(family, n, seed)?.oracle()
}

/// Symmetric matrix with the given diagonal and off-diagonal entries
/// uniform in `(0, 1)`.
fn random_symmetric(n: usize, seed: u64, diagonal: f64) -> Vec<Vec<f64>> {
    let mut rng = rng_from_seed(seed);
    let mut a = alloc::vec![alloc::vec![0.0; n]; n];
    for i in 0..n {
        a[i][i] = diagonal;
        for j in (i + 1)..n {
            let v: f64 = rng.gen();
            a[i][j] = v;
            a[j][i] = v;
        }
    }
    a
}
