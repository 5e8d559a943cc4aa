//! Crate-wide error type.

use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Ground-set size outside `1..=MAX_GROUND`.
    GroundSetSize { n: usize },
    /// Two values built over different ground sets were combined.
    GroundSetMismatch { left: usize, right: usize },
    /// Lattice lower bound is not a subset of the upper bound.
    LatticeBounds,
    /// `after` lattice is not nested inside `before`.
    LatticeNotNested,
    /// Operation requires a nonempty free set `T \ S`.
    EmptyFreeSet,
    /// Noise scale must be nonnegative.
    NegativeScale { t: f64 },
    /// Margin interval is degenerate (`M == m`), ratio undefined.
    DegenerateMargins,
    /// Matrix is not symmetric.
    NotSymmetric,
    /// Matrix (or a principal submatrix) failed the Cholesky test.
    NotPositiveDefinite,
    /// Vector or matrix dimension does not match the ground set.
    Dimension { expected: usize, got: usize },
    /// A parameter is outside its documented range.
    InvalidParam(&'static str),
    /// Exhaustive operation refused: ground set larger than the cap.
    GroundSetTooLarge { n: usize, cap: usize },
    /// Branch-and-bound exceeded its node budget.
    NodeBudgetExceeded { budget: usize },
    /// Curvature is undefined (no element with a positive entry gain).
    CurvatureUndefined,
    /// Unknown instance family name.
    UnknownFamily,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GroundSetSize { n } => {
                write!(
                    f,
                    "ground-set size {} outside 1..={}",
                    n,
                    crate::set::MAX_GROUND
                )
            }
            Error::GroundSetMismatch { left, right } => {
                write!(f, "ground-set size mismatch: {} vs {}", left, right)
            }
            Error::LatticeBounds => write!(f, "lattice lower bound not contained in upper bound"),
            Error::LatticeNotNested => {
                write!(f, "lattice is not nested inside the reference lattice")
            }
            Error::EmptyFreeSet => write!(f, "lattice has no free elements"),
            Error::NegativeScale { t } => write!(f, "noise scale must be >= 0, got {}", t),
            Error::DegenerateMargins => write!(f, "margin interval is degenerate (max == min)"),
            Error::NotSymmetric => write!(f, "matrix is not symmetric"),
            Error::NotPositiveDefinite => write!(f, "matrix is not positive definite"),
            Error::Dimension { expected, got } => {
                write!(f, "dimension mismatch: expected {}, got {}", expected, got)
            }
            Error::InvalidParam(what) => write!(f, "invalid parameter: {}", what),
            Error::GroundSetTooLarge { n, cap } => {
                write!(f, "ground set of size {} exceeds cap {}", n, cap)
            }
            Error::NodeBudgetExceeded { budget } => {
                write!(f, "branch-and-bound node budget {} exceeded", budget)
            }
            Error::CurvatureUndefined => write!(f, "curvature undefined: no positive entry gain"),
            Error::UnknownFamily => write!(f, "unknown instance family"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
