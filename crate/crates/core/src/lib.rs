//! Solution-space reduction for unconstrained submodular optimization.
//!
//! The crate provides the lattice-reduction preprocessing algorithms for
//! minimization and maximization, a perturbation framework that endows
//! irreducible functions with reducibility at a quantified cost, the
//! standard objective families, exact and approximate solvers, and
//! closed-form evaluators for the accompanying reducibility-gain and
//! performance-loss guarantees.
//!
//! The library is `no_std`-compatible (with `alloc`); file formats, CSV
//! output, timing, and the command line live in the companion `latred-cli`
//! crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bounds;
pub mod error;
pub mod families;
pub mod instances;
pub mod linalg;
pub mod modular;
pub mod noise;
pub mod oracle;
pub mod perturb;
pub mod reduction;
pub mod set;
pub mod solvers;

pub use error::{Error, Result};
pub use modular::ModularWeights;
pub use oracle::{Family, Oracle, SetFunction};
pub use set::{ElementSet, GroundSet, Lattice};

/// Optimization direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Minimize,
    Maximize,
}

impl Mode {
    /// Is a marginal change of `delta` a strict improvement?
    #[inline]
    pub fn is_improvement(&self, delta: f64) -> bool {
        match self {
            Mode::Minimize => delta < 0.0,
            Mode::Maximize => delta > 0.0,
        }
    }

    /// Is value `a` strictly better than `b`?
    #[inline]
    pub fn better(&self, a: f64, b: f64) -> bool {
        match self {
            Mode::Minimize => a < b,
            Mode::Maximize => a > b,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Minimize => "min",
            Mode::Maximize => "max",
        }
    }
}

impl core::fmt::Display for Mode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" | "minimize" => Ok(Mode::Minimize),
            "max" | "maximize" => Ok(Mode::Maximize),
            _ => Err(Error::InvalidParam("mode must be min or max")),
        }
    }
}
