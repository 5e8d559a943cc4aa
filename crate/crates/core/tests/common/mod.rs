//! Shared helpers for the integration suites.
#![allow(dead_code)]

use latred_core::instances;
use latred_core::{ElementSet, Family, Mode, Oracle};

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1.0_f64.max(a.abs()).max(b.abs())
}

/// The families generated for randomized suites.
pub const GENERATED_FAMILIES: [Family; 6] = [
    Family::SubsetSelection,
    Family::GaussianMi,
    Family::LogDet,
    Family::HalfProducts,
    Family::Cut,
    Family::Modular,
];

/// The four families of the main experimental protocol.
pub const PROTOCOL_FAMILIES: [Family; 4] = [
    Family::SubsetSelection,
    Family::GaussianMi,
    Family::LogDet,
    Family::HalfProducts,
];

pub fn instance(family: Family, n: usize, seed: u64) -> Oracle {
    instances::generate(family, n, seed).expect("instance generation succeeds")
}

/// Exhaustively enumerates the optimal value and *all* optimal sets.
pub fn all_optima(f: &Oracle, mode: Mode) -> (f64, Vec<ElementSet>) {
    let n = f.n();
    assert!(n <= 20, "enumeration oracle capped for tests");
    let ground = f.ground();
    let mut best = f64::NAN;
    let mut sets: Vec<ElementSet> = Vec::new();
    for mask in 0..(1u64 << n) {
        let x = ElementSet::from_mask(ground, mask);
        let v = f.eval(&x);
        if sets.is_empty() || mode.better(v, best) {
            best = v;
            sets.clear();
            sets.push(x);
        } else if v == best {
            sets.push(x);
        }
    }
    (best, sets)
}

/// Sample mean and standard error.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
