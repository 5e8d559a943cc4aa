//! Modular (additive) set functions.

use alloc::vec::Vec;

use crate::set::ElementSet;

/// A modular set function `r(X) = Σ_{i∈X} w_i`.
///
/// Modular functions are both sub- and supermodular; every marginal gain is
/// the element weight regardless of the base set.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularWeights {
    w: Vec<f64>,
}

impl ModularWeights {
    pub fn new(w: Vec<f64>) -> Self {
        Self { w }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            w: alloc::vec![0.0; n],
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.w.len()
    }

    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        self.w[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    /// `r(X) = Σ_{i∈X} w_i`; the empty sum is 0.
    pub fn eval(&self, x: &ElementSet) -> f64 {
        assert_eq!(
            self.w.len(),
            x.ground_len(),
            "ground-set size mismatch: {} vs {}",
            self.w.len(),
            x.ground_len()
        );
        x.iter().map(|i| self.w[i]).sum()
    }

    /// Largest absolute weight; 0 for the empty vector.
    pub fn max_abs(&self) -> f64 {
        self.w.iter().fold(0.0, |m, &v| m.max(libm::fabs(v)))
    }
}

impl crate::oracle::SetFunction for ModularWeights {
    fn n(&self) -> usize {
        self.w.len()
    }

    fn eval(&self, x: &ElementSet) -> f64 {
        ModularWeights::eval(self, x)
    }

    fn marginal(&self, i: usize, _base: &ElementSet) -> f64 {
        self.w[i]
    }

    fn entry_gains(&self, _base: &ElementSet, items: &[usize], out: &mut Vec<f64>) {
        out.clear();
        out.extend(items.iter().map(|&i| self.w[i]));
    }

    fn exit_gains(&self, _base: &ElementSet, items: &[usize], out: &mut Vec<f64>) {
        out.clear();
        out.extend(items.iter().map(|&i| self.w[i]));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::{ElementSet, GroundSet};

    #[test]
    fn modular_eval_examples() {
        let g = GroundSet::new(3).unwrap();
        let w = ModularWeights::new(alloc::vec![-1.0, 2.0, -3.0]);
        assert_eq!(w.eval(&ElementSet::empty(g)), 0.0);
        assert_eq!(w.eval(&ElementSet::from_indices(g, [0, 2])), -4.0);
        assert_eq!(w.eval(&ElementSet::full(g)), -2.0);
    }

    #[test]
    #[should_panic(expected = "ground-set size mismatch")]
    fn modular_eval_rejects_wrong_ground_set() {
        let g = GroundSet::new(4).unwrap();
        let w = ModularWeights::new(alloc::vec![1.0; 3]);
        let _ = w.eval(&ElementSet::empty(g));
    }
}
