//! Property tests for set algebra and lattice nesting.

use proptest::prelude::*;

use latred_core::{ElementSet, GroundSet, Lattice};

mod common;

fn arb_set(n: usize) -> impl Strategy<Value = ElementSet> {
    prop::collection::vec(any::<bool>(), n).prop_map(move |bits| {
        let g = GroundSet::new(n).unwrap();
        ElementSet::from_indices(
            g,
            bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
    })
}

// Ground sizes straddling the one-word boundary.
const SIZES: [usize; 3] = [7, 64, 130];

proptest! {
    #[test]
    fn sym_diff_is_union_of_differences(idx in 0usize..3, seed_a in any::<u64>(), seed_b in any::<u64>()) {
        let n = SIZES[idx];
        let g = GroundSet::new(n).unwrap();
        let a = ElementSet::from_indices(g, (0..n).filter(|i| (seed_a >> (i % 64)) & 1 == 1));
        let b = ElementSet::from_indices(g, (0..n).filter(|i| (seed_b >> (i % 64)) & 1 == 1));
        let lhs = a.minus(&b).union(&b.minus(&a));
        prop_assert_eq!(lhs, a.sym_diff(&b));
    }

    #[test]
    fn inclusion_exclusion_cardinalities(idx in 0usize..3, seed_a in any::<u64>(), seed_b in any::<u64>()) {
        let n = SIZES[idx];
        let g = GroundSet::new(n).unwrap();
        let a = ElementSet::from_indices(g, (0..n).filter(|i| (seed_a >> (i % 64)) & 1 == 1));
        let b = ElementSet::from_indices(g, (0..n).filter(|i| (seed_b >> (i % 64)) & 1 == 1));
        prop_assert_eq!(a.len() + b.len(), a.union(&b).len() + a.intersect(&b).len());
    }

    #[test]
    fn complement_is_involutive_and_partitions(idx in 0usize..3, seed in any::<u64>()) {
        let n = SIZES[idx];
        let g = GroundSet::new(n).unwrap();
        let a = ElementSet::from_indices(g, (0..n).filter(|i| (seed >> (i % 64)) & 1 == 1));
        let c = a.complement();
        prop_assert_eq!(c.complement(), a.clone());
        prop_assert!(a.is_disjoint(&c));
        prop_assert_eq!(a.union(&c), ElementSet::full(g));
    }
}

proptest! {
    #[test]
    fn lattice_nesting_matches_endpoint_inclusions(a in arb_set(10), b in arb_set(10), c in arb_set(10), d in arb_set(10)) {
        let outer = Lattice::new(a.intersect(&b), a.union(&b)).unwrap();
        let inner = Lattice::new(c.intersect(&d), c.union(&d)).unwrap();
        let nested = outer.contains_lattice(&inner);
        let expected = outer.lower().is_subset_of(inner.lower())
            && inner.upper().is_subset_of(outer.upper());
        prop_assert_eq!(nested, expected);
        // Antisymmetry: mutual nesting means equality.
        if nested && inner.contains_lattice(&outer) {
            prop_assert_eq!(outer, inner);
        }
    }

    #[test]
    fn display_round_trips_through_indices(a in arb_set(70)) {
        let g = GroundSet::new(70).unwrap();
        let text = format!("{}", a);
        let parsed = if text.is_empty() {
            ElementSet::empty(g)
        } else {
            ElementSet::from_indices(g, text.split(',').map(|s| s.parse::<usize>().unwrap()))
        };
        prop_assert_eq!(parsed, a);
    }

    #[test]
    fn membership_in_interval_is_endpointwise(a in arb_set(12), b in arb_set(12), x in arb_set(12)) {
        let l = Lattice::new(a.intersect(&b), a.union(&b)).unwrap();
        prop_assert_eq!(
            l.contains(&x),
            l.lower().is_subset_of(&x) && x.is_subset_of(l.upper())
        );
    }
}
