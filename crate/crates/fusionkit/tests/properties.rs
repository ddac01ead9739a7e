//! Randomized property tests for the structural invariants that hold on
//! every input, not just the worked examples.

use fusionkit::fusionring::{fuse, weyl_fold};
use fusionkit::repcore::{add_boxes, casimir_delta};
use fusionkit::symchar::{dimension, tensor_decompose};
use fusionkit::{LevelContext, Signature};
use proptest::prelude::*;

/// Weakly decreasing rank-`n` signature with entries in a small window.
fn signature(n: usize, max: i64) -> impl Strategy<Value = Signature> {
    prop::collection::vec(0..=max, n).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Signature::new(v).unwrap()
    })
}

fn small_context() -> impl Strategy<Value = LevelContext> {
    (2usize..=4, 1i64..=4).prop_map(|(n, l)| LevelContext::new(n, l).unwrap())
}

proptest! {
    /// Tensoring with the determinant twists every constituent the same
    /// way: the quadratic Casimir only ever shifts with the signature.
    #[test]
    fn casimir_is_shift_covariant_modulo_normalization(f in signature(3, 6), c in -4i64..=4) {
        let shifted = Signature::new(f.entries().iter().map(|x| x + c).collect()).unwrap();
        prop_assert_eq!(casimir_delta(&f.normalize()), casimir_delta(&shifted.normalize()));
    }

    /// Folding is a retraction: permissible signatures are fixed points.
    #[test]
    fn folding_fixes_permissible_signatures(lc in small_context(), raw in prop::collection::vec(0i64..=8, 2usize..=4)) {
        let mut v = raw;
        v.sort_unstable_by(|a, b| b.cmp(a));
        let f = Signature::new(v).unwrap().normalize();
        if f.rank() == lc.n() && lc.is_permissible(&f).unwrap() {
            let folded = weyl_fold(&f, &lc).unwrap();
            prop_assert_eq!(folded, Some((1, f)));
        }
    }

    /// The fusion product is commutative everywhere, not just on the
    /// enumerated examples.
    #[test]
    fn fusion_commutes(lc in small_context(), seed_f in 0usize..64, seed_g in 0usize..64) {
        let sigs = lc.enumerate_permissible();
        let f = &sigs[seed_f % sigs.len()];
        let g = &sigs[seed_g % sigs.len()];
        let fg = fuse(f, g, &lc).unwrap();
        let gf = fuse(g, f, &lc).unwrap();
        prop_assert_eq!(fg.terms(), gf.terms());
    }

    /// Classical decomposition conserves total dimension.
    #[test]
    fn tensor_decomposition_conserves_dimension(f in signature(3, 4), g in signature(3, 4)) {
        let dec = tensor_decompose(&f, &g).unwrap();
        let total: i64 = dec.terms().iter().map(|(h, m)| m * dimension(h)).sum();
        prop_assert_eq!(dimension(&f) * dimension(&g), total);
    }

    /// Adding k boxes one way or another always lands on signatures of
    /// the right size, weakly decreasing, with at most one new box per
    /// column position.
    #[test]
    fn box_addition_is_well_formed(f in signature(3, 5), k in 1usize..=3) {
        let size: i64 = f.entries().iter().sum();
        for g in add_boxes(&f, k).unwrap() {
            let gsize: i64 = g.entries().iter().sum();
            prop_assert_eq!(gsize, size + k as i64);
            for (a, b) in f.entries().iter().zip(g.entries()) {
                prop_assert!(*b == *a || *b == *a + 1);
            }
        }
    }
}
