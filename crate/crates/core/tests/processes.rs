mod common;

use common::*;
use procspec::process::scalar_blocks;
use procspec::rational::{frac, int, one, zero};
use procspec::{ConvexProcess, PolyhedralCone, Rational};
use proptest::prelude::*;
use rand::Rng;

fn lambda_strategy() -> impl Strategy<Value = Rational> {
    (-8i64..=8, 1i64..=4).prop_map(|(p, q)| frac(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graph_identities(seed in any::<u64>(), n in 1usize..=3, lambda in lambda_strategy()) {
        let h = process(&mut rng(seed), n);
        let g = h.graph();
        let swap = scalar_blocks(n, &zero(), &one(), &one(), &zero());
        prop_assert_eq!(h.inverse().graph().clone(), g.linear_image(&swap).unwrap());
        let rot = scalar_blocks(n, &zero(), &one(), &-one(), &zero());
        prop_assert_eq!(h.dual().graph().clone(), g.polar().linear_image(&rot).unwrap());
        let shear = scalar_blocks(n, &one(), &zero(), &-lambda.clone(), &one());
        prop_assert_eq!(h.shift(&lambda).graph().clone(), g.linear_image(&shear).unwrap());
        prop_assert_eq!(h.shift(&lambda).shift(&-lambda.clone()), h.clone());
        prop_assert_eq!(h.inverse().inverse(), h.clone());
        // H⁻⁻(x) = −H(−x) for the negative dual
        prop_assert_eq!(h.dual().dual().graph().clone(), g.negate());
    }

    #[test]
    fn linear_envelopes(seed in any::<u64>(), n in 1usize..=3) {
        let h = process(&mut rng(seed), n);
        let lower = PolyhedralCone::from_subspace(h.minimal_linear().graph());
        let upper = PolyhedralCone::from_subspace(h.maximal_linear().graph());
        prop_assert!(lower.is_subset_of(h.graph()));
        prop_assert!(h.graph().is_subset_of(&upper));
    }

    #[test]
    fn powers_compose(seed in any::<u64>(), n in 1usize..=2) {
        let h = process(&mut rng(seed), n);
        prop_assert_eq!(h.power(0), ConvexProcess::identity(n));
        prop_assert_eq!(h.power(1), h.clone());
        prop_assert_eq!(h.power(2), h.then(&h).unwrap());
        prop_assert_eq!(h.power(3), h.power(2).then(&h).unwrap());
    }

    #[test]
    fn values_and_images_agree(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = rng(seed);
        let h = process(&mut rng, n);
        let x = point_of(&mut rng, &h.dom());
        let value = h.value_at(&x).unwrap();
        prop_assert!(!value.is_empty());
        prop_assert_eq!(value.recession_cone(), h.at_zero());
        // H(ray x) is generated by H(x) and H(0)
        let image = h.image_of_set(&PolyhedralCone::ray(&x)).unwrap();
        prop_assert!(value.homogenization().linear_image(&drop_last(n)).unwrap().is_subset_of(&image));
    }
}

fn drop_last(n: usize) -> procspec::RationalMatrix {
    let mut m = procspec::RationalMatrix::zeros(n, n + 1);
    for i in 0..n {
        m.set(i, i, one());
    }
    m
}

#[test]
fn reduced_process_properties() {
    let mut rng = rng(21);
    let mut checked = 0;
    for _ in 0..40 {
        let (h, k) = if rng.gen_bool(0.5) { invariant_instance(&mut rng) } else { pointed_instance(&mut rng) };
        let h0k = h.at_zero().intersect(&k).unwrap();
        if !h.is_weakly_invariant(&k).unwrap().holds || !h0k.is_subspace() {
            continue;
        }
        let w = k.lin_of();
        assert!(h0k.lineality().is_subset_of(&w));
        let reduced = h.reduce(&k, &w).unwrap();
        let slice = k.intersect(&PolyhedralCone::from_subspace(&w.orth_complement())).unwrap();
        assert!(reduced.at_zero().is_trivial(), "H_KW(0) ≠ {{0}}");
        assert!(reduced.is_weakly_invariant(&slice).unwrap().holds, "K ∩ W⊥ not weakly invariant");
        checked += 1;
    }
    assert!(checked >= 20, "{checked}");
}

#[test]
fn weak_invariance_witnesses() {
    let mut rng = rng(22);
    for _ in 0..60 {
        let n = rng.gen_range(1..=3);
        let h = process(&mut rng, n);
        let c = cone(&mut rng, n);
        let result = h.is_weakly_invariant(&c).unwrap();
        match &result.witness {
            Some(x) => {
                assert!(!result.holds && c.contains(x));
                let value = h.value_at(x).unwrap();
                let meets = value.homogenization().intersect(&lift(&c)).unwrap();
                assert!(meets.rays().iter().all(|r| r[n] <= int(0)), "witness image meets C");
            }
            None => assert!(result.holds),
        }
    }
}

/// `C × Q₊` in `Q^(n+1)`, to intersect with homogenized values.
fn lift(c: &PolyhedralCone) -> PolyhedralCone {
    c.product(&PolyhedralCone::nonneg_orthant(1))
}
