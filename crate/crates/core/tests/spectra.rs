mod common;

use common::*;
use procspec::rational::{frac, int};
use procspec::spectrum::{self, SpectrumQuery};
use procspec::verifier::{self, VerifyOptions};
use procspec::PolyhedralCone;
use rand::Rng;

#[test]
fn eigencones_are_weakly_invariant() {
    let mut rng = rng(31);
    for _ in 0..30 {
        let n = rng.gen_range(1..=3);
        let h = process(&mut rng, n);
        let lambda = frac(rng.gen_range(0..=8), 4);
        let e = spectrum::eigencone(&h, &lambda);
        let image = h.image_of_set(&e).unwrap().intersect(&e).unwrap();
        for g in e.conic_generators() {
            let scaled: Vec<_> = g.iter().map(|x| &lambda * x).collect();
            assert!(h.contains_pair(&g, &scaled));
            assert!(image.contains(&scaled));
        }
    }
}

#[test]
fn membership_is_monotone_in_the_cone() {
    let mut rng = rng(32);
    let grid = grid(&int(-2), &int(3), 11);
    for _ in 0..20 {
        let n = rng.gen_range(1..=3);
        let h = process(&mut rng, n);
        let k2 = cone(&mut rng, n);
        let k1 = k2.intersect(&cone(&mut rng, n)).unwrap();
        for l in &grid {
            if let Some(xi) = spectrum::is_eigenvalue_in(&h, &k1, l).unwrap() {
                assert!(spectrum::is_certificate(&h, &k2, l, &xi));
                assert!(spectrum::is_eigenvalue_in(&h, &k2, l).unwrap().is_some());
            }
        }
    }
}

#[test]
fn oracle_agrees_on_dense_grids() {
    let mut rng = rng(33);
    let grid = grid(&int(-3), &int(3), 25);
    for _ in 0..12 {
        let n = rng.gen_range(1..=3);
        let h = process(&mut rng, n);
        let k = cone(&mut rng, n);
        for l in &grid {
            let fast = spectrum::is_eigenvalue_in(&h, &k, l).unwrap().is_some();
            let slow = spectrum::oracle_eigenpair_search(&h, &k, l).unwrap().is_some();
            assert_eq!(fast, slow, "λ = {l}");
        }
    }
}

#[test]
fn scan_reports_are_consistent() {
    let mut rng = rng(34);
    for _ in 0..10 {
        let n = rng.gen_range(1..=2);
        let h = process(&mut rng, n);
        let k = cone(&mut rng, n);
        let q = SpectrumQuery::new(int(-2), int(2), 9, frac(1, 64)).unwrap();
        let report = spectrum::spectrum_scan(&h, &k, &q).unwrap();
        for (l, xi) in &report.exact_members {
            assert!(spectrum::is_certificate(&h, &k, l, xi));
        }
        for l in &report.nonmembers_checked {
            assert!(spectrum::is_eigenvalue_in(&h, &k, l).unwrap().is_none());
        }
        for pair in report.intervals.windows(2) {
            assert!(pair[0].hi < pair[1].lo);
        }
        // deterministic for fixed input
        assert_eq!(spectrum::spectrum_scan(&h, &k, &q).unwrap(), report);
    }
}

#[test]
fn kernel_inside_w_is_a_subspace() {
    let mut rng = rng(35);
    let grid: Vec<_> = (0..=16).map(|j| frac(j, 4)).collect();
    let mut instances = 0;
    let mut inside = 0;
    while instances < 8 {
        let (h, k) = if instances % 2 == 0 { invariant_instance(&mut rng) } else { pointed_instance(&mut rng) };
        let w = k.lin_of();
        let opts = VerifyOptions { w: Some(w.clone()), ..Default::default() };
        if !verifier::verify_assumptions(&h, &k, &opts).unwrap().assumptions_hold() {
            continue;
        }
        instances += 1;
        let wc = PolyhedralCone::from_subspace(&w);
        for l in &grid {
            let e = spectrum::eigencone(&h, l);
            if e.is_subset_of(&wc) {
                assert!(e.is_subspace(), "ker(H − {l}I) ⊆ W but is not a subspace");
                inside += 1;
            }
        }
    }
    assert!(inside > 0);
}
