use procspec::poly::{char_poly, stable_subspace, Polynomial};
use procspec::rational::{frac, int};
use procspec::{Error, Rational, RationalMatrix, Subspace};
use proptest::prelude::*;

fn matrix_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = RationalMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(-3i64..=3, r * c)
            .prop_map(move |xs| RationalMatrix::new(r, c, xs.into_iter().map(int).collect()).unwrap())
    })
}

fn square_strategy(max_n: usize) -> impl Strategy<Value = RationalMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-3i64..=3, n * n)
            .prop_map(move |xs| RationalMatrix::new(n, n, xs.into_iter().map(int).collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rank_nullity(m in matrix_strategy(4, 5)) {
        let kernel = Subspace::kernel(&m);
        let image = Subspace::image(&m);
        prop_assert_eq!(kernel.dim() + m.rank(), m.cols());
        prop_assert_eq!(image.dim(), m.rank());
        for v in kernel.basis_vectors() {
            prop_assert!(m.mul_vec(&v).iter().all(|x| *x == int(0)));
        }
    }

    #[test]
    fn canonical_form_is_structural(m in matrix_strategy(4, 4), scale in 1i64..=4) {
        let s = Subspace::image(&m);
        prop_assert_eq!(&Subspace::span(s.ambient_dim(), &s.basis_vectors()).unwrap(), &s);
        // the same space spanned by scaled, reversed and padded columns
        let mut cols: Vec<Vec<Rational>> = m.column_vecs().into_iter().rev()
            .map(|c| c.into_iter().map(|x| x * int(scale)).collect())
            .collect();
        cols.push(vec![int(0); m.rows()]);
        prop_assert_eq!(Subspace::span(m.rows(), &cols).unwrap(), s.clone());
        prop_assert_eq!(s.orth_complement().orth_complement(), s);
    }

    #[test]
    fn cayley_hamilton(a in square_strategy(4)) {
        let p = char_poly(&a).unwrap();
        prop_assert_eq!(p.degree(), a.rows());
        prop_assert!(p.eval_matrix(&a).unwrap().is_zero());
        prop_assert_eq!(p.coeffs()[a.rows() - 1].clone(), -a.trace());
    }

    #[test]
    fn inverse_and_solve(a in square_strategy(4), b in prop::collection::vec(-3i64..=3, 4)) {
        if let Some(inv) = a.inverse() {
            prop_assert_eq!(&a * &inv, RationalMatrix::identity(a.rows()));
            let rhs: Vec<Rational> = b[..a.rows()].iter().map(|&x| int(x)).collect();
            let x = a.solve(&rhs).unwrap();
            prop_assert_eq!(a.mul_vec(&x), rhs);
        } else {
            prop_assert!(a.rank() < a.rows());
        }
    }

    #[test]
    fn sturm_counts_match_construction(
        roots in prop::collection::vec((-4i64..=4, 1i64..=2), 0..4),
        positive_quadratics in 0usize..2,
        sqrt_two in any::<bool>(),
    ) {
        // known linear factors, x² + 1 (no real roots) and optionally x² − 2 (one root ≥ 0)
        let mut p = Polynomial::one();
        let mut distinct: Vec<Rational> = Vec::new();
        for (num, den) in &roots {
            let r = frac(*num, *den);
            p = p.mul(&Polynomial::linear_root(&r));
            if !distinct.contains(&r) {
                distinct.push(r);
            }
        }
        for _ in 0..positive_quadratics {
            p = p.mul(&Polynomial::from_i64(&[1, 0, 1]));
        }
        let mut nonneg = distinct.iter().filter(|r| **r >= int(0)).count();
        let mut real = distinct.len();
        if sqrt_two {
            p = p.mul(&Polynomial::from_i64(&[-2, 0, 1]));
            nonneg += 1;
            real += 2;
        }
        prop_assert_eq!(p.count_nonneg_roots(), nonneg);
        prop_assert_eq!(p.count_real_roots(), real);
        let mut found = p.rational_roots();
        found.sort();
        distinct.sort();
        prop_assert_eq!(found, distinct);
    }

    #[test]
    fn stable_subspace_is_invariant(a in square_strategy(4)) {
        match stable_subspace(&a) {
            Ok(s) => prop_assert!(s.image_under(&a).unwrap().is_subset_of(&s)),
            Err(Error::SplitNotRational(_)) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }
}
