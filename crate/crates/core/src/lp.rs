//! Exact phase-one simplex: finds `x >= 0` with `A x = b`, or reports that
//! none exists. Bland's rule guarantees termination.

use num_traits::{Signed, Zero};

use crate::matrix::RationalMatrix;
use crate::rational::{self, Rational};

pub(crate) fn find_nonneg_solution(a: &RationalMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.rows();
    let n = a.cols();
    assert_eq!(b.len(), m, "right-hand side length");
    let width = n + m + 1;
    // tableau rows: [A | I | b], with rows negated so that b >= 0
    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let flip = b[i].is_negative();
            let mut row = Vec::with_capacity(width);
            for j in 0..n {
                let v = a.get(i, j).clone();
                row.push(if flip { -v } else { v });
            }
            for k in 0..m {
                row.push(if k == i { rational::one() } else { rational::zero() });
            }
            row.push(b[i].abs());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    // reduced costs of the phase-one objective (sum of artificials)
    let mut cost: Vec<Rational> = vec![rational::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }

    loop {
        let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<Rational> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &best {
                    None => true,
                    Some(r) => ratio < *r || (ratio == *r && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        // phase one is bounded below by zero, so a leaving row always exists
        let r = leave.expect("bounded phase-one objective");
        let p = t[r][enter].clone();
        for x in t[r].iter_mut() {
            *x /= &p;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for (x, y) in cost.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
        basis[r] = enter;
    }

    if !cost[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![rational::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[i][width - 1].clone();
        }
    }
    Some(x)
}
