//! Double description conversion between inequality and generator
//! representations of polyhedral cones.
//!
//! The incremental step follows Motzkin's method: each inequality either
//! absorbs one lineality direction (which turns into a ray) or splits the
//! current rays into positive, zero and negative sides, and new rays are
//! formed from adjacent positive/negative pairs. Adjacency is decided by the
//! combinatorial zero-set test, which is exact because the ray list is kept
//! irredundant.

use num_traits::Zero;

use crate::rational::{self, Rational};
use crate::subspace::Subspace;

#[derive(Clone, PartialEq, Eq)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn new(bits: usize) -> Self {
        Self(vec![0; bits.div_ceil(64).max(1)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersect(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_superset_of(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    v: Vec<Rational>,
    zeros: ZeroSet,
}

/// Generators of `{x : A x >= 0, E x = 0}`: a lineality basis and a list of
/// rays that are extreme modulo the lineality space (not yet canonical).
pub(crate) fn constraints_to_generators(
    dim: usize,
    ineqs: &[Vec<Rational>],
    eqs: &[Vec<Rational>],
) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
    let eq_matrix = crate::matrix::RationalMatrix::from_rows(dim, eqs).expect("equation width");
    let mut lineality: Vec<Vec<Rational>> = eq_matrix.kernel_basis();
    let mut rays: Vec<Ray> = Vec::new();
    let m = ineqs.len();

    for (k, a) in ineqs.iter().enumerate() {
        if let Some(pos) = lineality.iter().position(|l| !rational::dot(a, l).is_zero()) {
            let mut l0 = lineality.swap_remove(pos);
            let mut al0 = rational::dot(a, &l0);
            if rational::sign(&al0) < 0 {
                l0.iter_mut().for_each(|x| *x = -x.clone());
                al0 = -al0;
            }
            for l in lineality.iter_mut() {
                let c = rational::dot(a, l) / &al0;
                if !c.is_zero() {
                    for (x, y) in l.iter_mut().zip(&l0) {
                        *x -= &c * y;
                    }
                }
            }
            for r in rays.iter_mut() {
                let c = rational::dot(a, &r.v) / &al0;
                if !c.is_zero() {
                    for (x, y) in r.v.iter_mut().zip(&l0) {
                        *x -= &c * y;
                    }
                    r.v = rational::primitive(&r.v);
                }
                r.zeros.insert(k);
            }
            // l0 is orthogonal to every earlier inequality
            let mut zeros = ZeroSet::new(m);
            for i in 0..k {
                zeros.insert(i);
            }
            rays.push(Ray {
                v: rational::primitive(&l0),
                zeros,
            });
            continue;
        }

        let vals: Vec<Rational> = rays.iter().map(|r| rational::dot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| rational::sign(&vals[i]) > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| rational::sign(&vals[i]) < 0).collect();

        let mut created = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.intersect(&rays[q].zeros);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == q || !r.zeros.is_superset_of(&common));
                if !adjacent {
                    continue;
                }
                let v: Vec<Rational> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(x, y)| &vals[p] * x - &vals[q] * y)
                    .collect();
                let mut zeros = common;
                zeros.insert(k);
                created.push(Ray {
                    v: rational::primitive(&v),
                    zeros,
                });
            }
        }

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            match rational::sign(&vals[i]) {
                1 => next.push(r),
                0 => {
                    r.zeros.insert(k);
                    next.push(r);
                }
                _ => {}
            }
        }
        next.extend(created);
        rays = next;
    }

    (lineality, rays.into_iter().map(|r| r.v).collect())
}

/// Canonical ray list: each candidate projected onto the orthogonal
/// complement of the lineality space, scaled to a primitive integer vector,
/// filtered to the extreme ones, deduplicated and sorted.
///
/// `facets` and `equations` describe the cone the candidates belong to;
/// a ray is extreme when its active constraints have rank
/// `dim - lineality_dim - 1`.
pub(crate) fn canonical_rays(
    candidates: &[Vec<Rational>],
    lineality: &Subspace,
    facets: &[Vec<Rational>],
    equations: &Subspace,
) -> Vec<Vec<Rational>> {
    let dim = lineality.ambient_dim();
    if lineality.dim() == dim {
        return Vec::new();
    }
    let proj = lineality.orth_complement().projector();
    let target = dim - lineality.dim() - 1;
    let eq_rows = equations.basis_vectors();
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for c in candidates {
        let v = rational::primitive(&proj.mul_vec(c));
        if rational::is_zero_vec(&v) || out.contains(&v) {
            continue;
        }
        let mut active = eq_rows.clone();
        active.extend(facets.iter().filter(|a| rational::dot(a, &v).is_zero()).cloned());
        let rank = crate::matrix::RationalMatrix::from_rows(dim, &active)
            .expect("constraint width")
            .rank();
        if rank == target {
            out.push(v);
        }
    }
    out.sort();
    out
}
