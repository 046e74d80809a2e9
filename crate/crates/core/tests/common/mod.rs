// Seeded random instance generators shared by the integration suites.
#![allow(dead_code)]

use procspec::control::LinearSystem;
use procspec::rational::{frac, int};
use procspec::{ConvexProcess, PolyhedralCone, Rational, RationalMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small integer entry, zero with probability about `1 - density`.
pub fn entry(rng: &mut ChaCha8Rng, density: f64) -> Rational {
    if rng.gen_bool(density) {
        int(rng.gen_range(-2..=2))
    } else {
        int(0)
    }
}

pub fn vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..n).map(|_| entry(rng, 0.8)).collect();
        if v.iter().any(|x| *x != int(0)) {
            return v;
        }
    }
}

/// Between `count.start()` and `count.end()` random nonzero vectors.
pub fn vectors(rng: &mut ChaCha8Rng, n: usize, count: std::ops::RangeInclusive<usize>) -> Vec<Vec<Rational>> {
    let count = rng.gen_range(count);
    (0..count).map(|_| vector(rng, n)).collect()
}

pub fn matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> RationalMatrix {
    let data = (0..rows * cols).map(|_| entry(rng, density)).collect();
    RationalMatrix::new(rows, cols, data).unwrap()
}

/// A cone in Q^n given either by generators or by constraints.
pub fn cone(rng: &mut ChaCha8Rng, n: usize) -> PolyhedralCone {
    if rng.gen_bool(0.5) {
        let rays = vectors(rng, n, 0..=n + 2);
        let lin = if rng.gen_bool(0.3) { vectors(rng, n, 1..=1) } else { Vec::new() };
        PolyhedralCone::from_generators(n, &rays, &lin).unwrap()
    } else {
        let ineqs = vectors(rng, n, 0..=n + 1);
        let eqs = if rng.gen_bool(0.2) { vectors(rng, n, 1..=1) } else { Vec::new() };
        PolyhedralCone::from_constraints(n, &ineqs, &eqs).unwrap()
    }
}

/// A nontrivial pointed cone spanned by random rays.
pub fn pointed_cone(rng: &mut ChaCha8Rng, n: usize) -> PolyhedralCone {
    loop {
        let rays = vectors(rng, n, 1..=n + 1);
        let k = PolyhedralCone::from_generators(n, &rays, &[]).unwrap();
        if k.is_pointed() && !k.is_trivial() {
            return k;
        }
    }
}

/// A convex process on Q^n with a random polyhedral graph.
pub fn process(rng: &mut ChaCha8Rng, n: usize) -> ConvexProcess {
    let rays = vectors(rng, 2 * n, 1..=2 * n + 1);
    let lin = if rng.gen_bool(0.3) { vectors(rng, 2 * n, 1..=1) } else { Vec::new() };
    ConvexProcess::from_generators(n, &rays, &lin).unwrap()
}

/// A process whose graph is guaranteed to carry a nontrivial lineality space.
pub fn process_with_lines(rng: &mut ChaCha8Rng, n: usize) -> ConvexProcess {
    let rays = vectors(rng, 2 * n, 1..=2 * n);
    let lin = vectors(rng, 2 * n, 1..=n);
    ConvexProcess::from_generators(n, &rays, &lin).unwrap()
}

/// A system with `n <= max_n` and `m, p <= 3`; sparse entries so that the
/// geometric subspaces are often nontrivial.
pub fn system(rng: &mut ChaCha8Rng, max_n: usize) -> LinearSystem {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(0..=3);
    let p = rng.gen_range(0..=3);
    LinearSystem::new(
        matrix(rng, n, n, 0.5),
        matrix(rng, n, m, 0.4),
        matrix(rng, p, n, 0.4),
        matrix(rng, p, m, 0.2),
    )
    .unwrap()
}

/// Nonnegative combination of the generators of `c` (random small weights).
pub fn point_of(rng: &mut ChaCha8Rng, c: &PolyhedralCone) -> Vec<Rational> {
    let mut x = vec![int(0); c.dim()];
    for r in c.rays() {
        let w = frac(rng.gen_range(0..=3), rng.gen_range(1..=2));
        for (xi, ri) in x.iter_mut().zip(r) {
            *xi += &w * ri;
        }
    }
    for l in c.lineality().basis_vectors() {
        let w = int(rng.gen_range(-2..=2));
        for (xi, li) in x.iter_mut().zip(&l) {
            *xi += &w * li;
        }
    }
    x
}

/// `count` equally spaced points of `[lo, hi]`.
pub fn grid(lo: &Rational, hi: &Rational, count: usize) -> Vec<Rational> {
    let step = (hi - lo) / int(count as i64 - 1);
    (0..count).map(|i| lo + &step * int(i as i64)).collect()
}

/// `K = span(W) ⊕ cone(P)` with `[W P]` invertible and `H(x) = Ax − K`, where
/// `A` maps `K` into itself and `lin K` into itself.
pub fn invariant_instance(rng: &mut ChaCha8Rng) -> (ConvexProcess, PolyhedralCone) {
    loop {
        let n = rng.gen_range(2..=3);
        let w = rng.gen_range(0..n);
        let m = matrix(rng, n, n, 0.7);
        let Some(m_inv) = m.inverse() else { continue };
        let mut nm = RationalMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let value = if i < w { entry(rng, 0.6) } else if j >= w { int(rng.gen_range(0..=2)) } else { int(0) };
                nm.set(i, j, value);
            }
        }
        let cols = m.column_vecs();
        let k = PolyhedralCone::from_generators(n, &cols[w..], &cols[..w]).unwrap();
        let a = &(&m * &nm) * &m_inv;
        return (ConvexProcess::map_minus_cone(&a, &k).unwrap(), k);
    }
}

/// Pointed `K` with a graph generated by pairs `(k_i, y_i)`, `k_i` the rays of
/// `K` and `y_i ∈ K`.
pub fn pointed_instance(rng: &mut ChaCha8Rng) -> (ConvexProcess, PolyhedralCone) {
    let n = rng.gen_range(2..=3);
    let k = pointed_cone(rng, n);
    let mut pairs = Vec::new();
    for r in k.rays() {
        for _ in 0..rng.gen_range(1..=2) {
            let mut pair = r.clone();
            pair.extend(point_of(rng, &k));
            pairs.push(pair);
        }
    }
    (ConvexProcess::from_generators(n, &pairs, &[]).unwrap(), k)
}
