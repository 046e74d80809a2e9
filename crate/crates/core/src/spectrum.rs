//! Eigencones, spectrum membership and grid scans.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::cone::PolyhedralCone;
use crate::error::{ensure_dim, Error, Result};
use crate::lp;
use crate::matrix::RationalMatrix;
use crate::process::ConvexProcess;
use crate::rational::{self, Rational};

/// `ker(H - λI) = {x : λx ∈ H(x)}`.
pub fn eigencone(h: &ConvexProcess, lambda: &Rational) -> PolyhedralCone {
    let n = h.n();
    let m = RationalMatrix::vstack(&[&RationalMatrix::identity(n), &RationalMatrix::scalar(n, lambda)])
        .expect("blocks");
    h.graph().preimage(&m).expect("graph dims")
}

/// Whether `λ ∈ σ(H, K)`; returns an eigenvector `ξ ∈ K∖{0}` with `λξ ∈ H(ξ)`.
pub fn is_eigenvalue_in(h: &ConvexProcess, k: &PolyhedralCone, lambda: &Rational) -> Result<Option<Vec<Rational>>> {
    ensure_dim("is_eigenvalue_in", h.n(), k.dim())?;
    let common = eigencone(h, lambda).intersect(k)?;
    let Some(xi) = common.nonzero_element() else {
        return Ok(None);
    };
    if !is_certificate(h, k, lambda, &xi) {
        return Err(Error::Internal(format!("eigenvector certificate failed re-verification at {lambda}")));
    }
    Ok(Some(xi))
}

/// Direct check of `ξ ∈ K∖{0}` and `(ξ, λξ) ∈ gr(H)`.
pub fn is_certificate(h: &ConvexProcess, k: &PolyhedralCone, lambda: &Rational, xi: &[Rational]) -> bool {
    let image: Vec<Rational> = xi.iter().map(|x| lambda * x).collect();
    !rational::is_zero_vec(xi) && k.contains(xi) && h.contains_pair(xi, &image)
}

/// Independent eigenpair search: one exact feasibility problem per
/// normalizing functional `c`, written over conic combinations of the
/// generators of `gr(H)` and `K`:
///
/// `Σ α_j g_j = (ξ, λξ)`, `ξ = Σ β_i k_i`, `⟨c, ξ⟩ = 1`, `α, β >= 0`.
pub fn oracle_eigenpair_search(h: &ConvexProcess, k: &PolyhedralCone, lambda: &Rational) -> Result<Option<Vec<Rational>>> {
    ensure_dim("oracle_eigenpair_search", h.n(), k.dim())?;
    let n = h.n();
    let g = h.graph().conic_generators();
    let kg = k.conic_generators();
    if kg.is_empty() {
        return Ok(None);
    }
    let mut fan: Vec<Vec<Rational>> = Vec::new();
    for c in k.rays().iter().chain(k.lineality().basis_vectors().iter()) {
        fan.push(c.clone());
        fan.push(c.iter().map(|x| -x).collect());
    }
    let cols = g.len() + kg.len();
    for c in &fan {
        let mut a = RationalMatrix::zeros(2 * n + 1, cols);
        for (j, gen) in g.iter().enumerate() {
            for i in 0..2 * n {
                a.set(i, j, gen[i].clone());
            }
        }
        for (j, kv) in kg.iter().enumerate() {
            let col = g.len() + j;
            for i in 0..n {
                a.set(i, col, -kv[i].clone());
                a.set(n + i, col, -(lambda * &kv[i]));
            }
            a.set(2 * n, col, rational::dot(c, kv));
        }
        let mut b = vec![rational::zero(); 2 * n + 1];
        b[2 * n] = rational::one();
        if let Some(sol) = lp::find_nonneg_solution(&a, &b) {
            let mut xi = vec![rational::zero(); n];
            for (beta, kv) in sol[g.len()..].iter().zip(&kg) {
                for (x, y) in xi.iter_mut().zip(kv) {
                    *x += beta * y;
                }
            }
            if !is_certificate(h, k, lambda, &xi) {
                return Err(Error::Internal(format!("oracle solution failed re-verification at {lambda}")));
            }
            return Ok(Some(xi));
        }
    }
    Ok(None)
}

/// Whether every sampled `λ` is an eigenvalue of `H` or of its dual.
pub fn check_dual_dichotomy(h: &ConvexProcess, samples: &[Rational]) -> Result<bool> {
    if h.is_n_dim_linear() {
        return Err(Error::Precondition(
            "the process is an n-dimensional linear process".into(),
        ));
    }
    let full = PolyhedralCone::full(h.n());
    let d = h.dual();
    for lambda in samples {
        if is_eigenvalue_in(h, &full, lambda)?.is_none() && is_eigenvalue_in(&d, &full, lambda)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Upper bound on the nonnegative part of `σ(H, K)` when `H(0) ∩ K = {0}`:
/// the largest `‖y‖∞` over `(x, y) ∈ gr(H_K)` with `‖x‖∞ <= 1` (a polytope).
/// An eigenpair with `λ > 0` and `‖ξ‖∞ = 1` is such a pair with `‖y‖∞ = λ`.
pub fn eigenvalue_upper_bound(h: &ConvexProcess, k: &PolyhedralCone) -> Result<Option<Rational>> {
    ensure_dim("eigenvalue_upper_bound", h.n(), k.dim())?;
    if !h.at_zero().intersect(k)?.is_trivial() {
        return Ok(None);
    }
    let n = h.n();
    let hk = h.restrict(k)?;
    // homogenized polytope in (x, y, t)
    let mut drop_t = RationalMatrix::zeros(2 * n, 2 * n + 1);
    for i in 0..2 * n {
        drop_t.set(i, i, rational::one());
    }
    let lifted = hk.graph().preimage(&drop_t)?;
    let mut box_rows = Vec::new();
    for i in 0..n {
        for s in [1, -1] {
            let mut row = vec![rational::zero(); 2 * n + 1];
            row[i] = rational::int(s);
            row[2 * n] = rational::one();
            box_rows.push(row);
        }
    }
    let mut t_row = vec![rational::zero(); 2 * n + 1];
    t_row[2 * n] = rational::one();
    box_rows.push(t_row);
    let boxed = lifted.intersect(&PolyhedralCone::from_constraints(2 * n + 1, &box_rows, &[])?)?;
    if !boxed.lineality().is_zero() {
        return Ok(None);
    }
    let mut bound = rational::zero();
    for r in boxed.rays() {
        let t = &r[2 * n];
        if t.is_zero() {
            return Ok(None);
        }
        for y in &r[n..2 * n] {
            let v = y.abs() / t;
            if v > bound {
                bound = v;
            }
        }
    }
    Ok(Some(bound))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumQuery {
    pub lo: Rational,
    pub hi: Rational,
    pub grid_points: usize,
    pub tol: Rational,
}

impl SpectrumQuery {
    pub fn new(lo: Rational, hi: Rational, grid_points: usize, tol: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::Precondition(format!("empty range [{lo}, {hi}]")));
        }
        if grid_points < 2 {
            return Err(Error::Precondition("grid needs at least 2 points".into()));
        }
        if !tol.is_positive() {
            return Err(Error::Precondition("tolerance must be positive".into()));
        }
        Ok(Self { lo, hi, grid_points, tol })
    }

    pub fn grid(&self) -> Vec<Rational> {
        let steps = Rational::from_integer((self.grid_points - 1).into());
        let h = (&self.hi - &self.lo) / steps;
        (0..self.grid_points)
            .map(|i| &self.lo + &h * Rational::from_integer(i.into()))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndpointStatus {
    /// The endpoint is a probed member and every probe within tolerance
    /// beyond it was a non-member (always the case at a range boundary).
    Exact,
    /// The endpoint is a member found by bisection; the true boundary lies
    /// within tolerance of it.
    RefinedToTolerance,
}

impl EndpointStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::RefinedToTolerance => "refined-to-tolerance",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_status: EndpointStatus,
    pub hi_status: EndpointStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumReport {
    pub exact_members: Vec<(Rational, Vec<Rational>)>,
    pub intervals: Vec<SpectrumInterval>,
    pub nonmembers_checked: Vec<Rational>,
}

/// Bisects between a member and a non-member until they are within `tol`;
/// returns the final member, its certificate, and whether it moved.
fn refine(
    h: &ConvexProcess,
    k: &PolyhedralCone,
    mut member: Rational,
    mut cert: Vec<Rational>,
    mut outside: Rational,
    tol: &Rational,
) -> Result<(Rational, Vec<Rational>, bool)> {
    let mut moved = false;
    while (&member - &outside).abs() > *tol {
        let mid = (&member + &outside) / rational::int(2);
        match is_eigenvalue_in(h, k, &mid)? {
            Some(xi) => {
                member = mid;
                cert = xi;
                moved = true;
            }
            None => outside = mid,
        }
    }
    Ok((member, cert, moved))
}

/// Scans `σ(H, K)` over the query grid, in parallel, and bisects every
/// membership change down to the tolerance.
pub fn spectrum_scan(h: &ConvexProcess, k: &PolyhedralCone, q: &SpectrumQuery) -> Result<SpectrumReport> {
    ensure_dim("spectrum_scan", h.n(), k.dim())?;
    let grid = q.grid();
    let answers: Vec<Option<Vec<Rational>>> = grid
        .par_iter()
        .map(|lambda| is_eigenvalue_in(h, k, lambda))
        .collect::<Result<_>>()?;

    let mut members = Vec::new();
    let mut nonmembers = Vec::new();
    for (lambda, ans) in grid.iter().zip(&answers) {
        match ans {
            Some(xi) => members.push((lambda.clone(), xi.clone())),
            None => nonmembers.push(lambda.clone()),
        }
    }

    let mut intervals = Vec::new();
    let mut extra = Vec::new();
    let mut i = 0;
    while i < grid.len() {
        if answers[i].is_none() {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < grid.len() && answers[j + 1].is_some() {
            j += 1;
        }
        let (lo, lo_status) = if i == 0 {
            (grid[0].clone(), EndpointStatus::Exact)
        } else {
            let (m, c, moved) = refine(h, k, grid[i].clone(), answers[i].clone().unwrap(), grid[i - 1].clone(), &q.tol)?;
            if moved {
                extra.push((m.clone(), c));
            }
            (m, if moved { EndpointStatus::RefinedToTolerance } else { EndpointStatus::Exact })
        };
        let (hi, hi_status) = if j == grid.len() - 1 {
            (grid[j].clone(), EndpointStatus::Exact)
        } else {
            let (m, c, moved) = refine(h, k, grid[j].clone(), answers[j].clone().unwrap(), grid[j + 1].clone(), &q.tol)?;
            if moved {
                extra.push((m.clone(), c));
            }
            (m, if moved { EndpointStatus::RefinedToTolerance } else { EndpointStatus::Exact })
        };
        intervals.push(SpectrumInterval { lo, hi, lo_status, hi_status });
        i = j + 1;
    }

    members.extend(extra);
    members.sort_by(|a, b| a.0.cmp(&b.0));
    members.dedup_by(|a, b| a.0 == b.0);
    Ok(SpectrumReport {
        exact_members: members,
        intervals,
        nonmembers_checked: nonmembers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{frac, int};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn eigencones() {
        let h = fixtures::example_interval();
        assert_eq!(eigencone(&h, &int(1)), PolyhedralCone::nonneg_orthant(1));
        assert!(eigencone(&h, &int(3)).is_trivial());
        assert_eq!(eigencone(&ConvexProcess::identity(2), &int(1)), PolyhedralCone::full(2));
    }

    #[test]
    fn membership() {
        let h = fixtures::example_interval();
        let r = PolyhedralCone::full(1);
        assert_eq!(is_eigenvalue_in(&h, &r, &int(2)).unwrap(), Some(v(&[1])));
        assert!(is_eigenvalue_in(&h.dual(), &r, &int(3)).unwrap().is_some());
        let ex = fixtures::example_2x2();
        let k = fixtures::example_2x2_cone();
        assert!(is_certificate(&ex, &k, &int(2), &v(&[1, -2])));
        assert!(is_eigenvalue_in(&ex, &k, &int(2)).unwrap().is_some());
    }

    #[test]
    fn oracle_agrees_on_fixtures() {
        let h = fixtures::example_interval();
        let r = PolyhedralCone::nonneg_orthant(1);
        for j in 0..33 {
            let lambda = frac(j, 8);
            let fast = is_eigenvalue_in(&h, &r, &lambda).unwrap().is_some();
            let slow = oracle_eigenpair_search(&h, &r, &lambda).unwrap().is_some();
            assert_eq!(fast, slow, "λ = {lambda}");
        }
        let ex = fixtures::example_2x2();
        let k = fixtures::example_2x2_cone();
        for l in [0, 1, 2, 3, 5] {
            let lambda = int(l);
            let fast = is_eigenvalue_in(&ex, &k, &lambda).unwrap().is_some();
            let slow = oracle_eigenpair_search(&ex, &k, &lambda).unwrap().is_some();
            assert_eq!(fast, slow, "λ = {lambda}");
        }
        assert!(oracle_eigenpair_search(&h, &r, &int(3)).unwrap().is_none());
    }

    #[test]
    fn dichotomy() {
        let h = fixtures::example_interval();
        let samples: Vec<Rational> = [-1, 0, 1, 2, 3].iter().map(|&x| int(x)).chain([frac(1, 2)]).collect();
        assert!(check_dual_dichotomy(&h, &samples).unwrap());
        assert!(check_dual_dichotomy(&ConvexProcess::identity(2), &samples).is_err());
    }

    #[test]
    fn interval_scan() {
        let h = fixtures::example_interval();
        let q = SpectrumQuery::new(int(0), int(4), 17, frac(1, 1024)).unwrap();
        let rep = spectrum_scan(&h, &PolyhedralCone::full(1), &q).unwrap();
        assert_eq!(rep.intervals.len(), 1);
        let iv = &rep.intervals[0];
        assert_eq!((iv.lo.clone(), iv.hi.clone()), (frac(1, 2), int(2)));
        assert_eq!(iv.lo_status, EndpointStatus::Exact);
        for (lambda, xi) in &rep.exact_members {
            assert!(is_certificate(&h, &PolyhedralCone::full(1), lambda, xi));
        }
    }

    #[test]
    fn refined_endpoints() {
        // spectrum [1/2, 2] probed on a grid that misses both endpoints
        let h = fixtures::example_interval();
        let q = SpectrumQuery::new(int(0), int(3), 4, frac(1, 64)).unwrap();
        let rep = spectrum_scan(&h, &PolyhedralCone::full(1), &q).unwrap();
        assert_eq!(rep.intervals.len(), 1);
        let iv = &rep.intervals[0];
        assert_eq!(iv.lo_status, EndpointStatus::RefinedToTolerance);
        assert!((&iv.lo - frac(1, 2)).abs() <= frac(1, 64) && iv.lo >= frac(1, 2));
        assert!((&iv.hi - int(2)).abs() <= frac(1, 64) && iv.hi <= int(2));
    }

    #[test]
    fn linear_two_dim_scan_is_full() {
        let h = fixtures::two_dim_linear();
        let q = SpectrumQuery::new(int(-1), int(1), 9, frac(1, 16)).unwrap();
        let rep = spectrum_scan(&h, &PolyhedralCone::full(2), &q).unwrap();
        assert_eq!(rep.intervals.len(), 1);
        assert_eq!((rep.intervals[0].lo.clone(), rep.intervals[0].hi.clone()), (int(-1), int(1)));
        assert!(rep.nonmembers_checked.is_empty());
    }

    #[test]
    fn bound_and_empty_scan_above_it() {
        let h = fixtures::example_interval();
        let k = PolyhedralCone::nonneg_orthant(1);
        let b = eigenvalue_upper_bound(&h, &k).unwrap().unwrap();
        assert_eq!(b, int(2));
        let q = SpectrumQuery::new(&b + frac(1, 8), &b + int(1), 5, frac(1, 16)).unwrap();
        assert!(spectrum_scan(&h, &k, &q).unwrap().intervals.is_empty());
        // H(0) ∩ K is a line for the 2x2 example
        assert!(eigenvalue_upper_bound(&fixtures::example_2x2(), &fixtures::example_2x2_cone()).unwrap().is_none());
    }

    #[test]
    fn query_validation() {
        assert!(SpectrumQuery::new(int(1), int(0), 3, frac(1, 2)).is_err());
        assert!(SpectrumQuery::new(int(0), int(1), 1, frac(1, 2)).is_err());
        assert!(SpectrumQuery::new(int(0), int(1), 3, int(0)).is_err());
    }
}
