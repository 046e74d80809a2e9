//! Polyhedral convex cones with both generator and constraint descriptions.
//!
//! A cone is stored in canonical form: the lineality space as a canonical
//! [`Subspace`], extreme rays projected onto its orthogonal complement and
//! scaled to primitive integer vectors, and facet normals projected onto the
//! linear span of the cone. Both descriptions are computed on construction,
//! so structural equality is set equality.

use std::fmt;

use num_traits::Zero;

use crate::dd;
use crate::error::{ensure_dim, Result};
use crate::matrix::RationalMatrix;
use crate::rational::{self, Rational};
use crate::subspace::{unit, Subspace};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyhedralCone {
    dim: usize,
    lineality: Subspace,
    rays: Vec<Vec<Rational>>,
    /// Orthogonal complement of the linear span; its basis rows are the equations.
    equations: Subspace,
    inequalities: Vec<Vec<Rational>>,
}

/// Canonical generator description `(rays, lineality)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VRep {
    pub rays: Vec<Vec<Rational>>,
    pub lineality: Subspace,
}

/// Canonical constraint description `{x : a·x >= 0 for a in ineqs, e·x = 0 for e in eqs}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    pub inequalities: Vec<Vec<Rational>>,
    pub equations: Subspace,
}

/// Converts a constraint description into the canonical generator description.
pub fn hrep_to_vrep(dim: usize, ineqs: &[Vec<Rational>], eqs: &[Vec<Rational>]) -> Result<VRep> {
    let c = PolyhedralCone::from_constraints(dim, ineqs, eqs)?;
    Ok(c.vrep())
}

/// Converts a generator description into the canonical constraint description.
pub fn vrep_to_hrep(dim: usize, rays: &[Vec<Rational>], lineality: &[Vec<Rational>]) -> Result<HRep> {
    let c = PolyhedralCone::from_generators(dim, rays, lineality)?;
    Ok(c.hrep())
}

impl PolyhedralCone {
    /// `{L l + R mu : mu >= 0}`. An empty generator list gives `{0}`.
    pub fn from_generators(
        dim: usize,
        rays: &[Vec<Rational>],
        lineality: &[Vec<Rational>],
    ) -> Result<Self> {
        for r in rays.iter().chain(lineality) {
            ensure_dim("cone generators", dim, r.len())?;
        }
        // The dual cone {y : r·y >= 0, l·y = 0} has the facet normals of this
        // cone as its rays and the equations as its lineality.
        let (dual_lin, dual_rays) = dd::constraints_to_generators(dim, rays, lineality);
        let equations = Subspace::span(dim, &dual_lin)?;
        let mut span_vectors = dual_lin.clone();
        span_vectors.extend(dual_rays.iter().cloned());
        let dual_span = Subspace::span(dim, &span_vectors)?;
        let lin = dual_span.orth_complement();

        let lin_span = equations.orth_complement();
        let primal_gens: Vec<Vec<Rational>> = rays
            .iter()
            .cloned()
            .chain(lineality.iter().cloned())
            .collect();
        let inequalities = dd::canonical_rays(&dual_rays, &equations, &primal_gens, &lin);
        let rays = dd::canonical_rays(rays, &lin, &inequalities, &equations);
        debug_assert_eq!(lin_span.dim(), lin.sum(&Subspace::span(dim, &rays)?)?.dim());
        Ok(Self {
            dim,
            lineality: lin,
            rays,
            equations,
            inequalities,
        })
    }

    /// `{x : a·x >= 0 for every a in ineqs, e·x = 0 for every e in eqs}`.
    /// Empty constraint lists give the whole space.
    pub fn from_constraints(
        dim: usize,
        ineqs: &[Vec<Rational>],
        eqs: &[Vec<Rational>],
    ) -> Result<Self> {
        for r in ineqs.iter().chain(eqs) {
            ensure_dim("cone constraints", dim, r.len())?;
        }
        let (lin_basis, raw_rays) = dd::constraints_to_generators(dim, ineqs, eqs);
        let lin = Subspace::span(dim, &lin_basis)?;
        let mut span_vectors = lin_basis.clone();
        span_vectors.extend(raw_rays.iter().cloned());
        let equations = Subspace::span(dim, &span_vectors)?.orth_complement();

        let rays = dd::canonical_rays(&raw_rays, &lin, ineqs, &equations);
        let inequalities = dd::canonical_rays(ineqs, &equations, &rays, &lin);
        Ok(Self {
            dim,
            lineality: lin,
            rays,
            equations,
            inequalities,
        })
    }

    pub fn from_subspace(s: &Subspace) -> Self {
        Self::from_generators(s.ambient_dim(), &[], &s.basis_vectors()).expect("subspace basis")
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_generators(dim, &[], &[]).expect("zero cone")
    }

    pub fn full(dim: usize) -> Self {
        Self::from_subspace(&Subspace::full(dim))
    }

    pub fn nonneg_orthant(dim: usize) -> Self {
        let rays: Vec<Vec<Rational>> = (0..dim).map(|i| unit(dim, i)).collect();
        Self::from_generators(dim, &rays, &[]).expect("orthant")
    }

    pub fn ray(v: &[Rational]) -> Self {
        Self::from_generators(v.len(), &[v.to_vec()], &[]).expect("single ray")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<Rational>] {
        &self.rays
    }

    pub fn lineality(&self) -> &Subspace {
        &self.lineality
    }

    pub fn inequalities(&self) -> &[Vec<Rational>] {
        &self.inequalities
    }

    /// Orthogonal complement of the linear span; basis vectors are equation normals.
    pub fn equations(&self) -> &Subspace {
        &self.equations
    }

    pub fn vrep(&self) -> VRep {
        VRep {
            rays: self.rays.clone(),
            lineality: self.lineality.clone(),
        }
    }

    pub fn hrep(&self) -> HRep {
        HRep {
            inequalities: self.inequalities.clone(),
            equations: self.equations.clone(),
        }
    }

    /// Rays together with both signs of every lineality basis vector; the cone
    /// is their conic hull.
    pub fn conic_generators(&self) -> Vec<Vec<Rational>> {
        let mut out = self.rays.clone();
        for l in self.lineality.basis_vectors() {
            out.push(l.iter().map(|x| -x.clone()).collect());
            out.push(l);
        }
        out
    }

    /// A nonzero element, if the cone is not `{0}`.
    pub fn nonzero_element(&self) -> Option<Vec<Rational>> {
        self.lineality
            .basis_vectors()
            .into_iter()
            .next()
            .or_else(|| self.rays.first().cloned())
    }

    /// Negative polar `{y : <x, y> <= 0 for all x in C}`.
    pub fn polar(&self) -> Self {
        let neg_ineqs: Vec<Vec<Rational>> = self
            .inequalities
            .iter()
            .map(|a| a.iter().map(|x| -x.clone()).collect())
            .collect();
        let neg_rays: Vec<Vec<Rational>> = self
            .rays
            .iter()
            .map(|a| a.iter().map(|x| -x.clone()).collect())
            .collect();
        // swap the two descriptions; both are already canonical
        let mut rays = neg_ineqs;
        rays.sort();
        let mut inequalities = neg_rays;
        inequalities.sort();
        Self {
            dim: self.dim,
            lineality: self.equations.clone(),
            rays,
            equations: self.lineality.clone(),
            inequalities,
        }
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        ensure_dim("cone intersection", self.dim, other.dim)?;
        let mut ineqs = self.inequalities.clone();
        ineqs.extend(other.inequalities.iter().cloned());
        let mut eqs = self.equations.basis_vectors();
        eqs.extend(other.equations.basis_vectors());
        Self::from_constraints(self.dim, &ineqs, &eqs)
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        ensure_dim("Minkowski sum", self.dim, other.dim)?;
        let mut rays = self.rays.clone();
        rays.extend(other.rays.iter().cloned());
        let mut lin = self.lineality.basis_vectors();
        lin.extend(other.lineality.basis_vectors());
        Self::from_generators(self.dim, &rays, &lin)
    }

    /// `M C`, computed on generators.
    pub fn linear_image(&self, m: &RationalMatrix) -> Result<Self> {
        ensure_dim("cone image", m.cols(), self.dim)?;
        let rays: Vec<Vec<Rational>> = self.rays.iter().map(|r| m.mul_vec(r)).collect();
        let lin: Vec<Vec<Rational>> = self
            .lineality
            .basis_vectors()
            .iter()
            .map(|l| m.mul_vec(l))
            .collect();
        Self::from_generators(m.rows(), &rays, &lin)
    }

    /// `{x : M x in C}`, computed on constraints.
    pub fn preimage(&self, m: &RationalMatrix) -> Result<Self> {
        ensure_dim("cone preimage", m.rows(), self.dim)?;
        let mt = m.transpose();
        let ineqs: Vec<Vec<Rational>> = self.inequalities.iter().map(|a| mt.mul_vec(a)).collect();
        let eqs: Vec<Vec<Rational>> = self
            .equations
            .basis_vectors()
            .iter()
            .map(|e| mt.mul_vec(e))
            .collect();
        Self::from_constraints(m.cols(), &ineqs, &eqs)
    }

    /// Cartesian product `C1 x C2`.
    pub fn product(&self, other: &Self) -> Self {
        let n = self.dim;
        let m = other.dim;
        let pad_right = |v: &Vec<Rational>| {
            let mut w = v.clone();
            w.extend(std::iter::repeat_n(Rational::zero(), m));
            w
        };
        let pad_left = |v: &Vec<Rational>| {
            let mut w = vec![Rational::zero(); n];
            w.extend(v.iter().cloned());
            w
        };
        let mut ineqs: Vec<Vec<Rational>> = self.inequalities.iter().map(pad_right).collect();
        ineqs.extend(other.inequalities.iter().map(pad_left));
        let mut eqs: Vec<Vec<Rational>> = self.equations.basis_vectors().iter().map(pad_right).collect();
        eqs.extend(other.equations.basis_vectors().iter().map(pad_left));
        let mut rays: Vec<Vec<Rational>> = self.rays.iter().map(pad_right).collect();
        rays.extend(other.rays.iter().map(pad_left));
        rays.sort();
        let mut inequalities = ineqs;
        inequalities.sort();
        Self {
            dim: n + m,
            lineality: self.lineality.product(&other.lineality),
            rays,
            equations: Subspace::span(n + m, &eqs).expect("padded equations"),
            inequalities,
        }
    }

    /// `lin(C) = C ∩ -C`.
    pub fn lin_of(&self) -> Subspace {
        self.lineality.clone()
    }

    /// `Lin(C) = C - C`.
    pub fn lin_span(&self) -> Subspace {
        self.equations.orth_complement()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_zero()
    }

    pub fn is_subspace(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_zero()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim
            && self.equations.basis_vectors().iter().all(|e| rational::dot(e, x).is_zero())
            && self.inequalities.iter().all(|a| rational::sign(&rational::dot(a, x)) >= 0)
    }

    /// A generator of `self` lying outside `other`, if any; `None` means `self ⊆ other`.
    pub fn inclusion_witness(&self, other: &Self) -> Option<Vec<Rational>> {
        self.conic_generators().into_iter().find(|g| !other.contains(g))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.dim == other.dim && self.inclusion_witness(other).is_none()
    }

    pub fn negate(&self) -> Self {
        self.linear_image(&(-&RationalMatrix::identity(self.dim)))
            .expect("square map")
    }
}

impl fmt::Debug for PolyhedralCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rays: Vec<String> = self
            .rays
            .iter()
            .map(|r| format!("({})", rational::format_vec(r).join(",")))
            .collect();
        write!(
            f,
            "cone(dim={}, rays=[{}], lineality={:?})",
            self.dim,
            rays.join(" "),
            self.lineality
        )
    }
}

/// A nonempty-or-empty polyhedron `P ⊆ Q^n`, stored as its homogenization
/// `{(t y, t) : y in P, t >= 0}` closed up with the recession cone at `t = 0`.
#[derive(Clone, Debug)]
pub struct Polyhedron {
    dim: usize,
    hom: PolyhedralCone,
}

impl Polyhedron {
    /// Wraps a cone in `Q^(n+1)` whose last coordinate is nonnegative.
    pub fn from_homogenization(hom: PolyhedralCone) -> Result<Self> {
        let n = hom.dim().checked_sub(1).ok_or(crate::Error::DimensionMismatch {
            op: "homogenization",
            expected: 1,
            found: 0,
        })?;
        let mut t = vec![Rational::zero(); n + 1];
        t[n] = rational::one();
        let half = PolyhedralCone::from_constraints(n + 1, &[t], &[])?;
        Ok(Self {
            dim: n,
            hom: hom.intersect(&half)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn homogenization(&self) -> &PolyhedralCone {
        &self.hom
    }

    pub fn is_empty(&self) -> bool {
        self.hom
            .rays()
            .iter()
            .all(|r| rational::sign(&r[self.dim]) <= 0)
    }

    pub fn contains(&self, y: &[Rational]) -> bool {
        let mut v = y.to_vec();
        v.push(rational::one());
        self.hom.contains(&v)
    }

    /// Recession cone, `{y : (y, 0) in hom}`.
    pub fn recession_cone(&self) -> PolyhedralCone {
        let mut embed = RationalMatrix::zeros(self.dim + 1, self.dim);
        for i in 0..self.dim {
            embed.set(i, i, rational::one());
        }
        self.hom.preimage(&embed).expect("embedding dimensions")
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        ensure_dim("polyhedron sum", self.dim, other.dim)?;
        let n = self.dim;
        // variables (p, q, t) in Q^(2n+1)
        let mut first = RationalMatrix::zeros(n + 1, 2 * n + 1);
        let mut second = RationalMatrix::zeros(n + 1, 2 * n + 1);
        let mut sum = RationalMatrix::zeros(n + 1, 2 * n + 1);
        for i in 0..n {
            first.set(i, i, rational::one());
            second.set(i, n + i, rational::one());
            sum.set(i, i, rational::one());
            sum.set(i, n + i, rational::one());
        }
        first.set(n, 2 * n, rational::one());
        second.set(n, 2 * n, rational::one());
        sum.set(n, 2 * n, rational::one());
        let joint = self.hom.preimage(&first)?.intersect(&other.hom.preimage(&second)?)?;
        Self::from_homogenization(joint.linear_image(&sum)?)
    }
}

impl PartialEq for Polyhedron {
    fn eq(&self, other: &Self) -> bool {
        match (self.is_empty(), other.is_empty()) {
            (true, true) => self.dim == other.dim,
            (false, false) => self.hom == other.hom,
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn halfplane_a_ge_b() -> PolyhedralCone {
        PolyhedralCone::from_constraints(2, &[v(&[1, -1])], &[]).unwrap()
    }

    #[test]
    fn orthant_constraints() {
        let c = PolyhedralCone::nonneg_orthant(2);
        assert_eq!(c.inequalities(), &[v(&[0, 1]), v(&[1, 0])]);
        assert!(c.equations().is_zero());
    }

    #[test]
    fn line_plus_ray_is_halfplane() {
        let c = PolyhedralCone::from_generators(2, &[v(&[1, -1])], &[v(&[1, 1])]).unwrap();
        assert_eq!(c.inequalities(), &[v(&[1, -1])]);
        assert_eq!(c, halfplane_a_ge_b());
        assert_eq!(c.rays(), &[v(&[1, -1])]);
    }

    #[test]
    fn interval_graph_constraints() {
        let c = PolyhedralCone::from_generators(
            2,
            &[vec![int(1), frac(1, 2)], v(&[1, 2])],
            &[],
        )
        .unwrap();
        // y - x/2 >= 0 and 2x - y >= 0, in primitive integer form
        assert_eq!(c.inequalities(), &[v(&[-1, 2]), v(&[2, -1])]);
        assert_eq!(c.rays(), &[v(&[1, 2]), v(&[2, 1])]);
    }

    #[test]
    fn polar_examples() {
        assert!(PolyhedralCone::full(3).polar().is_trivial());
        let o = PolyhedralCone::nonneg_orthant(2);
        assert_eq!(o.polar(), o.negate());
        let k = halfplane_a_ge_b();
        assert_eq!(k.polar(), PolyhedralCone::ray(&v(&[-1, 1])));
    }

    #[test]
    fn intersection_and_sum() {
        let o = PolyhedralCone::nonneg_orthant(2);
        assert!(o.intersect(&o.negate()).unwrap().is_trivial());
        let e1 = PolyhedralCone::ray(&v(&[1, 0]));
        let line = e1.minkowski_sum(&e1.negate()).unwrap();
        assert!(line.is_subspace());
        assert_eq!(line.lin_of(), Subspace::span(2, &[v(&[1, 0])]).unwrap());
        let anti = PolyhedralCone::from_constraints(2, &[], &[v(&[1, 1])]).unwrap();
        let r = halfplane_a_ge_b().intersect(&anti).unwrap();
        assert_eq!(r, PolyhedralCone::ray(&v(&[1, -1])));
    }

    #[test]
    fn images_and_preimages() {
        let c = PolyhedralCone::from_generators(2, &[vec![int(1), frac(1, 2)], v(&[1, 2])], &[]).unwrap();
        assert_eq!(c.linear_image(&RationalMatrix::identity(2)).unwrap(), c);
        let swap = RationalMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let s = c.linear_image(&swap).unwrap();
        let expect = PolyhedralCone::from_generators(2, &[vec![frac(1, 2), int(1)], v(&[2, 1])], &[]).unwrap();
        assert_eq!(s, expect);
        let half_line = PolyhedralCone::nonneg_orthant(1);
        let pre = half_line.preimage(&RationalMatrix::from_i64(&[&[1, 0]])).unwrap();
        assert_eq!(pre, PolyhedralCone::from_constraints(2, &[v(&[1, 0])], &[]).unwrap());
    }

    #[test]
    fn lin_and_span() {
        let o = PolyhedralCone::nonneg_orthant(2);
        assert!(o.lin_of().is_zero());
        assert!(o.lin_span().is_full());
        assert_eq!(halfplane_a_ge_b().lin_of(), Subspace::span(2, &[v(&[1, 1])]).unwrap());
        let r = PolyhedralCone::ray(&v(&[1, 2]));
        assert_eq!(r.lin_span(), Subspace::span(2, &[v(&[1, 2])]).unwrap());
    }

    #[test]
    fn predicates() {
        assert!(PolyhedralCone::nonneg_orthant(2).is_pointed());
        assert!(!halfplane_a_ge_b().is_subspace());
        let d = PolyhedralCone::from_subspace(&Subspace::span(2, &[v(&[1, 1])]).unwrap());
        assert!(d.is_subspace());
        assert!(halfplane_a_ge_b().contains(&v(&[1, -2])));
        assert!(!halfplane_a_ge_b().contains(&v(&[-1, 2])));
        assert!(PolyhedralCone::zero(3).is_trivial());
    }

    #[test]
    fn redundant_generators_are_dropped() {
        let c = PolyhedralCone::from_generators(
            2,
            &[v(&[1, 0]), v(&[0, 1]), v(&[1, 1]), v(&[2, 0])],
            &[],
        )
        .unwrap();
        assert_eq!(c, PolyhedralCone::nonneg_orthant(2));
    }

    #[test]
    fn implicit_equalities_are_detected() {
        // x >= 0, -x >= 0, y >= 0 : the ray e2
        let c = PolyhedralCone::from_constraints(2, &[v(&[1, 0]), v(&[-1, 0]), v(&[0, 1])], &[]).unwrap();
        assert_eq!(c, PolyhedralCone::ray(&v(&[0, 1])));
        assert_eq!(c.equations(), &Subspace::span(2, &[v(&[1, 0])]).unwrap());
        assert_eq!(c.inequalities(), &[v(&[0, 1])]);
    }

    #[test]
    fn polyhedron_sum() {
        // [1, 2] + [0, inf) = [1, inf) on the real line
        let seg = PolyhedralCone::from_generators(2, &[v(&[1, 1]), v(&[2, 1])], &[]).unwrap();
        let half = PolyhedralCone::from_generators(2, &[v(&[0, 1]), v(&[1, 0])], &[]).unwrap();
        let p = Polyhedron::from_homogenization(seg).unwrap();
        let q = Polyhedron::from_homogenization(half).unwrap();
        let s = p.minkowski_sum(&q).unwrap();
        let expect = Polyhedron::from_homogenization(
            PolyhedralCone::from_generators(2, &[v(&[1, 1]), v(&[1, 0])], &[]).unwrap(),
        )
        .unwrap();
        assert_eq!(s, expect);
        assert!(s.contains(&[int(5)]));
        assert!(!s.contains(&[frac(1, 2)]));
    }
}
