//! Linear subspaces of Q^n in canonical form.
//!
//! The stored basis is the reduced column echelon form of any spanning set,
//! so two subspaces are equal exactly when their stored bases are.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{ensure_dim, Result};
use crate::matrix::RationalMatrix;
use crate::rational::{self, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    /// Columns form the canonical basis.
    basis: RationalMatrix,
    /// Row index of the leading one of each basis column.
    pivots: Vec<usize>,
}

impl Subspace {
    /// Span of the given vectors (dependent or zero vectors are fine).
    pub fn span(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        for v in vectors {
            ensure_dim("Subspace::span", ambient_dim, v.len())?;
        }
        let rows = RationalMatrix::from_rows(ambient_dim, vectors)?;
        let (r, pivots) = rows.rref();
        let kept: Vec<Vec<Rational>> = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        let basis = RationalMatrix::from_columns(ambient_dim, &kept)?;
        Ok(Self {
            ambient_dim,
            basis,
            pivots,
        })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self::span(ambient_dim, &[]).expect("zero subspace")
    }

    pub fn full(ambient_dim: usize) -> Self {
        let vecs: Vec<Vec<Rational>> = (0..ambient_dim).map(|i| unit(ambient_dim, i)).collect();
        Self::span(ambient_dim, &vecs).expect("full subspace")
    }

    /// `{x : Mx = 0}`.
    pub fn kernel(m: &RationalMatrix) -> Self {
        Self::span(m.cols(), &m.kernel_basis()).expect("kernel basis has matching length")
    }

    /// Column span of `m`.
    pub fn image(m: &RationalMatrix) -> Self {
        Self::span(m.rows(), &m.column_vecs()).expect("columns have matching length")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.column_vecs()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` with respect to the canonical basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let c: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let back = self.basis.mul_vec(&c);
        (back.as_slice() == v).then_some(c)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        v.len() == self.ambient_dim && self.coordinates(v).is_some()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.basis_vectors().iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        ensure_dim("subspace sum", self.ambient_dim, other.ambient_dim)?;
        let mut vecs = self.basis_vectors();
        vecs.extend(other.basis_vectors());
        Self::span(self.ambient_dim, &vecs)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        ensure_dim("subspace intersection", self.ambient_dim, other.ambient_dim)?;
        // U ∩ V = (U⊥ + V⊥)⊥
        self.orth_complement()
            .sum(&other.orth_complement())
            .map(|s| s.orth_complement())
    }

    pub fn orth_complement(&self) -> Self {
        let rows = self.basis.transpose();
        let k = rows.kernel_basis();
        Self::span(self.ambient_dim, &k).expect("complement basis has ambient length")
    }

    /// `M U`.
    pub fn image_under(&self, m: &RationalMatrix) -> Result<Self> {
        ensure_dim("subspace image", m.cols(), self.ambient_dim)?;
        Self::span(m.rows(), &(m * &self.basis).column_vecs())
    }

    /// `{x : Mx ∈ U}`.
    pub fn preimage_under(&self, m: &RationalMatrix) -> Result<Self> {
        ensure_dim("subspace preimage", m.rows(), self.ambient_dim)?;
        let normals = self.orth_complement().basis.transpose();
        Ok(Self::kernel(&(&normals * m)))
    }

    /// `U × V` as a subspace of Q^(n+m).
    pub fn product(&self, other: &Self) -> Self {
        let n = self.ambient_dim;
        let m = other.ambient_dim;
        let mut vecs = Vec::new();
        for v in self.basis_vectors() {
            let mut w = v;
            w.extend(std::iter::repeat_n(Rational::zero(), m));
            vecs.push(w);
        }
        for v in other.basis_vectors() {
            let mut w = vec![Rational::zero(); n];
            w.extend(v);
            vecs.push(w);
        }
        Self::span(n + m, &vecs).expect("product dimensions")
    }

    /// Orthogonal projector onto this subspace, as an `n x n` matrix.
    pub fn projector(&self) -> RationalMatrix {
        if self.is_zero() {
            return RationalMatrix::zeros(self.ambient_dim, self.ambient_dim);
        }
        let b = &self.basis;
        let bt = b.transpose();
        let gram_inv = (&bt * b).inverse().expect("basis columns are independent");
        &(b * &gram_inv) * &bt
    }

    /// Extends the canonical basis by standard unit vectors to a basis of the
    /// whole space; the first `dim()` columns are the subspace basis.
    pub fn extend_to_full_basis(&self) -> RationalMatrix {
        let mut cols = self.basis_vectors();
        let mut current = self.clone();
        for i in 0..self.ambient_dim {
            let e = unit(self.ambient_dim, i);
            if !current.contains(&e) {
                cols.push(e);
                current = Self::span(self.ambient_dim, &cols).expect("same ambient dimension");
            }
        }
        RationalMatrix::from_columns(self.ambient_dim, &cols).expect("same ambient dimension")
    }
}

pub fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

/// `{x : Mx = 0}` in canonical form.
pub fn kernel(m: &RationalMatrix) -> Subspace {
    Subspace::kernel(m)
}

/// Column span of `m` in canonical form.
pub fn image(m: &RationalMatrix) -> Subspace {
    Subspace::image(m)
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vecs: Vec<String> = self
            .basis_vectors()
            .iter()
            .map(|v| format!("({})", rational::format_vec(v).join(",")))
            .collect();
        write!(f, "span{{{}}} in Q^{}", vecs.join(", "), self.ambient_dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel(&RationalMatrix::identity(2)).is_zero());
        let k = kernel(&RationalMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(k, Subspace::span(2, &[v(&[1, -1])]).unwrap());
        // [[4,1],[2,3]] - 5I = [[-1,1],[2,-2]]
        let k = kernel(&RationalMatrix::from_i64(&[&[-1, 1], &[2, -2]]));
        assert_eq!(k, Subspace::span(2, &[v(&[1, 1])]).unwrap());
    }

    #[test]
    fn image_examples() {
        assert!(image(&RationalMatrix::zeros(2, 3)).is_zero());
        assert!(image(&RationalMatrix::identity(3)).is_full());
        let im = image(&RationalMatrix::from_i64(&[&[1], &[1]]));
        assert_eq!(im, Subspace::span(2, &[v(&[2, 2])]).unwrap());
    }

    #[test]
    fn sum_intersect_complement() {
        let e1 = Subspace::span(2, &[v(&[1, 0])]).unwrap();
        let e2 = Subspace::span(2, &[v(&[0, 1])]).unwrap();
        assert!(e1.sum(&e2).unwrap().is_full());
        assert!(e1.intersect(&e2).unwrap().is_zero());
        let d = Subspace::span(2, &[v(&[1, 1])]).unwrap();
        assert_eq!(d.orth_complement(), Subspace::span(2, &[v(&[1, -1])]).unwrap());
        assert!(e1.sum(&Subspace::zero(3)).is_err());
    }

    #[test]
    fn canonical_equality() {
        let a = Subspace::span(3, &[v(&[1, 2, 3]), v(&[0, 1, 1])]).unwrap();
        let b = Subspace::span(3, &[v(&[1, 3, 4]), v(&[2, 4, 6]), v(&[0, 0, 0])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn preimage_and_projector() {
        let d = Subspace::span(2, &[v(&[1, 1])]).unwrap();
        let m = RationalMatrix::from_i64(&[&[1, 0], &[0, 0]]);
        // {x : (x1, 0) ∈ span(1,1)} = {x1 = 0}
        assert_eq!(d.preimage_under(&m).unwrap(), Subspace::span(2, &[v(&[0, 1])]).unwrap());
        let p = d.projector();
        assert_eq!(p.mul_vec(&v(&[2, 0])), v(&[1, 1]));
    }

    #[test]
    fn basis_extension() {
        let d = Subspace::span(3, &[v(&[1, 1, 0])]).unwrap();
        let full = d.extend_to_full_basis();
        assert_eq!(full.cols(), 3);
        assert_eq!(full.rank(), 3);
        assert_eq!(full.column(0), d.basis_vectors()[0]);
    }
}
