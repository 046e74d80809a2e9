//! Convex and linear processes, represented by their graphs.
//!
//! Graph vectors are stacked as `(x, y)` with `y ∈ H(x)`, and every block
//! matrix acting on graphs uses that order.

use crate::cone::{PolyhedralCone, Polyhedron};
use crate::error::{ensure_dim, Error, Result};
use crate::matrix::RationalMatrix;
use crate::rational::{self, Rational};
use crate::subspace::Subspace;

/// `[a I, b I; c I, d I]` acting on `Q^(2n)`.
pub fn scalar_blocks(n: usize, a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> RationalMatrix {
    RationalMatrix::block2(
        &RationalMatrix::scalar(n, a),
        &RationalMatrix::scalar(n, b),
        &RationalMatrix::scalar(n, c),
        &RationalMatrix::scalar(n, d),
    )
    .expect("square blocks")
}

/// `[I 0]`: graph vector to its `x` part.
pub fn x_projection(n: usize) -> RationalMatrix {
    RationalMatrix::hstack(&[&RationalMatrix::identity(n), &RationalMatrix::zeros(n, n)]).expect("blocks")
}

/// `[0 I]`: graph vector to its `y` part.
pub fn y_projection(n: usize) -> RationalMatrix {
    RationalMatrix::hstack(&[&RationalMatrix::zeros(n, n), &RationalMatrix::identity(n)]).expect("blocks")
}

fn stack(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    x.iter().chain(y).cloned().collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexProcess {
    n: usize,
    graph: PolyhedralCone,
}

/// Outcome of a weak invariance test; `witness` is a generator `x` of the
/// cone with `H(x) ∩ C = ∅` when the test fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakInvariance {
    pub holds: bool,
    pub witness: Option<Vec<Rational>>,
}

impl ConvexProcess {
    pub fn new(n: usize, graph: PolyhedralCone) -> Result<Self> {
        ensure_dim("process graph", 2 * n, graph.dim())?;
        Ok(Self { n, graph })
    }

    pub fn from_generators(n: usize, rays: &[Vec<Rational>], lineality: &[Vec<Rational>]) -> Result<Self> {
        Self::new(n, PolyhedralCone::from_generators(2 * n, rays, lineality)?)
    }

    pub fn identity(n: usize) -> Self {
        Self::linear_map(&RationalMatrix::identity(n)).expect("square identity")
    }

    /// The process `x ↦ {A x}`.
    pub fn linear_map(a: &RationalMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                op: "linear_map",
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        Ok(LinearProcess::linear_map(a)?.to_convex())
    }

    /// `gr(H) = [I 0; A -I](K × K)`, i.e. `H(x) = Ax - K` for `x ∈ K`.
    pub fn map_minus_cone(a: &RationalMatrix, k: &PolyhedralCone) -> Result<Self> {
        let n = a.rows();
        ensure_dim("map_minus_cone", n, a.cols())?;
        ensure_dim("map_minus_cone", n, k.dim())?;
        let i = RationalMatrix::identity(n);
        let m = RationalMatrix::block2(&i, &RationalMatrix::zeros(n, n), a, &-&i)?;
        Self::new(n, k.product(k).linear_image(&m)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn graph(&self) -> &PolyhedralCone {
        &self.graph
    }

    pub fn contains_pair(&self, x: &[Rational], y: &[Rational]) -> bool {
        x.len() == self.n && y.len() == self.n && self.graph.contains(&stack(x, y))
    }

    /// `gr(H⁻¹) = [0 I; I 0] gr(H)`.
    pub fn inverse(&self) -> Self {
        let z = rational::zero();
        let o = rational::one();
        let swap = scalar_blocks(self.n, &z, &o, &o, &z);
        Self::new(self.n, self.graph.linear_image(&swap).expect("graph dims")).expect("graph dims")
    }

    /// Negative dual: `gr(H⁻) = [0 I; -I 0] gr(H)⁻`.
    pub fn dual(&self) -> Self {
        let z = rational::zero();
        let o = rational::one();
        let m = scalar_blocks(self.n, &z, &o, &-o.clone(), &z);
        let g = self.graph.polar().linear_image(&m).expect("graph dims");
        Self::new(self.n, g).expect("graph dims")
    }

    /// `gr(H - λI) = [I 0; -λI I] gr(H)`.
    pub fn shift(&self, lambda: &Rational) -> Self {
        let z = rational::zero();
        let o = rational::one();
        let m = scalar_blocks(self.n, &o, &z, &-lambda.clone(), &o);
        Self::new(self.n, self.graph.linear_image(&m).expect("graph dims")).expect("graph dims")
    }

    /// Relational composition `x ↦ next(self(x))`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        ensure_dim("process composition", self.n, next.n)?;
        let n = self.n;
        let pick = |blocks: [usize; 2]| {
            let mut m = RationalMatrix::zeros(2 * n, 3 * n);
            for (slot, &b) in blocks.iter().enumerate() {
                for i in 0..n {
                    m.set(slot * n + i, b * n + i, rational::one());
                }
            }
            m
        };
        // variables (x, z, y)
        let first = self.graph.preimage(&pick([0, 1]))?;
        let second = next.graph.preimage(&pick([1, 2]))?;
        let joint = first.intersect(&second)?;
        Self::new(n, joint.linear_image(&pick([0, 2]))?)
    }

    /// `H^q`, with `H^0` the identity.
    pub fn power(&self, q: usize) -> Self {
        let mut acc = Self::identity(self.n);
        for _ in 0..q {
            acc = acc.then(self).expect("same state dimension");
        }
        acc
    }

    /// `H(S) = [0 I](gr(H) ∩ (S × Q^n))`.
    pub fn image_of_set(&self, s: &PolyhedralCone) -> Result<PolyhedralCone> {
        ensure_dim("image_of_set", self.n, s.dim())?;
        let slab = s.product(&PolyhedralCone::full(self.n));
        self.graph.intersect(&slab)?.linear_image(&y_projection(self.n))
    }

    /// `H(x)` as a polyhedron (possibly empty).
    pub fn value_at(&self, x: &[Rational]) -> Result<Polyhedron> {
        ensure_dim("value_at", self.n, x.len())?;
        let n = self.n;
        // (y, t) ↦ (t x, y)
        let mut m = RationalMatrix::zeros(2 * n, n + 1);
        for i in 0..n {
            m.set(i, n, x[i].clone());
            m.set(n + i, i, rational::one());
        }
        Polyhedron::from_homogenization(self.graph.preimage(&m)?)
    }

    pub fn dom(&self) -> PolyhedralCone {
        self.graph.linear_image(&x_projection(self.n)).expect("graph dims")
    }

    pub fn im(&self) -> PolyhedralCone {
        self.graph.linear_image(&y_projection(self.n)).expect("graph dims")
    }

    /// `{x : 0 ∈ H(x)}`.
    pub fn ker(&self) -> PolyhedralCone {
        let embed = RationalMatrix::vstack(&[&RationalMatrix::identity(self.n), &RationalMatrix::zeros(self.n, self.n)])
            .expect("blocks");
        self.graph.preimage(&embed).expect("graph dims")
    }

    /// `H(0)`.
    pub fn at_zero(&self) -> PolyhedralCone {
        let embed = RationalMatrix::vstack(&[&RationalMatrix::zeros(self.n, self.n), &RationalMatrix::identity(self.n)])
            .expect("blocks");
        self.graph.preimage(&embed).expect("graph dims")
    }

    /// `gr(H_K) = gr(H) ∩ (K × K)`.
    pub fn restrict(&self, k: &PolyhedralCone) -> Result<Self> {
        ensure_dim("restrict", self.n, k.dim())?;
        Self::new(self.n, self.graph.intersect(&k.product(k))?)
    }

    /// `gr(H_{K,W}) = (gr(H_K) + ({0} × W)) ∩ ((K ∩ W⊥) × (K ∩ W⊥))`.
    pub fn reduce(&self, k: &PolyhedralCone, w: &Subspace) -> Result<Self> {
        ensure_dim("reduce", self.n, k.dim())?;
        ensure_dim("reduce", self.n, w.ambient_dim())?;
        let hk = self.restrict(k)?;
        let lifted = PolyhedralCone::from_subspace(&Subspace::zero(self.n).product(w));
        let widened = hk.graph.minkowski_sum(&lifted)?;
        let slice = k.intersect(&PolyhedralCone::from_subspace(&w.orth_complement()))?;
        Self::new(self.n, widened.intersect(&slice.product(&slice))?)
    }

    /// `L₋(H)`, graph `lin(gr H)`.
    pub fn minimal_linear(&self) -> LinearProcess {
        LinearProcess::new(self.n, self.graph.lin_of()).expect("graph dims")
    }

    /// `L₊(H)`, graph `Lin(gr H)`.
    pub fn maximal_linear(&self) -> LinearProcess {
        LinearProcess::new(self.n, self.graph.lin_span()).expect("graph dims")
    }

    /// Whether `H(x) ∩ C ≠ ∅` for every `x ∈ C`, decided as `C ⊆ H⁻¹(C)`.
    pub fn is_weakly_invariant(&self, c: &PolyhedralCone) -> Result<WeakInvariance> {
        ensure_dim("is_weakly_invariant", self.n, c.dim())?;
        let pre = self.inverse().image_of_set(c)?;
        let witness = c.inclusion_witness(&pre);
        Ok(WeakInvariance {
            holds: witness.is_none(),
            witness,
        })
    }

    /// Whether the graph is a subspace of dimension exactly `n`.
    pub fn is_n_dim_linear(&self) -> bool {
        self.graph.is_subspace() && self.graph.lineality().dim() == self.n
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProcess {
    n: usize,
    graph: Subspace,
}

impl LinearProcess {
    pub fn new(n: usize, graph: Subspace) -> Result<Self> {
        ensure_dim("linear process graph", 2 * n, graph.ambient_dim())?;
        Ok(Self { n, graph })
    }

    pub fn linear_map(a: &RationalMatrix) -> Result<Self> {
        let n = a.rows();
        let cols: Vec<Vec<Rational>> = (0..a.cols())
            .map(|j| stack(&crate::subspace::unit(n, j), &a.column(j)))
            .collect();
        Self::new(n, Subspace::span(2 * n, &cols)?)
    }

    pub fn identity(n: usize) -> Self {
        Self::linear_map(&RationalMatrix::identity(n)).expect("square identity")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn graph(&self) -> &Subspace {
        &self.graph
    }

    pub fn to_convex(&self) -> ConvexProcess {
        ConvexProcess::new(self.n, PolyhedralCone::from_subspace(&self.graph)).expect("graph dims")
    }

    pub fn dom(&self) -> Subspace {
        self.graph.image_under(&x_projection(self.n)).expect("graph dims")
    }

    pub fn at_zero(&self) -> Subspace {
        let embed = RationalMatrix::vstack(&[&RationalMatrix::zeros(self.n, self.n), &RationalMatrix::identity(self.n)])
            .expect("blocks");
        self.graph.preimage_under(&embed).expect("graph dims")
    }

    /// `L_W`, graph `gr(L) ∩ (W × W)`.
    pub fn restrict_to(&self, w: &Subspace) -> Result<Self> {
        ensure_dim("restrict_to", self.n, w.ambient_dim())?;
        Self::new(self.n, self.graph.intersect(&w.product(w))?)
    }

    /// `(L - λI)(W) = {y - λx : (x, y) ∈ gr(L), x ∈ W}`.
    pub fn shifted_image(&self, w: &Subspace, lambda: &Rational) -> Result<Subspace> {
        ensure_dim("shifted_image", self.n, w.ambient_dim())?;
        let slab = w.product(&Subspace::full(self.n));
        let part = self.graph.intersect(&slab)?;
        let z = rational::zero();
        let o = rational::one();
        let m = scalar_blocks(self.n, &o, &z, &-lambda.clone(), &o);
        part.image_under(&m)?.image_under(&y_projection(self.n))
    }

    /// `W` weakly invariant: `L(w) ∩ W ≠ ∅` for all `w ∈ W`, i.e. `dom(L_W) = W`.
    pub fn is_weakly_invariant(&self, w: &Subspace) -> Result<bool> {
        Ok(self.restrict_to(w)?.dom() == *w)
    }
}
