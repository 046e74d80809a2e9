//! Linear systems `x⁺ = Ax + Bu, y = Cx + Du` and the subspaces of
//! geometric control used to certify the hypotheses on a linear process.

use num_traits::Zero;

use crate::error::{ensure_dim, Error, Result};
use crate::matrix::RationalMatrix;
use crate::poly::{self, Polynomial};
use crate::process::LinearProcess;
use crate::rational::{self, Rational};
use crate::subspace::Subspace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub a: RationalMatrix,
    pub b: RationalMatrix,
    pub c: RationalMatrix,
    pub d: RationalMatrix,
}

impl LinearSystem {
    pub fn new(a: RationalMatrix, b: RationalMatrix, c: RationalMatrix, d: RationalMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                op: "LinearSystem",
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        ensure_dim("LinearSystem B rows", n, b.rows())?;
        ensure_dim("LinearSystem C cols", n, c.cols())?;
        ensure_dim("LinearSystem D rows", c.rows(), d.rows())?;
        ensure_dim("LinearSystem D cols", b.cols(), d.cols())?;
        Ok(Self { a, b, c, d })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn m(&self) -> usize {
        self.b.cols()
    }

    pub fn p(&self) -> usize {
        self.c.rows()
    }

    /// `Σᵀ = Σ(Aᵀ, Cᵀ, Bᵀ, Dᵀ)`.
    pub fn transpose(&self) -> Self {
        Self {
            a: self.a.transpose(),
            b: self.c.transpose(),
            c: self.b.transpose(),
            d: self.d.transpose(),
        }
    }

    /// `im [B; D]` in `Q^(n+p)`.
    fn input_image(&self) -> Subspace {
        Subspace::image(&RationalMatrix::vstack(&[&self.b, &self.d]).expect("system dims"))
    }

    /// `[A; C]`.
    fn state_map(&self) -> RationalMatrix {
        RationalMatrix::vstack(&[&self.a, &self.c]).expect("system dims")
    }
}

/// `gr(L_Σ) = [I 0; A B] ker[C D]`, checked against `[A -I; C 0]⁻¹ im[B; D]`.
pub fn process_of_system(sys: &LinearSystem) -> Result<LinearProcess> {
    let n = sys.n();
    let m = sys.m();
    let p = sys.p();
    let cd = RationalMatrix::hstack(&[&sys.c, &sys.d])?;
    let top = RationalMatrix::hstack(&[&RationalMatrix::identity(n), &RationalMatrix::zeros(n, m)])?;
    let bottom = RationalMatrix::hstack(&[&sys.a, &sys.b])?;
    let lift = RationalMatrix::vstack(&[&top, &bottom])?;
    let image_form = Subspace::kernel(&cd).image_under(&lift)?;

    let pre = RationalMatrix::block2(&sys.a, &-&RationalMatrix::identity(n), &sys.c, &RationalMatrix::zeros(p, n))?;
    let preimage_form = sys.input_image().preimage_under(&pre)?;
    if image_form != preimage_form {
        return Err(Error::Internal(
            "the image and preimage forms of the system graph differ".into(),
        ));
    }
    LinearProcess::new(n, image_form)
}

/// A system realizing `L`: `A = 0`, `C = -I`, and `[D; B]` the canonical
/// basis of `gr(L)`, so that `gr(L_Σ) = {(Du, Bu)} = gr(L)`.
pub fn realize(l: &LinearProcess) -> Result<LinearSystem> {
    let n = l.n();
    let basis = l.graph().basis();
    let m = basis.cols();
    let d = basis.select_rows(&(0..n).collect::<Vec<_>>());
    let b = basis.select_rows(&(n..2 * n).collect::<Vec<_>>());
    let sys = LinearSystem::new(
        RationalMatrix::zeros(n, n),
        if m == 0 { RationalMatrix::zeros(n, 0) } else { b },
        -&RationalMatrix::identity(n),
        if m == 0 { RationalMatrix::zeros(n, 0) } else { d },
    )?;
    if process_of_system(&sys)? != *l {
        return Err(Error::Internal("realization does not reproduce the process".into()));
    }
    Ok(sys)
}

/// `[A; C]⁻¹(S × {0} + im[B; D])`.
fn v_step(sys: &LinearSystem, s: &Subspace) -> Result<Subspace> {
    let target = s.product(&Subspace::zero(sys.p())).sum(&sys.input_image())?;
    target.preimage_under(&sys.state_map())
}

/// The chain `V_0 = Q^n ⊋ V_1 ⊋ ... ⊋ V_r` with `V_{r+1} = V_r`.
pub fn weakly_unobservable_chain(sys: &LinearSystem) -> Result<Vec<Subspace>> {
    let mut chain = vec![Subspace::full(sys.n())];
    loop {
        let next = v_step(sys, chain.last().expect("nonempty chain"))?;
        if next == *chain.last().expect("nonempty chain") {
            return Ok(chain);
        }
        if !next.is_subset_of(chain.last().expect("nonempty chain")) {
            return Err(Error::Internal("subspace recursion is not decreasing".into()));
        }
        chain.push(next);
    }
}

pub fn weakly_unobservable(sys: &LinearSystem) -> Result<Subspace> {
    Ok(weakly_unobservable_chain(sys)?.pop().expect("nonempty chain"))
}

/// A friend of `V`: `(A + BF)V ⊆ V` and `V ⊆ ker(C + DF)`.
///
/// For each basis vector `x_i` of `V` solve `A x_i + B u_i = v_i`,
/// `C x_i + D u_i = 0` with `v_i ∈ V`; then `F x_i = u_i`, and `F` vanishes on
/// the unit vectors completing the basis.
pub fn friend(sys: &LinearSystem, v: &Subspace) -> Result<RationalMatrix> {
    let n = sys.n();
    let m = sys.m();
    let p = sys.p();
    ensure_dim("friend", n, v.ambient_dim())?;
    let q = v.dim();
    let vb = v.basis();
    // [V −B; 0 D] (c; u) = (Ax; −Cx)
    let lhs = RationalMatrix::block2(vb, &-&sys.b, &RationalMatrix::zeros(p, q), &sys.d)?;
    let full = v.extend_to_full_basis();
    let mut u = RationalMatrix::zeros(m, n);
    for i in 0..q {
        let x = full.column(i);
        let mut rhs = sys.a.mul_vec(&x);
        rhs.extend(sys.c.mul_vec(&x).into_iter().map(|c| -c));
        let sol = lhs.solve(&rhs).ok_or_else(|| {
            Error::Infeasible(format!("basis vector {i} of V admits no (v, u) pair; V is not output-nulling"))
        })?;
        for r in 0..m {
            u.set(r, i, sol[q + r].clone());
        }
    }
    let f = &u * &full.inverse().expect("extended basis is invertible");
    Ok(f)
}

/// Whether `F` satisfies both friend properties for `V`.
pub fn is_friend(sys: &LinearSystem, v: &Subspace, f: &RationalMatrix) -> Result<bool> {
    let closed = &sys.a + &(&sys.b * f);
    let out = &sys.c + &(&sys.d * f);
    Ok(v.image_under(&closed)?.is_subset_of(v) && v.image_under(&out)?.is_zero())
}

/// `T = V(Σᵀ)⊥`.
pub fn strongly_reachable(sys: &LinearSystem) -> Result<Subspace> {
    Ok(weakly_unobservable(&sys.transpose())?.orth_complement())
}

/// Matrix of the restriction of `M` to the invariant subspace spanned by the
/// independent columns of `basis`.
fn restricted_matrix(m: &RationalMatrix, basis: &RationalMatrix) -> Result<RationalMatrix> {
    let k = basis.cols();
    let mut out = RationalMatrix::zeros(k, k);
    for j in 0..k {
        let image = m.mul_vec(&basis.column(j));
        let c = basis
            .solve(&image)
            .ok_or_else(|| Error::Internal("subspace is not invariant".into()))?;
        for i in 0..k {
            out.set(i, j, c[i].clone());
        }
    }
    Ok(out)
}

/// Ingredients and result of the `V_g` computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VgComputation {
    pub v: Subspace,
    pub friend: RationalMatrix,
    pub t: Subspace,
    pub vg: Subspace,
}

/// `V_g = (ker χ_g(A+BF) ∩ V) + (T ∩ V)`.
///
/// `T ∩ V` is `(A+BF)`-invariant and the good part is computed for the map
/// `A+BF` induces on `V / (T ∩ V)`, whose spectrum does not depend on the
/// friend. Its lift plus `T ∩ V` equals the displayed sum.
pub fn stabilizable_weakly_unobservable(sys: &LinearSystem) -> Result<VgComputation> {
    let v = weakly_unobservable(sys)?;
    let f = friend(sys, &v)?;
    let t = strongly_reachable(sys)?;
    let r = t.intersect(&v)?;
    let closed = &sys.a + &(&sys.b * &f);

    // basis of V: T ∩ V first, then completing vectors from V's own basis
    let mut cols = r.basis_vectors();
    let mut span = r.clone();
    for x in v.basis_vectors() {
        if !span.contains(&x) {
            cols.push(x);
            span = Subspace::span(sys.n(), &cols)?;
        }
    }
    let basis = RationalMatrix::from_columns(sys.n(), &cols)?;
    let full = restricted_matrix(&closed, &basis).map_err(|_| {
        Error::Internal("V is not invariant under A + BF".into())
    })?;
    let k = r.dim();
    let q = v.dim();
    for i in k..q {
        for j in 0..k {
            if !full.get(i, j).is_zero() {
                return Err(Error::Internal("T ∩ V is not invariant under A + BF".into()));
            }
        }
    }
    let tail: Vec<usize> = (k..q).collect();
    let quotient = full.select_rows(&tail).select_cols(&tail);
    let good = poly::stable_subspace(&quotient).map_err(|e| match e {
        Error::SplitNotRational(msg) => Error::SplitNotRational(format!("A + BF on V/(T ∩ V): {msg}")),
        other => other,
    })?;
    let lift = basis.select_cols(&tail);
    let lifted = good.image_under(&lift)?;
    let vg = lifted.sum(&r)?;
    Ok(VgComputation { v, friend: f, t, vg })
}

/// The displayed formula taken literally, with `χ_g` of the full `A + BF`.
/// Can raise `SplitNotRational` for eigenvalues the friend happens to place.
pub fn vg_literal(sys: &LinearSystem, v: &Subspace, f: &RationalMatrix, t: &Subspace) -> Result<Subspace> {
    let closed = &sys.a + &(&sys.b * f);
    poly::stable_subspace(&closed)?.intersect(v)?.sum(&t.intersect(v)?)
}

/// `[A; C]W ⊆ (W × {0}) + im[B; D]`.
pub fn check_weak_inv_condition(sys: &LinearSystem, w: &Subspace) -> Result<bool> {
    ensure_dim("check_weak_inv_condition", sys.n(), w.ambient_dim())?;
    Ok(w.is_subset_of(&v_step(sys, w)?))
}

/// `W × {0} ⊆ [A - λI; C]W + im[B; D]` at a single `λ`.
pub fn stab_condition_at(sys: &LinearSystem, w: &Subspace, lambda: &Rational) -> Result<bool> {
    ensure_dim("stab_condition_at", sys.n(), w.ambient_dim())?;
    let shifted = &sys.a - &RationalMatrix::scalar(sys.n(), lambda);
    let map = RationalMatrix::vstack(&[&shifted, &sys.c])?;
    let reach = w.image_under(&map)?.sum(&sys.input_image())?;
    Ok(w.product(&Subspace::zero(sys.p())).is_subset_of(&reach))
}

/// Rank pencil of `(L_W - λI)` in `W`-coordinates, `P(λ) = Y - λX`, where the
/// columns of `[X; Y]` span `gr(L) ∩ (W × W)`.
fn w_pencil(l: &LinearProcess, w: &Subspace) -> Result<(RationalMatrix, RationalMatrix)> {
    let n = l.n();
    let g = l.restrict_to(w)?.graph().basis().clone();
    let piv = w.pivots().to_vec();
    let x = g.select_rows(&piv);
    let y = g.select_rows(&piv.iter().map(|&i| n + i).collect::<Vec<_>>());
    Ok((x, y))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Monic gcd of all maximal minors of `Y - λX` (`k` rows); `None` when the
/// pencil has generic rank below `k`.
fn minor_gcd(x: &RationalMatrix, y: &RationalMatrix) -> Option<Polynomial> {
    let k = x.rows();
    let d = x.cols();
    if k == 0 {
        return Some(Polynomial::one());
    }
    let points: Vec<Rational> = (0..=k).map(|i| rational::int(i as i64)).collect();
    let pencils: Vec<RationalMatrix> = points.iter().map(|l| y - &x.scale(l)).collect();
    let mut g = Polynomial::zero();
    for cols in combinations(d, k) {
        let samples: Vec<(Rational, Rational)> = points
            .iter()
            .zip(&pencils)
            .map(|(l, p)| (l.clone(), p.select_cols(&cols).determinant().expect("square minor")))
            .collect();
        let minor = Polynomial::interpolate(&samples);
        g = if g.is_zero() { minor } else { g.gcd(&minor) };
        if !g.is_zero() && g.degree() == 0 {
            break;
        }
    }
    (!g.is_zero()).then(|| g.monic())
}

/// `W ⊆ (L_Σ - λI)W` for every `λ >= 0`.
///
/// The condition is equivalent to `Y - λX` having full row rank `dim W` for
/// all `λ >= 0`, where `[X; Y]` spans `gr(L_Σ) ∩ (W × W)`. The rank drops exactly
/// at the real roots of the gcd of the maximal minors, which are counted on
/// `[0, inf)` with a Sturm sequence.
pub fn check_stab_condition(sys: &LinearSystem, w: &Subspace) -> Result<bool> {
    ensure_dim("check_stab_condition", sys.n(), w.ambient_dim())?;
    let l = process_of_system(sys)?;
    let (x, y) = w_pencil(&l, w)?;
    Ok(match minor_gcd(&x, &y) {
        None => false,
        Some(g) => g.count_nonneg_roots() == 0,
    })
}

/// Values `λ >= 0` where the rank of the pencil drops, when they are rational;
/// used for reporting failures of the all-`λ` condition.
pub fn stab_condition_failures(sys: &LinearSystem, w: &Subspace) -> Result<Option<Vec<Rational>>> {
    let l = process_of_system(sys)?;
    let (x, y) = w_pencil(&l, w)?;
    Ok(minor_gcd(&x, &y).map(|g| {
        let mut roots: Vec<Rational> = g.rational_roots().into_iter().filter(|r| rational::sign(r) >= 0).collect();
        roots.sort();
        roots
    }))
}
