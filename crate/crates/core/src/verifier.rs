//! Hypothesis checking and application of the eigenvector theorems for
//! cones that may contain lines.

use num_traits::Signed;

use crate::cone::PolyhedralCone;
use crate::control::{self, LinearSystem};
use crate::error::{ensure_dim, Error, Result};
use crate::process::{ConvexProcess, LinearProcess};
use crate::rational::{self, Rational};
use crate::spectrum;
use crate::subspace::Subspace;

/// Which linear process hypotheses (b) and (c) are checked against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LinearReference {
    /// `L̂`, the minimal linear process restricted to `lin(K) × lin(K)`.
    #[default]
    Hat,
    /// `L₋(H)` itself.
    Minimal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conclusion {
    KEqualsLinK,
    EigenvectorExistsOutsideLinK,
    AssumptionsNotMet,
    UnresolvedOnGrid,
}

impl Conclusion {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::KEqualsLinK => "K_EQUALS_LINK",
            Self::EigenvectorExistsOutsideLinK => "EIGENVECTOR_EXISTS_OUTSIDE_LINK",
            Self::AssumptionsNotMet => "ASSUMPTIONS_NOT_MET",
            Self::UnresolvedOnGrid => "UNRESOLVED_ON_GRID",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Subspace to test; defaults to `W* = V_g` of a realization of `L̂`.
    pub w: Option<Subspace>,
    pub reference: LinearReference,
    /// λ-grid for the certificate search; defaults to `j/8` up to the bound.
    pub grid: Option<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub k_weakly_invariant: bool,
    /// A point of `K` whose image misses `K`, when invariance fails.
    pub k_invariance_witness: Option<Vec<Rational>>,
    pub h0_cap_k_is_subspace: bool,
    pub lin_k: Subspace,
    pub w_star: Option<Subspace>,
    /// The subspace the hypotheses were evaluated on (`None` when `W*` was
    /// requested but could not be computed).
    pub w: Option<Subspace>,
    pub containment_h0k_in_w: bool,
    pub w_in_k: bool,
    pub hypothesis_a: bool,
    pub hypothesis_b: bool,
    pub hypothesis_c: bool,
    /// Rational values `λ >= 0` at which (c) fails, when (c) fails at a rational.
    pub hypothesis_c_failures: Vec<Rational>,
    /// Set when `W*` needed a root split that is not expressible over Q.
    pub split_not_rational: Option<String>,
    pub reference: LinearReference,
    pub conclusion: Conclusion,
    pub certificate: Option<(Rational, Vec<Rational>)>,
}

impl VerificationReport {
    pub fn assumptions_hold(&self) -> bool {
        self.k_weakly_invariant
            && self.h0_cap_k_is_subspace
            && self.hypothesis_a
            && self.hypothesis_b
            && self.hypothesis_c
            && self.split_not_rational.is_none()
    }

    /// Exit status for command-line use: 0 when the assumptions hold, 3 when
    /// `W*` needed an irrational split, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        if self.split_not_rational.is_some() {
            3
        } else if self.assumptions_hold() {
            0
        } else {
            1
        }
    }
}

/// `gr(L̂) = gr(L₋(H)) ∩ (lin K × lin K)`.
pub fn hat_linear_process(h: &ConvexProcess, k: &PolyhedralCone) -> Result<LinearProcess> {
    ensure_dim("hat_linear_process", h.n(), k.dim())?;
    h.minimal_linear().restrict_to(&k.lin_of())
}

/// `W* = V_g` of a realization of `L̂`.
pub fn compute_w_star(h: &ConvexProcess, k: &PolyhedralCone) -> Result<Subspace> {
    let sys = control::realize(&hat_linear_process(h, k)?)?;
    Ok(control::stabilizable_weakly_unobservable(&sys)?.vg)
}

fn reference_system(h: &ConvexProcess, k: &PolyhedralCone, reference: LinearReference) -> Result<LinearSystem> {
    match reference {
        LinearReference::Hat => control::realize(&hat_linear_process(h, k)?),
        LinearReference::Minimal => control::realize(&h.minimal_linear()),
    }
}

/// Evaluates every hypothesis exactly. The conclusion is left at
/// `ASSUMPTIONS_NOT_MET` or `UNRESOLVED_ON_GRID`; see [`theorem_conclusions`].
pub fn verify_assumptions(h: &ConvexProcess, k: &PolyhedralCone, opts: &VerifyOptions) -> Result<VerificationReport> {
    ensure_dim("verify_assumptions", h.n(), k.dim())?;
    let inv = h.is_weakly_invariant(k)?;
    let h0k = h.at_zero().intersect(k)?;
    let lin_k = k.lin_of();

    let (w_star, split) = match compute_w_star(h, k) {
        Ok(w) => (Some(w), None),
        Err(Error::SplitNotRational(msg)) => (None, Some(msg)),
        Err(e) => return Err(e),
    };
    let w = match &opts.w {
        Some(w) => {
            ensure_dim("verify_assumptions W", h.n(), w.ambient_dim())?;
            Some(w.clone())
        }
        None => w_star.clone(),
    };
    // an explicit W does not depend on W*, so a failed split only matters by default
    let split = if opts.w.is_some() { None } else { split };

    let mut report = VerificationReport {
        k_weakly_invariant: inv.holds,
        k_invariance_witness: inv.witness,
        h0_cap_k_is_subspace: h0k.is_subspace(),
        lin_k,
        w_star,
        w: w.clone(),
        containment_h0k_in_w: false,
        w_in_k: false,
        hypothesis_a: false,
        hypothesis_b: false,
        hypothesis_c: false,
        hypothesis_c_failures: Vec::new(),
        split_not_rational: split,
        reference: opts.reference,
        conclusion: Conclusion::AssumptionsNotMet,
        certificate: None,
    };
    if let Some(w) = w {
        let wc = PolyhedralCone::from_subspace(&w);
        report.containment_h0k_in_w = h0k.is_subset_of(&wc);
        report.w_in_k = wc.is_subset_of(k);
        report.hypothesis_a = report.containment_h0k_in_w && report.w_in_k;
        let sys = reference_system(h, k, opts.reference)?;
        report.hypothesis_b = control::check_weak_inv_condition(&sys, &w)?;
        report.hypothesis_c = control::check_stab_condition(&sys, &w)?;
        if !report.hypothesis_c {
            report.hypothesis_c_failures = control::stab_condition_failures(&sys, &w)?.unwrap_or_default();
        }
    }
    if report.assumptions_hold() {
        report.conclusion = Conclusion::UnresolvedOnGrid;
    }
    Ok(report)
}

/// Whether the hypotheses of the `W = lin(K)` theorem hold.
fn lin_k_hypotheses(h: &ConvexProcess, k: &PolyhedralCone, report: &VerificationReport) -> Result<bool> {
    if !(report.k_weakly_invariant && report.h0_cap_k_is_subspace) {
        return Ok(false);
    }
    if report.w.as_ref() == Some(&report.lin_k) && report.split_not_rational.is_none() {
        return Ok(report.hypothesis_b && report.hypothesis_c);
    }
    let sys = reference_system(h, k, report.reference)?;
    Ok(control::check_weak_inv_condition(&sys, &report.lin_k)? && control::check_stab_condition(&sys, &report.lin_k)?)
}

/// Default certificate grid: `j/8` for `j = 8·B, ..., 0`, where `B` is the
/// ceiling of the spectral bound of `H_{K,W}` on `K ∩ W⊥` (or 8 without one).
/// Searched from the top down.
pub fn default_grid(reduced: &ConvexProcess, slice: &PolyhedralCone) -> Result<Vec<Rational>> {
    let top = match spectrum::eigenvalue_upper_bound(reduced, slice)? {
        Some(b) => rational::ceil_int(&b),
        None => 8.into(),
    };
    let steps: i64 = (top * 8i64).try_into().map_err(|_| Error::Precondition("spectral bound too large for a grid".into()))?;
    Ok((0..=steps).rev().map(|j| rational::frac(j, 8)).collect())
}

/// Lifts an eigenvector `η ∈ K ∩ W⊥` of `H_{K,W}` to an eigenvector
/// `ξ = η + ζ ∈ K∖W` of `H`, with `ζ ∈ W` solving `η' ∈ (L_W − λI)ζ` for the
/// `W`-defect `η' = λη − y` of some `y ∈ H_K(η)`.
pub fn lift_certificate(
    h: &ConvexProcess,
    k: &PolyhedralCone,
    w: &Subspace,
    lambda: &Rational,
    eta: &[Rational],
) -> Result<Vec<Rational>> {
    let n = h.n();
    let hk = h.restrict(k)?;
    let value = hk.value_at(eta)?;
    // {(y, t) in hom(H_K(η)) : y − tλη ∈ W}
    let normals = w.orth_complement().basis_vectors();
    let eqs: Vec<Vec<Rational>> = normals
        .iter()
        .map(|a| {
            let mut row = a.clone();
            row.push(-(lambda * rational::dot(a, eta)));
            row
        })
        .collect();
    let slab = PolyhedralCone::from_constraints(n + 1, &[], &eqs)?;
    let feasible = value.homogenization().intersect(&slab)?;
    let ray = feasible
        .rays()
        .iter()
        .find(|r| r[n].is_positive())
        .ok_or_else(|| Error::Infeasible("no output of H_K(η) within W of λη".into()))?;
    let y: Vec<Rational> = ray[..n].iter().map(|v| v / &ray[n]).collect();
    let defect: Vec<Rational> = eta.iter().zip(&y).map(|(e, yi)| lambda * e - yi).collect();

    let lw = h.minimal_linear().restrict_to(w)?;
    let g = lw.graph().basis();
    let x = g.select_rows(&(0..n).collect::<Vec<_>>());
    let yy = g.select_rows(&(n..2 * n).collect::<Vec<_>>());
    let pencil = &yy - &x.scale(lambda);
    let c = pencil
        .solve(&defect)
        .ok_or_else(|| Error::Infeasible("W-defect is outside (L_W − λI)W".into()))?;
    let zeta = x.mul_vec(&c);
    Ok(eta.iter().zip(&zeta).map(|(a, b)| a + b).collect())
}

/// Runs [`verify_assumptions`] and then applies the `W = lin(K)` theorem:
/// with its hypotheses met, either `K = lin(K)` or a certificate
/// `(λ >= 0, ξ ∈ K∖lin(K))` is searched for on the grid.
pub fn theorem_conclusions(h: &ConvexProcess, k: &PolyhedralCone, opts: &VerifyOptions) -> Result<VerificationReport> {
    let mut report = verify_assumptions(h, k, opts)?;
    if !lin_k_hypotheses(h, k, &report)? {
        report.conclusion = Conclusion::AssumptionsNotMet;
        return Ok(report);
    }
    if k.is_subspace() {
        report.conclusion = Conclusion::KEqualsLinK;
        return Ok(report);
    }
    let w = report.lin_k.clone();
    let reduced = h.reduce(k, &w)?;
    let slice = k.intersect(&PolyhedralCone::from_subspace(&w.orth_complement()))?;
    let grid = match &opts.grid {
        Some(g) => g.clone(),
        None => default_grid(&reduced, &slice)?,
    };
    report.conclusion = Conclusion::UnresolvedOnGrid;
    for lambda in grid.iter().filter(|l| !l.is_negative()) {
        let Some(eta) = spectrum::is_eigenvalue_in(&reduced, &slice, lambda)? else {
            continue;
        };
        let xi = lift_certificate(h, k, &w, lambda, &eta)?;
        if !spectrum::is_certificate(h, k, lambda, &xi) || w.contains(&xi) {
            return Err(Error::Internal(format!("lifted certificate failed re-verification at {lambda}")));
        }
        report.certificate = Some((lambda.clone(), xi));
        report.conclusion = Conclusion::EigenvectorExistsOutsideLinK;
        break;
    }
    Ok(report)
}

/// `λ ∈ σ(H, K∖W)`: an eigenvector in `K` outside the subspace `W`.
pub fn eigenvalue_outside(h: &ConvexProcess, k: &PolyhedralCone, w: &Subspace, lambda: &Rational) -> Result<Option<Vec<Rational>>> {
    let common = spectrum::eigencone(h, lambda).intersect(k)?;
    Ok(common.inclusion_witness(&PolyhedralCone::from_subspace(w)))
}
