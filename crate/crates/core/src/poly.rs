//! Univariate polynomials over Q, characteristic polynomials and the
//! classification of roots relative to the closed half-line `[0, inf)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::rational::{self, Rational};
use crate::subspace::Subspace;

/// Coefficients in ascending degree; the leading coefficient is nonzero
/// unless the polynomial is zero (empty coefficient list).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rational::int(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_matrix(&self, a: &RationalMatrix) -> Result<RationalMatrix> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                op: "polynomial evaluation",
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        let mut acc = RationalMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * a) + &RationalMatrix::scalar(n, c);
        }
        Ok(acc)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let lc = divisor.leading();
        if self.is_zero() || self.degree() < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rational::int(i as i64))
                .collect(),
        )
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Squarefree factorization (Yun): pairs `(s_i, i)` with `p = c * prod s_i^i`,
    /// each `s_i` monic, squarefree, pairwise coprime, and nonconstant.
    pub fn squarefree_decomposition(&self) -> Vec<(Polynomial, usize)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_rem(&a0).0;
        let mut c = fp.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Integer polynomial with coprime coefficients and positive leading
    /// coefficient, proportional to `self`.
    fn primitive_integer(&self) -> Vec<BigInt> {
        let mut p = rational::primitive(&self.coeffs);
        if p.last().is_some_and(|c| c.is_negative()) {
            p.iter_mut().for_each(|c| *c = -c.clone());
        }
        p.into_iter().map(|c| c.to_integer()).collect()
    }

    /// Rational roots, each listed once. Candidates whose numerator or
    /// denominator bound is too large to enumerate are skipped.
    pub fn rational_roots(&self) -> Vec<Rational> {
        self.rational_roots_complete().unwrap_or_else(|| {
            if self.coeffs.first().is_some_and(Zero::is_zero) {
                vec![Rational::zero()]
            } else {
                Vec::new()
            }
        })
    }

    /// All rational roots, or `None` when the candidate set is too large to enumerate.
    fn rational_roots_complete(&self) -> Option<Vec<Rational>> {
        let mut roots = Vec::new();
        if self.is_zero() || self.degree() == 0 {
            return Some(roots);
        }
        let mut p = self.clone();
        if p.coeffs[0].is_zero() {
            roots.push(Rational::zero());
            let shift = p.coeffs.iter().take_while(|c| c.is_zero()).count();
            p = Self::new(p.coeffs[shift..].to_vec());
        }
        if p.degree() == 0 {
            return Some(roots);
        }
        let ints = p.primitive_integer();
        let a0 = divisors(&ints[0])?;
        let an = divisors(ints.last().unwrap())?;
        for num in &a0 {
            for den in &an {
                for s in [1i64, -1] {
                    let cand = Rational::new(num * s, den.clone());
                    if !roots.contains(&cand) && p.eval(&cand).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        Some(roots)
    }

    /// Sturm sequence of a squarefree polynomial.
    fn sturm_sequence(&self) -> Vec<Polynomial> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            seq.push(r.scale(&-Rational::one()));
        }
        seq.pop();
        seq
    }

    /// Number of distinct real roots in `[0, inf)`.
    pub fn count_nonneg_roots(&self) -> usize {
        if self.degree() == 0 {
            return 0;
        }
        let mut sf = self.squarefree_part();
        let mut count = 0;
        if sf.coeffs[0].is_zero() {
            count += 1;
            sf = sf.div_rem(&Self::from_i64(&[0, 1])).0;
        }
        if sf.degree() == 0 {
            return count;
        }
        let seq = sf.sturm_sequence();
        let at_zero = variations(seq.iter().map(|p| rational::sign(&p.coeffs[0])));
        let at_inf = variations(seq.iter().map(|p| rational::sign(&p.leading())));
        count + at_zero - at_inf
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        if self.degree() == 0 {
            return 0;
        }
        let seq = self.squarefree_part().sturm_sequence();
        let at_neg_inf = variations(seq.iter().map(|p| {
            let s = rational::sign(&p.leading());
            if p.degree() % 2 == 1 {
                -s
            } else {
                s
            }
        }));
        let at_inf = variations(seq.iter().map(|p| rational::sign(&p.leading())));
        at_neg_inf - at_inf
    }

    pub fn squarefree_part(&self) -> Self {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Interpolating polynomial through `(x_i, y_i)` with distinct `x_i`.
    pub fn interpolate(points: &[(Rational, Rational)]) -> Self {
        let mut acc = Self::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = Self::one();
            let mut denom = Rational::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&Self::linear_root(xj));
                    denom *= xi - xj;
                }
            }
            acc = acc.add(&basis.scale(&(yi / denom)));
        }
        acc
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Above this magnitude, divisor enumeration by trial division is skipped.
const DIVISOR_LIMIT: u64 = 1 << 40;

/// Positive divisors of a nonzero integer, or `None` when it is too large.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > DIVISOR_LIMIT {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Some(small)
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => rational::format(c),
                1 => format!("{}*x", rational::format(c)),
                _ => format!("{}*x^{}", rational::format(c), i),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Characteristic polynomial `det(xI - A)` via Faddeev-LeVerrier.
pub fn char_poly(a: &RationalMatrix) -> Result<Polynomial> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            op: "char_poly",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = RationalMatrix::zeros(n, n);
    for k in 1..=n {
        m = &(a * &m) + &RationalMatrix::scalar(n, &coeffs[n - k + 1]);
        let am = a * &m;
        coeffs[n - k] = -am.trace() / rational::int(k as i64);
    }
    Ok(Polynomial::new(coeffs))
}

/// Where the complex roots of a factor lie relative to `[0, inf)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootLocation {
    AllIn,
    NoneIn,
    Mixed,
}

impl RootLocation {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::AllIn => "ALL_IN",
            Self::NoneIn => "NONE_IN",
            Self::Mixed => "MIXED",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorClass {
    pub factor: Polynomial,
    pub multiplicity: usize,
    pub location: RootLocation,
    /// False when factorization gave up and `factor` may be reducible.
    pub certified_irreducible: bool,
}

/// Upper bound on Kronecker candidate interpolations per polynomial.
const KRONECKER_BUDGET: usize = 200_000;

/// Splits `p` into monic factors over Q and classifies each one's roots
/// relative to `[0, inf)`.
pub fn roots_in_nonneg_reals(p: &Polynomial) -> Vec<FactorClass> {
    let mut out = Vec::new();
    for (sf, mult) in p.squarefree_decomposition() {
        let Some(roots) = sf.rational_roots_complete() else {
            out.push(FactorClass {
                location: classify_squarefree(&sf),
                factor: sf,
                multiplicity: mult,
                certified_irreducible: false,
            });
            continue;
        };
        let mut rest = sf.clone();
        for r in roots {
            let lin = Polynomial::linear_root(&r);
            rest = rest.div_rem(&lin).0;
            out.push(FactorClass {
                factor: lin,
                multiplicity: mult,
                location: if r.is_negative() {
                    RootLocation::NoneIn
                } else {
                    RootLocation::AllIn
                },
                certified_irreducible: true,
            });
        }
        if rest.degree() == 0 {
            continue;
        }
        let mut budget = KRONECKER_BUDGET;
        match factor_without_rational_roots(&rest.monic(), &mut budget) {
            Some(factors) => {
                for f in factors {
                    out.push(FactorClass {
                        location: classify_squarefree(&f),
                        factor: f,
                        multiplicity: mult,
                        certified_irreducible: true,
                    });
                }
            }
            None => out.push(FactorClass {
                location: classify_squarefree(&rest),
                factor: rest.monic(),
                multiplicity: mult,
                certified_irreducible: false,
            }),
        }
    }
    out
}

fn classify_squarefree(f: &Polynomial) -> RootLocation {
    let c = f.count_nonneg_roots();
    if c == 0 {
        RootLocation::NoneIn
    } else if c == f.degree() {
        RootLocation::AllIn
    } else {
        RootLocation::Mixed
    }
}

/// Complete factorization of a monic squarefree polynomial without rational
/// roots into monic irreducibles, or `None` when the budget runs out.
fn factor_without_rational_roots(f: &Polynomial, budget: &mut usize) -> Option<Vec<Polynomial>> {
    if f.degree() <= 3 {
        // no linear factor, so degree 2 and 3 are irreducible
        return Some(vec![f.clone()]);
    }
    for e in 2..=f.degree() / 2 {
        if let Some(g) = kronecker_factor(f, e, budget)? {
            let h = f.div_rem(&g).0.monic();
            let mut left = factor_without_rational_roots(&g, budget)?;
            left.extend(factor_without_rational_roots(&h, budget)?);
            return Some(left);
        }
    }
    Some(vec![f.clone()])
}

/// Searches for a monic factor of degree `e`; `Some(None)` means none exists.
fn kronecker_factor(f: &Polynomial, e: usize, budget: &mut usize) -> Option<Option<Polynomial>> {
    let ints = f.primitive_integer();
    let fi = Polynomial::new(ints.iter().map(|c| Rational::from_integer(c.clone())).collect());
    // evaluation points with the fewest divisors
    let mut cands: Vec<(usize, BigInt, Vec<BigInt>)> = Vec::new();
    for k in 0..(4 * e as i64 + 8) {
        let a = if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 };
        let val = fi.eval(&rational::int(a)).to_integer();
        let divs = divisors(&val)?;
        cands.push((divs.len(), BigInt::from(a), divs));
    }
    cands.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.abs().cmp(&y.1.abs())));
    let pts: Vec<(BigInt, Vec<BigInt>)> = cands
        .into_iter()
        .take(e + 1)
        .map(|(_, a, d)| (a, d))
        .collect();
    let radices: Vec<usize> = pts
        .iter()
        .enumerate()
        .map(|(i, (_, d))| if i == 0 { d.len() } else { 2 * d.len() })
        .collect();
    let total: usize = radices.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r))?;
    if total > *budget {
        return None;
    }
    *budget -= total;
    let lc = Rational::from_integer(ints.last().unwrap().clone());
    let mut idx = vec![0usize; pts.len()];
    loop {
        let samples: Vec<(Rational, Rational)> = pts
            .iter()
            .zip(&idx)
            .enumerate()
            .map(|(i, ((a, divs), &k))| {
                let (d, s) = if i == 0 { (&divs[k], 1) } else { (&divs[k / 2], if k % 2 == 0 { 1 } else { -1 }) };
                (Rational::from_integer(a.clone()), Rational::from_integer(d * s))
            })
            .collect();
        let g = Polynomial::interpolate(&samples);
        if g.degree() == e && g.coeffs.iter().all(|c| c.is_integer()) {
            let lg = g.leading();
            if (&lc / &lg).is_integer() {
                let (_, r) = fi.div_rem(&g);
                if r.is_zero() {
                    return Some(Some(g.monic()));
                }
            }
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Some(None);
            }
            idx[pos] += 1;
            if idx[pos] < radices[pos] {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// `ker chi_g(A)`, where `chi_g` collects the factors of the characteristic
/// polynomial with no root in `[0, inf)`.
pub fn stable_subspace(a: &RationalMatrix) -> Result<Subspace> {
    let chi = char_poly(a)?;
    let mut good = Polynomial::one();
    for fc in roots_in_nonneg_reals(&chi) {
        match fc.location {
            RootLocation::NoneIn => good = good.mul(&fc.factor.pow(fc.multiplicity)),
            RootLocation::AllIn => {}
            RootLocation::Mixed => {
                return Err(Error::SplitNotRational(format!(
                    "factor {:?} of the characteristic polynomial has roots both in [0, inf) and outside it",
                    fc.factor
                )))
            }
        }
    }
    Ok(Subspace::kernel(&good.eval_matrix(a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_i64(c)
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly(&RationalMatrix::identity(2)).unwrap(), p(&[1, -2, 1]));
        let d = RationalMatrix::diag(&[int(2), int(5)]);
        assert_eq!(char_poly(&d).unwrap(), p(&[10, -7, 1]));
        let a = RationalMatrix::from_i64(&[&[4, 1], &[2, 3]]);
        assert_eq!(char_poly(&a).unwrap(), p(&[10, -7, 1]));
        assert!(char_poly(&RationalMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn cayley_hamilton_small() {
        let a = RationalMatrix::from_i64(&[&[1, 2, 0], &[-1, 0, 3], &[2, 1, 1]]);
        let chi = char_poly(&a).unwrap();
        assert!(chi.eval_matrix(&a).unwrap().is_zero());
    }

    #[test]
    fn division_and_gcd() {
        let f = p(&[-2, 1]).mul(&p(&[-5, 1]));
        let (q, r) = f.div_rem(&p(&[-2, 1]));
        assert_eq!(q, p(&[-5, 1]));
        assert!(r.is_zero());
        assert_eq!(f.gcd(&p(&[-5, 1]).mul(&p(&[1, 1]))), p(&[-5, 1]));
    }

    #[test]
    fn squarefree() {
        // (x-1)^2 (x+2)
        let f = p(&[-1, 1]).pow(2).mul(&p(&[2, 1]));
        let d = f.squarefree_decomposition();
        assert_eq!(d, vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]);
    }

    #[test]
    fn rational_root_search() {
        let f = p(&[-1, 2]).mul(&p(&[3, 1])).mul(&p(&[-2, 0, 1]));
        assert_eq!(f.rational_roots(), vec![int(-3), frac(1, 2)]);
        assert_eq!(p(&[0, 0, 1]).rational_roots(), vec![int(0)]);
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(p(&[-2, 0, 1]).count_nonneg_roots(), 1);
        assert_eq!(p(&[-2, 0, 1]).count_real_roots(), 2);
        assert_eq!(p(&[1, 0, 1]).count_real_roots(), 0);
        assert_eq!(p(&[0, -1, 1]).count_nonneg_roots(), 2); // roots 0 and 1
        assert_eq!(p(&[10, -7, 1]).count_nonneg_roots(), 2);
    }

    #[test]
    fn classification_examples() {
        let c = roots_in_nonneg_reals(&p(&[1, 1]));
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].location, RootLocation::NoneIn);

        let c = roots_in_nonneg_reals(&p(&[10, -7, 1]));
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|f| f.location == RootLocation::AllIn));
        assert_eq!(c[0].factor, p(&[-2, 1]));
        assert_eq!(c[1].factor, p(&[-5, 1]));

        let c = roots_in_nonneg_reals(&p(&[-2, 0, 1]));
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].location, RootLocation::Mixed);
        assert!(c[0].certified_irreducible);
    }

    #[test]
    fn kronecker_splits_quartic() {
        // (x^2 - 3x + 1)(x^2 + 1): first factor has both roots positive
        let f = p(&[1, -3, 1]).mul(&p(&[1, 0, 1]));
        let c = roots_in_nonneg_reals(&f);
        assert_eq!(c.len(), 2);
        let all_in: Vec<_> = c.iter().filter(|f| f.location == RootLocation::AllIn).collect();
        let none_in: Vec<_> = c.iter().filter(|f| f.location == RootLocation::NoneIn).collect();
        assert_eq!(all_in[0].factor, p(&[1, -3, 1]));
        assert_eq!(none_in[0].factor, p(&[1, 0, 1]));
    }

    #[test]
    fn stable_subspace_examples() {
        let a = RationalMatrix::diag(&[int(-1), int(3)]);
        let s = stable_subspace(&a).unwrap();
        assert_eq!(s, Subspace::span(2, &[vec![int(1), int(0)]]).unwrap());
        assert!(stable_subspace(&RationalMatrix::zeros(2, 2)).unwrap().is_zero());
        let a = RationalMatrix::from_i64(&[&[4, 1], &[2, 3]]);
        assert!(stable_subspace(&a).unwrap().is_zero());
        let rot = RationalMatrix::from_i64(&[&[0, 2], &[1, 0]]); // x^2 - 2
        assert!(matches!(stable_subspace(&rot), Err(Error::SplitNotRational(_))));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = p(&[3, -1, 0, 2]);
        let pts: Vec<_> = (0..4).map(|x| (int(x), f.eval(&int(x)))).collect();
        assert_eq!(Polynomial::interpolate(&pts), f);
    }
}
