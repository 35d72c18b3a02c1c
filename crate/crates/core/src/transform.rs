//! The quadratic transformation `f -> f_R = h^deg f * f(g/h)` and the invariance
//! predicates characterizing its images.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Embedding, Field, FieldElement};
use crate::moebius::{MoebiusMap, QuadRationalExpr, Side};
use crate::poly::{enumerate_monic_irreducible, factorize, is_irreducible, Poly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransformResult {
    pub result: Poly,
    /// `deg result < 2 deg f`, which happens exactly when `h2 != 0` and `f(g2/h2) = 0`.
    pub degree_dropped: bool,
    pub normalized_monic: bool,
}

impl TransformResult {
    pub fn into_monic(self) -> TransformResult {
        TransformResult { result: self.result.monic(), normalized_monic: true, ..self }
    }
}

/// `h^deg f * f(g/h)`, unnormalized.
pub fn transform(f: &Poly, r: &QuadRationalExpr) -> Result<TransformResult> {
    f.check_same(r.numerator())?;
    let n = f.deg().ok_or(Error::ZeroPolynomial)?;
    let result = f.homogeneous_compose(n, r.numerator(), r.denominator());
    let degree_dropped = result.deg() != Some(2 * n);
    Ok(TransformResult { result, degree_dropped, normalized_monic: false })
}

/// [`transform`] scaled monic.
pub fn transform_monic(f: &Poly, r: &QuadRationalExpr) -> Result<TransformResult> {
    transform(f, r).map(TransformResult::into_monic)
}

fn half_degree(big_f: &Poly) -> Result<usize> {
    let d = big_f.deg().ok_or(Error::ZeroPolynomial)?;
    if d % 2 == 1 {
        return Err(Error::OddDegree);
    }
    Ok(d / 2)
}

/// `x^(2n) F(sigma/x) = sigma^n F(x)`, checked as `b_(n-k) = b_(n+k) sigma^k` for `0 < k <= n`.
pub fn is_sigma_self_reciprocal(big_f: &Poly, sigma: &FieldElement) -> Result<bool> {
    big_f.field().check_same(sigma.field())?;
    if sigma.is_zero() {
        return Err(Error::ZeroSigma);
    }
    let n = half_degree(big_f)?;
    let f = big_f.field();
    let s = sigma.code();
    let mut sk = 1;
    for k in 1..=n {
        sk = f.mul(sk, s);
        if big_f.coeff(n - k) != f.mul(big_f.coeff(n + k), sk) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_triple(field: &Field, a: u32, b: u32, c: u32) -> Result<u32> {
    let disc = field.sub(field.mul(b, b), field.mul(a, c));
    if disc == 0 {
        return Err(Error::SingularTriple);
    }
    if field.characteristic() == 2 && a == 0 && c == 0 {
        return Err(Error::Char2Degenerate);
    }
    Ok(disc)
}

fn triple_codes(field: &Field, abc: [&FieldElement; 3]) -> Result<[u32; 3]> {
    for e in abc {
        field.check_same(e.field())?;
    }
    Ok(abc.map(FieldElement::code))
}

/// `(ax - b)^(2n) F((bx - c)/(ax - b)) = (b^2 - ac)^n F(x)` as a polynomial identity.
pub fn is_invariant_generalized(big_f: &Poly, a: &FieldElement, b: &FieldElement, c: &FieldElement) -> Result<bool> {
    let f = big_f.field();
    let [a, b, c] = triple_codes(f, [a, b, c])?;
    invariant_generalized_codes(big_f, a, b, c)
}

pub(crate) fn invariant_generalized_codes(big_f: &Poly, a: u32, b: u32, c: u32) -> Result<bool> {
    let f = big_f.field();
    let disc = check_triple(f, a, b, c)?;
    let n = half_degree(big_f)?;
    let lhs = big_f.homogeneous_compose(2 * n, &Poly::linear(f, b, f.neg(c)), &Poly::linear(f, a, f.neg(b)));
    Ok(lhs == big_f.scale(f.pow(disc, n as u64)))
}

/// `a x^2 - 2 b x + c`, whose roots are the fixed points of `x -> (bx - c)/(ax - b)`.
pub fn fixed_point_quadratic(field: &Field, a: u32, b: u32, c: u32) -> Poly {
    Poly::from_codes(field, vec![c, field.neg(field.mul(field.from_int(2), b)), a])
}

fn lcm(a: usize, b: usize) -> usize {
    let gcd = |mut x: usize, mut y: usize| {
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x
    };
    a / gcd(a, b) * b
}

/// Root-multiset test: the roots of `F` in its splitting field are closed, with
/// multiplicities, under `xi -> (b xi - c)/(a xi - b)`.
pub fn roots_orbit_check(big_f: &Poly, a: &FieldElement, b: &FieldElement, c: &FieldElement) -> Result<bool> {
    let f = big_f.field();
    let [a, b, c] = triple_codes(f, [a, b, c])?;
    check_triple(f, a, b, c)?;
    let n = half_degree(big_f)?;
    if !big_f.gcd(&fixed_point_quadratic(f, a, b, c))?.is_one() {
        return Err(Error::NotCoprime);
    }
    if n == 0 {
        return Ok(true);
    }
    let fac = factorize(big_f, 2 * n)?;
    let m = fac.factors.iter().fold(1, |acc, (g, _)| lcm(acc, g.deg().expect("nonconstant")));
    let ext = Field::new(f.characteristic() as u64, f.degree() * m as u32)?;
    let emb = Embedding::new(f, &ext)?;
    let q = f.order();
    let mut roots: BTreeMap<u32, usize> = BTreeMap::new();
    for (g, mult) in &fac.factors {
        let d = g.deg().expect("nonconstant");
        let root = (0..ext.order() as u32)
            .find(|&x| g.eval_embedded(&emb, x) == 0)
            .expect("factor splits in the splitting field");
        let mut xi = root;
        for _ in 0..d {
            *roots.entry(xi).or_insert(0) += mult;
            xi = ext.pow(xi, q);
        }
    }
    let (ea, eb, ec) = (emb.apply(a), emb.apply(b), emb.apply(c));
    for (&xi, &mult) in &roots {
        let den = ext.sub(ext.mul(ea, xi), eb);
        let Some(image) = ext.div(ext.sub(ext.mul(eb, xi), ec), den) else { return Ok(false) };
        if roots.get(&image) != Some(&mult) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of monic irreducible `f` of degree `n` whose transform is irreducible of degree `2n`.
pub fn count_irreducible_transforms(r: &QuadRationalExpr, n: usize) -> Result<u64> {
    let candidates = enumerate_monic_irreducible(r.field(), n)?;
    Ok(candidates
        .par_iter()
        .filter(|f| {
            let t = transform_monic(f, r).expect("nonzero input").result;
            t.deg() == Some(2 * n) && is_irreducible(&t).expect("positive degree")
        })
        .count() as u64)
}

/// Composing `r` with a Moebius map on either side keeps the number of degree-`n`
/// irreducibles mapping to irreducibles unchanged; checked by exhaustive enumeration.
pub fn count_preserving_bijections_check(
    r: &QuadRationalExpr,
    r2: &QuadRationalExpr,
    m: &MoebiusMap,
    side: Side,
    n: usize,
) -> Result<bool> {
    if n <= 1 {
        return Err(Error::RequiresNGreaterThan1);
    }
    let expected = match side {
        Side::Pre => r.apply_pre(m)?,
        Side::Post => r.apply_post(m)?,
    };
    if &expected != r2 {
        return Err(Error::InvalidArgument(format!("{r2} is not {r} composed with {m} ({side:?})")));
    }
    Ok(count_irreducible_transforms(r, n)? == count_irreducible_transforms(r2, n)?)
}
