//! `H(x) = a x^(q^n+1) - b (x^(q^n) + x) + c` and machine verification of its
//! factorization into transformed irreducibles.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::express_in_basis;
use crate::moebius::{reduce_canonical, CanonicalForm, QuadRationalExpr, Side};
use crate::poly::{enumerate_monic_irreducible, factorize, is_irreducible, Poly};
use crate::transform::{fixed_point_quadratic, is_sigma_self_reciprocal, transform_monic};

/// Parameters of `H`: the field, `n`, and a triple with `b^2 - ac != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HSpec {
    pub n: u32,
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub source: Option<QuadRationalExpr>,
}

impl HSpec {
    pub fn new(n: u32, a: &FieldElement, b: &FieldElement, c: &FieldElement) -> Result<HSpec> {
        let f = a.field();
        f.check_same(b.field())?;
        f.check_same(c.field())?;
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if f.sub(f.mul(b.code(), b.code()), f.mul(a.code(), c.code())) == 0 {
            return Err(Error::SingularTriple);
        }
        let spec = HSpec { n, a: a.clone(), b: b.clone(), c: c.clone(), source: None };
        spec.degree()?;
        Ok(spec)
    }

    /// The H parameters whose triple is the cross product of the coefficient triples of `r`.
    pub fn from_expr(r: &QuadRationalExpr, n: u32) -> Result<HSpec> {
        let f = r.field();
        let [a, b, c] = r.cross_product();
        if f.characteristic() == 2 && a == 0 && c == 0 {
            return Err(Error::Char2Degenerate);
        }
        let mut spec = HSpec::new(n, &f.element(a), &f.element(b), &f.element(c))?;
        spec.source = Some(r.clone());
        Ok(spec)
    }

    pub fn field(&self) -> &Field {
        self.a.field()
    }

    /// `q^n`, refused beyond the configured degree bound.
    pub fn q_power(&self) -> Result<u64> {
        q_power(self.field(), self.n)
    }

    /// Formal degree `q^n + 1`.
    pub fn degree(&self) -> Result<u64> {
        Ok(self.q_power()? + 1)
    }

    fn codes(&self) -> [u32; 3] {
        [self.a.code(), self.b.code(), self.c.code()]
    }

    /// `b^2 - ac`.
    pub fn discriminant(&self) -> FieldElement {
        let f = self.field();
        let [a, b, c] = self.codes();
        f.element(f.sub(f.mul(b, b), f.mul(a, c)))
    }

    /// `a x^2 - 2 b x + c`.
    pub fn fixed_point_quadratic(&self) -> Poly {
        let [a, b, c] = self.codes();
        fixed_point_quadratic(self.field(), a, b, c)
    }
}

fn q_power(field: &Field, n: u32) -> Result<u64> {
    let bound = crate::degree_bound();
    field
        .order()
        .checked_pow(n)
        .filter(|&qn| qn < bound)
        .ok_or_else(|| Error::SizeBoundExceeded(format!("q^n + 1 for q={}, n={n} exceeds {bound}", field.order())))
}

/// `(a, b, c) = (g2 h1 - g1 h2, g0 h2 - g2 h0, g1 h0 - g0 h1)`.
pub fn cross_product_abc(r: &QuadRationalExpr) -> [FieldElement; 3] {
    let f = r.field();
    r.cross_product().map(|v| f.element(v))
}

pub fn build_h(spec: &HSpec) -> Result<Poly> {
    let f = spec.field();
    let qn = spec.q_power()? as usize;
    let [a, b, c] = spec.codes();
    let mut coeffs = vec![0u32; qn + 2];
    coeffs[qn + 1] = a;
    coeffs[qn] = f.neg(b);
    coeffs[1] = f.sub(coeffs[1], b);
    coeffs[0] = f.add(coeffs[0], c);
    Ok(Poly::from_codes(f, coeffs))
}

/// `(x^(q^n+1) - sigma) / gcd(x^2 - sigma, x^(q^n-1) - 1)`.
pub fn build_h_sigma(sigma: &FieldElement, n: u32) -> Result<Poly> {
    if sigma.is_zero() {
        return Err(Error::ZeroSigma);
    }
    let f = sigma.field();
    let spec = HSpec::new(n, &FieldElement::one(f), &FieldElement::zero(f), &sigma.neg())?;
    let numerator = build_h(&spec)?;
    let quad = Poly::from_codes(f, vec![f.neg(sigma.code()), 0, 1]);
    let e = BigUint::from(spec.q_power()? - 1);
    let t = &Poly::x(f).pow_mod(&e, &quad)? - &Poly::one(f);
    let den = quad.gcd(&t)?;
    let (h, rem) = numerator.divrem(&den)?;
    if !rem.is_zero() {
        return Err(Error::IdentityViolated("gcd does not divide x^(q^n+1) - sigma".into()));
    }
    Ok(h)
}

/// `(ax - b) H' - a H`, which must be the constant `b^2 - ac`.
pub fn h_squarefree_witness(spec: &HSpec) -> Result<FieldElement> {
    let f = spec.field();
    let h = build_h(spec)?;
    let [a, b, _] = spec.codes();
    let w = &(&Poly::linear(f, a, f.neg(b)) * &h.derivative()) - &h.scale(a);
    let expected = spec.discriminant();
    if w != Poly::constant(f, expected.code()) {
        return Err(Error::IdentityViolated(format!("(ax-b)H'-aH = {w}, expected {expected}")));
    }
    Ok(expected)
}

/// `f` with `sum_j f_j g^j h^(m-j)` proportional to `F`, where `m = deg F / 2` is the
/// formal degree; `degree_dropped` marks `deg f < m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Preimage {
    pub f: Poly,
    pub formal_degree: usize,
    pub degree_dropped: bool,
}

/// Solves `F = sum_j f_j g^j h^(m-j)` for `f` by transporting `F` along the reduction
/// trail of `r` to canonical form, reconstructing there, and pulling `f` back through
/// the post-composition steps.
pub fn reconstruct_generalized(big_f: &Poly, r: &QuadRationalExpr) -> Result<Preimage> {
    big_f.check_same(r.numerator())?;
    let d = big_f.deg().ok_or(Error::ZeroPolynomial)?;
    if d % 2 == 1 {
        return Err(Error::OddDegree);
    }
    let m = d / 2;
    let field = r.field();
    let (form, trail) = reduce_canonical(r);
    let mut moved = big_f.clone();
    for step in trail.steps.iter().filter(|s| s.side() == Side::Pre) {
        let (num, den) = step.map(field).as_rational();
        moved = moved.homogeneous_compose(2 * m, &num, &den);
    }
    let end = form.expr(field);
    let mut f = match &form {
        CanonicalForm::XPlusSigmaOverX(sigma) if moved.deg() == Some(2 * m) => {
            crate::dickson::reconstruct(&moved, sigma).or_else(|e| match e {
                Error::NotInvariant => Err(e),
                _ => solve_homogeneous(&moved, &end, m),
            })?
        }
        _ => solve_homogeneous(&moved, &end, m)?,
    };
    for step in trail.steps.iter().rev().filter(|s| s.side() == Side::Post) {
        let (num, den) = step.map(field).as_rational();
        f = f.homogeneous_compose(m, &num, &den);
    }
    let back = f.homogeneous_compose(m, r.numerator(), r.denominator());
    if back.monic() != big_f.monic() {
        return Err(Error::IdentityViolated(format!("preimage {f} does not transform back to {big_f}")));
    }
    let degree_dropped = f.deg().is_none_or(|k| k < m);
    Ok(Preimage { f, formal_degree: m, degree_dropped })
}

fn solve_homogeneous(big_f: &Poly, r: &QuadRationalExpr, m: usize) -> Result<Poly> {
    let basis: Vec<Poly> = (0..=m)
        .map(|j| &r.numerator().pow(j as u64) * &r.denominator().pow((m - j) as u64))
        .collect();
    let c = express_in_basis(big_f, &basis).ok_or(Error::NotInvariant)?;
    Ok(Poly::from_codes(big_f.field(), c))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorRole {
    /// A root of `H` in GF(q).
    Linear,
    /// `a x^2 - 2bx + c`, irreducible.
    Exceptional,
    Transformed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorEntry {
    pub factor: Poly,
    pub degree: usize,
    pub multiplicity: usize,
    pub role: FactorRole,
    pub preimage: Option<Preimage>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HReport {
    pub kind: &'static str,
    pub field: String,
    pub n: u32,
    pub spec: HSpec,
    pub sigma: Option<FieldElement>,
    pub h: Poly,
    pub h_degree: usize,
    pub witness: FieldElement,
    pub factors: Vec<FactorEntry>,
    /// Degree -> number of transformed factors of that degree.
    pub degree_multiset: BTreeMap<usize, usize>,
    /// Irreducible transforms of permitted degree found by independent enumeration.
    pub enumerated: Vec<Poly>,
    pub product_degree: u64,
    pub epsilon: i8,
    pub mismatches: Vec<String>,
}

impl HReport {
    pub fn verified(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn ensure(&self) -> Result<()> {
        if self.verified() {
            Ok(())
        } else {
            Err(Error::MismatchFound(self.mismatches.join("; ")))
        }
    }
}

fn odd_divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d) && d % 2 == 1).collect()
}

fn permitted_degree(deg: usize, n: u32) -> bool {
    let n = n as usize;
    (2 * n).is_multiple_of(deg) && !n.is_multiple_of(deg)
}

fn factor_entries(h: &Poly, n: u32, exceptional: Option<&Poly>, mismatches: &mut Vec<String>) -> Vec<FactorEntry> {
    let fac = match factorize(h, 2 * n as usize) {
        Ok(fac) => fac,
        Err(e) => {
            mismatches.push(format!("factorization of H failed: {e}"));
            return Vec::new();
        }
    };
    fac.factors
        .into_iter()
        .map(|(factor, multiplicity)| {
            let degree = factor.deg().expect("nonconstant");
            let role = if degree == 1 {
                FactorRole::Linear
            } else if exceptional == Some(&factor) {
                FactorRole::Exceptional
            } else {
                FactorRole::Transformed
            };
            if multiplicity != 1 {
                mismatches.push(format!("factor {factor} has multiplicity {multiplicity}"));
            }
            if role == FactorRole::Transformed && !permitted_degree(degree, n) {
                mismatches.push(format!("factor {factor} has degree {degree}, not dividing 2n={} but not n", 2 * n));
            }
            FactorEntry { factor, degree, multiplicity, role, preimage: None }
        })
        .collect()
}

fn compare_sets(factors: &[FactorEntry], enumerated: &[Poly], mismatches: &mut Vec<String>) {
    let mut have: Vec<&Poly> =
        factors.iter().filter(|e| e.role == FactorRole::Transformed).map(|e| &e.factor).collect();
    let mut want: Vec<&Poly> = enumerated.iter().collect();
    have.sort_by_key(|p| (p.deg(), p.lex_key()));
    want.sort_by_key(|p| (p.deg(), p.lex_key()));
    for p in &want {
        if !have.contains(p) {
            mismatches.push(format!("enumerated {p} does not divide H"));
        }
    }
    for p in &have {
        if !want.contains(p) {
            mismatches.push(format!("factor {p} of H was not found by enumeration"));
        }
    }
}

fn degree_multiset(factors: &[FactorEntry]) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for e in factors.iter().filter(|e| e.role == FactorRole::Transformed) {
        *out.entry(e.degree).or_insert(0) += 1;
    }
    out
}

/// Factorizes `H = (x^(q^n+1) - sigma)/gcd(x^2 - sigma, x^(q^n-1) - 1)` and checks it is
/// the product of all sigma-self-reciprocal irreducibles of degree dividing `2n` but not `n`.
pub fn verify_sigma_factorization(sigma: &FieldElement, n: u32) -> Result<HReport> {
    let field = sigma.field();
    let r = QuadRationalExpr::sigma_form(sigma)?;
    let spec = HSpec::new(n, &FieldElement::one(field), &FieldElement::zero(field), &sigma.neg())?;
    let h = build_h_sigma(sigma, n)?;
    let mut mismatches = Vec::new();
    let witness = check_witness(&spec, &mut mismatches);
    let mut factors = factor_entries(&h, n, None, &mut mismatches);
    for e in factors.iter_mut() {
        if e.role == FactorRole::Linear {
            mismatches.push(format!("linear factor {} in H", e.factor));
            continue;
        }
        if !is_sigma_self_reciprocal(&e.factor, sigma)? {
            mismatches.push(format!("factor {} is not {sigma}-self-reciprocal", e.factor));
            continue;
        }
        match crate::dickson::reconstruct(&e.factor, sigma) {
            Ok(f) => {
                let m = e.degree / 2;
                e.preimage = Some(Preimage { degree_dropped: f.deg() != Some(m), f, formal_degree: m });
            }
            Err(err) => mismatches.push(format!("no preimage for {}: {err}", e.factor)),
        }
    }
    let enumerated = enumerate_sigma_transforms(&r, n)?;
    let product = enumerated.iter().fold(Poly::one(field), |acc, p| &acc * p);
    if product != h.monic() {
        mismatches.push("product of enumerated polynomials differs from H".into());
    }
    compare_sets(&factors, &enumerated, &mut mismatches);
    let (product_degree, epsilon) = product_degree_check(&spec, &mut mismatches);
    if h.deg() != Some(product_degree as usize) {
        mismatches.push(format!("deg H = {:?} but q^n - eps^n = {product_degree}", h.deg()));
    }
    Ok(HReport {
        kind: "sigma",
        field: field.label(),
        n,
        spec,
        sigma: Some(sigma.clone()),
        h_degree: h.deg().expect("nonzero"),
        h,
        witness,
        degree_multiset: degree_multiset(&factors),
        factors,
        enumerated,
        product_degree,
        epsilon,
        mismatches,
    })
}

fn enumerate_sigma_transforms(r: &QuadRationalExpr, n: u32) -> Result<Vec<Poly>> {
    let mut out = Vec::new();
    for d in odd_divisors(n) {
        let m = (n / d) as usize;
        for f in enumerate_monic_irreducible(r.field(), m)? {
            let t = transform_monic(&f, r)?.result;
            if t.deg() == Some(2 * m) && is_irreducible(&t)? {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// Irreducible `sum_j f_j g^j h^(m-j)` of degree `2m` over irreducible binary forms
/// `f` of degree `m = n/d`, `d` odd; for `m = 1` this includes the form `Z`, i.e. `h`.
fn enumerate_generalized_transforms(r: &QuadRationalExpr, n: u32) -> Result<Vec<Poly>> {
    let mut out = enumerate_sigma_transforms(r, n)?;
    let h = r.denominator();
    if n % 2 == 1 && h.deg() == Some(2) && is_irreducible(h)? {
        out.push(h.monic());
    }
    Ok(out)
}

fn check_witness(spec: &HSpec, mismatches: &mut Vec<String>) -> FieldElement {
    match h_squarefree_witness(spec) {
        Ok(w) => w,
        Err(e) => {
            mismatches.push(e.to_string());
            spec.discriminant()
        }
    }
}

fn product_degree_check(spec: &HSpec, mismatches: &mut Vec<String>) -> (u64, i8) {
    match product_degree_summary(spec) {
        Ok(v) => v,
        Err(e) => {
            mismatches.push(e.to_string());
            (0, 0)
        }
    }
}

/// Factorizes `H` for the cross-product triple of `r`: every factor of degree > 1 other
/// than an irreducible `ax^2 - 2bx + c` must be a transform of some `f`, with degree
/// dividing `2n` but not `n`, and every irreducible transform of such degree must divide `H`.
pub fn verify_factorization(r: &QuadRationalExpr, n: u32) -> Result<HReport> {
    let field = r.field();
    let spec = HSpec::from_expr(r, n)?;
    let h = build_h(&spec)?;
    let mut mismatches = Vec::new();
    let witness = check_witness(&spec, &mut mismatches);
    let quad = spec.fixed_point_quadratic();
    let exceptional = (quad.deg() == Some(2) && is_irreducible(&quad)?).then(|| quad.monic());
    let mut factors = factor_entries(&h, n, exceptional.as_ref(), &mut mismatches);
    for e in factors.iter_mut().filter(|e| e.role == FactorRole::Transformed) {
        match reconstruct_generalized(&e.factor, r) {
            Ok(p) => e.preimage = Some(p),
            Err(err) => mismatches.push(format!("no preimage for {}: {err}", e.factor)),
        }
    }
    let enumerated = enumerate_generalized_transforms(r, n)?;
    let enumerated: Vec<Poly> = enumerated.into_iter().filter(|p| Some(p) != exceptional.as_ref()).collect();
    compare_sets(&factors, &enumerated, &mut mismatches);
    let (product_degree, epsilon) = product_degree_check(&spec, &mut mismatches);
    let transformed_degree: usize =
        factors.iter().filter(|e| e.role == FactorRole::Transformed).map(|e| e.degree).sum();
    if transformed_degree as u64 != product_degree {
        mismatches.push(format!(
            "transformed factors have total degree {transformed_degree}, expected q^n - eps^n = {product_degree}"
        ));
    }
    Ok(HReport {
        kind: "general",
        field: field.label(),
        n,
        spec,
        sigma: None,
        h_degree: h.deg().expect("nonzero"),
        h,
        witness,
        degree_multiset: degree_multiset(&factors),
        factors,
        enumerated,
        product_degree,
        epsilon,
        mismatches,
    })
}

/// `deg H / gcd(ax^2 - 2bx + c, x^(q^n) - x)`, checked against `q^n - eps^n` with `eps`
/// the square class of `b^2 - ac` (`eps = 0` in characteristic two).
pub fn product_degree_summary(spec: &HSpec) -> Result<(u64, i8)> {
    let f = spec.field();
    let h = build_h(spec)?;
    let quad = spec.fixed_point_quadratic();
    let qn = spec.q_power()?;
    let common = if quad.deg().unwrap_or(0) >= 1 {
        let t = &Poly::x(f).pow_mod_u64(qn, &quad)? - &Poly::x(f);
        quad.gcd(&t)?.deg().expect("nonzero")
    } else {
        0
    };
    let direct = (h.deg().expect("nonzero") - common) as u64;
    let eps: i8 = if f.characteristic() == 2 {
        0
    } else if f.is_square_code(spec.discriminant().code()) {
        1
    } else {
        -1
    };
    let eps_n: i64 = match eps {
        0 => 0,
        1 => 1,
        _ => {
            if spec.n % 2 == 1 {
                -1
            } else {
                1
            }
        }
    };
    let formula = (qn as i64 - eps_n) as u64;
    if direct != formula {
        return Err(Error::MismatchFound(format!("product degree {direct} but q^n - eps^n = {formula}")));
    }
    Ok((direct, eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::count_quadratic;
    use crate::sample::random_nondegenerate_expr;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u64) -> Field {
        Field::from_order(q).unwrap()
    }

    fn expr(f: &Field, g: &[i64], h: &[i64]) -> QuadRationalExpr {
        QuadRationalExpr::new(&Poly::from_ints(f, g), &Poly::from_ints(f, h)).unwrap()
    }

    fn el(f: &Field, v: i64) -> FieldElement {
        FieldElement::from_int(f, v)
    }

    #[test]
    fn cross_product_examples() {
        let f5 = gf(5);
        assert_eq!(cross_product_abc(&expr(&f5, &[1, 0, 1], &[0, 1])), [el(&f5, 1), el(&f5, 0), el(&f5, -1)]);
        assert_eq!(cross_product_abc(&expr(&f5, &[3, 0, 1], &[0, 1])), [el(&f5, 1), el(&f5, 0), el(&f5, -3)]);
        assert_eq!(cross_product_abc(&expr(&f5, &[0, 0, 1], &[1])), [el(&f5, 0), el(&f5, -1), el(&f5, 0)]);
    }

    #[test]
    fn cross_product_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for q in [2u64, 3, 4, 5, 7, 9] {
            let f = gf(q);
            for _ in 0..50 {
                let r = crate::sample::random_expr(&f, &mut rng);
                let abc = r.cross_product();
                for t in [r.g_coeffs(), r.h_coeffs()] {
                    let dot = (0..3).fold(0, |acc, i| f.add(acc, f.mul(abc[i], t[i])));
                    assert_eq!(dot, 0);
                }
                let [a, b, c] = abc;
                assert_ne!(f.sub(f.mul(b, b), f.mul(a, c)), 0);
            }
        }
    }

    #[test]
    fn build_h_examples() {
        let f3 = gf(3);
        assert_eq!(build_h_sigma(&el(&f3, 1), 1).unwrap(), Poly::from_ints(&f3, &[1, 0, 1]));
        assert_eq!(build_h_sigma(&el(&f3, 2), 1).unwrap(), Poly::from_ints(&f3, &[-2, 0, 0, 0, 1]));
        let f2 = gf(2);
        assert_eq!(build_h_sigma(&el(&f2, 1), 1).unwrap(), Poly::from_ints(&f2, &[1, 1, 1]));
        let spec = HSpec::new(1, &el(&f3, 1), &el(&f3, 0), &el(&f3, -1)).unwrap();
        assert_eq!(build_h(&spec).unwrap(), Poly::from_ints(&f3, &[-1, 0, 0, 0, 1]));
        assert_eq!(HSpec::new(1, &el(&f3, 1), &el(&f3, 1), &el(&f3, 1)), Err(Error::SingularTriple));
        assert!(matches!(HSpec::new(40, &el(&f3, 1), &el(&f3, 0), &el(&f3, 1)), Err(Error::SizeBoundExceeded(_))));
    }

    #[test]
    fn witness_examples() {
        let f3 = gf(3);
        let spec = HSpec::new(1, &el(&f3, 1), &el(&f3, 0), &el(&f3, -1)).unwrap();
        assert_eq!(h_squarefree_witness(&spec).unwrap(), el(&f3, 1));
        let spec = HSpec::new(2, &el(&f3, 0), &el(&f3, -1), &el(&f3, 0)).unwrap();
        assert_eq!(h_squarefree_witness(&spec).unwrap(), el(&f3, 1));
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = gf(q);
            for _ in 0..20 {
                let [a, b, c] = [(); 3].map(|_| crate::sample::random_element(&f, &mut rng));
                let Ok(spec) = HSpec::new(2, &f.element(a), &f.element(b), &f.element(c)) else { continue };
                assert_eq!(h_squarefree_witness(&spec).unwrap(), spec.discriminant());
            }
        }
    }

    #[test]
    fn sigma_factorization_examples() {
        let f3 = gf(3);
        let rep = verify_sigma_factorization(&el(&f3, 1), 1).unwrap();
        assert!(rep.verified(), "{:?}", rep.mismatches);
        assert_eq!(rep.factors.len(), 1);
        assert_eq!(rep.factors[0].factor, Poly::from_ints(&f3, &[1, 0, 1]));

        let rep = verify_sigma_factorization(&el(&gf(2), 1), 2).unwrap();
        assert!(rep.verified(), "{:?}", rep.mismatches);
        assert_eq!(rep.h, Poly::from_ints(&gf(2), &[1, 1, 1, 1, 1]));

        let rep = verify_sigma_factorization(&el(&f3, 2), 1).unwrap();
        assert!(rep.verified(), "{:?}", rep.mismatches);
        assert_eq!(rep.factors.len(), 2);
    }

    #[test]
    fn sigma_factorization_small_grid() {
        for q in [2u64, 3, 4, 5, 7] {
            let f = gf(q);
            for s in 1..q as u32 {
                for n in 1..=3u32 {
                    if q.pow(n) > 400 {
                        continue;
                    }
                    let rep = verify_sigma_factorization(&f.element(s), n).unwrap();
                    assert!(rep.verified(), "q={q} s={s} n={n}: {:?}", rep.mismatches);
                }
            }
        }
    }

    #[test]
    fn generalized_examples() {
        let f3 = gf(3);
        let rep = verify_factorization(&expr(&f3, &[1, 0, 1], &[0, 1]), 1).unwrap();
        let by_sigma = verify_sigma_factorization(&el(&f3, 1), 1).unwrap();
        assert!(rep.verified(), "{:?}", rep.mismatches);
        let transformed: Vec<&Poly> =
            rep.factors.iter().filter(|e| e.role == FactorRole::Transformed).map(|e| &e.factor).collect();
        assert_eq!(transformed, by_sigma.factors.iter().map(|e| &e.factor).collect::<Vec<_>>());

        let f5 = gf(5);
        let r = expr(&f5, &[2, 0, 1], &[0, 1]);
        let rep = verify_factorization(&r, 2).unwrap();
        assert!(rep.verified(), "{:?}", rep.mismatches);
        assert_eq!(rep.degree_multiset.get(&4).copied().unwrap_or(0) as u128, count_quadratic(2, &r).unwrap().value);

        let f2 = gf(2);
        let rep = verify_factorization(&expr(&f2, &[1, 1, 1], &[0, 1, 1]), 2).unwrap();
        assert!(rep.verified(), "{:?}", rep.mismatches);
        assert_eq!(
            verify_factorization(&expr(&f2, &[1, 0, 1], &[0, 0, 1]), 2).unwrap_err(),
            Error::Char2Degenerate
        );
    }

    #[test]
    fn denominator_as_factor() {
        // x/(x^2+1) over GF(3), n = 1: H = -(x^4 - 1) contains h = x^2 + 1, which only
        // arises from the form f = Z, i.e. with a dropped degree
        let f3 = gf(3);
        let r = expr(&f3, &[0, 1], &[1, 0, 1]);
        let rep = verify_factorization(&r, 1).unwrap();
        assert!(rep.verified(), "{:?}", rep.mismatches);
        let entry = rep.factors.iter().find(|e| e.role == FactorRole::Transformed).unwrap();
        assert_eq!(entry.factor, Poly::from_ints(&f3, &[1, 0, 1]));
        assert!(entry.preimage.as_ref().unwrap().degree_dropped);
    }

    #[test]
    fn generalized_random_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for (q, max_n) in [(2u64, 5u32), (3, 4), (4, 3), (5, 3), (7, 2), (9, 2)] {
            let f = gf(q);
            for n in 1..=max_n {
                for _ in 0..4 {
                    let r = random_nondegenerate_expr(&f, &mut rng);
                    let rep = verify_factorization(&r, n).unwrap();
                    assert!(rep.verified(), "q={q} n={n} r={r:?}: {:?}", rep.mismatches);
                    if n > 1 {
                        let count = rep.degree_multiset.get(&(2 * n as usize)).copied().unwrap_or(0) as u128;
                        assert_eq!(count, count_quadratic(n as u64, &r).unwrap().value);
                    }
                }
            }
        }
    }

    #[test]
    fn product_degree_examples() {
        let f3 = gf(3);
        let spec = HSpec::new(1, &el(&f3, 1), &el(&f3, 0), &el(&f3, -1)).unwrap();
        assert_eq!(product_degree_summary(&spec).unwrap(), (2, 1));
        let spec = HSpec::new(1, &el(&f3, 1), &el(&f3, 0), &el(&f3, -2)).unwrap();
        assert_eq!(product_degree_summary(&spec).unwrap(), (4, -1));
        let f2 = gf(2);
        let spec = HSpec::new(3, &el(&f2, 1), &el(&f2, 0), &el(&f2, 1)).unwrap();
        assert_eq!(product_degree_summary(&spec).unwrap(), (8, 0));
    }

    #[test]
    fn generalized_reconstruction_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for q in [2u64, 3, 4, 5, 7, 9] {
            let f = gf(q);
            for _ in 0..30 {
                let r = random_nondegenerate_expr(&f, &mut rng);
                let poly = crate::sample::random_monic(&f, 3, &mut rng);
                let big_f = poly.homogeneous_compose(3, r.numerator(), r.denominator());
                if big_f.deg() != Some(6) {
                    continue;
                }
                let pre = reconstruct_generalized(&big_f, &r).unwrap();
                let back = pre.f.homogeneous_compose(3, r.numerator(), r.denominator());
                assert_eq!(back.monic(), big_f.monic());
            }
        }
    }
}
