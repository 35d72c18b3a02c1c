//! Dense univariate polynomials over GF(q).

mod factor;
mod irreducible;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Embedding, Field, FieldElement};

pub use factor::{factorize, squarefree_decomposition, Factorization};
pub use irreducible::{
    count_monic_irreducible, enumerate_monic_irreducible, is_irreducible, monic_irreducibles,
    MonicIrreducibles, ENUMERATION_BOUND,
};

/// Degree of a polynomial; the zero polynomial has no ordinary degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

/// A polynomial over a finite field, coefficients stored constant term first.
///
/// The zero polynomial has an empty coefficient vector; otherwise the leading
/// coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<u32>,
}

impl Poly {
    /// Builds a polynomial from element codes, trimming trailing zeros.
    pub fn from_codes(field: &Field, mut coeffs: Vec<u32>) -> Poly {
        debug_assert!(coeffs.iter().all(|&c| (c as u64) < field.order()));
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    /// Builds a polynomial whose coefficients lie in the prime subfield.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::from_codes(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn from_elements(field: &Field, coeffs: &[FieldElement]) -> Result<Poly> {
        for c in coeffs {
            field.check_same(c.field())?;
        }
        Ok(Poly::from_codes(field, coeffs.iter().map(FieldElement::code).collect()))
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, 1)
    }

    pub fn constant(field: &Field, c: u32) -> Poly {
        Poly::from_codes(field, vec![c])
    }

    pub fn x(field: &Field) -> Poly {
        Poly::monomial(field, 1, 1)
    }

    /// `c * x^d`.
    pub fn monomial(field: &Field, c: u32, d: usize) -> Poly {
        let mut coeffs = vec![0; d + 1];
        coeffs[d] = c;
        Poly::from_codes(field, coeffs)
    }

    /// `a x + b`.
    pub fn linear(field: &Field, a: u32, b: u32) -> Poly {
        Poly::from_codes(field, vec![b, a])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn codes(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn coefficient(&self, i: usize) -> FieldElement {
        self.field.element(self.coeff(i))
    }

    pub fn coefficients(&self) -> Vec<FieldElement> {
        self.coeffs.iter().map(|&c| self.field.element(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    /// Degree of a nonzero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    /// Monic scalar multiple; the zero polynomial stays zero.
    pub fn monic(&self) -> Poly {
        match self.field.inv(self.lead()) {
            Some(inv) if inv != 1 => self.scale(inv),
            _ => self.clone(),
        }
    }

    /// Key for coefficient-lexicographic ordering (constant term compared first).
    pub fn lex_key(&self) -> Vec<u32> {
        self.coeffs.iter().map(|&c| self.field.lex_rank(c)).collect()
    }

    pub(crate) fn check_same(&self, other: &Poly) -> Result<()> {
        self.field.check_same(&other.field)
    }

    pub fn scale(&self, c: u32) -> Poly {
        if c == 0 {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        Poly::from_codes(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    fn add_impl(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::from_codes(f, out)
    }

    fn sub_impl(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Poly::from_codes(f, out)
    }

    fn mul_impl(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        if f.is_prime_field() {
            let p = f.characteristic() as u64;
            let mut acc = vec![0u64; n];
            // p < 2^20, so each product is below 2^40 and a flush every 2^20 terms keeps u64 safe
            for (i, &a) in self.coeffs.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in other.coeffs.iter().enumerate() {
                    acc[i + j] += a as u64 * b as u64;
                }
                if i % (1 << 16) == (1 << 16) - 1 {
                    acc.iter_mut().for_each(|c| *c %= p);
                }
            }
            return Poly::from_codes(f, acc.into_iter().map(|c| (c % p) as u32).collect());
        }
        let mut out = vec![0u32; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_codes(f, out)
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        Ok(self.add_impl(other))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        Ok(self.sub_impl(other))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        Ok(self.mul_impl(other))
    }

    /// Quotient and remainder with `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check_same(divisor)?;
        let dd = divisor.deg().ok_or(Error::DivisionByZero)?;
        let f = &self.field;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv_lead = f.inv(divisor.lead()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u32; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let t = f.mul(c, inv_lead);
            quot[i - dd] = t;
            let shift = i - dd;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                if d != 0 {
                    rem[shift + j] = f.sub(rem[shift + j], f.mul(t, d));
                }
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_codes(f, quot), Poly::from_codes(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        self.divrem(divisor).map(|(_, r)| r)
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub(crate) fn exact_div(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.divrem(divisor).expect("nonzero divisor in same field");
        assert!(r.is_zero(), "exact division left a remainder");
        q
    }

    pub fn divides(&self, other: &Poly) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
            .collect();
        Poly::from_codes(f, out)
    }

    /// Horner evaluation at an element code of the coefficient field.
    pub fn eval_code(&self, a: u32) -> u32 {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, a), c))
    }

    /// Evaluation at an element of the coefficient field or of an extension of it.
    pub fn eval(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.field().same(&self.field) {
            return Ok(self.field.element(self.eval_code(a.code())));
        }
        let emb = Embedding::new(&self.field, a.field())?;
        Ok(a.field().element(self.eval_embedded(&emb, a.code())))
    }

    pub(crate) fn eval_embedded(&self, emb: &Embedding, a: u32) -> u32 {
        let t = emb.target();
        self.coeffs.iter().rev().fold(0, |acc, &c| t.add(t.mul(acc, a), emb.apply(c)))
    }

    /// The same polynomial with coefficients mapped through an embedding.
    pub fn embed(&self, emb: &Embedding) -> Poly {
        Poly::from_codes(emb.target(), self.coeffs.iter().map(|&c| emb.apply(c)).collect())
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Poly) -> Result<Poly> {
        self.check_same(inner)?;
        let f = &self.field;
        let mut acc = Poly::zero(f);
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(f, c);
        }
        Ok(acc)
    }

    /// `sum_i c_i num^i den^(m-i)` for `m >= deg self`: the homogenized substitution
    /// of `num/den` into `self`, taken with formal degree `m`.
    pub fn homogeneous_compose(&self, m: usize, num: &Poly, den: &Poly) -> Poly {
        debug_assert!(self.deg().is_none_or(|d| d <= m));
        let f = &self.field;
        let mut num_pows = Vec::with_capacity(m + 1);
        let mut den_pows = Vec::with_capacity(m + 1);
        num_pows.push(Poly::one(f));
        den_pows.push(Poly::one(f));
        for i in 1..=m {
            num_pows.push(&num_pows[i - 1] * num);
            den_pows.push(&den_pows[i - 1] * den);
        }
        let mut acc = Poly::zero(f);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                acc = &acc + &(&num_pows[i] * &den_pows[m - i]).scale(c);
            }
        }
        acc
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self^e mod m` by square-and-multiply over an arbitrary-precision exponent.
    pub fn pow_mod(&self, e: &BigUint, m: &Poly) -> Result<Poly> {
        self.check_same(m)?;
        match m.deg() {
            None | Some(0) => return Err(Error::ZeroModulus),
            _ => {}
        }
        let base = self.rem(m)?;
        let mut acc = Poly::one(&self.field);
        for i in (0..e.bits()).rev() {
            acc = (&acc * &acc).rem(m)?;
            if e.bit(i) {
                acc = (&acc * &base).rem(m)?;
            }
        }
        Ok(acc)
    }

    pub fn pow_mod_u64(&self, e: u64, m: &Poly) -> Result<Poly> {
        self.pow_mod(&BigUint::from(e), m)
    }

    /// Reciprocal `x^m self(1/x)` with formal degree `m >= deg self`.
    pub fn reciprocal(&self, m: usize) -> Poly {
        let mut c = vec![0u32; m + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            c[m - i] = a;
        }
        Poly::from_codes(&self.field, c)
    }

    /// `self(x + t)`.
    pub fn shift(&self, t: u32) -> Poly {
        let f = &self.field;
        self.compose(&Poly::linear(f, 1, t)).expect("same field")
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        self.try_add(rhs).expect("polynomials over different fields")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        self.try_sub(rhs).expect("polynomials over different fields")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        self.try_mul(rhs).expect("polynomials over different fields")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::from_codes(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format_poly_human(self, 'x'))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) over GF({})", self, self.field.label())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Poly", 2)?;
        st.serialize_field("coeffs", &crate::text::format_poly_coeffs(self))?;
        st.serialize_field("human", &crate::text::format_poly_human(self, 'x'))?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u64) -> Field {
        Field::new(p, 1).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let f2 = gf(2);
        let xp1 = Poly::from_ints(&f2, &[1, 1]);
        assert_eq!(&xp1 * &xp1, Poly::from_ints(&f2, &[1, 0, 1]));

        let f3 = gf(3);
        let (q, r) = Poly::from_ints(&f3, &[-1, 0, 0, 0, 1])
            .divrem(&Poly::from_ints(&f3, &[-1, 0, 1]))
            .unwrap();
        assert_eq!(q, Poly::from_ints(&f3, &[1, 0, 1]));
        assert!(r.is_zero());

        let f5 = gf(5);
        let prod = &Poly::from_ints(&f5, &[2, 1]) * &Poly::from_ints(&f5, &[3, 1]);
        assert_eq!(prod, Poly::from_ints(&f5, &[1, 0, 1]));
    }

    #[test]
    fn divrem_errors() {
        let f3 = gf(3);
        let a = Poly::x(&f3);
        assert_eq!(a.divrem(&Poly::zero(&f3)).unwrap_err(), Error::DivisionByZero);
        let b = Poly::x(&gf(5));
        assert!(matches!(a.divrem(&b), Err(Error::FieldMismatch(_, _))));
        assert!(matches!(a.try_mul(&b), Err(Error::FieldMismatch(_, _))));
    }

    #[test]
    fn gcd_examples() {
        let f3 = gf(3);
        let a = Poly::from_ints(&f3, &[-1, 0, 1]);
        assert_eq!(a.gcd(&a).unwrap(), Poly::from_ints(&f3, &[2, 0, 1]));

        let f2 = gf(2);
        let g = Poly::from_ints(&f2, &[1, 0, 0, 1])
            .gcd(&Poly::from_ints(&f2, &[1, 0, 1]))
            .unwrap();
        assert_eq!(g, Poly::from_ints(&f2, &[1, 1]));

        let f5 = gf(5);
        let h = Poly::from_ints(&f5, &[1, 2, 3]);
        assert_eq!(Poly::zero(&f5).gcd(&h).unwrap(), h.monic());
        assert_eq!(Poly::zero(&f5).gcd(&Poly::zero(&f5)).unwrap_err(), Error::BothZero);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(Poly::from_ints(&gf(2), &[1, 1, 1]).derivative(), Poly::one(&gf(2)));
        assert_eq!(Poly::from_ints(&gf(3), &[0, 1, 0, 1]).derivative(), Poly::one(&gf(3)));
        assert_eq!(
            Poly::from_ints(&gf(5), &[4, 3, 1]).derivative(),
            Poly::from_ints(&gf(5), &[3, 2])
        );
    }

    #[test]
    fn eval_examples() {
        let f3 = gf(3);
        let p = Poly::from_ints(&f3, &[1, 0, 1]);
        assert_eq!(p.eval(&f3.element(1)).unwrap(), f3.element(2));
        assert!(Poly::zero(&f3).eval(&f3.element(2)).unwrap().is_zero());
        // GF(9) = GF(3)[t]/(t^2+1): the generator t is a root of x^2+1
        let f9 = Field::new(3, 2).unwrap();
        let t = f9.element_from_coords(&[0, 1]).unwrap();
        assert!(p.eval(&t).unwrap().is_zero());
        let one_plus_t = f9.element_from_coords(&[1, 1]).unwrap();
        // (1+t)^2 + 1 = 1 + 2t + t^2 + 1 = 1 + 2t
        assert_eq!(p.eval(&one_plus_t).unwrap().coords(), vec![1, 2]);
    }

    #[test]
    fn pow_mod_examples() {
        let f3 = gf(3);
        let x = Poly::x(&f3);
        let m = Poly::from_ints(&f3, &[1, 0, 1]);
        assert_eq!(x.pow_mod_u64(4, &m).unwrap(), Poly::one(&f3));
        assert_eq!(x.pow_mod_u64(1, &m).unwrap(), x);
        assert_eq!(x.pow_mod_u64(0, &m).unwrap(), Poly::one(&f3));
        assert_eq!(x.pow_mod_u64(3, &Poly::one(&f3)).unwrap_err(), Error::ZeroModulus);
        assert_eq!(x.pow_mod_u64(3, &Poly::zero(&f3)).unwrap_err(), Error::ZeroModulus);
    }

    #[test]
    fn pow_mod_big_exponent() {
        // x^(q^n) = x mod f for f irreducible of degree n, here with q^n far beyond u64
        let f2 = gf(2);
        let x = Poly::x(&f2);
        let f = Poly::from_ints(&f2, &[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]); // x^15+x+1
        assert!(is_irreducible(&f).unwrap());
        let e = BigUint::from(2u32).pow(15 * 5);
        assert_eq!(x.pow_mod(&e, &f).unwrap(), x);
    }

    #[test]
    fn homogeneous_compose_matches_rational_substitution() {
        let f5 = gf(5);
        // f = y^2 + 1 at y = (x^2+1)/x, weight x^2: (x^2+1)^2 + x^2
        let f = Poly::from_ints(&f5, &[1, 0, 1]);
        let g = Poly::from_ints(&f5, &[1, 0, 1]);
        let h = Poly::x(&f5);
        assert_eq!(f.homogeneous_compose(2, &g, &h), Poly::from_ints(&f5, &[1, 0, 3, 0, 1]));
        assert_eq!(f.homogeneous_compose(3, &g, &h), Poly::from_ints(&f5, &[0, 1, 0, 3, 0, 1]));
    }

    #[test]
    fn degree_marker() {
        let f2 = gf(2);
        assert_eq!(Poly::zero(&f2).degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
        assert_eq!(Poly::x(&f2).degree(), Degree::Finite(1));
    }

    fn arb_poly(p: u64, max_len: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(0..p as u32, 0..max_len).prop_map(move |c| Poly::from_codes(&gf(p), c))
    }

    proptest! {
        #[test]
        fn divrem_roundtrip(a in arb_poly(7, 12), b in arb_poly(7, 6)) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.deg().is_none_or(|d| d < b.deg().unwrap()));
        }

        #[test]
        fn gcd_divides_both(a in arb_poly(5, 8), b in arb_poly(5, 8)) {
            prop_assume!(!(a.is_zero() && b.is_zero()));
            let g = a.gcd(&b).unwrap();
            prop_assert!(g.is_monic());
            prop_assert!(g.divides(&a).unwrap() && g.divides(&b).unwrap());
        }

        #[test]
        fn derivative_is_a_derivation(a in arb_poly(3, 8), b in arb_poly(3, 8)) {
            let lhs = (&a * &b).derivative();
            let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
