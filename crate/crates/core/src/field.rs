//! Exact arithmetic in GF(p^k).
//!
//! Elements are stored as packed codes: the coordinates `c_0, ..., c_{k-1}` in
//! the polynomial basis `1, t, ..., t^{k-1}` become the integer
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. A [`Field`] is a cheap handle to shared,
//! immutable field data; polynomials and expressions store codes plus one handle.
//!
//! The defining modulus of GF(p^k) is the least monic irreducible polynomial of
//! degree k over GF(p), comparing coefficient tuples lexicographically from the
//! constant term upward. Two fields with the same `(p, k)` are therefore identical,
//! and [`Field::new`] hands out the same shared instance for repeated requests.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::monic_irreducibles;

/// Largest field order accepted at construction.
pub const MAX_ORDER: u64 = 1 << 20;

/// Full addition/multiplication tables are built for extension fields up to this order.
const TABLE_ORDER: u32 = 256;
/// Inverse tables are built up to this order.
const INV_TABLE_ORDER: u32 = 1 << 16;

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
}

struct FieldData {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    pow_p: Vec<u32>,
    tables: Option<Tables>,
    inv: Option<Vec<u32>>,
}

/// Handle to the finite field GF(p^k).
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

fn registry() -> &'static Mutex<HashMap<(u32, u32), Field>> {
    static REGISTRY: OnceLock<Mutex<HashMap<(u32, u32), Field>>> = OnceLock::new();
    REGISTRY.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// GF(p^k) with the canonical modulus.
    pub fn new(p: u64, k: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::SizeBoundExceeded(format!("GF({p}^{k}) exceeds 2^20 elements")))?;
        let key = (p as u32, k);
        if let Some(f) = registry().lock().expect("field registry poisoned").get(&key) {
            return Ok(f.clone());
        }
        let field = if k == 1 {
            Field::build(p as u32, 1, vec![0, 1])
        } else {
            let base = Field::new(p, 1)?;
            let modulus = monic_irreducibles(&base, k as usize)?
                .next()
                .expect("irreducible polynomials exist in every degree");
            Field::build(p as u32, k, modulus.codes().to_vec())
        };
        debug_assert_eq!(field.order(), q);
        let mut reg = registry().lock().expect("field registry poisoned");
        Ok(reg.entry(key).or_insert(field).clone())
    }

    /// The field with `q` elements, `q` a prime power.
    pub fn from_order(q: u64) -> Result<Field> {
        if q < 2 {
            return Err(Error::NotPrime(q));
        }
        let mut p = 2u64;
        while !q.is_multiple_of(p) {
            p += 1;
        }
        let mut rest = q;
        let mut k = 0u32;
        while rest.is_multiple_of(p) {
            rest /= p;
            k += 1;
        }
        if rest != 1 {
            return Err(Error::NotPrime(q));
        }
        Field::new(p, k)
    }

    fn build(p: u32, k: u32, modulus: Vec<u32>) -> Field {
        let mut pow_p = Vec::with_capacity(k as usize);
        let mut acc = 1u32;
        for _ in 0..k {
            pow_p.push(acc);
            acc = acc.saturating_mul(p);
        }
        let q = p.pow(k);
        let mut data = FieldData { p, k, q, modulus, pow_p, tables: None, inv: None };
        if k > 1 && q <= TABLE_ORDER {
            let f = Field(Arc::new(data));
            let n = q as usize;
            let mut add = vec![0u32; n * n];
            let mut mul = vec![0u32; n * n];
            for a in 0..q {
                for b in 0..q {
                    add[a as usize * n + b as usize] = f.add_direct(a, b);
                    mul[a as usize * n + b as usize] = f.mul_direct(a, b);
                }
            }
            data = Arc::try_unwrap(f.0).ok().expect("sole owner during construction");
            data.tables = Some(Tables { add, mul });
        }
        if q <= INV_TABLE_ORDER {
            let f = Field(Arc::new(data));
            let mut inv = vec![0u32; q as usize];
            for a in 1..q {
                inv[a as usize] = f.pow(a, (q - 2) as u64);
            }
            data = Arc::try_unwrap(f.0).ok().expect("sole owner during construction");
            data.inv = Some(inv);
        }
        Field(Arc::new(data))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> u64 {
        self.0.q as u64
    }

    /// Coefficients of the defining modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// `"p"` for prime fields, `"p^k"` otherwise.
    pub fn label(&self) -> String {
        if self.0.k == 1 {
            self.0.p.to_string()
        } else {
            format!("{}^{}", self.0.p, self.0.k)
        }
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.k == 1
    }

    pub fn same(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.k == other.0.k)
    }

    pub(crate) fn check_same(&self, other: &Field) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.label(), other.label()))
        }
    }

    pub fn element(&self, code: u32) -> FieldElement {
        assert!(code < self.0.q, "element code {code} out of range for GF({})", self.label());
        FieldElement { field: self.clone(), code }
    }

    /// Element from coordinates in the polynomial basis.
    pub fn element_from_coords(&self, coords: &[u32]) -> Result<FieldElement> {
        if coords.len() != self.0.k as usize || coords.iter().any(|&c| c >= self.0.p) {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates in [0, {})",
                self.0.k, self.0.p
            )));
        }
        Ok(self.element(self.code_of_digits(coords)))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.0.p as i64) as u32
    }

    pub(crate) fn digits(&self, a: u32) -> [u32; 20] {
        let mut out = [0u32; 20];
        let mut a = a;
        for d in out.iter_mut().take(self.0.k as usize) {
            *d = a % self.0.p;
            a /= self.0.p;
        }
        out
    }

    pub(crate) fn code_of_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().zip(&self.0.pow_p).map(|(d, w)| d * w).sum()
    }

    /// Coordinates of an element code.
    pub fn coords(&self, a: u32) -> Vec<u32> {
        self.digits(a)[..self.0.k as usize].to_vec()
    }

    /// Codes of all elements, in coordinate-lexicographic order (constant coordinate compared first).
    pub fn lex_elements(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.0.q).map(move |r| self.lex_element(r))
    }

    /// The element of rank `r` in coordinate-lexicographic order.
    pub(crate) fn lex_element(&self, r: u32) -> u32 {
        if self.0.k == 1 {
            return r;
        }
        let d = self.digits(r);
        let k = self.0.k as usize;
        let mut rev = [0u32; 20];
        for i in 0..k {
            rev[i] = d[k - 1 - i];
        }
        self.code_of_digits(&rev[..k])
    }

    /// Rank of an element code in coordinate-lexicographic order.
    pub(crate) fn lex_rank(&self, a: u32) -> u32 {
        // digit reversal is an involution
        self.lex_element(a)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let f = &*self.0;
        if f.k == 1 {
            let s = a + b;
            return if s >= f.p { s - f.p } else { s };
        }
        if f.p == 2 {
            return a ^ b;
        }
        if let Some(t) = &f.tables {
            return t.add[(a * f.q + b) as usize];
        }
        self.add_direct(a, b)
    }

    fn add_direct(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let k = self.0.k as usize;
        let mut out = [0u32; 20];
        for i in 0..k {
            out[i] = (da[i] + db[i]) % self.0.p;
        }
        self.code_of_digits(&out[..k])
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let f = &*self.0;
        if a == 0 {
            return 0;
        }
        if f.k == 1 {
            return f.p - a;
        }
        if f.p == 2 {
            return a;
        }
        let d = self.digits(a);
        let k = f.k as usize;
        let mut out = [0u32; 20];
        for i in 0..k {
            out[i] = (f.p - d[i]) % f.p;
        }
        self.code_of_digits(&out[..k])
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let f = &*self.0;
        if f.k == 1 {
            return ((a as u64 * b as u64) % f.p as u64) as u32;
        }
        if let Some(t) = &f.tables {
            return t.mul[(a * f.q + b) as usize];
        }
        self.mul_direct(a, b)
    }

    fn mul_direct(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let f = &*self.0;
        let k = f.k as usize;
        let p = f.p as u64;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = [0u64; 40];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] += da[i] as u64 * db[j] as u64;
            }
        }
        for c in prod.iter_mut().take(2 * k - 1) {
            *c %= p;
        }
        for deg in (k..2 * k - 1).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for i in 0..k {
                let m = f.modulus[i] as u64;
                prod[deg - k + i] = (prod[deg - k + i] + (p - c) * m) % p;
            }
        }
        let mut out = [0u32; 20];
        for i in 0..k {
            out[i] = prod[i] as u32;
        }
        self.code_of_digits(&out[..k])
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if let Some(t) = &self.0.inv {
            return Some(t[a as usize]);
        }
        Some(self.pow(a, self.0.q as u64 - 2))
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.0.p as u64)
    }

    /// Square test for a code; zero counts as a square.
    pub(crate) fn is_square_code(&self, a: u32) -> bool {
        if a == 0 || self.0.p == 2 {
            return true;
        }
        self.pow(a, (self.0.q as u64 - 1) / 2) == 1
    }

    /// Least nonsquare in coordinate-lexicographic order (odd characteristic).
    pub fn least_nonsquare(&self) -> Option<u32> {
        if self.0.p == 2 {
            return None;
        }
        self.lex_elements().find(|&a| a != 0 && !self.is_square_code(a))
    }

    /// Inverse Frobenius `a -> a^(1/p)`.
    pub(crate) fn pth_root(&self, a: u32) -> u32 {
        self.pow(a, (self.0.q / self.0.p) as u64)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.k.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.label())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// An element of a specific finite field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    code: u32,
}

impl FieldElement {
    pub fn zero(field: &Field) -> Self {
        field.element(0)
    }

    pub fn one(field: &Field) -> Self {
        field.element(1)
    }

    pub fn from_int(field: &Field, v: i64) -> Self {
        field.element(field.from_int(v))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    pub fn coords(&self) -> Vec<u32> {
        self.field.coords(self.code)
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn lift(&self, other: &Self, code: u32) -> Result<Self> {
        self.field.check_same(&other.field)?;
        Ok(FieldElement { field: self.field.clone(), code })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.lift(other, self.field.add(self.code, other.code))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.lift(other, self.field.sub(self.code, other.code))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.lift(other, self.field.mul(self.code, other.code))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.field.check_same(&other.field)?;
        let code = self.field.div(self.code, other.code).ok_or(Error::DivisionByZero)?;
        Ok(FieldElement { field: self.field.clone(), code })
    }

    pub fn neg(&self) -> Self {
        FieldElement { field: self.field.clone(), code: self.field.neg(self.code) }
    }

    pub fn inv(&self) -> Result<Self> {
        let code = self.field.inv(self.code).ok_or(Error::DivisionByZero)?;
        Ok(FieldElement { field: self.field.clone(), code })
    }

    pub fn pow(&self, e: u64) -> Self {
        FieldElement { field: self.field.clone(), code: self.field.pow(self.code, e) }
    }

    /// Quadratic-residue test: `s^((q-1)/2) = 1` for odd q, always true for even q.
    pub fn is_square(&self) -> Result<bool> {
        if self.code == 0 {
            return Err(Error::ZeroInput);
        }
        Ok(self.field.is_square_code(self.code))
    }

    /// Image under the fixed embedding into `target`.
    pub fn embed(&self, target: &Field) -> Result<FieldElement> {
        let emb = Embedding::new(&self.field, target)?;
        Ok(target.element(emb.apply(self.code)))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format_element(&self.field, self.code))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF({})", self, self.field.label())
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The fixed embedding GF(p^k) -> GF(p^(km)).
///
/// The generator of the source (the class of `t` modulo the source modulus) is sent
/// to the least root of the source modulus in the target, in coordinate-lexicographic order.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    generator_powers: Vec<u32>,
}

impl Embedding {
    pub fn new(source: &Field, target: &Field) -> Result<Embedding> {
        let ok = source.characteristic() == target.characteristic()
            && target.degree().is_multiple_of(source.degree());
        if !ok {
            return Err(Error::NoEmbedding { from: source.label(), to: target.label() });
        }
        let k = source.degree() as usize;
        let theta = if k == 1 {
            0
        } else {
            let modulus = source.modulus();
            target
                .lex_elements()
                .find(|&t| {
                    let mut acc = 0u32;
                    for &c in modulus.iter().rev() {
                        acc = target.add(target.mul(acc, t), c);
                    }
                    acc == 0
                })
                .ok_or_else(|| Error::NoEmbedding { from: source.label(), to: target.label() })?
        };
        let mut generator_powers = Vec::with_capacity(k);
        let mut acc = 1u32;
        for _ in 0..k {
            generator_powers.push(acc);
            acc = target.mul(acc, theta);
        }
        Ok(Embedding { source: source.clone(), target: target.clone(), generator_powers })
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn apply(&self, code: u32) -> u32 {
        let d = self.source.digits(code);
        let mut acc = 0u32;
        for (i, &g) in self.generator_powers.iter().enumerate() {
            if d[i] != 0 {
                acc = self.target.add(acc, self.target.mul(d[i], g));
            }
        }
        acc
    }
}
