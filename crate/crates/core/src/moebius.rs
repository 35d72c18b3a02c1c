//! Moebius transformations over GF(q) and quadratic rational expressions.
//!
//! A quadratic rational expression `g/h` can be composed on either side with affine
//! maps and the inversion `x -> 1/x` until it reaches `x + sigma/x`, or `x^2` in
//! characteristic two. [`reduce_canonical`] performs that reduction one elementary
//! step at a time and records every step in a [`ReductionTrail`] that can be replayed.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::poly::Poly;

/// `x -> (a x + b) / (c x + d)`, stored with its first nonzero entry scaled to 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MoebiusMap {
    field: Field,
    m: [u32; 4],
}

impl MoebiusMap {
    pub fn from_codes(field: &Field, a: u32, b: u32, c: u32, d: u32) -> Result<MoebiusMap> {
        let det = field.sub(field.mul(a, d), field.mul(b, c));
        if det == 0 {
            return Err(Error::SingularMap);
        }
        let lead = [a, b, c, d].into_iter().find(|&e| e != 0).expect("nonsingular");
        let s = field.inv(lead).expect("nonzero");
        Ok(MoebiusMap { field: field.clone(), m: [a, b, c, d].map(|e| field.mul(e, s)) })
    }

    pub fn new(a: &FieldElement, b: &FieldElement, c: &FieldElement, d: &FieldElement) -> Result<MoebiusMap> {
        let f = a.field();
        for e in [b, c, d] {
            f.check_same(e.field())?;
        }
        MoebiusMap::from_codes(f, a.code(), b.code(), c.code(), d.code())
    }

    pub fn identity(field: &Field) -> MoebiusMap {
        MoebiusMap { field: field.clone(), m: [1, 0, 0, 1] }
    }

    pub fn inversion(field: &Field) -> MoebiusMap {
        MoebiusMap { field: field.clone(), m: [0, 1, 1, 0] }
    }

    /// `x -> alpha x + beta`.
    pub fn affine(field: &Field, alpha: u32, beta: u32) -> Result<MoebiusMap> {
        MoebiusMap::from_codes(field, alpha, beta, 0, 1)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Entries `[a, b, c, d]`.
    pub fn entries(&self) -> [u32; 4] {
        self.m
    }

    /// `self ∘ other`, i.e. `x -> self(other(x))`.
    pub fn compose(&self, other: &MoebiusMap) -> Result<MoebiusMap> {
        self.field.check_same(&other.field)?;
        let f = &self.field;
        let [a, b, c, d] = self.m;
        let [e, g, h, k] = other.m;
        let dot = |x: u32, y: u32, z: u32, w: u32| f.add(f.mul(x, y), f.mul(z, w));
        MoebiusMap::from_codes(f, dot(a, e, b, h), dot(a, g, b, k), dot(c, e, d, h), dot(c, g, d, k))
    }

    pub fn inverse(&self) -> MoebiusMap {
        let f = &self.field;
        let [a, b, c, d] = self.m;
        MoebiusMap::from_codes(f, d, f.neg(b), f.neg(c), a).expect("inverse of an invertible map")
    }

    /// Action on the projective line; `None` stands for the point at infinity.
    pub fn apply(&self, x: Option<u32>) -> Option<u32> {
        let f = &self.field;
        let [a, b, c, d] = self.m;
        let (num, den) = match x {
            Some(x) => (f.add(f.mul(a, x), b), f.add(f.mul(c, x), d)),
            None => (a, c),
        };
        f.div(num, den)
    }

    /// Numerator `a x + b` and denominator `c x + d`.
    pub fn as_rational(&self) -> (Poly, Poly) {
        let [a, b, c, d] = self.m;
        (Poly::linear(&self.field, a, b), Poly::linear(&self.field, c, d))
    }

    /// Order in PGL(2,q).
    pub fn order(&self) -> usize {
        let id = MoebiusMap::identity(&self.field);
        let mut cur = self.clone();
        let mut n = 1;
        while cur != id {
            cur = cur.compose(self).expect("same field");
            n += 1;
        }
        n
    }

    /// Every element of PGL(2,q), each in its normalized representation.
    pub fn all(field: &Field) -> impl Iterator<Item = MoebiusMap> + '_ {
        let q = field.order() as u32;
        let lead_one = (0..q).flat_map(move |b| (0..q).flat_map(move |c| (0..q).map(move |d| (1, b, c, d))));
        let lead_zero = (1..q).flat_map(move |c| (0..q).map(move |d| (0, 1, c, d)));
        lead_one
            .chain(lead_zero)
            .filter_map(move |(a, b, c, d)| MoebiusMap::from_codes(field, a, b, c, d).ok())
    }
}

impl fmt::Debug for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format_moebius(self))
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format_moebius(self))
    }
}

impl Serialize for MoebiusMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&crate::text::format_moebius(self))
    }
}

/// `R(x) = g(x)/h(x)` with `g, h` coprime and `max(deg g, deg h) = 2`.
///
/// The pair is normalized so that `h` is monic when it has positive degree, and `g`
/// is monic otherwise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadRationalExpr {
    g: Poly,
    h: Poly,
}

impl QuadRationalExpr {
    pub fn new(g: &Poly, h: &Poly) -> Result<QuadRationalExpr> {
        g.check_same(h)?;
        let max_deg = g.deg().max(h.deg());
        if max_deg != Some(2) {
            return Err(Error::DegenerateResult(format!("max(deg g, deg h) = {max_deg:?}, expected 2")));
        }
        if !g.gcd(h)?.is_one() {
            return Err(Error::DegenerateResult("numerator and denominator share a factor".into()));
        }
        let f = g.field();
        let lead = if h.deg().unwrap_or(0) >= 1 { h.lead() } else { g.lead() };
        let s = f.inv(lead).expect("nonzero leading coefficient");
        Ok(QuadRationalExpr { g: g.scale(s), h: h.scale(s) })
    }

    /// `(x^2 + sigma) / x`.
    pub fn sigma_form(sigma: &FieldElement) -> Result<QuadRationalExpr> {
        if sigma.is_zero() {
            return Err(Error::ZeroSigma);
        }
        let f = sigma.field();
        QuadRationalExpr::new(&Poly::from_codes(f, vec![sigma.code(), 0, 1]), &Poly::x(f))
    }

    /// `x^2 / 1`.
    pub fn x_squared(field: &Field) -> QuadRationalExpr {
        QuadRationalExpr::new(&Poly::monomial(field, 1, 2), &Poly::one(field)).expect("valid")
    }

    pub fn field(&self) -> &Field {
        self.g.field()
    }

    pub fn numerator(&self) -> &Poly {
        &self.g
    }

    pub fn denominator(&self) -> &Poly {
        &self.h
    }

    /// `[g0, g1, g2]`.
    pub fn g_coeffs(&self) -> [u32; 3] {
        [self.g.coeff(0), self.g.coeff(1), self.g.coeff(2)]
    }

    /// `[h0, h1, h2]`.
    pub fn h_coeffs(&self) -> [u32; 3] {
        [self.h.coeff(0), self.h.coeff(1), self.h.coeff(2)]
    }

    /// The cross product `(a, b, c) = (g2 h1 - g1 h2, g0 h2 - g2 h0, g1 h0 - g0 h1)`.
    pub fn cross_product(&self) -> [u32; 3] {
        let f = self.field();
        let [g0, g1, g2] = self.g_coeffs();
        let [h0, h1, h2] = self.h_coeffs();
        let det = |a: u32, b: u32, c: u32, d: u32| f.sub(f.mul(a, b), f.mul(c, d));
        [det(g2, h1, g1, h2), det(g0, h2, g2, h0), det(g1, h0, g0, h1)]
    }

    /// `g' h - g h'`.
    pub fn wronskian(&self) -> Poly {
        &(&self.g.derivative() * &self.h) - &(&self.g * &self.h.derivative())
    }

    /// Characteristic two with `g' = h' = 0`, i.e. `g/h` is a rational function of `x^2`.
    pub fn is_in_x_squared(&self) -> bool {
        self.field().characteristic() == 2 && self.g.derivative().is_zero() && self.h.derivative().is_zero()
    }

    /// `R ∘ m`.
    pub fn apply_pre(&self, m: &MoebiusMap) -> Result<QuadRationalExpr> {
        self.field().check_same(m.field())?;
        let (num, den) = m.as_rational();
        let g = self.g.homogeneous_compose(2, &num, &den);
        let h = self.h.homogeneous_compose(2, &num, &den);
        QuadRationalExpr::new(&g, &h)
    }

    /// `m ∘ R`.
    pub fn apply_post(&self, m: &MoebiusMap) -> Result<QuadRationalExpr> {
        self.field().check_same(m.field())?;
        let [a, b, c, d] = m.entries();
        let g = &self.g.scale(a) + &self.h.scale(b);
        let h = &self.g.scale(c) + &self.h.scale(d);
        QuadRationalExpr::new(&g, &h)
    }
}

impl fmt::Debug for QuadRationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over GF({})", crate::text::format_expr_human(self), self.field().label())
    }
}

impl fmt::Display for QuadRationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format_expr_human(self))
    }
}

impl Serialize for QuadRationalExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("QuadRationalExpr", 2)?;
        st.serialize_field("expr", &crate::text::format_expr(self))?;
        st.serialize_field("human", &crate::text::format_expr_human(self))?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Pre,
    Post,
}

/// One elementary move of the reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "step")]
pub enum Step {
    /// `R(x) -> R(alpha x + beta)`.
    PreAffine { alpha: FieldElement, beta: FieldElement },
    /// `R(x) -> R(1/x)`.
    PreInversion,
    /// `R -> alpha R + beta`.
    PostAffine { alpha: FieldElement, beta: FieldElement },
    /// `R -> 1/R`.
    PostInversion,
}

impl Step {
    pub fn side(&self) -> Side {
        match self {
            Step::PreAffine { .. } | Step::PreInversion => Side::Pre,
            Step::PostAffine { .. } | Step::PostInversion => Side::Post,
        }
    }

    pub fn map(&self, field: &Field) -> MoebiusMap {
        match self {
            Step::PreAffine { alpha, beta } | Step::PostAffine { alpha, beta } => {
                MoebiusMap::affine(field, alpha.code(), beta.code()).expect("alpha is nonzero")
            }
            Step::PreInversion | Step::PostInversion => MoebiusMap::inversion(field),
        }
    }

    pub fn apply(&self, r: &QuadRationalExpr) -> Result<QuadRationalExpr> {
        let m = self.map(r.field());
        match self.side() {
            Side::Pre => r.apply_pre(&m),
            Side::Post => r.apply_post(&m),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionTrail {
    pub start: QuadRationalExpr,
    pub steps: Vec<Step>,
    pub end: QuadRationalExpr,
}

impl ReductionTrail {
    /// Replays every step from `start`.
    pub fn replay(&self) -> Result<QuadRationalExpr> {
        self.steps.iter().try_fold(self.start.clone(), |r, s| s.apply(&r))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "sigma")]
pub enum CanonicalForm {
    XPlusSigmaOverX(FieldElement),
    XSquared,
}

impl CanonicalForm {
    pub fn expr(&self, field: &Field) -> QuadRationalExpr {
        match self {
            CanonicalForm::XPlusSigmaOverX(s) => QuadRationalExpr::sigma_form(s).expect("sigma nonzero"),
            CanonicalForm::XSquared => QuadRationalExpr::x_squared(field),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SigmaClass {
    SquareClass,
    NonSquareClass,
    XSquaredClass,
}

struct Reducer {
    cur: QuadRationalExpr,
    steps: Vec<Step>,
}

impl Reducer {
    fn push(&mut self, step: Step) {
        self.cur = step.apply(&self.cur).expect("invertible maps keep the expression quadratic");
        self.steps.push(step);
    }

    fn post_affine(&mut self, alpha: u32, beta: u32) {
        if (alpha, beta) != (1, 0) {
            let f = self.cur.field().clone();
            self.push(Step::PostAffine { alpha: f.element(alpha), beta: f.element(beta) });
        }
    }

    fn pre_affine(&mut self, alpha: u32, beta: u32) {
        if (alpha, beta) != (1, 0) {
            let f = self.cur.field().clone();
            self.push(Step::PreAffine { alpha: f.element(alpha), beta: f.element(beta) });
        }
    }

    /// `1 / (R - g2/h2)`, which removes the quadratic term of the denominator.
    fn kill_h2(&mut self) {
        let f = self.cur.field().clone();
        let [_, _, g2] = self.cur.g_coeffs();
        let [_, _, h2] = self.cur.h_coeffs();
        let t = f.div(g2, h2).expect("h2 nonzero");
        self.post_affine(1, f.neg(t));
        self.push(Step::PostInversion);
    }
}

/// Brings `r` to `(x^2 + sigma)/x`, or to `x^2/1` in characteristic two when
/// `g' = h' = 0`, handling each case separately.
pub fn reduce_canonical(r: &QuadRationalExpr) -> (CanonicalForm, ReductionTrail) {
    let f = r.field().clone();
    let mut red = Reducer { cur: r.clone(), steps: Vec::new() };
    let mixed = |e: &QuadRationalExpr| {
        let [g0, g1, g2] = e.g_coeffs();
        let [h0, h1, h2] = e.h_coeffs();
        (f.mul(g2, h1) == f.mul(g1, h2), f.mul(g1, h0) == f.mul(g0, h1))
    };

    // g2 h1 = g1 h2 and g1 h0 = g0 h1 force g1 = h1 = 0
    if mixed(&red.cur) == (true, true) {
        if f.characteristic() != 2 {
            red.pre_affine(1, 1);
        } else {
            if red.cur.h_coeffs()[2] != 0 {
                red.kill_h2();
            }
            // now h = h0 and g = g2 x^2 + g0: (h0/g2)(g/h - g0/h0) = x^2
            let [g0, _, g2] = red.cur.g_coeffs();
            let [h0, _, _] = red.cur.h_coeffs();
            red.post_affine(f.div(h0, g2).expect("g2 nonzero"), f.neg(f.div(g0, g2).expect("g2 nonzero")));
            return finish(r, red, CanonicalForm::XSquared);
        }
    }

    if mixed(&red.cur).0 {
        red.push(Step::PreInversion);
    }
    if red.cur.h_coeffs()[2] != 0 {
        red.kill_h2();
    }
    // now h = h1 x + h0 with h1 != 0; normalization keeps h monic
    let [h0, h1, _] = red.cur.h_coeffs();
    red.pre_affine(1, f.neg(f.div(h0, h1).expect("h1 nonzero")));
    let [_, _, g2] = red.cur.g_coeffs();
    red.post_affine(f.inv(g2).expect("g2 nonzero"), 0);
    let [_, g1, _] = red.cur.g_coeffs();
    red.post_affine(1, f.neg(g1));
    let sigma = f.element(red.cur.g_coeffs()[0]);
    finish(r, red, CanonicalForm::XPlusSigmaOverX(sigma))
}

fn finish(start: &QuadRationalExpr, red: Reducer, form: CanonicalForm) -> (CanonicalForm, ReductionTrail) {
    debug_assert_eq!(red.cur, form.expr(start.field()));
    let trail = ReductionTrail { start: start.clone(), steps: red.steps, end: red.cur };
    (form, trail)
}

/// The class of `r` under pre- and post-composition with Moebius maps: the square
/// class of the discriminant of `g'h - gh'`, or the extra `x^2` class in characteristic two.
pub fn classify_sigma(r: &QuadRationalExpr) -> SigmaClass {
    if r.is_in_x_squared() {
        return SigmaClass::XSquaredClass;
    }
    let f = r.field();
    if f.characteristic() == 2 {
        return SigmaClass::SquareClass;
    }
    let [a, _, _] = r.cross_product();
    let r = if a == 0 { r.apply_pre(&MoebiusMap::inversion(f)).expect("valid") } else { r.clone() };
    let w = r.wronskian();
    let (w0, w1, w2) = (w.coeff(0), w.coeff(1), w.coeff(2));
    let disc = f.sub(f.mul(w1, w1), f.mul(f.from_int(4), f.mul(w2, w0)));
    if f.is_square_code(disc) {
        SigmaClass::SquareClass
    } else {
        SigmaClass::NonSquareClass
    }
}

/// Deterministic representative of a class: `sigma = 1` for squares, the least
/// nonsquare for nonsquares.
pub fn class_representative(class: SigmaClass, field: &Field) -> Option<CanonicalForm> {
    match class {
        SigmaClass::SquareClass => Some(CanonicalForm::XPlusSigmaOverX(FieldElement::one(field))),
        SigmaClass::NonSquareClass => {
            field.least_nonsquare().map(|s| CanonicalForm::XPlusSigmaOverX(field.element(s)))
        }
        SigmaClass::XSquaredClass => (field.characteristic() == 2).then_some(CanonicalForm::XSquared),
    }
}
