//! Invariance under Moebius transformations of order three and four, and under the
//! translation `x -> x + 1` in characteristic `p`.
//!
//! Each case has a kernel `core = N/W`; the invariant polynomials are exactly
//! `F = W^n f(N/W)`, and `f` is recovered by a linear solve over `N^j W^(n-j)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::express_in_basis;
use crate::moebius::MoebiusMap;
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum HigherOrder {
    /// `x -> 1/(1 - x)`.
    Order3,
    /// `x -> 1/(2 - 2x)`, odd characteristic only.
    Order4,
    /// `x -> x + 1`.
    Translation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HigherKernel {
    pub order: HigherOrder,
    pub core: Poly,
    pub weight: Poly,
    /// Order three in characteristic three, where the map is conjugate to a translation.
    pub flagged: bool,
}

impl HigherKernel {
    pub fn new(order: HigherOrder, field: &Field) -> Result<HigherKernel> {
        let p = field.characteristic();
        let (core, weight) = match order {
            HigherOrder::Order3 => (Poly::from_ints(field, &[1, -3, 0, 1]), Poly::from_ints(field, &[0, -1, 1])),
            HigherOrder::Order4 => {
                if p == 2 {
                    return Err(Error::Char2Unsupported);
                }
                let quarter = field.inv(field.from_int(4)).expect("odd characteristic");
                let half = field.inv(field.from_int(2)).expect("odd characteristic");
                let core = Poly::from_codes(field, vec![field.neg(quarter), field.from_int(2), field.from_int(-3), 0, 1]);
                let weight = &Poly::from_ints(field, &[0, -1, 1]) * &Poly::linear(field, 1, field.neg(half));
                (core, weight)
            }
            HigherOrder::Translation => {
                let mut c = vec![0u32; p as usize + 1];
                c[p as usize] = 1;
                c[1] = field.from_int(-1);
                (Poly::from_codes(field, c), Poly::one(field))
            }
        };
        Ok(HigherKernel { order, core, weight, flagged: order == HigherOrder::Order3 && p == 3 })
    }

    /// Degree of `F` per unit degree of `f`.
    pub fn ratio(&self) -> usize {
        self.core.deg().expect("nonzero core")
    }

    /// The Moebius map whose invariants this kernel describes.
    pub fn map(&self) -> MoebiusMap {
        let f = self.core.field();
        let (a, b, c, d) = match self.order {
            HigherOrder::Order3 => (0, 1, f.from_int(-1), 1),
            HigherOrder::Order4 => (0, 1, f.from_int(-2), f.from_int(2)),
            HigherOrder::Translation => (1, 1, 0, 1),
        };
        MoebiusMap::from_codes(f, a, b, c, d).expect("nonsingular")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HigherTransform {
    pub result: Poly,
    /// `deg result < ratio * deg f`, detected empirically.
    pub degree_dropped: bool,
    pub flagged: bool,
}

/// `F = W^n f(N/W)` with `n = deg f`.
pub fn transform_higher(f: &Poly, order: HigherOrder) -> Result<HigherTransform> {
    let k = HigherKernel::new(order, f.field())?;
    let n = f.deg().ok_or(Error::ZeroPolynomial)?;
    let result = f.homogeneous_compose(n, &k.core, &k.weight);
    let degree_dropped = result.deg() != Some(k.ratio() * n);
    Ok(HigherTransform { result, degree_dropped, flagged: k.flagged })
}

pub fn transform_order3(f: &Poly) -> Result<HigherTransform> {
    transform_higher(f, HigherOrder::Order3)
}

pub fn transform_order4(f: &Poly) -> Result<HigherTransform> {
    transform_higher(f, HigherOrder::Order4)
}

pub fn transform_translation(f: &Poly) -> Result<HigherTransform> {
    transform_higher(f, HigherOrder::Translation)
}

/// Order 3: `(x-1)^(3n) F(1/(1-x)) = F(x)`; order 4: `(-1/4)^n (2-2x)^(4n) F(1/(2-2x)) = F(x)`;
/// translation: `F(x+1) = F(x)`.
pub fn is_invariant_higher(big_f: &Poly, order: HigherOrder) -> Result<bool> {
    let field = big_f.field();
    let k = HigherKernel::new(order, field)?;
    if order == HigherOrder::Translation {
        return Ok(big_f.shift(1) == *big_f);
    }
    let r = k.ratio();
    let d = big_f.deg().ok_or(Error::ZeroPolynomial)?;
    if d % r != 0 {
        return Err(Error::DegreeNotMultiple(r));
    }
    let n = d / r;
    let (num, den) = k.map().as_rational();
    let moved = big_f.homogeneous_compose(d, &num, &den);
    // moved = den^(rn) F(1/den); the displayed identities carry an extra scalar
    let scale = match order {
        HigherOrder::Order3 => field.pow(field.from_int(-1), n as u64),
        _ => {
            let quarter = field.inv(field.from_int(4)).expect("odd characteristic");
            field.pow(field.neg(quarter), n as u64)
        }
    };
    Ok(moved.scale(scale) == *big_f)
}

pub fn is_invariant_order3(big_f: &Poly) -> Result<bool> {
    is_invariant_higher(big_f, HigherOrder::Order3)
}

pub fn is_invariant_order4(big_f: &Poly) -> Result<bool> {
    is_invariant_higher(big_f, HigherOrder::Order4)
}

pub fn is_invariant_translation(big_f: &Poly) -> Result<bool> {
    is_invariant_higher(big_f, HigherOrder::Translation)
}

/// Recovers `f` with `transform_higher(f) = F` by solving over the basis `N^j W^(n-j)`.
pub fn reconstruct_higher(big_f: &Poly, order: HigherOrder) -> Result<Poly> {
    if !is_invariant_higher(big_f, order)? {
        return Err(Error::NotInvariant);
    }
    let k = HigherKernel::new(order, big_f.field())?;
    let d = big_f.deg().ok_or(Error::ZeroPolynomial)?;
    if d % k.ratio() != 0 {
        return Err(Error::NoSolution);
    }
    let n = d / k.ratio();
    let basis: Vec<Poly> = (0..=n).map(|j| &k.core.pow(j as u64) * &k.weight.pow((n - j) as u64)).collect();
    let c = express_in_basis(big_f, &basis).ok_or(Error::NoSolution)?;
    let f = Poly::from_codes(big_f.field(), c);
    if transform_higher(&f, order)?.result != *big_f {
        return Err(Error::NoSolution);
    }
    Ok(f)
}

/// `x + m(x) + m(m(x)) + ...` over one full cycle of `m`, as an unreduced
/// `(numerator, denominator)` pair.
pub fn iterate_sum(m: &MoebiusMap) -> (Poly, Poly) {
    let field = m.field();
    let id = MoebiusMap::identity(field);
    let mut num = Poly::zero(field);
    let mut den = Poly::one(field);
    let mut cur = id.clone();
    loop {
        let (a, b) = cur.as_rational();
        num = &(&num * &b) + &(&a * &den);
        den = &den * &b;
        cur = cur.compose(m).expect("same field");
        if cur == id {
            break;
        }
    }
    (num, den)
}

/// `N/W` equals the sum of iterates of the kernel's map, compared after clearing denominators.
pub fn core_is_iterate_sum(k: &HigherKernel) -> bool {
    let (num, den) = iterate_sum(&k.map());
    &num * &k.weight == &den * &k.core
}

/// Some `c` in PGL(2,q) with `c ∘ a ∘ c^-1 = b`, by exhaustive search.
pub fn find_conjugator(a: &MoebiusMap, b: &MoebiusMap) -> Option<MoebiusMap> {
    MoebiusMap::all(a.field()).find(|c| {
        c.compose(a).and_then(|ca| ca.compose(&c.inverse())).map(|x| &x == b).unwrap_or(false)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::random_monic;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u64) -> Field {
        Field::from_order(q).unwrap()
    }

    #[test]
    fn order3_examples() {
        let f7 = gf(7);
        assert!(is_invariant_order3(&Poly::from_ints(&f7, &[1, -3, 0, 1])).unwrap());
        assert!(!is_invariant_order3(&Poly::from_ints(&f7, &[0, 0, 0, 1])).unwrap());
        assert_eq!(is_invariant_order3(&Poly::from_ints(&f7, &[0, 0, 1])), Err(Error::DegreeNotMultiple(3)));
        assert_eq!(transform_order3(&Poly::x(&f7)).unwrap().result, Poly::from_ints(&f7, &[1, -3, 0, 1]));
        let f5 = gf(5);
        assert_eq!(transform_order3(&Poly::from_ints(&f5, &[1, 1])).unwrap().result, Poly::from_ints(&f5, &[1, 1, 1, 1]));
        assert_eq!(transform_order3(&Poly::one(&f5)).unwrap().result, Poly::one(&f5));
        assert_eq!(reconstruct_higher(&Poly::from_ints(&f7, &[1, -3, 0, 1]), HigherOrder::Order3).unwrap(), Poly::x(&f7));
        let f = Poly::from_ints(&f7, &[1, 0, 1]);
        let big_f = transform_order3(&f).unwrap().result;
        assert_eq!(reconstruct_higher(&big_f, HigherOrder::Order3).unwrap(), f);
        assert!(transform_order3(&Poly::x(&gf(3))).unwrap().flagged);
    }

    #[test]
    fn order4_examples() {
        let f5 = gf(5);
        assert_eq!(transform_order4(&Poly::x(&f5)).unwrap().result, Poly::from_ints(&f5, &[1, 2, 2, 0, 1]));
        let f = Poly::from_ints(&f5, &[2, 1]);
        let big_f = transform_order4(&f).unwrap().result;
        assert!(is_invariant_order4(&big_f).unwrap());
        assert_eq!(reconstruct_higher(&big_f, HigherOrder::Order4).unwrap(), f);
        assert_eq!(transform_order4(&Poly::x(&gf(4))).unwrap_err(), Error::Char2Unsupported);
    }

    #[test]
    fn translation_examples() {
        let f2 = gf(2);
        let big_f = Poly::from_ints(&f2, &[0, 1, 1]);
        assert!(is_invariant_translation(&big_f).unwrap());
        assert_eq!(reconstruct_higher(&big_f, HigherOrder::Translation).unwrap(), Poly::x(&f2));
        assert!(!is_invariant_translation(&Poly::x(&gf(3))).unwrap());
    }

    #[test]
    fn roundtrips() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for q in [3u64, 5, 7, 9, 2, 4] {
            let f = gf(q);
            for order in [HigherOrder::Order3, HigherOrder::Order4, HigherOrder::Translation] {
                if order == HigherOrder::Order4 && q % 2 == 0 {
                    continue;
                }
                for _ in 0..30 {
                    let d = 1 + (crate::sample::random_element(&f, &mut rng) as usize % 4);
                    let poly = random_monic(&f, d, &mut rng);
                    let t = transform_higher(&poly, order).unwrap();
                    assert!(!t.degree_dropped);
                    assert!(is_invariant_higher(&t.result, order).unwrap());
                    assert_eq!(reconstruct_higher(&t.result, order).unwrap(), poly);
                }
            }
        }
    }

    #[test]
    fn kernel_identities() {
        for q in [3u64, 5, 7, 9, 11, 2, 4, 8] {
            let f = gf(q);
            let k3 = HigherKernel::new(HigherOrder::Order3, &f).unwrap();
            if q % 3 != 0 {
                assert_eq!(k3.map().order(), 3);
            }
            assert!(core_is_iterate_sum(&k3));
            // coefficients of y^2 and y in the cubic with roots the three iterates sum to -3
            let resolvent = Poly::from_ints(&f, &[1, 0, -3, 1]);
            assert_eq!(&resolvent - &k3.core, k3.weight.scale(f.from_int(-3)));
            if q % 2 == 1 {
                let k4 = HigherKernel::new(HigherOrder::Order4, &f).unwrap();
                assert_eq!(k4.map().order(), 4);
                assert!(core_is_iterate_sum(&k4));
            }
        }
    }

    #[test]
    fn order3_conjugate_to_translation_in_char3() {
        for q in [3u64, 9] {
            let f = gf(q);
            let k3 = HigherKernel::new(HigherOrder::Order3, &f).unwrap();
            let tr = HigherKernel::new(HigherOrder::Translation, &f).unwrap();
            let c = find_conjugator(&tr.map(), &k3.map()).expect("conjugate in characteristic 3");
            assert_eq!(c.compose(&tr.map()).unwrap().compose(&c.inverse()).unwrap(), k3.map());
        }
        assert!(find_conjugator(
            &HigherKernel::new(HigherOrder::Translation, &gf(5)).unwrap().map(),
            &HigherKernel::new(HigherOrder::Order3, &gf(5)).unwrap().map()
        )
        .is_none());
    }

    #[test]
    fn non_invariant_rejected() {
        let f7 = gf(7);
        assert_eq!(reconstruct_higher(&Poly::from_ints(&f7, &[0, 0, 0, 1]), HigherOrder::Order3), Err(Error::NotInvariant));
    }
}
