//! Seeded pseudo-random inputs for randomized checks.

use rand::Rng;

use crate::field::Field;
use crate::moebius::{MoebiusMap, QuadRationalExpr};
use crate::poly::Poly;

pub fn random_element<R: Rng>(field: &Field, rng: &mut R) -> u32 {
    rng.random_range(0..field.order() as u32)
}

pub fn random_nonzero<R: Rng>(field: &Field, rng: &mut R) -> u32 {
    rng.random_range(1..field.order() as u32)
}

/// Uniform polynomial with `len` coefficients (so degree `< len`).
pub fn random_poly<R: Rng>(field: &Field, len: usize, rng: &mut R) -> Poly {
    Poly::from_codes(field, (0..len).map(|_| random_element(field, rng)).collect())
}

/// Uniform monic polynomial of exact degree `d`.
pub fn random_monic<R: Rng>(field: &Field, d: usize, rng: &mut R) -> Poly {
    let mut c: Vec<u32> = (0..d).map(|_| random_element(field, rng)).collect();
    c.push(1);
    Poly::from_codes(field, c)
}

/// A valid quadratic rational expression, by rejection sampling.
pub fn random_expr<R: Rng>(field: &Field, rng: &mut R) -> QuadRationalExpr {
    loop {
        let g = random_poly(field, 3, rng);
        let h = random_poly(field, 3, rng);
        if let Ok(r) = QuadRationalExpr::new(&g, &h) {
            return r;
        }
    }
}

/// A valid expression outside the characteristic-two `x^2` class.
pub fn random_nondegenerate_expr<R: Rng>(field: &Field, rng: &mut R) -> QuadRationalExpr {
    loop {
        let r = random_expr(field, rng);
        if !r.is_in_x_squared() {
            return r;
        }
    }
}

pub fn random_moebius<R: Rng>(field: &Field, rng: &mut R) -> MoebiusMap {
    loop {
        let [a, b, c, d] = [(); 4].map(|_| random_element(field, rng));
        if let Ok(m) = MoebiusMap::from_codes(field, a, b, c, d) {
            return m;
        }
    }
}
