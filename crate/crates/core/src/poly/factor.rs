use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Poly;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

/// `scalar * prod factor^multiplicity` with monic irreducible factors, sorted by
/// degree and then coefficient-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub scalar: FieldElement,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    pub fn field(&self) -> &Field {
        self.scalar.field()
    }

    pub fn product(&self) -> Poly {
        let f = self.field();
        let mut acc = Poly::constant(f, self.scalar.code());
        for (g, m) in &self.factors {
            acc = &acc * &g.pow(*m as u64);
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, m)| *m == 1)
    }
}

fn pth_root_poly(f: &Poly) -> Poly {
    let field = f.field();
    let p = field.characteristic() as usize;
    let coeffs = f.codes().iter().step_by(p).map(|&c| field.pth_root(c)).collect();
    Poly::from_codes(field, coeffs)
}

/// Square-free decomposition of a monic polynomial: pairwise coprime square-free
/// parts with their multiplicities.
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if f.deg().unwrap_or(0) == 0 {
        return out;
    }
    let p = f.field().characteristic() as usize;
    let d = f.derivative();
    if d.is_zero() {
        for (g, m) in squarefree_decomposition(&pth_root_poly(f)) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&d).expect("nonzero");
    let mut w = f.exact_div(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c).expect("nonzero");
        let z = w.exact_div(&y);
        if z.deg().unwrap_or(0) > 0 {
            out.push((z, i));
        }
        i += 1;
        c = c.exact_div(&y);
        w = y;
    }
    if !c.is_one() {
        for (g, m) in squarefree_decomposition(&pth_root_poly(&c)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Distinct-degree split of a square-free monic polynomial, up to degree `bound`.
fn distinct_degree(f: &Poly, bound: usize) -> Result<Vec<(Poly, usize)>> {
    let field = f.field();
    let q = field.order();
    let x = Poly::x(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest)?;
    let mut i = 0;
    while let Some(n) = rest.deg().filter(|&n| n > 0) {
        if n < 2 * (i + 1) {
            if n > bound {
                return Err(Error::BoundTooSmall { bound, residual: n });
            }
            out.push((rest, n));
            break;
        }
        if i == bound {
            return Err(Error::BoundTooSmall { bound, residual: n });
        }
        i += 1;
        h = h.pow_mod_u64(q, &rest)?;
        let g = (&h - &x).gcd(&rest)?;
        if !g.is_one() {
            rest = rest.exact_div(&g);
            out.push((g, i));
            if rest.deg().unwrap_or(0) > 0 {
                h = h.rem(&rest)?;
            }
        }
    }
    Ok(out)
}

fn random_poly(field: &Field, below: usize, rng: &mut ChaCha8Rng) -> Poly {
    let q = field.order() as u32;
    Poly::from_codes(field, (0..below).map(|_| rng.random_range(0..q)).collect())
}

/// Cantor-Zassenhaus split of a square-free monic product of irreducibles of degree `d`.
fn equal_degree(f: Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    let n = f.deg().expect("nonzero");
    if n == d {
        out.push(f);
        return;
    }
    let field = f.field().clone();
    let q = field.order();
    let half = (BigUint::from(q).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = random_poly(&field, n, rng);
        if a.deg().unwrap_or(0) == 0 {
            continue;
        }
        let b = if q % 2 == 1 {
            &a.pow_mod(&half, &f).expect("positive degree") - &Poly::one(&field)
        } else {
            let steps = field.degree() as usize * d;
            let mut t = a.clone();
            let mut s = a.clone();
            for _ in 1..steps {
                t = (&t * &t).rem(&f).expect("positive degree");
                s = &s + &t;
            }
            s
        };
        let g = match b.gcd(&f) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let gd = g.deg().unwrap_or(0);
        if gd > 0 && gd < n {
            let other = f.exact_div(&g);
            equal_degree(g, d, rng, out);
            equal_degree(other, d, rng, out);
            return;
        }
    }
}

/// Complete factorization into monic irreducibles times a scalar.
///
/// Every irreducible factor must have degree at most `bound`; otherwise
/// [`Error::BoundTooSmall`] reports the degree of the unsplit cofactor.
pub fn factorize(f: &Poly, bound: usize) -> Result<Factorization> {
    let field = f.field();
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let scalar = field.element(f.lead());
    let monic = f.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let mut merged: BTreeMap<(usize, Vec<u32>), (Poly, usize)> = BTreeMap::new();
    for (part, mult) in squarefree_decomposition(&monic) {
        for (block, d) in distinct_degree(&part, bound)? {
            let mut pieces = Vec::new();
            equal_degree(block, d, &mut rng, &mut pieces);
            for g in pieces {
                let key = (d, g.lex_key());
                merged.entry(key).or_insert((g, 0)).1 += mult;
            }
        }
    }
    Ok(Factorization { scalar, factors: merged.into_values().collect() })
}
