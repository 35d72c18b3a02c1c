use rayon::prelude::*;

use super::Poly;
use crate::error::{Error, Result};
use crate::field::Field;

/// Largest candidate space `q^d` that enumeration will walk.
pub const ENUMERATION_BOUND: u64 = 1 << 22;

pub(crate) fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `x^(q^i) mod m` for `i = 1..=count`.
pub(crate) fn frobenius_powers(m: &Poly, count: usize) -> Vec<Poly> {
    let q = m.field().order();
    let mut out = Vec::with_capacity(count);
    let mut cur = Poly::x(m.field()).rem(m).expect("nonzero modulus");
    for _ in 0..count {
        cur = cur.pow_mod_u64(q, m).expect("positive-degree modulus");
        out.push(cur.clone());
    }
    out
}

/// Rabin's irreducibility test.
///
/// `f` of degree n is irreducible iff `x^(q^n) = x mod f` and
/// `gcd(x^(q^(n/r)) - x, f) = 1` for every prime `r | n`.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let n = match f.deg() {
        None | Some(0) => return Err(Error::DegreeZero),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(true);
    }
    let x = Poly::x(f.field());
    let frob = frobenius_powers(f, n);
    if frob[n - 1] != x {
        return Ok(false);
    }
    for r in prime_divisors(n) {
        let h = &frob[n / r - 1] - &x;
        if !h.gcd(f)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_space(field: &Field, d: usize) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    field
        .order()
        .checked_pow(d as u32)
        .filter(|&n| n <= ENUMERATION_BOUND)
        .ok_or_else(|| {
            Error::SizeBoundExceeded(format!("{}^{d} candidates exceed {ENUMERATION_BOUND}", field.order()))
        })
}

/// The monic polynomial of degree `d` at position `idx` in coefficient-lexicographic order.
fn candidate(field: &Field, d: usize, mut idx: u64) -> Poly {
    let q = field.order();
    let mut coeffs = vec![0u32; d + 1];
    coeffs[d] = 1;
    for i in (0..d).rev() {
        coeffs[i] = field.lex_element((idx % q) as u32);
        idx /= q;
    }
    Poly::from_codes(field, coeffs)
}

/// Stream of monic irreducible polynomials of one degree, in coefficient-lexicographic
/// order (coefficient tuples compared from the constant term upward).
pub struct MonicIrreducibles {
    field: Field,
    degree: usize,
    next: u64,
    total: u64,
}

impl Iterator for MonicIrreducibles {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        while self.next < self.total {
            let c = candidate(&self.field, self.degree, self.next);
            self.next += 1;
            if is_irreducible(&c).expect("positive degree") {
                return Some(c);
            }
        }
        None
    }
}

pub fn monic_irreducibles(field: &Field, d: usize) -> Result<MonicIrreducibles> {
    let total = check_space(field, d)?;
    Ok(MonicIrreducibles { field: field.clone(), degree: d, next: 0, total })
}

/// All monic irreducibles of degree `d`, in stream order; the candidate space is
/// partitioned across worker threads.
pub fn enumerate_monic_irreducible(field: &Field, d: usize) -> Result<Vec<Poly>> {
    let total = check_space(field, d)?;
    Ok((0..total)
        .into_par_iter()
        .map(|i| candidate(field, d, i))
        .filter(|c| is_irreducible(c).expect("positive degree"))
        .collect())
}

pub fn count_monic_irreducible(field: &Field, d: usize) -> Result<u64> {
    let total = check_space(field, d)?;
    Ok((0..total)
        .into_par_iter()
        .filter(|&i| is_irreducible(&candidate(field, d, i)).expect("positive degree"))
        .count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, k: u32) -> Field {
        Field::new(p, k).unwrap()
    }

    fn has_factor_by_trial(f: &Poly) -> bool {
        let n = f.deg().unwrap();
        (1..=n / 2).any(|d| {
            let q = f.field().order();
            (0..q.pow(d as u32)).any(|i| candidate(f.field(), d, i).divides(f).unwrap())
        })
    }

    fn gauss(q: u64, d: usize) -> u64 {
        let mu = |n: usize| -> i64 {
            let ps = prime_divisors(n);
            if ps.iter().any(|p| (n / p).is_multiple_of(*p)) {
                0
            } else if ps.len().is_multiple_of(2) {
                1
            } else {
                -1
            }
        };
        let s: i64 = (1..=d).filter(|e| d.is_multiple_of(*e)).map(|e| mu(e) * (q as i64).pow((d / e) as u32)).sum();
        (s / d as i64) as u64
    }

    #[test]
    fn irreducibility_examples() {
        let f2 = gf(2, 1);
        assert!(is_irreducible(&Poly::from_ints(&f2, &[1, 1, 1])).unwrap());
        assert!(!is_irreducible(&Poly::from_ints(&f2, &[1, 0, 1])).unwrap());
        assert!(is_irreducible(&Poly::from_ints(&gf(3, 1), &[1, 0, 1])).unwrap());
        assert_eq!(is_irreducible(&Poly::one(&f2)), Err(Error::DegreeZero));
        assert_eq!(is_irreducible(&Poly::zero(&f2)), Err(Error::DegreeZero));
    }

    #[test]
    fn enumeration_examples() {
        let f2 = gf(2, 1);
        assert_eq!(enumerate_monic_irreducible(&f2, 2).unwrap(), vec![Poly::from_ints(&f2, &[1, 1, 1])]);
        let f3 = gf(3, 1);
        let lin = enumerate_monic_irreducible(&f3, 1).unwrap();
        assert_eq!(lin, vec![Poly::from_ints(&f3, &[0, 1]), Poly::from_ints(&f3, &[1, 1]), Poly::from_ints(&f3, &[2, 1])]);
        assert_eq!(enumerate_monic_irreducible(&f2, 3).unwrap().len(), 2);
        assert!(matches!(enumerate_monic_irreducible(&f2, 40), Err(Error::SizeBoundExceeded(_))));
    }

    #[test]
    fn stream_and_parallel_enumeration_agree() {
        let f4 = gf(2, 2);
        let seq: Vec<Poly> = monic_irreducibles(&f4, 3).unwrap().collect();
        assert_eq!(seq, enumerate_monic_irreducible(&f4, 3).unwrap());
        let keys: Vec<Vec<u32>> = seq.iter().map(Poly::lex_key).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn rabin_agrees_with_trial_division() {
        for (p, k, max_deg) in [(2, 1, 6), (3, 1, 6), (2, 2, 4), (5, 1, 4)] {
            let f = gf(p, k);
            let q = f.order();
            for d in 1..=max_deg {
                for i in 0..q.pow(d as u32) {
                    let c = candidate(&f, d, i);
                    assert_eq!(is_irreducible(&c).unwrap(), !has_factor_by_trial(&c), "{c:?}");
                }
            }
        }
    }

    #[test]
    fn counts_match_gauss_formula() {
        for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = gf(p, k);
            for d in 1..=6usize {
                if f.order().pow(d as u32) > 20_000 {
                    continue;
                }
                assert_eq!(count_monic_irreducible(&f, d).unwrap(), gauss(f.order(), d), "q={} d={d}", f.order());
            }
        }
    }

    #[test]
    fn fermat_for_irreducibles() {
        for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = gf(p, k);
            for n in 1..=4usize {
                for m in enumerate_monic_irreducible(&f, n).unwrap().iter().take(10) {
                    let x = Poly::x(&f);
                    let e = num_bigint::BigUint::from(f.order()).pow(n as u32);
                    assert_eq!(x.pow_mod(&e, m).unwrap(), x.rem(m).unwrap());
                }
            }
        }
    }
}
