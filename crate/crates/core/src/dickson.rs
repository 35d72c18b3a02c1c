//! Dickson polynomials of the first kind and the recovery of `f` from
//! `F(x) = x^n f(x + sigma/x)`.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::express_in_basis;
use crate::moebius::QuadRationalExpr;
use crate::poly::Poly;
use crate::transform::{is_sigma_self_reciprocal, transform};

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

/// `n/(n-i) * C(n-i, i)` as an exact integer reduced into the prime field.
fn dickson_weight(field: &Field, n: usize, i: usize) -> u32 {
    let w = BigUint::from(n) * binomial(n - i, i) / BigUint::from(n - i);
    let r = w % BigUint::from(field.characteristic());
    field.from_int(r.iter_u64_digits().next().unwrap_or(0) as i64)
}

/// `D_n(y, a) = sum_i n/(n-i) C(n-i,i) (-a)^i y^(n-2i)`, with `D_0 = 2`.
pub fn dickson(n: usize, a: &FieldElement) -> Poly {
    let f = a.field();
    if n == 0 {
        return Poly::constant(f, f.from_int(2));
    }
    let minus_a = f.neg(a.code());
    let mut coeffs = vec![0u32; n + 1];
    for i in 0..=n / 2 {
        coeffs[n - 2 * i] = f.mul(dickson_weight(f, n, i), f.pow(minus_a, i as u64));
    }
    Poly::from_codes(f, coeffs)
}

/// Recovers `f` of degree `n` with `F(x) = x^n f(x + sigma/x)`.
///
/// Odd characteristic uses the closed coefficient formula; characteristic two solves
/// the linear system over the basis `x^(n-j) (x^2 + sigma)^j`. Either way the
/// result is checked by transforming it back.
pub fn reconstruct(big_f: &Poly, sigma: &FieldElement) -> Result<Poly> {
    if !is_sigma_self_reciprocal(big_f, sigma)? {
        return Err(Error::NotInvariant);
    }
    let r = QuadRationalExpr::sigma_form(sigma)?;
    let f = if big_f.field().characteristic() == 2 {
        reconstruct_linear(big_f, &r)?
    } else {
        reconstruct_closed_form(big_f, sigma)
    };
    if transform(&f, &r)?.result != *big_f {
        return Err(Error::IdentityViolated("reconstructed f does not transform back to F".into()));
    }
    Ok(f)
}

fn reconstruct_closed_form(big_f: &Poly, sigma: &FieldElement) -> Poly {
    let f = big_f.field();
    let n = big_f.deg().expect("nonzero") / 2;
    let minus_s = f.neg(sigma.code());
    let coeffs = (0..=n)
        .map(|j| {
            (0..=(n - j) / 2).fold(0, |acc, i| {
                let b = big_f.coeff(n + 2 * i + j);
                let w = if i + j == 0 { 1 } else { dickson_weight(f, 2 * i + j, i) };
                f.add(acc, f.mul(f.mul(w, f.pow(minus_s, i as u64)), b))
            })
        })
        .collect();
    Poly::from_codes(f, coeffs)
}

/// `F = sum_j c_j g^j h^(n-j)` solved for `c`, with `n = deg F / 2`.
pub(crate) fn reconstruct_linear(big_f: &Poly, r: &QuadRationalExpr) -> Result<Poly> {
    let n = big_f.deg().ok_or(Error::ZeroPolynomial)? / 2;
    let basis: Vec<Poly> = (0..=n)
        .map(|j| &r.numerator().pow(j as u64) * &r.denominator().pow((n - j) as u64))
        .collect();
    let c = express_in_basis(big_f, &basis).ok_or(Error::NoSolution)?;
    Ok(Poly::from_codes(big_f.field(), c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_monic, random_nonzero};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64, k: u32) -> Field {
        Field::new(p, k).unwrap()
    }

    #[test]
    fn dickson_examples() {
        let f7 = gf(7, 1);
        let a = FieldElement::from_int(&f7, 3);
        assert_eq!(dickson(1, &a), Poly::x(&f7));
        assert_eq!(dickson(2, &a), Poly::from_ints(&f7, &[-6, 0, 1]));
        assert_eq!(dickson(3, &a), Poly::from_ints(&f7, &[0, -9, 0, 1]));
        assert_eq!(dickson(0, &a), Poly::constant(&f7, 2));
        assert_eq!(dickson(3, &FieldElement::one(&f7)), Poly::from_ints(&f7, &[0, 4, 0, 1]));
    }

    #[test]
    fn dickson_weights_are_exact_integers() {
        // n/(n-i) C(n-i,i) = C(n-i,i) + C(n-i-1,i-1)
        for n in 1..40usize {
            for i in 1..=n / 2 {
                let lhs = BigUint::from(n) * binomial(n - i, i) / BigUint::from(n - i);
                assert_eq!(lhs, binomial(n - i, i) + binomial(n - i - 1, i - 1));
            }
        }
    }

    #[test]
    fn functional_equation() {
        // D_n(t + a/t) = t^n + (a/t)^n for t in GF(q^2)*
        for (p, k) in [(2, 1), (3, 1), (5, 1), (2, 2), (7, 1)] {
            let f = gf(p, k);
            let ext = gf(p, 2 * k);
            let emb = crate::field::Embedding::new(&f, &ext).unwrap();
            for a in 1..f.order() as u32 {
                let ea = emb.apply(a);
                for n in 0..8usize {
                    let d = dickson(n, &f.element(a));
                    for t in 1..ext.order() as u32 {
                        let at = ext.div(ea, t).unwrap();
                        let y = ext.add(t, at);
                        let lhs = d.eval_embedded(&emb, y);
                        let rhs = ext.add(ext.pow(t, n as u64), ext.pow(at, n as u64));
                        assert_eq!(lhs, rhs, "q={} n={n} a={a}", f.order());
                    }
                }
            }
        }
    }

    #[test]
    fn reconstruct_examples() {
        let f3 = gf(3, 1);
        let one = FieldElement::one(&f3);
        let f = reconstruct(&Poly::from_ints(&f3, &[1, 0, 0, 0, 1]), &one).unwrap();
        assert_eq!(f, Poly::from_ints(&f3, &[1, 0, 1]));
        let two = FieldElement::from_int(&f3, 2);
        assert_eq!(reconstruct(&Poly::from_ints(&f3, &[2, 0, 1]), &two).unwrap(), Poly::x(&f3));
        assert_eq!(reconstruct(&Poly::from_ints(&f3, &[2, 1, 1]), &one), Err(Error::NotInvariant));
    }

    #[test]
    fn roundtrip_all_characteristics() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (p, k) in [(2, 1), (2, 2), (3, 1), (5, 1), (7, 1), (3, 2)] {
            let f = gf(p, k);
            for _ in 0..40 {
                let sigma = f.element(random_nonzero(&f, &mut rng));
                let r = QuadRationalExpr::sigma_form(&sigma).unwrap();
                let d = (random_nonzero(&f, &mut rng) as usize % 6) + 1;
                let poly = random_monic(&f, d, &mut rng);
                let big_f = transform(&poly, &r).unwrap().result;
                assert_eq!(reconstruct(&big_f, &sigma).unwrap(), poly);
                assert_eq!(reconstruct_linear(&big_f, &r).unwrap(), poly);
            }
        }
    }

    #[test]
    fn invariance_characterizes_images() {
        // every monic F of degree 2n <= 6 over q <= 5 that is sigma-self-reciprocal
        // has a preimage, and nothing else does
        for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = gf(p, k);
            let q = f.order();
            for d in [2usize, 4, 6] {
                if q.pow(d as u32) > 20_000 {
                    continue;
                }
                for s in 1..q as u32 {
                    let sigma = f.element(s);
                    let r = QuadRationalExpr::sigma_form(&sigma).unwrap();
                    for idx in 0..q.pow(d as u32) {
                        let mut c: Vec<u32> = (0..d).map(|i| ((idx / q.pow(i as u32)) % q) as u32).collect();
                        c.push(1);
                        let big_f = Poly::from_codes(&f, c);
                        let inv = is_sigma_self_reciprocal(&big_f, &sigma).unwrap();
                        let pre = reconstruct_linear(&big_f, &r).is_ok();
                        assert_eq!(inv, pre, "{big_f:?} sigma={s}");
                        if inv {
                            assert!(reconstruct(&big_f, &sigma).is_ok());
                        }
                    }
                }
            }
        }
    }
}
