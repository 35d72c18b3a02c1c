//! Closed-form counts of irreducibles obtained through quadratic transformations,
//! Moebius inversion, and exhaustive oracle counters.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::moebius::QuadRationalExpr;
use crate::poly::{is_irreducible, Poly};
use crate::transform::count_irreducible_transforms;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountResult {
    pub value: u128,
    pub epsilon: i8,
    pub delta: i8,
    pub branch: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "variant")]
pub enum CountVariant {
    /// Self-reciprocal irreducible monic polynomials (`sigma = 1`).
    SelfReciprocal,
    SigmaForm { sigma: FieldElement },
    GeneralQuadratic { expr: QuadRationalExpr },
    /// Degree-one inputs: irreducible quadratics in the pencil spanned by `g` and `h`.
    LinearInput { expr: QuadRationalExpr },
}

impl CountVariant {
    pub fn label(&self) -> &'static str {
        match self {
            CountVariant::SelfReciprocal => "srim",
            CountVariant::SigmaForm { .. } => "sigma",
            CountVariant::GeneralQuadratic { .. } => "quadratic",
            CountVariant::LinearInput { .. } => "linear",
        }
    }
}

pub fn moebius_mu(d: u64) -> i8 {
    assert!(d >= 1, "mu is defined on positive integers");
    let mut n = d;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn divisors(n: u64) -> impl Iterator<Item = u64> {
    (1..=n).filter(move |d| n.is_multiple_of(*d))
}

fn odd_divisors(n: u64) -> impl Iterator<Item = u64> {
    divisors(n).filter(|d| d % 2 == 1)
}

/// `g(n) = sum_{d | n} mu(d) chi(d) f(n/d)` for every `n` in the domain of `f`,
/// inverting `f(n) = sum_{d | n} chi(d) g(n/d)` for a completely multiplicative `chi`.
pub fn moebius_invert(f_values: &BTreeMap<u64, i128>, chi: impl Fn(u64) -> i128) -> Result<BTreeMap<u64, i128>> {
    let mut out = BTreeMap::new();
    for &n in f_values.keys() {
        let mut acc: i128 = 0;
        for d in divisors(n) {
            let f = *f_values.get(&(n / d)).ok_or(Error::MissingDivisorValue(n / d))?;
            let term = (moebius_mu(d) as i128 * chi(d)).checked_mul(f).ok_or(Error::Overflow("moebius inversion"))?;
            acc = acc.checked_add(term).ok_or(Error::Overflow("moebius inversion"))?;
        }
        out.insert(n, acc);
    }
    Ok(out)
}

/// [`moebius_invert`] with `chi` the indicator of odd integers.
pub fn moebius_invert_odd(f_values: &BTreeMap<u64, i128>) -> Result<BTreeMap<u64, i128>> {
    moebius_invert(f_values, |d| (d % 2) as i128)
}

fn ipow(q: u64, e: u64) -> Result<i128> {
    u32::try_from(e)
        .ok()
        .and_then(|e| (q as i128).checked_pow(e))
        .ok_or(Error::Overflow("q^n"))
}

/// `sum_{d | n, d odd} mu(d) q^(n/d)`.
fn odd_mu_sum(q: u64, n: u64) -> Result<i128> {
    odd_divisors(n).try_fold(0i128, |acc, d| Ok(acc + moebius_mu(d) as i128 * ipow(q, n / d)?))
}

fn exact_div(num: i128, den: i128) -> u128 {
    assert!(num % den == 0 && num >= 0, "count formula produced {num}/{den}");
    (num / den) as u128
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(())
}

fn epsilon(sigma: &FieldElement) -> i8 {
    let f = sigma.field();
    if f.characteristic() == 2 {
        0
    } else if f.is_square_code(sigma.code()) {
        1
    } else {
        -1
    }
}

fn odd_q_power_of_two(q: u64, n: u64) -> bool {
    q % 2 == 1 && n.is_power_of_two()
}

/// Self-reciprocal irreducible monic polynomials of degree `2n` over GF(q).
pub fn count_self_reciprocal(q: u64, n: u64) -> Result<CountResult> {
    Field::from_order(q)?;
    check_n(n)?;
    let two_n = 2 * n as i128;
    let eps = if q % 2 == 1 { 1 } else { 0 };
    if odd_q_power_of_two(q, n) {
        let value = exact_div(ipow(q, n)? - 1, two_n);
        Ok(CountResult { value, epsilon: eps, delta: 0, branch: "q odd, n power of 2" })
    } else {
        let value = exact_div(odd_mu_sum(q, n)?, two_n);
        Ok(CountResult { value, epsilon: eps, delta: 0, branch: "otherwise" })
    }
}

/// Monic irreducibles `F` of degree `2n` with `x^(2n) F(sigma/x) = sigma^n F(x)`.
pub fn count_sigma(n: u64, sigma: &FieldElement) -> Result<CountResult> {
    if sigma.is_zero() {
        return Err(Error::ZeroSigma);
    }
    check_n(n)?;
    let q = sigma.field().order();
    let eps = epsilon(sigma);
    let two_n = 2 * n as i128;
    if odd_q_power_of_two(q, n) {
        let eps_n = if eps == -1 && n % 2 == 1 { -1 } else { 1 };
        let value = exact_div(ipow(q, n)? - eps_n, two_n);
        Ok(CountResult { value, epsilon: eps, delta: 0, branch: "q odd, n power of 2" })
    } else {
        let value = exact_div(odd_mu_sum(q, n)?, two_n);
        Ok(CountResult { value, epsilon: eps, delta: 0, branch: "otherwise" })
    }
}

/// Monic irreducible `f` of degree `n > 1` whose transform by `r` is irreducible.
pub fn count_quadratic(n: u64, r: &QuadRationalExpr) -> Result<CountResult> {
    if n <= 1 {
        return Err(Error::RequiresNGreaterThan1);
    }
    let q = r.field().order();
    let eps = if q % 2 == 1 { 1 } else { 0 };
    let two_n = 2 * n as i128;
    if r.is_in_x_squared() {
        return Ok(CountResult { value: 0, epsilon: 0, delta: 0, branch: "q even, g'=h'=0" });
    }
    if odd_q_power_of_two(q, n) {
        let value = exact_div(ipow(q, n)? - 1, two_n);
        Ok(CountResult { value, epsilon: eps, delta: 0, branch: "q odd, n power of 2" })
    } else {
        let value = exact_div(odd_mu_sum(q, n)?, two_n);
        Ok(CountResult { value, epsilon: eps, delta: 0, branch: "otherwise" })
    }
}

/// Monic irreducible quadratics that are GF(q)-linear combinations of `g` and `h`.
pub fn count_linear_inputs(r: &QuadRationalExpr) -> Result<CountResult> {
    let f = r.field();
    let q = f.order() as u128;
    if f.characteristic() == 2 {
        if r.is_in_x_squared() {
            return Err(Error::Char2Degenerate);
        }
        return Ok(CountResult { value: q / 2, epsilon: 0, delta: 0, branch: "q even" });
    }
    // g'h - gh' = a x^2 - 2b x + c splits over GF(q) iff b^2 - ac is a square
    let [a, b, c] = r.cross_product();
    let disc = f.sub(f.mul(b, b), f.mul(a, c));
    if f.is_square_code(disc) {
        Ok(CountResult { value: (q - 1) / 2, epsilon: 1, delta: 0, branch: "q odd, g'h-gh' splits" })
    } else {
        Ok(CountResult { value: q.div_ceil(2), epsilon: -1, delta: 0, branch: "q odd, g'h-gh' irreducible" })
    }
}

/// The sigma-self-reciprocal count in the single-formula form with correction `delta`.
pub fn count_sigma_delta(n: u64, sigma: &FieldElement) -> Result<CountResult> {
    if sigma.is_zero() {
        return Err(Error::ZeroSigma);
    }
    check_n(n)?;
    let q = sigma.field().order();
    let eps = epsilon(sigma);
    let (delta, branch) = match (q % 2 == 1, n) {
        (true, 1) if eps == 1 => (1, "q odd, n = 1, sigma square"),
        (true, 1) => (-1, "q odd, n = 1, sigma nonsquare"),
        (true, n) if n.is_power_of_two() => (1, "q odd, n > 1 power of 2"),
        _ => (0, "otherwise"),
    };
    let value = exact_div(odd_mu_sum(q, n)? - delta as i128, 2 * n as i128);
    Ok(CountResult { value, epsilon: eps, delta, branch })
}

/// `(sum_{d | n odd} (2n/d) SRIM_sigma(2n/d, q), q^n - eps^n)`; the two agree.
pub fn degree_identity(n: u64, sigma: &FieldElement) -> Result<(i128, i128)> {
    check_n(n)?;
    let q = sigma.field().order();
    let mut lhs = 0i128;
    for d in odd_divisors(n) {
        let c = count_sigma(n / d, sigma)?.value as i128;
        lhs += (2 * (n / d)) as i128 * c;
    }
    let eps_n = match epsilon(sigma) {
        0 => 0,
        1 => 1,
        _ => {
            if n % 2 == 1 {
                -1
            } else {
                1
            }
        }
    };
    Ok((lhs, ipow(q, n)? - eps_n))
}

/// Exhaustive count for `variant`, normalizing every candidate monic before testing
/// irreducibility.
pub fn brute_count(field: &Field, n: u64, variant: &CountVariant) -> Result<u64> {
    check_n(n)?;
    let n = n as usize;
    match variant {
        CountVariant::SelfReciprocal => {
            let r = QuadRationalExpr::sigma_form(&FieldElement::one(field))?;
            count_irreducible_transforms(&r, n)
        }
        CountVariant::SigmaForm { sigma } => {
            field.check_same(sigma.field())?;
            count_irreducible_transforms(&QuadRationalExpr::sigma_form(sigma)?, n)
        }
        CountVariant::GeneralQuadratic { expr } => {
            field.check_same(expr.field())?;
            count_irreducible_transforms(expr, n)
        }
        CountVariant::LinearInput { expr } => {
            field.check_same(expr.field())?;
            Ok(pencil_quadratics(expr).len() as u64)
        }
    }
}

/// Distinct monic irreducible quadratics among `g - alpha h` (`alpha` in GF(q)) and
/// `h` itself, i.e. over the whole projective line of the pencil.
pub fn pencil_quadratics(r: &QuadRationalExpr) -> Vec<Poly> {
    let f = r.field();
    let (g, h) = (r.numerator(), r.denominator());
    let mut members: Vec<Poly> = (0..f.order() as u32).map(|a| g - &h.scale(a)).collect();
    members.push(h.clone());
    members
        .into_iter()
        .filter(|p| p.deg() == Some(2) && is_irreducible(p).expect("degree 2"))
        .map(|p| p.monic())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::random_nondegenerate_expr;
    use crate::transform::is_sigma_self_reciprocal;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u64) -> Field {
        Field::from_order(q).unwrap()
    }

    fn expr(f: &Field, g: &[i64], h: &[i64]) -> QuadRationalExpr {
        QuadRationalExpr::new(&Poly::from_ints(f, g), &Poly::from_ints(f, h)).unwrap()
    }

    #[test]
    fn mu_examples() {
        assert_eq!(moebius_mu(1), 1);
        assert_eq!(moebius_mu(6), 1);
        assert_eq!(moebius_mu(12), 0);
        assert_eq!(moebius_mu(30), -1);
    }

    #[test]
    fn inversion_examples() {
        // f(n) = #odd divisors of n, i.e. g = 1
        let f: BTreeMap<u64, i128> = (1..=30).map(|n| (n, odd_divisors(n).count() as i128)).collect();
        assert_eq!(f[&6], 2);
        let g = moebius_invert_odd(&f).unwrap();
        assert!(g.values().all(|&v| v == 1));
        let single: BTreeMap<u64, i128> = [(1, 7)].into();
        assert_eq!(moebius_invert_odd(&single).unwrap()[&1], 7);
        let gap: BTreeMap<u64, i128> = [(1, 1), (6, 2)].into();
        assert!(matches!(moebius_invert_odd(&gap), Err(Error::MissingDivisorValue(_))));
        // classical inversion of sum_{d|n} phi(d) = n
        let ids: BTreeMap<u64, i128> = (1..=20).map(|n| (n, n as i128)).collect();
        let phi = moebius_invert(&ids, |_| 1).unwrap();
        assert_eq!((phi[&12], phi[&7]), (4, 6));
    }

    #[test]
    fn inversion_of_degree_count() {
        // q^n - eps^n inverts to 2n SRIM_sigma(2n, q)
        for q in [3u64, 5, 7, 9, 4] {
            let f = gf(q);
            for s in 1..q as u32 {
                let sigma = f.element(s);
                let vals: BTreeMap<u64, i128> = (1..=8).map(|n| { let (_, rhs) = degree_identity(n, &sigma).unwrap(); (n, rhs) }).collect();
                let inv = moebius_invert_odd(&vals).unwrap();
                for (n, v) in inv {
                    assert_eq!(v, 2 * n as i128 * count_sigma(n, &sigma).unwrap().value as i128);
                }
            }
        }
    }

    #[test]
    fn self_reciprocal_examples() {
        assert_eq!(count_self_reciprocal(2, 1).unwrap().value, 1);
        assert_eq!(count_self_reciprocal(3, 2).unwrap().value, 2);
        assert_eq!(count_self_reciprocal(2, 3).unwrap().value, 1);
        assert_eq!(count_self_reciprocal(6, 1), Err(Error::NotPrime(6)));
        for (q, n, v) in [(2, 1, 1), (3, 2, 2), (2, 3, 1)] {
            assert_eq!(brute_count(&gf(q), n, &CountVariant::SelfReciprocal).unwrap(), v);
        }
    }

    #[test]
    fn self_reciprocal_against_direct_enumeration() {
        // independent oracle: enumerate irreducibles of degree 2n and test reciprocity
        for (q, n) in [(2u64, 1u64), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1), (4, 2), (5, 1), (5, 2), (3, 3)] {
            let f = gf(q);
            let one = FieldElement::one(&f);
            let srim = crate::poly::enumerate_monic_irreducible(&f, 2 * n as usize)
                .unwrap()
                .into_iter()
                .filter(|p| is_sigma_self_reciprocal(p, &one).unwrap())
                .count() as u128;
            assert_eq!(count_self_reciprocal(q, n).unwrap().value, srim, "q={q} n={n}");
        }
    }

    #[test]
    fn sigma_examples() {
        let f3 = gf(3);
        let c = count_sigma(1, &f3.element(2)).unwrap();
        assert_eq!((c.value, c.epsilon), (2, -1));
        let c = count_sigma(1, &f3.element(1)).unwrap();
        assert_eq!((c.value, c.epsilon), (1, 1));
        let c = count_sigma(2, &gf(2).element(1)).unwrap();
        assert_eq!((c.value, c.epsilon), (1, 0));
        assert_eq!(count_sigma(1, &f3.element(0)), Err(Error::ZeroSigma));
        assert_eq!(brute_count(&f3, 2, &CountVariant::SigmaForm { sigma: f3.element(1) }).unwrap(), 2);
        // direct oracle: quadratics with x^2 F(2/x) = 2 F(x)
        let two = f3.element(2);
        let direct = crate::poly::enumerate_monic_irreducible(&f3, 2)
            .unwrap()
            .into_iter()
            .filter(|p| is_sigma_self_reciprocal(p, &two).unwrap())
            .count();
        assert_eq!(direct, 2);
    }

    #[test]
    fn quadratic_examples() {
        let f2 = gf(2);
        let deg = expr(&f2, &[1, 0, 1], &[0, 0, 1]);
        for n in 2..=4 {
            assert_eq!(count_quadratic(n, &deg).unwrap().value, 0);
            assert_eq!(brute_count(&f2, n, &CountVariant::GeneralQuadratic { expr: deg.clone() }).unwrap(), 0);
        }
        let f3 = gf(3);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..5 {
            let r = random_nondegenerate_expr(&f3, &mut rng);
            assert_eq!(count_quadratic(2, &r).unwrap().value, 2);
            assert_eq!(brute_count(&f3, 2, &CountVariant::GeneralQuadratic { expr: r }).unwrap(), 2);
        }
        assert_eq!(count_quadratic(3, &expr(&f2, &[1, 0, 1], &[0, 1])).unwrap().value, 1);
        assert_eq!(count_quadratic(1, &deg), Err(Error::RequiresNGreaterThan1));
    }

    #[test]
    fn linear_input_examples() {
        let f3 = gf(3);
        assert_eq!(count_linear_inputs(&expr(&f3, &[1, 0, 1], &[0, 1])).unwrap().value, 1);
        assert_eq!(count_linear_inputs(&expr(&f3, &[2, 0, 1], &[0, 1])).unwrap().value, 2);
        let f4 = gf(4);
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..10 {
            let r = random_nondegenerate_expr(&f4, &mut rng);
            assert_eq!(count_linear_inputs(&r).unwrap().value, 2);
            assert_eq!(brute_count(&f4, 1, &CountVariant::LinearInput { expr: r }).unwrap(), 2);
        }
        let f2 = gf(2);
        assert_eq!(count_linear_inputs(&expr(&f2, &[1, 0, 1], &[0, 0, 1])), Err(Error::Char2Degenerate));
        // h itself is the only irreducible member of the pencil of x/(x^2+1) over GF(3)
        let r = expr(&f3, &[0, 1], &[1, 0, 1]);
        assert_eq!(pencil_quadratics(&r), vec![Poly::from_ints(&f3, &[1, 0, 1])]);
        assert_eq!(count_linear_inputs(&r).unwrap().value, 1);
    }

    #[test]
    fn sigma_delta_examples() {
        let f3 = gf(3);
        let c = count_sigma_delta(1, &f3.element(1)).unwrap();
        assert_eq!((c.value, c.delta), (1, 1));
        let c = count_sigma_delta(1, &f3.element(2)).unwrap();
        assert_eq!((c.value, c.delta), (2, -1));
        let c = count_sigma_delta(2, &gf(2).element(1)).unwrap();
        assert_eq!((c.value, c.delta), (1, 0));
        for q in [3u64, 4, 5, 7, 8, 9, 11, 16] {
            let f = gf(q);
            for s in 1..q as u32 {
                for n in 1..=12 {
                    let sigma = f.element(s);
                    assert_eq!(count_sigma_delta(n, &sigma).unwrap().value, count_sigma(n, &sigma).unwrap().value);
                }
            }
        }
    }

    #[test]
    fn degree_identity_holds() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 25] {
            let f = gf(q);
            for s in 1..q as u32 {
                for n in 1..=10 {
                    let (lhs, rhs) = degree_identity(n, &f.element(s)).unwrap();
                    assert_eq!(lhs, rhs, "q={q} n={n} sigma={s}");
                }
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(count_self_reciprocal(3, 200), Err(Error::Overflow("q^n")));
    }
}
