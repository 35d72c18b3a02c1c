//! The acceptance checks, one function per criterion, shared by `qtk selftest` and
//! the `acceptance` test target.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::counting::{
    brute_count, count_quadratic, count_self_reciprocal, count_linear_inputs, count_sigma, degree_identity, CountVariant,
};
use crate::dickson::reconstruct;
use crate::error::Result;
use crate::field::{Field, FieldElement};
use crate::hfactor::{h_squarefree_witness, FactorRole, HReport, verify_factorization, verify_sigma_factorization, HSpec};
use crate::higher::{
    core_is_iterate_sum, is_invariant_higher, reconstruct_higher, transform_higher, HigherKernel, HigherOrder,
};
use crate::moebius::{classify_sigma, reduce_canonical, CanonicalForm, QuadRationalExpr, SigmaClass};
use crate::poly::Poly;
use crate::sample::{random_element, random_expr, random_monic, random_nondegenerate_expr, random_nonzero};
use crate::transform::transform;

/// Field orders of the acceptance grid.
pub const FIELD_GRID: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

/// Largest `q^n + 1` covered by the factorization checks.
pub const H_DEGREE_LIMIT: u64 = 1025;

#[derive(Clone, Debug, Serialize)]
pub struct CheckConfig {
    pub seed: u64,
    pub fields: Vec<u64>,
    /// Random expressions per field (and per `(q, n)` for the counting checks).
    pub exprs_per_field: usize,
    /// Random expressions per `(q, n)` in the factorization check.
    pub h_exprs: usize,
    pub h_degree_limit: u64,
    pub roundtrip_samples: usize,
    pub reduction_samples: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 0x5eed,
            fields: FIELD_GRID.to_vec(),
            exprs_per_field: 20,
            h_exprs: 10,
            h_degree_limit: H_DEGREE_LIMIT,
            roundtrip_samples: 200,
            reduction_samples: 500,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub cases: u64,
    pub failures: Vec<String>,
    pub elapsed_ms: u128,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!(
            "criterion {}: {verdict} - {} ({} cases, {} ms)",
            self.id, self.name, self.cases, self.elapsed_ms
        );
        if let Some(first) = self.failures.first() {
            s.push_str(&format!(" first failure: {first}"));
        }
        s
    }
}

pub const CRITERIA: [(u8, &str); 9] = [
    (1, "self-reciprocal count equals exhaustive count"),
    (2, "sigma-form count equals exhaustive count"),
    (3, "count is independent of the quadratic expression"),
    (4, "degree-one input count equals pencil enumeration"),
    (5, "factorization of H matches transformed irreducibles"),
    (6, "reconstruction inverts the sigma transform"),
    (7, "canonical reduction replays and classifies"),
    (8, "order-3 and order-4 roundtrips and kernel identities"),
    (9, "degree identity for sigma counts"),
];

pub struct Tally {
    pub cases: u64,
    pub failures: Vec<String>,
}

impl Tally {
    fn new() -> Tally {
        Tally { cases: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn check_result<T>(&mut self, r: Result<T>, ok: impl FnOnce(&T) -> bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        match r {
            Ok(v) if ok(&v) => {}
            Ok(_) => self.failures.push(what()),
            Err(e) => self.failures.push(format!("{}: {e}", what())),
        }
    }
}

fn field(q: u64) -> Field {
    Field::from_order(q).expect("grid fields are prime powers")
}

fn rng_for(cfg: &CheckConfig, id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ ((id as u64) << 32))
}

/// One square and, in odd characteristic, one nonsquare.
pub fn sigma_representatives(f: &Field) -> Vec<FieldElement> {
    let mut out = vec![FieldElement::one(f)];
    out.extend(f.least_nonsquare().map(|s| f.element(s)));
    out
}

/// Degrees of the counting grid for `GF(q)`.
pub fn counting_degrees(q: u64) -> Vec<u64> {
    let mut ns = vec![1, 2, 3];
    if q <= 3 {
        ns.push(4);
    }
    ns
}

pub fn criterion_1(cfg: &CheckConfig) -> Tally {
    let mut t = Tally::new();
    for &q in &cfg.fields {
        let f = field(q);
        for n in counting_degrees(q) {
            let formula = count_self_reciprocal(q, n).map(|c| c.value as u64);
            let brute = brute_count(&f, n, &CountVariant::SelfReciprocal);
            t.check(formula.is_ok() && formula == brute, || format!("q={q} n={n}: {formula:?} vs {brute:?}"));
        }
    }
    t
}

pub fn criterion_2(cfg: &CheckConfig) -> Tally {
    let mut t = Tally::new();
    for &q in cfg.fields.iter().filter(|&&q| q % 2 == 1) {
        let f = field(q);
        for sigma in sigma_representatives(&f) {
            for n in counting_degrees(q) {
                let formula = count_sigma(n, &sigma).map(|c| c.value as u64);
                let brute = brute_count(&f, n, &CountVariant::SigmaForm { sigma: sigma.clone() });
                t.check(formula.is_ok() && formula == brute, || {
                    format!("q={q} n={n} sigma={sigma}: {formula:?} vs {brute:?}")
                });
            }
        }
    }
    t
}

/// Valid expressions in `GF(q)[x^2]`, characteristic two only.
fn random_x_squared_expr(f: &Field, rng: &mut ChaCha8Rng) -> QuadRationalExpr {
    loop {
        let [g0, g2, h0, h2] = [(); 4].map(|_| random_element(f, rng));
        let g = Poly::from_codes(f, vec![g0, 0, g2]);
        let h = Poly::from_codes(f, vec![h0, 0, h2]);
        if let Ok(r) = QuadRationalExpr::new(&g, &h) {
            return r;
        }
    }
}

pub fn criterion_3(cfg: &CheckConfig) -> Tally {
    let mut t = Tally::new();
    let mut rng = rng_for(cfg, 3);
    for &q in &cfg.fields {
        let f = field(q);
        for n in [2u64, 3] {
            let reference = count_self_reciprocal(q, n).map(|c| c.value);
            for _ in 0..cfg.exprs_per_field {
                let r = random_nondegenerate_expr(&f, &mut rng);
                let formula = count_quadratic(n, &r).map(|c| c.value);
                let brute = brute_count(&f, n, &CountVariant::GeneralQuadratic { expr: r.clone() }).map(u128::from);
                t.check(formula.is_ok() && formula == reference && brute == reference, || {
                    format!("q={q} n={n} r={r}: formula {formula:?}, exhaustive {brute:?}, expected {reference:?}")
                });
            }
            if q % 2 == 0 {
                for _ in 0..5 {
                    let r = random_x_squared_expr(&f, &mut rng);
                    let formula = count_quadratic(n, &r).map(|c| c.value);
                    let brute = brute_count(&f, n, &CountVariant::GeneralQuadratic { expr: r.clone() });
                    t.check(formula == Ok(0) && brute == Ok(0), || {
                        format!("q={q} n={n} r={r} in x^2 class: {formula:?} vs {brute:?}")
                    });
                }
            }
        }
    }
    t
}

pub fn criterion_4(cfg: &CheckConfig) -> Tally {
    let mut t = Tally::new();
    let mut rng = rng_for(cfg, 4);
    for &q in &cfg.fields {
        let f = field(q);
        for _ in 0..cfg.exprs_per_field {
            let r = random_nondegenerate_expr(&f, &mut rng);
            let formula = count_linear_inputs(&r).map(|c| c.value as u64);
            let brute = brute_count(&f, 1, &CountVariant::LinearInput { expr: r.clone() });
            t.check(formula.is_ok() && formula == brute, || format!("q={q} r={r}: {formula:?} vs {brute:?}"));
        }
    }
    t
}

/// `(q, n)` pairs with `q^n + 1` within the limit.
pub fn h_grid(cfg: &CheckConfig) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for &q in &cfg.fields {
        let mut n = 1u32;
        while q.pow(n) < cfg.h_degree_limit {
            out.push((q, n));
            n += 1;
        }
    }
    out
}

/// Every transformed factor has degree dividing `2n` but not `n`.
fn degrees_permitted(rep: &HReport) -> bool {
    let n = rep.n as usize;
    rep.factors
        .iter()
        .filter(|e| e.role == FactorRole::Transformed)
        .all(|e| (2 * n).is_multiple_of(e.degree) && !n.is_multiple_of(e.degree))
}

pub fn criterion_5(cfg: &CheckConfig) -> Tally {
    let mut t = Tally::new();
    let mut rng = rng_for(cfg, 5);
    for (q, n) in h_grid(cfg) {
        let f = field(q);
        let mut sigmas = sigma_representatives(&f);
        sigmas.push(f.element(random_nonzero(&f, &mut rng)));
        for sigma in sigmas {
            let rep = verify_sigma_factorization(&sigma, n);
            t.check_result(rep, |r| r.verified() && degrees_permitted(r), || format!("q={q} n={n} sigma={sigma}"));
            let spec = HSpec::new(n, &FieldElement::one(&f), &FieldElement::zero(&f), &sigma.neg());
            let w = spec.and_then(|s| h_squarefree_witness(&s).map(|w| (w, s.discriminant())));
            t.check_result(w, |(w, d)| w == d, || format!("witness q={q} n={n} sigma={sigma}"));
        }
        for _ in 0..cfg.h_exprs {
            let r = random_nondegenerate_expr(&f, &mut rng);
            let rep = verify_factorization(&r, n);
            let detail = match &rep {
                Ok(rep) => rep.mismatches.join("; "),
                Err(e) => e.to_string(),
            };
            t.check_result(rep, |r| r.verified() && degrees_permitted(r) && r.witness == r.spec.discriminant(), || {
                format!("q={q} n={n} r={r}: {detail}")
            });
        }
    }
    t
}

pub fn criterion_6(cfg: &CheckConfig) -> Tally {
    let mut t = Tally::new();
    let mut rng = rng_for(cfg, 6);
    for q in [3u64, 5, 7, 9, 2, 4] {
        let f = field(q);
        let classes = sigma_representatives(&f);
        for i in 0..cfg.roundtrip_samples {
            // alternate classes; within a class scale by a random nonzero square
            let base = &classes[i % classes.len()];
            let u = random_nonzero(&f, &mut rng);
            let sigma = f.element(f.mul(base.code(), f.mul(u, u)));
            let d = 1 + (i % 6);
            let poly = random_monic(&f, d, &mut rng);
            let r = QuadRationalExpr::sigma_form(&sigma).expect("nonzero sigma");
            let back = transform(&poly, &r).and_then(|big_f| reconstruct(&big_f.result, &sigma));
            t.check_result(back, |b| *b == poly, || format!("q={q} sigma={sigma} f={poly}"));
        }
    }
    t
}

pub fn criterion_7(cfg: &CheckConfig) -> Tally {
    let mut t = Tally::new();
    let mut rng = rng_for(cfg, 7);
    let fields: Vec<Field> = cfg.fields.iter().map(|&q| field(q)).collect();
    for i in 0..cfg.reduction_samples {
        let f = &fields[i % fields.len()];
        let r = random_expr(f, &mut rng);
        let (form, trail) = reduce_canonical(&r);
        let replay_ok = trail.replay().is_ok_and(|e| e == trail.end) && trail.end == form.expr(f);
        let class = classify_sigma(&r);
        let class_ok = match &form {
            CanonicalForm::XSquared => class == SigmaClass::XSquaredClass,
            CanonicalForm::XPlusSigmaOverX(s) => {
                let sq = s.is_square().unwrap_or(false);
                class == if sq { SigmaClass::SquareClass } else { SigmaClass::NonSquareClass }
            }
        };
        t.check(replay_ok && class_ok, || format!("GF({}) r={r}: form {form:?}, class {class:?}", f.label()));
    }
    t
}

pub fn criterion_8(cfg: &CheckConfig) -> Tally {
    let mut t = Tally::new();
    let mut rng = rng_for(cfg, 8);
    for &q in &cfg.fields {
        let f = field(q);
        let mut orders = vec![HigherOrder::Order3];
        if q % 2 == 1 {
            orders.push(HigherOrder::Order4);
        }
        for &order in &orders {
            for i in 0..cfg.roundtrip_samples {
                let poly = random_monic(&f, 1 + i % 4, &mut rng);
                let res = transform_higher(&poly, order).and_then(|tr| {
                    let inv = is_invariant_higher(&tr.result, order)?;
                    Ok((inv, reconstruct_higher(&tr.result, order)?))
                });
                t.check_result(res, |(inv, back)| *inv && *back == poly, || {
                    format!("q={q} {order:?} f={poly}")
                });
            }
        }
        let k3 = HigherKernel::new(HigherOrder::Order3, &f).expect("order 3 exists everywhere");
        // (x-1)^3 F(1/(1-x)) = F for F = x^3 - 3x + 1, expanded symbolically
        let big_f = Poly::from_ints(&f, &[1, -3, 0, 1]);
        let moved = -&big_f.homogeneous_compose(3, &Poly::constant(&f, 1), &Poly::from_ints(&f, &[1, -1]));
        t.check(moved == big_f, || format!("q={q}: (x-1)^3 F(1/(1-x)) = {moved}"));
        let inv = is_invariant_higher(&big_f, HigherOrder::Order3);
        t.check_result(inv, |v| *v, || format!("q={q}: x^3-3x+1 not invariant"));
        t.check(core_is_iterate_sum(&k3), || format!("q={q}: order-3 core is not the sum of iterates"));
        if q % 2 == 1 {
            let k4 = HigherKernel::new(HigherOrder::Order4, &f).expect("odd characteristic");
            t.check(core_is_iterate_sum(&k4), || format!("q={q}: order-4 core is not the sum of iterates"));
        }
    }
    t
}

pub fn criterion_9(cfg: &CheckConfig) -> Tally {
    let mut t = Tally::new();
    for &q in &cfg.fields {
        let f = field(q);
        for s in 1..q as u32 {
            for n in 1..=8u64 {
                let sigma = f.element(s);
                let r = degree_identity(n, &sigma);
                t.check_result(r, |(lhs, rhs)| lhs == rhs, || format!("q={q} n={n} sigma={sigma}"));
            }
        }
    }
    t
}

/// Runs one criterion by number.
pub fn run(id: u8, cfg: &CheckConfig) -> Option<CriterionResult> {
    let (_, name) = *CRITERIA.iter().find(|(i, _)| *i == id)?;
    let start = Instant::now();
    let tally = match id {
        1 => criterion_1(cfg),
        2 => criterion_2(cfg),
        3 => criterion_3(cfg),
        4 => criterion_4(cfg),
        5 => criterion_5(cfg),
        6 => criterion_6(cfg),
        7 => criterion_7(cfg),
        8 => criterion_8(cfg),
        9 => criterion_9(cfg),
        _ => unreachable!(),
    };
    Some(CriterionResult {
        id,
        name,
        passed: tally.failures.is_empty() && tally.cases > 0,
        cases: tally.cases,
        failures: tally.failures,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

pub fn run_all(cfg: &CheckConfig) -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|&(id, _)| run(id, cfg)).collect()
}
