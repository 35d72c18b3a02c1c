//! `qtk`: counts, reductions, transforms and factorization checks from the command line.
//!
//! Every subcommand is a thin adapter over the library. Output is one record per
//! line: a human summary by default, a JSON object with `--json`.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use qtk::checks::{counting_degrees, run, sigma_representatives, CheckConfig, CRITERIA, FIELD_GRID};
use qtk::counting::{
    brute_count, count_quadratic, count_self_reciprocal, count_sigma_delta, count_linear_inputs, count_sigma, CountResult,
    CountVariant,
};
use qtk::dickson::{dickson, reconstruct};
use qtk::hfactor::{reconstruct_generalized, verify_factorization, verify_sigma_factorization, HReport};
use qtk::higher::{reconstruct_higher, transform_higher, HigherOrder};
use qtk::moebius::{class_representative, classify_sigma, reduce_canonical, CanonicalForm, QuadRationalExpr};
use qtk::text::{format_poly_coeffs, format_poly_human, parse_expr, parse_field, parse_field_element, parse_poly, parse_poly_human};
use qtk::transform::transform;
use qtk::{Error, Field, FieldElement, Poly};

const EXIT_USAGE: u8 = 1;
const EXIT_SIZE_BOUND: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(name = "qtk", version, about = "Irreducible polynomials through quadratic rational transformations")]
struct Cli {
    /// Emit one JSON object per line.
    #[arg(long, global = true)]
    json: bool,
    /// Read and print polynomials in human form (`x^2+1`) instead of coefficient lists.
    #[arg(long, global = true)]
    human: bool,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = CheckConfig::default().seed)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum Variant {
    /// Self-reciprocal irreducible monic polynomials.
    #[value(alias = "carlitz")]
    Srim,
    /// Irreducibles invariant under `x -> sigma/x`.
    Sigma,
    /// Irreducible transforms under a general quadratic expression.
    #[value(alias = "ahmadi")]
    Quadratic,
    /// Irreducible quadratics in the pencil of `g` and `h`.
    Linear,
    /// The sigma count in single-formula form with its correction term.
    Delta,
}

impl Variant {
    fn label(self) -> &'static str {
        match self {
            Variant::Srim => "srim",
            Variant::Sigma => "sigma",
            Variant::Quadratic => "quadratic",
            Variant::Linear => "linear",
            Variant::Delta => "delta",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kernel {
    Order3,
    Order4,
    Translation,
}

impl From<Kernel> for HigherOrder {
    fn from(k: Kernel) -> HigherOrder {
        match k {
            Kernel::Order3 => HigherOrder::Order3,
            Kernel::Order4 => HigherOrder::Order4,
            Kernel::Translation => HigherOrder::Translation,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form counts, optionally checked against exhaustive enumeration.
    Count {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long, value_enum)]
        variant: Variant,
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        expr: Option<String>,
        /// Also count by enumeration and report MATCH or MISMATCH.
        #[arg(long)]
        oracle: bool,
    },
    /// Canonical form of a quadratic rational expression under the Moebius group.
    Reduce {
        #[arg(long)]
        field: String,
        #[arg(long)]
        expr: String,
    },
    /// `h^deg f f(g/h)`, or a higher-order kernel transform with `--kernel`.
    Transform {
        #[arg(long)]
        field: String,
        #[arg(long)]
        f: String,
        #[arg(long, conflicts_with = "kernel")]
        expr: Option<String>,
        #[arg(long, value_enum)]
        kernel: Option<Kernel>,
    },
    /// Recovers `f` from an invariant `F`.
    Reconstruct {
        #[arg(long)]
        field: String,
        #[arg(long = "F")]
        big_f: String,
        #[arg(long, conflicts_with_all = ["expr", "kernel"])]
        sigma: Option<String>,
        #[arg(long, conflicts_with = "kernel")]
        expr: Option<String>,
        #[arg(long, value_enum)]
        kernel: Option<Kernel>,
    },
    /// Dickson polynomial `D_n(y, a)`.
    Dickson {
        #[arg(long)]
        field: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: String,
    },
    /// Factors `H` and checks it against the transformed irreducibles.
    Hverify {
        #[arg(long)]
        field: String,
        #[arg(long)]
        n: u32,
        #[arg(long, conflicts_with = "expr")]
        sigma: Option<String>,
        #[arg(long)]
        expr: Option<String>,
    },
    /// The count grid over `(q, n, variant)`.
    Table {
        /// Field orders; defaults to the acceptance grid.
        #[arg(long, value_delimiter = ',')]
        fields: Option<Vec<u64>>,
        /// Largest `n`; by default `n <= 3`, plus `n = 4` for `q <= 3`.
        #[arg(long)]
        max_n: Option<u64>,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Variant::Srim, Variant::Sigma, Variant::Delta])]
        variants: Vec<Variant>,
        #[arg(long)]
        oracle: bool,
    },
    /// Runs the acceptance criteria.
    Selftest {
        /// Criterion numbers to run; all by default.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u8>>,
    },
}

/// One output line.
struct Record {
    json: Value,
    human: String,
}

struct Out {
    records: Vec<Record>,
    exit: u8,
}

impl Out {
    fn one(json: Value, human: String) -> Out {
        Out { records: vec![Record { json, human }], exit: 0 }
    }
}

struct Ctx {
    human: bool,
    seed: u64,
}

impl Ctx {
    fn poly(&self, field: &Field, s: &str) -> qtk::Result<Poly> {
        if self.human {
            parse_poly_human(field, s)
        } else {
            parse_poly(field, s)
        }
    }

    fn show(&self, p: &Poly) -> String {
        if self.human {
            format_poly_human(p, 'x')
        } else {
            format_poly_coeffs(p)
        }
    }
}

fn usage(msg: &str) -> Error {
    Error::InvalidArgument(msg.into())
}

fn required<'a>(v: &'a Option<String>, name: &str) -> qtk::Result<&'a str> {
    v.as_deref().ok_or_else(|| usage(&format!("--{name} is required here")))
}

fn count_one(field: &Field, n: u64, variant: Variant, sigma: Option<&FieldElement>, expr: Option<&QuadRationalExpr>) -> qtk::Result<(CountResult, CountVariant)> {
    let need_sigma = || sigma.ok_or_else(|| usage("--sigma is required for this variant"));
    let need_expr = || expr.ok_or_else(|| usage("--expr is required for this variant"));
    Ok(match variant {
        Variant::Srim => (count_self_reciprocal(field.order(), n)?, CountVariant::SelfReciprocal),
        Variant::Sigma => {
            let s = need_sigma()?;
            (count_sigma(n, s)?, CountVariant::SigmaForm { sigma: s.clone() })
        }
        Variant::Delta => {
            let s = need_sigma()?;
            (count_sigma_delta(n, s)?, CountVariant::SigmaForm { sigma: s.clone() })
        }
        Variant::Quadratic => {
            let r = need_expr()?;
            (count_quadratic(n, r)?, CountVariant::GeneralQuadratic { expr: r.clone() })
        }
        Variant::Linear => {
            if n != 1 {
                return Err(usage("the linear variant counts degree-one inputs; use --n 1"));
            }
            let r = need_expr()?;
            (count_linear_inputs(r)?, CountVariant::LinearInput { expr: r.clone() })
        }
    })
}

fn count_record(
    field: &Field,
    n: u64,
    variant: Variant,
    sigma: Option<&FieldElement>,
    expr: Option<&QuadRationalExpr>,
    oracle: bool,
) -> qtk::Result<(Record, bool)> {
    let (res, cv) = count_one(field, n, variant, sigma, expr)?;
    let mut json = json!({
        "cmd": "count",
        "field": field.label(),
        "q": field.order(),
        "n": n,
        "variant": variant.label(),
        "value": res.value as u64,
        "epsilon": res.epsilon,
        "delta": res.delta,
        "branch": res.branch,
    });
    if let Some(s) = sigma {
        json["sigma"] = json!(s);
    }
    if let Some(r) = expr {
        json["expr"] = json!(r);
    }
    let mut human = format!("GF({}) n={n} {}: {} [{}]", field.label(), variant.label(), res.value, res.branch);
    if let Some(s) = sigma {
        human.push_str(&format!(" sigma={s}"));
    }
    let mut matched = true;
    if oracle {
        let brute = brute_count(field, n, &cv)?;
        matched = brute as u128 == res.value;
        let verdict = if matched { "MATCH" } else { "MISMATCH" };
        json["oracle"] = json!(brute);
        json["verdict"] = json!(verdict);
        human.push_str(&format!(" oracle={brute} {verdict}"));
    }
    Ok((Record { json, human }, matched))
}

fn cmd_count(
    field: &str,
    n: u64,
    variant: Variant,
    sigma: &Option<String>,
    expr: &Option<String>,
    oracle: bool,
    ctx: &Ctx,
) -> qtk::Result<Out> {
    let f = parse_field(field)?;
    let sigma = sigma.as_deref().map(|s| parse_field_element(&f, s)).transpose()?;
    let expr = expr.as_deref().map(|s| parse_expr_ctx(&f, s, ctx)).transpose()?;
    let (rec, matched) = count_record(&f, n, variant, sigma.as_ref(), expr.as_ref(), oracle)?;
    Ok(Out { records: vec![rec], exit: if matched { 0 } else { EXIT_MISMATCH } })
}

fn parse_expr_ctx(f: &Field, s: &str, ctx: &Ctx) -> qtk::Result<QuadRationalExpr> {
    if ctx.human {
        let (g, h) = s.split_once('/').ok_or_else(|| Error::Parse(format!("expected \"g / h\", got {s:?}")))?;
        QuadRationalExpr::new(&parse_poly_human(f, g)?, &parse_poly_human(f, h)?)
    } else {
        parse_expr(f, s)
    }
}

fn cmd_reduce(field: &str, expr: &str, ctx: &Ctx) -> qtk::Result<Out> {
    let f = parse_field(field)?;
    let r = parse_expr_ctx(&f, expr, ctx)?;
    let (form, trail) = reduce_canonical(&r);
    let class = classify_sigma(&r);
    let representative = class_representative(class, &f);
    let human_form = match &form {
        CanonicalForm::XPlusSigmaOverX(s) => format!("x + {s}/x"),
        CanonicalForm::XSquared => "x^2".into(),
    };
    let steps: Vec<String> = trail.steps.iter().map(|s| serde_json::to_string(s).expect("serializable")).collect();
    let human = format!(
        "{r} -> {human_form} ({class:?}){}",
        if steps.is_empty() { " already canonical".into() } else { format!(" via {}", steps.join(", ")) }
    );
    let json = json!({
        "cmd": "reduce",
        "field": f.label(),
        "input": r,
        "canonical": form,
        "class": class,
        "representative": representative,
        "already_canonical": trail.steps.is_empty(),
        "trail": trail,
    });
    Ok(Out::one(json, human))
}

fn cmd_transform(field: &str, f_text: &str, expr: &Option<String>, kernel: Option<Kernel>, ctx: &Ctx) -> qtk::Result<Out> {
    let f = parse_field(field)?;
    let poly = ctx.poly(&f, f_text)?;
    let (result, dropped, flagged, via) = match kernel {
        Some(k) => {
            let t = transform_higher(&poly, k.into())?;
            (t.result, t.degree_dropped, t.flagged, json!(HigherOrder::from(k)))
        }
        None => {
            let r = parse_expr_ctx(&f, required(expr, "expr")?, ctx)?;
            let t = transform(&poly, &r)?;
            (t.result, t.degree_dropped, false, json!(r))
        }
    };
    let json = json!({
        "cmd": "transform",
        "field": f.label(),
        "f": poly,
        "via": via,
        "result": result,
        "degree": result.deg(),
        "degree_dropped": dropped,
        "flagged": flagged,
    });
    let mut human = ctx.show(&result);
    if dropped {
        human.push_str(" (degree dropped)");
    }
    Ok(Out::one(json, human))
}

fn cmd_reconstruct(
    field: &str,
    big_f: &str,
    sigma: &Option<String>,
    expr: &Option<String>,
    kernel: Option<Kernel>,
    ctx: &Ctx,
) -> qtk::Result<Out> {
    let f = parse_field(field)?;
    let big = ctx.poly(&f, big_f)?;
    let (poly, formal_degree, dropped) = if let Some(k) = kernel {
        let p = reconstruct_higher(&big, k.into())?;
        let d = p.deg().unwrap_or(0);
        (p, d, false)
    } else if let Some(s) = sigma {
        let p = reconstruct(&big, &parse_field_element(&f, s)?)?;
        let d = p.deg().unwrap_or(0);
        (p, d, false)
    } else {
        let r = parse_expr_ctx(&f, required(expr, "sigma, --expr or --kernel")?, ctx)?;
        let pre = reconstruct_generalized(&big, &r)?;
        (pre.f, pre.formal_degree, pre.degree_dropped)
    };
    let json = json!({
        "cmd": "reconstruct",
        "field": f.label(),
        "F": big,
        "f": poly,
        "formal_degree": formal_degree,
        "degree_dropped": dropped,
    });
    Ok(Out::one(json, ctx.show(&poly)))
}

fn cmd_dickson(field: &str, n: usize, a: &str, ctx: &Ctx) -> qtk::Result<Out> {
    let f = parse_field(field)?;
    let a = parse_field_element(&f, a)?;
    let d = dickson(n, &a);
    let json = json!({ "cmd": "dickson", "field": f.label(), "n": n, "a": a, "result": d });
    let human = if ctx.human { format_poly_human(&d, 'y') } else { format_poly_coeffs(&d) };
    Ok(Out::one(json, human))
}

fn report_human(rep: &HReport, ctx: &Ctx) -> String {
    let factors: Vec<String> = rep
        .factors
        .iter()
        .map(|e| {
            let mult = if e.multiplicity > 1 { format!("^{}", e.multiplicity) } else { String::new() };
            format!("({}){mult}", ctx.show(&e.factor))
        })
        .collect();
    let verdict = if rep.verified() { "verified".to_string() } else { format!("MISMATCH: {}", rep.mismatches.join("; ")) };
    format!(
        "H of degree {} over GF({}) n={}: {} factors, transformed degrees {:?}; {verdict}\n  {}",
        rep.h_degree,
        rep.field,
        rep.n,
        rep.factors.len(),
        rep.degree_multiset,
        factors.join(" ")
    )
}

fn cmd_hverify(field: &str, n: u32, sigma: &Option<String>, expr: &Option<String>, ctx: &Ctx) -> qtk::Result<Out> {
    let f = parse_field(field)?;
    let rep = match (sigma, expr) {
        (Some(s), _) => verify_sigma_factorization(&parse_field_element(&f, s)?, n)?,
        (None, Some(e)) => verify_factorization(&parse_expr_ctx(&f, e, ctx)?, n)?,
        (None, None) => return Err(usage("one of --sigma or --expr is required")),
    };
    let exit = if rep.verified() { 0 } else { EXIT_MISMATCH };
    let mut json = serde_json::to_value(&rep).expect("serializable");
    json["cmd"] = json!("hverify");
    json["verified"] = json!(rep.verified());
    Ok(Out { records: vec![Record { json, human: report_human(&rep, ctx) }], exit })
}

fn cmd_table(fields: &Option<Vec<u64>>, max_n: Option<u64>, variants: &[Variant], oracle: bool) -> qtk::Result<Out> {
    let mut orders = fields.clone().unwrap_or_else(|| FIELD_GRID.to_vec());
    orders.sort_unstable();
    orders.dedup();
    let fields: Vec<Field> = orders
        .into_iter()
        .map(Field::from_order)
        .collect::<qtk::Result<_>>()?;
    let mut variants = variants.to_vec();
    variants.sort();
    variants.dedup();
    let mut jobs: Vec<(Field, u64, Variant, Option<FieldElement>)> = Vec::new();
    for f in &fields {
        let q = f.order();
        let ns = match max_n {
            Some(m) => (1..=m).collect(),
            None => counting_degrees(q),
        };
        for &n in &ns {
            for &v in &variants {
                match v {
                    Variant::Srim => jobs.push((f.clone(), n, v, None)),
                    Variant::Sigma | Variant::Delta => {
                        for s in sigma_representatives(f) {
                            jobs.push((f.clone(), n, v, Some(s)));
                        }
                    }
                    Variant::Quadratic | Variant::Linear => {
                        return Err(usage("table covers srim, sigma and delta; use count for expression variants"))
                    }
                }
            }
        }
    }
    let rows: Vec<qtk::Result<(Record, bool)>> =
        jobs.par_iter().map(|(f, n, v, s)| count_record(f, *n, *v, s.as_ref(), None, oracle)).collect();
    let mut records = Vec::with_capacity(rows.len());
    let mut exit = 0;
    for row in rows {
        let (mut rec, matched) = row?;
        rec.json["cmd"] = json!("table");
        if !matched {
            exit = EXIT_MISMATCH;
        }
        records.push(rec);
    }
    // jobs were generated in (q, n, variant) order and par_iter preserves it
    Ok(Out { records, exit })
}

fn cmd_selftest(only: &Option<Vec<u8>>, ctx: &Ctx) -> qtk::Result<Out> {
    let cfg = CheckConfig { seed: ctx.seed, ..CheckConfig::default() };
    let mut records = Vec::new();
    let mut exit = 0;
    for (id, _) in CRITERIA {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let res = run(id, &cfg).expect("known criterion");
        if !res.passed {
            exit = EXIT_MISMATCH;
        }
        let mut json = serde_json::to_value(&res).expect("serializable");
        json["cmd"] = json!("selftest");
        records.push(Record { json, human: res.line() });
    }
    if records.is_empty() {
        return Err(usage("no criterion selected; valid numbers are 1-9"));
    }
    Ok(Out { records, exit })
}

/// The variant name of `e`, e.g. `"NotPrime"`.
fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(['(', ' ', '{']).next().unwrap_or_default().to_string()
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SizeBoundExceeded(_) | Error::Overflow(_) => EXIT_SIZE_BOUND,
        Error::IdentityViolated(_) | Error::MismatchFound(_) => EXIT_MISMATCH,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let ctx = Ctx { human: cli.human, seed: cli.seed };
    let out = match &cli.cmd {
        Cmd::Count { field, n, variant, sigma, expr, oracle } => {
            cmd_count(field, *n, *variant, sigma, expr, *oracle, &ctx)
        }
        Cmd::Reduce { field, expr } => cmd_reduce(field, expr, &ctx),
        Cmd::Transform { field, f, expr, kernel } => cmd_transform(field, f, expr, *kernel, &ctx),
        Cmd::Reconstruct { field, big_f, sigma, expr, kernel } => {
            cmd_reconstruct(field, big_f, sigma, expr, *kernel, &ctx)
        }
        Cmd::Dickson { field, n, a } => cmd_dickson(field, *n, a, &ctx),
        Cmd::Hverify { field, n, sigma, expr } => cmd_hverify(field, *n, sigma, expr, &ctx),
        Cmd::Table { fields, max_n, variants, oracle } => cmd_table(fields, *max_n, variants, *oracle),
        Cmd::Selftest { only } => cmd_selftest(only, &ctx),
    };
    match out {
        Ok(out) => {
            for r in &out.records {
                if cli.json {
                    println!("{}", r.json);
                } else {
                    println!("{}", r.human);
                }
            }
            ExitCode::from(out.exit)
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": error_kind(&e), "message": e.to_string() }));
            }
            eprintln!("qtk: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
