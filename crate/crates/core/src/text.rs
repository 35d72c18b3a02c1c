//! Text formats.
//!
//! * Field: `"p^k"` or bare `"p"`.
//! * Element: an integer (reduced into the prime subfield) or a coordinate tuple
//!   `"[a0 a1 ... a(k-1)]"`.
//! * Polynomial: ascending coefficient list `"c0,c1,...,cd"`, or human form
//!   `"x^2+2*x+1"` (the variable may be `x` or `y`). Emission uses the list form
//!   with a human-form annotation.
//! * Rational expression: `"g / h"`.
//! * Moebius map: `"[a b; c d]"` for `x -> (ax+b)/(cx+d)`.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::moebius::{MoebiusMap, QuadRationalExpr};
use crate::poly::Poly;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// A field given by its order (`9`) or as `p^k` (`3^2`).
pub fn parse_field(s: &str) -> Result<Field> {
    let s = s.trim();
    let Some((p, k)) = s.split_once('^') else {
        let q: u64 = s.parse().map_err(|_| perr(format!("bad field order {s:?}")))?;
        return Field::from_order(q);
    };
    let p: u64 = p.trim().parse().map_err(|_| perr(format!("bad characteristic in field {s:?}")))?;
    let k: u32 = k.trim().parse().map_err(|_| perr(format!("bad exponent in field {s:?}")))?;
    Field::new(p, k)
}

pub fn format_element(field: &Field, code: u32) -> String {
    if field.is_prime_field() {
        code.to_string()
    } else {
        let c: Vec<String> = field.coords(code).iter().map(u32::to_string).collect();
        format!("[{}]", c.join(" "))
    }
}

pub fn parse_element(field: &Field, s: &str) -> Result<u32> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('[') {
        let inner = inner.strip_suffix(']').ok_or_else(|| perr(format!("unclosed tuple {s:?}")))?;
        let coords = inner
            .split_whitespace()
            .map(|t| t.parse::<i64>().map(|v| v.rem_euclid(field.characteristic() as i64) as u32))
            .collect::<std::result::Result<Vec<u32>, _>>()
            .map_err(|_| perr(format!("bad tuple {s:?}")))?;
        return field.element_from_coords(&coords).map(|e| e.code());
    }
    let v: i64 = s.parse().map_err(|_| perr(format!("bad coefficient {s:?}")))?;
    Ok(field.from_int(v))
}

pub fn parse_field_element(field: &Field, s: &str) -> Result<FieldElement> {
    parse_element(field, s).map(|c| field.element(c))
}

pub fn format_poly_coeffs(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let parts: Vec<String> = p.codes().iter().map(|&c| format_element(p.field(), c)).collect();
    parts.join(",")
}

pub fn format_poly_human(p: &Poly, var: char) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let f = p.field();
    let mut out = String::new();
    for (i, &c) in p.codes().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('+');
        }
        let coef = format_element(f, c);
        match (i, c) {
            (0, _) => out.push_str(&coef),
            (_, 1) => {}
            _ => {
                out.push_str(&coef);
                out.push('*');
            }
        }
        match i {
            0 => {}
            1 => out.push(var),
            _ => out.push_str(&format!("{var}^{i}")),
        }
    }
    out
}

/// Parses either polynomial format; a string mentioning `x` or `y` is read as human form.
pub fn parse_poly(field: &Field, s: &str) -> Result<Poly> {
    let s = s.trim();
    if s.contains(['x', 'y']) {
        parse_poly_human(field, s)
    } else {
        parse_poly_coeffs(field, s)
    }
}

pub fn parse_poly_coeffs(field: &Field, s: &str) -> Result<Poly> {
    let s = s.trim();
    if s.is_empty() {
        return Err(perr("empty polynomial"));
    }
    let coeffs = s.split(',').map(|t| parse_element(field, t)).collect::<Result<Vec<u32>>>()?;
    Ok(Poly::from_codes(field, coeffs))
}

pub fn parse_poly_human(field: &Field, s: &str) -> Result<Poly> {
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut negative = false;
    let mut sign_pending = false;
    let mut depth = 0usize;
    for ch in s.chars() {
        match ch {
            '+' | '-' if depth == 0 => {
                if cur.is_empty() {
                    if sign_pending || !terms.is_empty() {
                        return Err(perr(format!("dangling sign in {s:?}")));
                    }
                } else {
                    terms.push((negative, std::mem::take(&mut cur)));
                }
                negative = ch == '-';
                sign_pending = true;
            }
            c if c.is_whitespace() && depth == 0 => {}
            _ => {
                if ch == '[' {
                    depth += 1;
                } else if ch == ']' {
                    depth = depth.checked_sub(1).ok_or_else(|| perr("unbalanced ']'"))?;
                }
                sign_pending = false;
                cur.push(ch);
            }
        }
    }
    if cur.is_empty() {
        return Err(perr(format!("dangling sign or empty polynomial {s:?}")));
    }
    terms.push((negative, cur));

    let mut acc = Poly::zero(field);
    for (neg, term) in terms {
        let term = term.trim();
        let (coef_str, var_part) = match term.find(['x', 'y']) {
            Some(pos) => {
                let coef = term[..pos].trim_end_matches('*').trim();
                (coef, Some(&term[pos + 1..]))
            }
            None => (term, None),
        };
        let coef = if coef_str.is_empty() { 1 } else { parse_element(field, coef_str)? };
        let exp = match var_part {
            None => 0,
            Some("") => 1,
            Some(rest) => rest
                .strip_prefix('^')
                .and_then(|e| e.parse::<usize>().ok())
                .ok_or_else(|| perr(format!("bad exponent in term {term:?}")))?,
        };
        let c = if neg { field.neg(coef) } else { coef };
        acc = &acc + &Poly::monomial(field, c, exp);
    }
    Ok(acc)
}

pub fn parse_expr(field: &Field, s: &str) -> Result<QuadRationalExpr> {
    let (g, h) = s.split_once('/').ok_or_else(|| perr(format!("expected \"g / h\", got {s:?}")))?;
    QuadRationalExpr::new(&parse_poly(field, g)?, &parse_poly(field, h)?)
}

pub fn format_expr(r: &QuadRationalExpr) -> String {
    format!("{} / {}", format_poly_coeffs(r.numerator()), format_poly_coeffs(r.denominator()))
}

pub fn format_expr_human(r: &QuadRationalExpr) -> String {
    format!("({}) / ({})", format_poly_human(r.numerator(), 'x'), format_poly_human(r.denominator(), 'x'))
}

pub fn parse_moebius(field: &Field, s: &str) -> Result<MoebiusMap> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| perr(format!("expected \"[a b; c d]\", got {s:?}")))?;
    let (top, bottom) = inner.split_once(';').ok_or_else(|| perr("missing ';' in matrix"))?;
    let entries = |row: &str| -> Result<Vec<u32>> {
        let v = split_entries(row)?.iter().map(|t| parse_element(field, t)).collect::<Result<Vec<u32>>>()?;
        if v.len() != 2 {
            return Err(perr(format!("matrix row {row:?} must have two entries")));
        }
        Ok(v)
    };
    let (t, b) = (entries(top)?, entries(bottom)?);
    MoebiusMap::from_codes(field, t[0], t[1], b[0], b[1])
}

/// Splits on whitespace outside of `[...]` tuples.
fn split_entries(row: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for ch in row.chars() {
        match ch {
            '[' => {
                depth += 1;
                cur.push(ch);
            }
            ']' => {
                depth = depth.checked_sub(1).ok_or_else(|| perr("unbalanced ']'"))?;
                cur.push(ch);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            _ => cur.push(ch),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

pub fn format_moebius(m: &MoebiusMap) -> String {
    let f = m.field();
    let [a, b, c, d] = m.entries();
    format!(
        "[{} {}; {} {}]",
        format_element(f, a),
        format_element(f, b),
        format_element(f, c),
        format_element(f, d)
    )
}
