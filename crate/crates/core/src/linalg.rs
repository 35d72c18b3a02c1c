//! Dense linear algebra over GF(q).

use crate::field::Field;
use crate::poly::Poly;

/// Solves `A x = b` by Gauss-Jordan elimination, where `rows[i] = (A_i, b_i)`.
///
/// Returns one solution (free variables set to zero), or `None` when the system is
/// inconsistent.
pub fn solve(field: &Field, mut rows: Vec<Vec<u32>>, mut rhs: Vec<u32>, unknowns: usize) -> Option<Vec<u32>> {
    let f = field;
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..unknowns {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(r, p);
        rhs.swap(r, p);
        let s = f.inv(rows[r][col]).expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            *v = f.mul(*v, s);
        }
        rhs[r] = f.mul(rhs[r], s);
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let t = rows[i][col];
                let pivot_row = rows[r].clone();
                for (v, &w) in rows[i].iter_mut().zip(&pivot_row) {
                    *v = f.sub(*v, f.mul(t, w));
                }
                rhs[i] = f.sub(rhs[i], f.mul(t, rhs[r]));
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if rhs[r..].iter().any(|&v| v != 0) {
        return None;
    }
    let mut x = vec![0; unknowns];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rhs[i];
    }
    Some(x)
}

/// Coefficients `c_j` with `target = sum_j c_j basis[j]`, if any exist.
pub fn express_in_basis(target: &Poly, basis: &[Poly]) -> Option<Vec<u32>> {
    let field = target.field();
    let len = basis
        .iter()
        .chain(std::iter::once(target))
        .map(|b| b.codes().len())
        .max()
        .unwrap_or(0);
    let rows = (0..len).map(|i| basis.iter().map(|b| b.coeff(i)).collect()).collect();
    let rhs = (0..len).map(|i| target.coeff(i)).collect();
    solve(field, rows, rhs, basis.len())
}
