//! Resultant `Res_x(r(x), g(x) - y*h(x))` as a polynomial in `y`.

use crate::field::Field;
use crate::poly::{Poly, PolyError};

/// Determinant of a square matrix over `K[y]` by fraction-free elimination.
fn bareiss_det(field: &Field, mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(field);
    }
    let mut negate = false;
    let mut prev = Poly::one(field);
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Poly::zero(field);
            };
            m.swap(k, swap);
            negate = !negate;
        }
        if k + 1 == n {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Poly::zero(field);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}

/// `Res_x(r, g - y*h)`; a nonzero multiple of `prod (y - g(v)/h(v))` over the roots `v` of `r`.
pub fn resultant_in_y(r: &Poly, g: &Poly, h: &Poly) -> Result<Poly, PolyError> {
    r.same_field(g)?;
    r.same_field(h)?;
    let field = r.field();
    let m = r.degree().ok_or(PolyError::ZeroPolynomial)?;
    if h.is_zero() {
        return Err(PolyError::DivisionByZero);
    }
    if !g.gcd(h)?.is_one() || !r.gcd(h)?.is_one() {
        return Err(PolyError::NotCoprime);
    }
    let n = g.deg().max(h.deg());
    if m == 0 {
        return Ok(Poly::constant(field, r.leading()).pow(n as u64));
    }
    // coefficient of x^i in g - y*h, as a polynomial in y
    let b: Vec<Poly> = (0..=n)
        .map(|i| Poly::new(field, vec![g.coeff(i), field.neg(h.coeff(i))]))
        .collect();
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for s in 0..n {
        let mut row = vec![Poly::zero(field); size];
        for i in 0..=m {
            row[s + m - i] = Poly::constant(field, r.coeff(i));
        }
        rows.push(row);
    }
    for s in 0..m {
        let mut row = vec![Poly::zero(field); size];
        for i in 0..=n {
            row[s + n - i] = b[i].clone();
        }
        rows.push(row);
    }
    Ok(bareiss_det(field, rows))
}
