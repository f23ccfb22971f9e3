//! Dense univariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::field::{Elem, Field, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomials share a common root")]
    NotCoprime,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A point of the projective line: a field element or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum P1Value {
    Finite(Elem),
    Infinity,
}

impl P1Value {
    pub fn is_infinity(self) -> bool {
        matches!(self, P1Value::Infinity)
    }

    pub fn finite(self) -> Option<Elem> {
        match self {
            P1Value::Finite(v) => Some(v),
            P1Value::Infinity => None,
        }
    }

    pub fn format(self, field: &Field) -> String {
        match self {
            P1Value::Finite(v) => field.format(v),
            P1Value::Infinity => "inf".to_string(),
        }
    }
}

/// Polynomial with ascending coefficients; the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    /// Polynomial from integer coefficients (ascending) in the prime subfield.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Elem::ONE)
    }

    pub fn constant(field: &Field, c: Elem) -> Poly {
        Poly::new(field, vec![c])
    }

    pub fn x(field: &Field) -> Poly {
        Poly::monomial(field, Elem::ONE, 1)
    }

    pub fn monomial(field: &Field, c: Elem, k: usize) -> Poly {
        let mut coeffs = vec![Elem::ZERO; k + 1];
        coeffs[k] = c;
        Poly::new(field, coeffs)
    }

    /// `x - v`.
    pub fn linear_root(field: &Field, v: Elem) -> Poly {
        Poly::new(field, vec![field.neg(v), Elem::ONE])
    }

    /// `prod (x - v)` over the given points.
    pub fn from_roots(field: &Field, roots: impl IntoIterator<Item = Elem>) -> Poly {
        roots
            .into_iter()
            .fold(Poly::one(field), |acc, v| &acc * &Poly::linear_root(field, v))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; callers must guard zero themselves.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Elem::ONE
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Elem::ONE
    }

    pub fn same_field(&self, other: &Poly) -> Result<(), PolyError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(PolyError::FieldMismatch)
        }
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Scales to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.field.inv(self.leading()).expect("nonzero leading");
        self.scale(inv)
    }

    fn add_impl(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f, coeffs)
    }

    fn neg_impl(&self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.neg(a)).collect())
    }

    fn mul_impl(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    /// Quotient and remainder with `self = q*divisor + r`, `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        self.same_field(divisor)?;
        let d = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let f = &self.field;
        if self.coeffs.len() <= d {
            return Ok((Poly::zero(f), self.clone()));
        }
        let lead_inv = f.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Elem::ZERO; rem.len() - d];
        for k in (d..rem.len()).rev() {
            let c = rem[k];
            if c.is_zero() {
                continue;
            }
            let t = f.mul(c, lead_inv);
            quot[k - d] = t;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                let idx = k - d + i;
                rem[idx] = f.sub(rem[idx], f.mul(t, b));
            }
        }
        rem.truncate(d);
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Exact quotient; `None` if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(divisor).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn mul_mod(&self, other: &Poly, modulus: &Poly) -> Poly {
        (self * other).rem(modulus).expect("nonzero modulus")
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u128, modulus: &Poly) -> Poly {
        let mut acc = Poly::one(&self.field).rem(modulus).expect("nonzero modulus");
        let mut base = self.rem(modulus).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, modulus);
            }
        }
        acc
    }

    /// Monic gcd; `gcd(f, 0) = monic(f)`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.same_field(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::BothZero);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Extended gcd: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly), PolyError> {
        self.same_field(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::BothZero);
        }
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = f.inv(r0.leading())?;
        Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
    }

    pub fn eval(&self, v: Elem) -> Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, v), c))
    }

    /// Evaluation on the projective line: a nonconstant polynomial sends
    /// infinity to infinity, a constant `a` sends it to `a`.
    pub fn eval_p1(&self, v: P1Value) -> P1Value {
        match v {
            P1Value::Finite(x) => P1Value::Finite(self.eval(x)),
            P1Value::Infinity => match self.degree() {
                Some(d) if d >= 1 => P1Value::Infinity,
                _ => P1Value::Finite(self.coeff(0)),
            },
        }
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int((i as u64 % f.characteristic()) as i64), c))
            .collect();
        Poly::new(f, coeffs)
    }

    /// For `self = u(x^p)`, returns `v` with `v^p = self`. `None` if some
    /// exponent is not a multiple of `p`.
    pub fn pth_root(&self) -> Option<Poly> {
        let f = &self.field;
        let p = f.characteristic() as usize;
        let n = f.degree();
        let mut out = Vec::with_capacity(self.coeffs.len() / p + 1);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i % p != 0 {
                if !c.is_zero() {
                    return None;
                }
                continue;
            }
            // c^(1/p) = c^(p^(n-1)) in GF(p^n)
            out.push(f.frobenius(c, n - 1));
        }
        Some(Poly::new(f, out))
    }

    /// `(f', squarefree part of f)`; the squarefree part is monic.
    pub fn derivative_squarefree(&self) -> Result<(Poly, Poly), PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let sqf = squarefree_decomposition(self)?
            .into_iter()
            .fold(Poly::one(&self.field), |acc, (g, _)| &acc * &g);
        Ok((self.derivative(), sqf))
    }

    /// `sum c_i * num^i * den^(total - i)`; `total` must be at least the degree.
    pub fn compose_homogeneous(&self, num: &Poly, den: &Poly, total: usize) -> Poly {
        let f = &self.field;
        let Some(d) = self.degree() else {
            return Poly::zero(f);
        };
        assert!(total >= d, "homogenization degree below polynomial degree");
        // den powers 0..=total
        let mut den_pows = Vec::with_capacity(total + 1);
        den_pows.push(Poly::one(f));
        for i in 1..=total {
            let next = &den_pows[i - 1] * den;
            den_pows.push(next);
        }
        // Horner in num with compensating den powers
        let mut acc = Poly::constant(f, self.coeffs[d]);
        for i in (0..d).rev() {
            acc = &(&acc * num) + &den_pows[d - i].scale(self.coeffs[i]);
        }
        &acc * &den_pows[total - d]
    }

    /// Plain composition `self(inner)`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(f), |acc, &c| &(&acc * inner) + &Poly::constant(f, c))
    }

    /// Canonical text: descending terms, coefficient one omitted, `x` for `x^1`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let mut terms = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            let term = if k == 0 {
                f.format(c)
            } else if c == Elem::ONE {
                mono
            } else {
                format!("{}*{}", f.format(c), mono)
            };
            terms.push(term);
        }
        terms.join("+")
    }

    /// Ascending coefficients as JSON.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coeffs.iter().map(|&c| self.field.to_json(c)).collect())
    }

    /// All roots in the coefficient field, by exhaustive evaluation.
    pub fn roots_by_search(&self) -> Vec<Elem> {
        self.field.elements().filter(|&v| self.eval(v).is_zero()).collect()
    }
}

/// Squarefree decomposition `f = lc * prod g_i^(m_i)` with pairwise coprime,
/// monic, squarefree `g_i`. Valid over perfect fields.
pub fn squarefree_decomposition(f: &Poly) -> Result<Vec<(Poly, u64)>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    sqf_rec(&f.monic(), 1, &mut out);
    out.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(out)
}

fn sqf_rec(f: &Poly, scale: u64, out: &mut Vec<(Poly, u64)>) {
    if f.is_constant() {
        return;
    }
    let p = f.field().characteristic();
    let d = f.derivative();
    if d.is_zero() {
        let root = f.pth_root().expect("zero derivative means a p-th power");
        sqf_rec(&root, scale * p, out);
        return;
    }
    let mut c = f.gcd(&d).expect("f nonzero");
    let mut w = f.exact_div(&c).expect("gcd divides");
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c).expect("w nonzero");
        let fac = w.exact_div(&y).expect("gcd divides");
        if !fac.is_one() {
            out.push((fac, i * scale));
        }
        c = c.exact_div(&y).expect("gcd divides");
        w = y;
        i += 1;
    }
    if !c.is_one() {
        let root = c.pth_root().expect("remaining cofactor is a p-th power");
        sqf_rec(&root, scale * p, out);
    }
}

impl Ord for Poly {
    /// Degree first, then coefficient codes from the constant term upward.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.field, self.to_text())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

// Operators panic on mismatched fields; use [`poly_arith`] for the checked form.
impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field, "field mismatch");
        self.add_impl(rhs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field, "field mismatch");
        self.add_impl(&rhs.neg_impl())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field, "field mismatch");
        self.mul_impl(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_impl()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    DivRem,
    Scale(Elem),
}

/// Field-checked ring operation; `DivRem` yields `(quotient, Some(remainder))`.
pub fn poly_arith(f: &Poly, g: &Poly, op: PolyOp) -> Result<(Poly, Option<Poly>), PolyError> {
    f.same_field(g)?;
    Ok(match op {
        PolyOp::Add => (f.add_impl(g), None),
        PolyOp::Sub => (f.add_impl(&g.neg_impl()), None),
        PolyOp::Mul => (f.mul_impl(g), None),
        PolyOp::DivRem => {
            let (q, r) = f.div_rem(g)?;
            (q, Some(r))
        }
        PolyOp::Scale(c) => (f.scale(c), None),
    })
}
