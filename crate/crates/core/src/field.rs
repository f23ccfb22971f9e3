//! Exact arithmetic in GF(p^n).
//!
//! An element is stored as its integer code `c0 + c1*p + ... + c(n-1)*p^(n-1)`,
//! where `(c0, ..., c(n-1))` are the digits of its residue modulo the field's
//! defining polynomial. The defining polynomial is always the lexicographically
//! smallest monic irreducible of degree `n` over Z/p (comparing `(c0, ..., c(n-1))`
//! with `c0` most significant), so two independently built fields with the same
//! `(p, n)` agree digit for digit.
//!
//! Small fields (q <= 2^16) precompute exp/log tables; larger fields fall back
//! to digit-level arithmetic with `u128` intermediates.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::factor;
use crate::poly::Poly;

/// Upper bound on `p^n` for operations that enumerate the whole field or all
/// polynomials of a given degree.
pub const ENUMERATION_BUDGET: u128 = 1 << 20;

const TABLE_LIMIT: u128 = 1 << 16;
const ADD_TABLE_LIMIT: u128 = 1 << 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{n} exceeds the 2^64 arithmetic budget")]
    DegreeTooLarge { p: u64, n: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u128),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("GF({p}^{degree}) is not a subfield of GF({target_p}^{target})")]
    NotASubfield {
        p: u64,
        degree: u32,
        target_p: u64,
        target: u32,
    },
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("digit {digit} out of range for characteristic {p}")]
    DigitOutOfRange { digit: u64, p: u64 },
    #[error("expected {expected} digits, got {got}")]
    WrongDigitCount { expected: usize, got: usize },
}

/// Raw element code. Only meaningful together with the [`Field`] it came from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(u64);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn code(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u16>>,
}

struct FieldInner {
    p: u64,
    n: u32,
    q: u128,
    modulus: Vec<u64>,
    tables: Option<Tables>,
}

/// A finite field GF(p^n). Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct Field {
    inner: Arc<FieldInner>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.inner.p.hash(state);
        self.inner.modulus.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.inner.p, self.inner.n)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.inner.q)
    }
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime divisors of `n` by trial division. Only used on small inputs.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
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

/// Splits a prime power `q` into `(p, n)`.
pub fn split_prime_power(q: u128) -> Result<(u64, u32), FieldError> {
    if q < 2 {
        return Err(FieldError::NotPrimePower(q));
    }
    if q <= u64::MAX as u128 && is_prime(q as u64) {
        return Ok((q as u64, 1));
    }
    for n in (2..=64u32).rev() {
        let root = integer_root(q, n);
        for r in [root.saturating_sub(1), root, root + 1] {
            if r >= 2 && checked_pow(r, n) == Some(q) && r <= u64::MAX as u128 && is_prime(r as u64) {
                return Ok((r as u64, n));
            }
        }
    }
    Err(FieldError::NotPrimePower(q))
}

fn integer_root(q: u128, n: u32) -> u128 {
    let approx = (q as f64).powf(1.0 / n as f64).round();
    approx as u128
}

fn checked_pow(base: u128, exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

impl Field {
    /// GF(p^n) with the canonical (lexicographically smallest) modulus.
    pub fn new(p: u64, n: u32) -> Result<Field, FieldError> {
        Self::check_params(p, n)?;
        if n == 1 {
            return Ok(Self::prime(p));
        }
        let prime = Self::prime(p);
        let mut tail = vec![0u64; n as usize];
        // a zero constant term means x divides the candidate
        tail[0] = 1;
        loop {
            let mut coeffs: Vec<Elem> = tail.iter().map(|&c| Elem(c)).collect();
            coeffs.push(Elem::ONE);
            let cand = Poly::new(&prime, coeffs);
            if factor::is_irreducible(&cand).unwrap_or(false) {
                let mut modulus = tail.clone();
                modulus.push(1);
                return Ok(Self::build(p, n, modulus));
            }
            // odometer over (c0, ..., c(n-1)) with c0 most significant
            let mut i = n as usize;
            loop {
                if i == 0 {
                    unreachable!("an irreducible of every degree exists over a prime field");
                }
                i -= 1;
                tail[i] += 1;
                if tail[i] < p {
                    break;
                }
                tail[i] = 0;
            }
        }
    }

    /// GF(q) for a prime power `q`.
    pub fn from_order(q: u128) -> Result<Field, FieldError> {
        let (p, n) = split_prime_power(q)?;
        Field::new(p, n)
    }

    /// GF(p^n) with an explicit monic modulus `(c0, ..., c(n-1), 1)`.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Field, FieldError> {
        if modulus.len() < 2 {
            return Err(FieldError::BadModulus("degree must be at least 1".into()));
        }
        let n = (modulus.len() - 1) as u32;
        Self::check_params(p, n)?;
        if *modulus.last().unwrap() != 1 {
            return Err(FieldError::BadModulus("modulus must be monic".into()));
        }
        if let Some(&d) = modulus.iter().find(|&&d| d >= p) {
            return Err(FieldError::DigitOutOfRange { digit: d, p });
        }
        let prime = Self::prime(p);
        let cand = Poly::new(&prime, modulus.iter().map(|&c| Elem(c)).collect());
        if !factor::is_irreducible(&cand).unwrap_or(false) {
            return Err(FieldError::BadModulus("modulus is reducible".into()));
        }
        if n == 1 {
            // any linear modulus gives the same prime field representation
            return Ok(Self::prime(p));
        }
        Ok(Self::build(p, n, modulus.to_vec()))
    }

    fn check_params(p: u64, n: u32) -> Result<(), FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        match checked_pow(p as u128, n) {
            Some(q) if q <= 1u128 << 64 => Ok(()),
            _ => Err(FieldError::DegreeTooLarge { p, n }),
        }
    }

    /// The prime field Z/p with modulus `x`. Panics if `p` is not prime.
    pub fn prime(p: u64) -> Field {
        assert!(is_prime(p), "{p} is not prime");
        Self::build(p, 1, vec![0, 1])
    }

    fn build(p: u64, n: u32, modulus: Vec<u64>) -> Field {
        let q = (p as u128).pow(n);
        let mut field = Field {
            inner: Arc::new(FieldInner {
                p,
                n,
                q,
                modulus,
                tables: None,
            }),
        };
        if q <= TABLE_LIMIT {
            let tables = field.build_tables();
            Arc::get_mut(&mut field.inner).unwrap().tables = Some(tables);
        }
        field
    }

    fn build_tables(&self) -> Tables {
        let q = self.inner.q as u64;
        let order = q - 1;
        let primes = prime_divisors(order);
        let generator = (1..q)
            .map(Elem)
            .find(|&g| {
                primes
                    .iter()
                    .all(|&l| self.pow_slow(g, (order / l) as u128) != Elem::ONE)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = Elem::ONE;
        for i in 0..order as usize {
            exp[i] = cur.0 as u32;
            exp[i + order as usize] = cur.0 as u32;
            log[cur.0 as usize] = i as u32;
            cur = self.mul_slow(cur, generator);
        }
        let neg = (0..q).map(|c| self.neg_slow(Elem(c)).0 as u32).collect();
        let add = if self.inner.p != 2 && self.inner.n > 1 && self.inner.q <= ADD_TABLE_LIMIT {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = self.add_slow(Elem(a), Elem(b)).0 as u16;
                }
            }
            Some(t)
        } else {
            None
        };
        Tables { exp, log, neg, add }
    }

    pub fn characteristic(&self) -> u64 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.n
    }

    /// Number of elements `p^n`.
    pub fn order(&self) -> u128 {
        self.inner.q
    }

    /// Defining polynomial as ascending residues, monic, length `n + 1`.
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.n == 1
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// The class of `x` modulo the defining polynomial (equals 0 for prime fields).
    pub fn generator(&self) -> Elem {
        if self.inner.n == 1 {
            Elem::ZERO
        } else {
            Elem(self.inner.p)
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        let p = self.inner.p as i128;
        Elem((v as i128).rem_euclid(p) as u64)
    }

    /// Element from an integer code `< q`.
    pub fn from_code(&self, code: u64) -> Option<Elem> {
        ((code as u128) < self.inner.q).then_some(Elem(code))
    }

    pub fn from_digits(&self, digits: &[u64]) -> Result<Elem, FieldError> {
        let n = self.inner.n as usize;
        if digits.len() != n {
            return Err(FieldError::WrongDigitCount {
                expected: n,
                got: digits.len(),
            });
        }
        let p = self.inner.p;
        let mut code: u128 = 0;
        for &d in digits.iter().rev() {
            if d >= p {
                return Err(FieldError::DigitOutOfRange { digit: d, p });
            }
            code = code * p as u128 + d as u128;
        }
        Ok(Elem(code as u64))
    }

    /// Digits `(c0, ..., c(n-1))`, zero padded to length `n`.
    pub fn digits(&self, a: Elem) -> Vec<u64> {
        let p = self.inner.p;
        let n = self.inner.n as usize;
        if n == 1 {
            return vec![a.0];
        }
        let mut out = Vec::with_capacity(n);
        let mut c = a.0;
        for _ in 0..n {
            out.push(c % p);
            c /= p;
        }
        out
    }

    /// All elements in code order. Requires `q` within the enumeration budget.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        assert!(self.inner.q <= ENUMERATION_BUDGET, "field too large to enumerate");
        (0..self.inner.q as u64).map(Elem)
    }

    /// Whether `a` lies in the prime subfield.
    pub fn is_prime_subfield(&self, a: Elem) -> bool {
        a.0 < self.inner.p
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.inner;
        if inner.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if inner.n == 1 {
            return Elem(((a.0 as u128 + b.0 as u128) % inner.p as u128) as u64);
        }
        if let Some(Tables { add: Some(t), .. }) = &inner.tables {
            return Elem(t[(a.0 * inner.q as u64 + b.0) as usize] as u64);
        }
        self.add_slow(a, b)
    }

    fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = self.inner.p as u128;
        let (mut x, mut y) = (a.0 as u128, b.0 as u128);
        let mut code: u128 = 0;
        let mut place: u128 = 1;
        for _ in 0..self.inner.n {
            let d = (x % p + y % p) % p;
            code += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        Elem(code as u64)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let inner = &*self.inner;
        if inner.p == 2 || a.0 == 0 {
            return a;
        }
        if inner.n == 1 {
            return Elem(inner.p - a.0);
        }
        if let Some(t) = &inner.tables {
            return Elem(t.neg[a.0 as usize] as u64);
        }
        self.neg_slow(a)
    }

    fn neg_slow(&self, a: Elem) -> Elem {
        let p = self.inner.p as u128;
        let mut x = a.0 as u128;
        let mut code: u128 = 0;
        let mut place: u128 = 1;
        for _ in 0..self.inner.n {
            let d = (p - x % p) % p;
            code += d * place;
            place *= p;
            x /= p;
        }
        Elem(code as u64)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let inner = &*self.inner;
        if let Some(t) = &inner.tables {
            let i = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
            return Elem(t.exp[i] as u64);
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.inner;
        let p = inner.p as u128;
        if inner.n == 1 {
            return Elem(((a.0 as u128 * b.0 as u128) % p) as u64);
        }
        let n = inner.n as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u128; 2 * n - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % p;
            }
        }
        // reduce by the monic modulus, highest degree first
        for k in (n..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &m) in inner.modulus[..n].iter().enumerate() {
                let idx = k - n + i;
                prod[idx] = (prod[idx] + (p - c) * m as u128) % p;
            }
        }
        let mut code: u128 = 0;
        for &d in prod[..n].iter().rev() {
            code = code * p + d;
        }
        Elem(code as u64)
    }

    pub fn pow(&self, a: Elem, e: u128) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let order = self.inner.q - 1;
        if let Some(t) = &self.inner.tables {
            let l = t.log[a.0 as usize] as u128;
            return Elem(t.exp[((l * (e % order)) % order) as usize] as u64);
        }
        self.pow_slow(a, e % order)
    }

    fn pow_slow(&self, mut base: Elem, mut e: u128) -> Elem {
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(t) = &self.inner.tables {
            let order = (self.inner.q - 1) as usize;
            let l = t.log[a.0 as usize] as usize;
            return Ok(Elem(t.exp[(order - l) % order] as u64));
        }
        Ok(self.pow_slow(a, self.inner.q - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^(p^iterations)`.
    pub fn frobenius(&self, a: Elem, iterations: u32) -> Elem {
        let k = iterations % self.inner.n;
        let mut out = a;
        for _ in 0..k {
            out = self.pow(out, self.inner.p as u128);
        }
        out
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Elem) -> Option<u128> {
        if a.is_zero() {
            return None;
        }
        let order = self.inner.q - 1;
        let mut result = order;
        let small = order <= u64::MAX as u128;
        let primes = if small {
            prime_divisors(order as u64)
        } else {
            return None;
        };
        for l in primes {
            let l = l as u128;
            while result.is_multiple_of(l) && self.pow(a, result / l) == Elem::ONE {
                result /= l;
            }
        }
        Some(result)
    }

    /// Compares two elements by their digit sequences, `c0` first.
    pub fn cmp_digits(&self, a: Elem, b: Elem) -> Ordering {
        self.digits(a).cmp(&self.digits(b))
    }

    /// Element text form: integer literal for prime fields, `(c0,...,c(n-1))` otherwise.
    pub fn format(&self, a: Elem) -> String {
        if self.inner.n == 1 {
            a.0.to_string()
        } else {
            let d: Vec<String> = self.digits(a).iter().map(|c| c.to_string()).collect();
            format!("({})", d.join(","))
        }
    }

    /// Element as a JSON value: a number for prime fields, a digit array otherwise.
    pub fn to_json(&self, a: Elem) -> serde_json::Value {
        if self.inner.n == 1 {
            serde_json::Value::from(a.0)
        } else {
            serde_json::Value::from(self.digits(a))
        }
    }

    pub fn element(&self, a: Elem) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: a,
        }
    }
}

/// An element bundled with its field, with field-checked arithmetic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self.field.format(self.value), self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn digits(&self) -> Vec<u64> {
        self.field.digits(self.value)
    }

    fn check(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    fn wrap(&self, value: Elem) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.wrap(self.field.div(self.value, other.value)?))
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }

    pub fn neg(&self) -> FieldElement {
        self.wrap(self.field.neg(self.value))
    }

    pub fn pow(&self, k: u128) -> FieldElement {
        self.wrap(self.field.pow(self.value, k))
    }

    pub fn frobenius(&self, iterations: u32) -> FieldElement {
        self.wrap(self.field.frobenius(self.value, iterations))
    }
}

/// Ring embedding GF(p^m) -> GF(p^(m*s)).
///
/// The generator of the source maps to the root of the source modulus in the
/// target whose digit sequence is lexicographically smallest. Embedding a field
/// into itself is the identity.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    image: Elem,
}

impl Embedding {
    pub fn new(source: &Field, target: &Field) -> Result<Embedding, FieldError> {
        let not_sub = || FieldError::NotASubfield {
            p: source.characteristic(),
            degree: source.degree(),
            target_p: target.characteristic(),
            target: target.degree(),
        };
        if source.characteristic() != target.characteristic() || !target.degree().is_multiple_of(source.degree()) {
            return Err(not_sub());
        }
        let image = if source == target || source.is_prime_field() {
            source.generator()
        } else {
            let m: Vec<Elem> = source.modulus().iter().map(|&c| target.from_int(c as i64)).collect();
            let mut roots = factor::roots(&Poly::new(target, m));
            roots.sort_by(|&a, &b| target.cmp_digits(a, b));
            *roots.first().ok_or_else(not_sub)?
        };
        Ok(Embedding {
            source: source.clone(),
            target: target.clone(),
            image,
        })
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn apply(&self, a: Elem) -> Elem {
        if self.source == self.target {
            return a;
        }
        if self.source.is_prime_field() {
            return a;
        }
        let t = &self.target;
        self.source
            .digits(a)
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &d| t.add(t.mul(acc, self.image), Elem(d)))
    }

    pub fn apply_poly(&self, f: &Poly) -> Poly {
        Poly::new(&self.target, f.coeffs().iter().map(|&c| self.apply(c)).collect())
    }
}

/// Embeds a single element of `a`'s field into `target`.
pub fn embed(a: &FieldElement, target: &Field) -> Result<FieldElement, FieldError> {
    let e = Embedding::new(a.field(), target)?;
    Ok(target.element(e.apply(a.value())))
}
