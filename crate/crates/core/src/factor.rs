//! Irreducibility testing and factorization over finite fields.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use crate::field::{prime_divisors, Elem, Field, ENUMERATION_BUDGET};
use crate::poly::{squarefree_decomposition, Poly, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("input polynomial is constant")]
    ConstantInput,
    #[error("enumeration of {count} candidates exceeds the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u128 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `leading * prod factor^mult`, factors monic irreducible and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub input: Poly,
    pub leading: Elem,
    pub factors: Vec<(Poly, u64)>,
}

impl Factorization {
    pub fn reassemble(&self) -> Poly {
        let field = self.input.field();
        self.factors
            .iter()
            .fold(Poly::constant(field, self.leading), |acc, (g, m)| &acc * &g.pow(*m))
    }

    /// Number of distinct irreducible factors.
    pub fn distinct_count(&self) -> usize {
        self.factors.len()
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn to_json(&self) -> serde_json::Value {
        let field = self.input.field();
        json!({
            "leading": field.to_json(self.leading),
            "factors": self
                .factors
                .iter()
                .map(|(g, m)| json!({"poly": g.to_json(), "mult": m}))
                .collect::<Vec<_>>(),
        })
    }
}

/// Digest of the coefficient codes; mixes into the splitting PRNG seed.
fn digest(f: &Poly) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for c in f.coeffs() {
        for byte in c.code().to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

pub fn random_elem<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> Elem {
    let q = field.order();
    let code = if q > u64::MAX as u128 {
        rng.gen::<u64>()
    } else {
        rng.gen_range(0..q as u64)
    };
    field.from_code(code).expect("code below field order")
}

/// Uniform polynomial of degree below `bound`.
pub fn random_poly_below<R: Rng + ?Sized>(field: &Field, bound: usize, rng: &mut R) -> Poly {
    Poly::new(field, (0..bound).map(|_| random_elem(field, rng)).collect())
}

/// Uniform monic polynomial of exact degree `d`.
pub fn random_monic<R: Rng + ?Sized>(field: &Field, d: usize, rng: &mut R) -> Poly {
    let mut coeffs: Vec<Elem> = (0..d).map(|_| random_elem(field, rng)).collect();
    coeffs.push(Elem::ONE);
    Poly::new(field, coeffs)
}

/// `x^(q^i) mod f` for `i = 0..=count`.
fn frobenius_powers(f: &Poly, count: usize) -> Vec<Poly> {
    let q = f.field().order();
    let mut out = Vec::with_capacity(count + 1);
    let mut h = Poly::x(f.field()).rem(f).expect("nonzero modulus");
    out.push(h.clone());
    for _ in 0..count {
        h = h.pow_mod(q, f);
        out.push(h.clone());
    }
    out
}

/// Rabin's test.
pub fn is_irreducible(f: &Poly) -> Result<bool, FactorError> {
    let d = match f.degree() {
        None | Some(0) => return Err(FactorError::ConstantInput),
        Some(d) => d,
    };
    if d == 1 {
        return Ok(true);
    }
    let f = f.monic();
    if f.coeff(0).is_zero() {
        return Ok(false);
    }
    let x = Poly::x(f.field());
    let pows = frobenius_powers(&f, d);
    if pows[d] != x {
        return Ok(false);
    }
    for l in prime_divisors(d as u64) {
        let h = &pows[d / l as usize] - &x;
        if !f.gcd(&h)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Complete factorization: squarefree split, distinct-degree, equal-degree.
pub fn factor(f: &Poly, seed: u64) -> Result<Factorization, FactorError> {
    if f.degree().unwrap_or(0) == 0 {
        return Err(FactorError::ConstantInput);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ digest(f));
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(f)? {
        for (block, d) in distinct_degree(&part) {
            for g in equal_degree(&block, d, &mut rng) {
                factors.push((g, mult));
            }
        }
    }
    factors.sort();
    Ok(Factorization {
        input: f.clone(),
        leading: f.leading(),
        factors,
    })
}

/// Splits a monic squarefree polynomial into products of equal-degree irreducibles.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let q = field.order();
    let x = Poly::x(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(q, &rest);
        let g = rest.gcd(&(&h - &x)).expect("rest nonzero");
        if !g.is_one() {
            rest = rest.exact_div(&g).expect("gcd divides");
            h = h.rem(&rest).expect("rest nonzero");
            out.push((g, d));
        }
    }
    if rest.deg() >= 1 {
        let d = rest.deg();
        out.push((rest, d));
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of distinct degree-`d` irreducibles.
fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.deg();
    if n == d {
        return vec![f.clone()];
    }
    let field = f.field();
    let q = field.order();
    let one = Poly::one(field);
    loop {
        let a = random_poly_below(field, n, rng);
        if a.is_constant() {
            continue;
        }
        let b = if field.characteristic() == 2 {
            // trace from GF(q^d) down to GF(2)
            let steps = field.degree() as usize * d;
            let mut term = a.clone();
            let mut acc = a.clone();
            for _ in 1..steps {
                term = term.mul_mod(&term, f);
                acc = &acc + &term;
            }
            acc
        } else {
            let g = f.gcd(&a).expect("f nonzero");
            if !g.is_one() {
                return split_on(f, &g, d, rng);
            }
            // a^((q^d - 1)/2) = (a^(1 + q + ... + q^(d-1)))^((q-1)/2)
            let mut term = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                term = term.pow_mod(q, f);
                acc = acc.mul_mod(&term, f);
            }
            &acc.pow_mod((q - 1) / 2, f) - &one
        };
        if b.is_zero() {
            continue;
        }
        let g = f.gcd(&b).expect("f nonzero");
        if g.deg() > 0 && g.deg() < n {
            return split_on(f, &g, d, rng);
        }
    }
}

fn split_on(f: &Poly, g: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let other = f.exact_div(g).expect("gcd divides");
    let mut out = equal_degree(g, d, rng);
    out.extend(equal_degree(&other, d, rng));
    out
}

/// Distinct roots in the coefficient field, sorted by element code.
pub fn roots(f: &Poly) -> Vec<Elem> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let field = f.field();
    let m = f.monic();
    let x = Poly::x(field);
    let xq = x.pow_mod(field.order(), &m);
    let lin = m.gcd(&(&xq - &x)).expect("m nonzero");
    if lin.is_one() {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(digest(&lin));
    let mut out: Vec<Elem> = equal_degree(&lin, 1, &mut rng)
        .into_iter()
        .map(|g| field.neg(g.coeff(0)))
        .collect();
    out.sort();
    out
}

/// All monic irreducibles of degree `d`, in polynomial order.
pub fn irreducibles_of_degree(field: &Field, d: usize) -> Result<Vec<Poly>, FactorError> {
    if d == 0 {
        return Err(FactorError::ConstantInput);
    }
    let q = field.order();
    let count = u32::try_from(d)
        .ok()
        .and_then(|e| q.checked_pow(e))
        .unwrap_or(u128::MAX);
    if count > ENUMERATION_BUDGET {
        return Err(FactorError::BudgetExceeded {
            count,
            budget: ENUMERATION_BUDGET,
        });
    }
    let q = q as u64;
    let mut codes = vec![0u64; d];
    let mut out = Vec::new();
    loop {
        let mut coeffs: Vec<Elem> = codes
            .iter()
            .map(|&c| field.from_code(c).expect("code in range"))
            .collect();
        coeffs.push(Elem::ONE);
        let cand = Poly::new(field, coeffs);
        if is_irreducible(&cand)? {
            out.push(cand);
        }
        // odometer with the constant term most significant
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            codes[i] += 1;
            if codes[i] < q {
                break;
            }
            codes[i] = 0;
        }
    }
}

/// Rejection-sampled monic irreducible of degree `d`, reproducible from `seed`.
pub fn random_irreducible(field: &Field, d: usize, seed: u64) -> Poly {
    assert!(d >= 1, "degree must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (d as u64).rotate_left(32));
    random_irreducible_with(field, d, &mut rng)
}

pub fn random_irreducible_with<R: Rng + ?Sized>(field: &Field, d: usize, rng: &mut R) -> Poly {
    loop {
        let cand = random_monic(field, d, rng);
        if is_irreducible(&cand).unwrap_or(false) {
            return cand;
        }
    }
}
