//! Rational functions, the Q-transform, and quotient maps of finite subgroups.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::json;
use thiserror::Error;

use crate::factor::{irreducibles_of_degree, FactorError};
use crate::field::{Elem, Embedding, Field, FieldError};
use crate::pgl2::{ProjElement, Subgroup, SubgroupKind};
use crate::poly::{P1Value, Poly, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuotientError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("zero numerator")]
    ZeroNumerator,
    #[error("the polynomial vanishes at the value of the map at infinity")]
    ValueAtInfinityIsRoot,
    #[error("no coefficient of the orbit product generates the invariant field")]
    NoGeneratorFound,
    #[error("no base-field point has an orbit disjoint from the orbit of infinity")]
    NoRationalOrbit,
    #[error("no closed form is known for this subgroup")]
    NoClosedForm,
    #[error("rational function is not a generator of the invariant field")]
    NotAGenerator,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Reduced fraction `num/den` with monic numerator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(g: &Poly, h: &Poly) -> Result<Self, QuotientError> {
        g.same_field(h)?;
        if h.is_zero() {
            return Err(QuotientError::ZeroDenominator);
        }
        if g.is_zero() {
            return Err(QuotientError::ZeroNumerator);
        }
        let d = g.gcd(h)?;
        let g = g.exact_div(&d).expect("gcd divides");
        let h = h.exact_div(&d).expect("gcd divides");
        let s = g.field().inv(g.leading())?;
        Ok(RationalFunction {
            num: g.scale(s),
            den: h.scale(s),
        })
    }

    /// `g / 1`.
    pub fn polynomial(g: &Poly) -> Result<Self, QuotientError> {
        Self::new(g, &Poly::one(g.field()))
    }

    /// The identity function `x`.
    pub fn identity(field: &Field) -> Self {
        Self::polynomial(&Poly::x(field)).expect("x is nonzero")
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn degree(&self) -> usize {
        self.num.deg().max(self.den.deg())
    }

    pub fn value_at_infinity(&self) -> P1Value {
        let (dn, dd) = (self.num.deg(), self.den.deg());
        if dn > dd {
            P1Value::Infinity
        } else if dn < dd {
            P1Value::Finite(Elem::ZERO)
        } else {
            let f = self.field();
            P1Value::Finite(f.div(self.num.leading(), self.den.leading()).expect("den nonzero"))
        }
    }

    pub fn eval(&self, v: P1Value) -> P1Value {
        match v {
            P1Value::Infinity => self.value_at_infinity(),
            P1Value::Finite(x) => {
                let h = self.den.eval(x);
                if h.is_zero() {
                    P1Value::Infinity
                } else {
                    let f = self.field();
                    P1Value::Finite(f.div(self.num.eval(x), h).expect("h nonzero"))
                }
            }
        }
    }

    /// `Q((a x + b) / (c x + d))`.
    pub fn compose_mobius(&self, a: &ProjElement) -> RationalFunction {
        let field = self.field();
        let [a, b, c, d] = a.entries();
        let top = Poly::new(field, vec![b, a]);
        let bot = Poly::new(field, vec![d, c]);
        let k = self.degree();
        let g = self.num.compose_homogeneous(&top, &bot, k);
        let h = self.den.compose_homogeneous(&top, &bot, k);
        RationalFunction::new(&g, &h).expect("Möbius substitution keeps both parts nonzero")
    }

    /// `1 / (Q - beta)`.
    fn shifted_reciprocal(&self, beta: Elem) -> RationalFunction {
        let g = &self.num - &self.den.scale(beta);
        RationalFunction::new(&self.den, &g).expect("Q is not constant")
    }

    /// `a * Q`.
    fn scaled(&self, a: Elem) -> RationalFunction {
        RationalFunction::new(&self.num.scale(a), &self.den).expect("a nonzero")
    }

    pub fn embed(&self, emb: &Embedding) -> RationalFunction {
        RationalFunction::new(&emb.apply_poly(&self.num), &emb.apply_poly(&self.den)).expect("embedding is injective")
    }

    pub fn to_text(&self) -> String {
        if self.den.is_one() {
            self.num.to_text()
        } else {
            format!("({})/({})", self.num.to_text(), self.den.to_text())
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RF[{}]({})", self.field(), self.to_text())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `sum F_i g^i h^(deg F - i)` for `Q = g/h`.
pub fn q_transform(f: &Poly, q: &RationalFunction) -> Result<Poly, QuotientError> {
    f.same_field(q.num())?;
    let k = match f.degree() {
        None => return Ok(f.clone()),
        Some(0) => return Ok(f.clone()),
        Some(k) => k,
    };
    if let P1Value::Finite(beta) = q.value_at_infinity() {
        if f.eval(beta).is_zero() {
            return Err(QuotientError::ValueAtInfinityIsRoot);
        }
    }
    Ok(f.compose_homogeneous(q.num(), q.den(), k))
}

/// Degree `|G|` and invariant under every element of `G`.
pub fn verify_generator(q: &RationalFunction, group: &Subgroup) -> bool {
    q.field() == group.field()
        && q.degree() == group.order()
        && group.elements().iter().all(|a| q.compose_mobius(a) == *q)
}

/// Constants `(a, b)` with `lhs = a * rhs + b`, if they exist.
pub fn affine_relation(lhs: &RationalFunction, rhs: &RationalFunction) -> Option<(Elem, Elem)> {
    let field = lhs.field();
    if field != rhs.field() || lhs.degree() != rhs.degree() {
        return None;
    }
    // lhs = (a g2 + b h2) / h2, so the reduced denominators agree up to scaling
    if lhs.den().monic() != rhs.den().monic() {
        return None;
    }
    let lam = field.div(lhs.den().leading(), rhs.den().leading()).ok()?;
    let g1 = lhs.num().scale(field.inv(lam).ok()?);
    let (g2, h2) = (rhs.num(), rhs.den());
    if g2.deg() <= h2.deg() {
        return brute_affine(lhs, rhs);
    }
    let a = field.div(g1.leading(), g2.leading()).ok()?;
    let rest = &g1 - &g2.scale(a);
    if rest.is_zero() {
        return (!a.is_zero()).then_some((a, Elem::ZERO));
    }
    let b = rest.exact_div(h2)?;
    (b.is_constant() && !a.is_zero()).then(|| (a, b.coeff(0)))
}

fn brute_affine(lhs: &RationalFunction, rhs: &RationalFunction) -> Option<(Elem, Elem)> {
    let field = lhs.field();
    for a in field.elements().filter(|a| !a.is_zero()) {
        for b in field.elements() {
            let g = &rhs.num().scale(a) + &rhs.den().scale(b);
            if let Ok(cand) = RationalFunction::new(&g, rhs.den()) {
                if cand == *lhs {
                    return Some((a, b));
                }
            }
        }
    }
    None
}

/// Normalized generator of the invariant field of a subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientMap {
    rf: RationalFunction,
    group: Subgroup,
}

impl QuotientMap {
    pub fn rf(&self) -> &RationalFunction {
        &self.rf
    }

    pub fn group(&self) -> &Subgroup {
        &self.group
    }

    pub fn num(&self) -> &Poly {
        self.rf.num()
    }

    pub fn den(&self) -> &Poly {
        self.rf.den()
    }

    pub fn field(&self) -> &Field {
        self.rf.field()
    }

    pub fn transform(&self, f: &Poly) -> Result<Poly, QuotientError> {
        q_transform(f, &self.rf)
    }

    pub fn eval(&self, v: P1Value) -> P1Value {
        self.rf.eval(v)
    }

    pub fn affinely_equivalent(&self, other: &RationalFunction) -> bool {
        affine_relation(&self.rf, other).is_some()
    }

    /// The same map over an extension field.
    pub fn lift(&self, target: &Field) -> Result<QuotientMap, QuotientError> {
        let emb = Embedding::new(self.field(), target)?;
        let group = self.group.lift(target).map_err(|_| QuotientError::NotAGenerator)?;
        Ok(QuotientMap {
            rf: self.rf.embed(&emb),
            group,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "num": self.rf.num().to_json(),
            "den": self.rf.den().to_json(),
            "group_size": self.group.order(),
            "verified": true,
        })
    }
}

/// Rewrites a generator so that it sends infinity to infinity and has monic
/// numerator and denominator.
pub fn normalize_to_quotient_map(q: &RationalFunction, group: &Subgroup) -> Result<QuotientMap, QuotientError> {
    if !verify_generator(q, group) {
        return Err(QuotientError::NotAGenerator);
    }
    let mut rf = q.clone();
    if let P1Value::Finite(beta) = rf.value_at_infinity() {
        rf = rf.shifted_reciprocal(beta);
    }
    // numerator is already monic; scaling by lc(den) makes the denominator monic too
    let lead = rf.den().leading();
    rf = rf.scaled(lead);
    Ok(QuotientMap {
        rf,
        group: group.clone(),
    })
}

/// Coefficients in `y` of `prod ((c x + d) y - (a x + b))`.
fn orbit_product_coefficients(group: &Subgroup) -> Vec<Poly> {
    let field = group.field();
    let mut coeffs = vec![Poly::one(field)];
    for a in group.elements() {
        let [a, b, c, d] = a.entries();
        let c0 = Poly::new(field, vec![field.neg(b), field.neg(a)]);
        let c1 = Poly::new(field, vec![d, c]);
        let mut next = vec![Poly::zero(field); coeffs.len() + 1];
        for (j, cj) in coeffs.iter().enumerate() {
            next[j] = &next[j] + &(cj * &c0);
            next[j + 1] = &next[j + 1] + &(cj * &c1);
        }
        coeffs = next;
    }
    coeffs
}

/// Searches the coefficients of the orbit product for a generator.
pub fn quotient_map_fg(group: &Subgroup) -> Result<QuotientMap, QuotientError> {
    let n = group.order();
    let coeffs = orbit_product_coefficients(group);
    let top = &coeffs[n];
    for cj in &coeffs[..n] {
        if cj.is_zero() {
            continue;
        }
        let cand = RationalFunction::new(cj, top)?;
        if cand.degree() == n && verify_generator(&cand, group) {
            return normalize_to_quotient_map(&cand, group);
        }
    }
    Err(QuotientError::NoGeneratorFound)
}

/// Orbit formula: `prod_{u in G v} (x - u)^m_v / prod_{u in G inf, u finite} (x - u)^m_inf`
/// for a base-field `v` whose orbit avoids that of infinity.
pub fn quotient_map_bluher(group: &Subgroup) -> Result<QuotientMap, QuotientError> {
    let field = group.field();
    let n = group.order();
    let (inf_orbit, m_inf) = group.point_orbit(P1Value::Infinity);
    let inf_set: BTreeSet<_> = inf_orbit.iter().copied().collect();
    let mut best: Option<(Vec<P1Value>, usize)> = None;
    for v in field.elements() {
        if inf_set.contains(&P1Value::Finite(v)) {
            continue;
        }
        let (orbit, stab) = group.point_orbit(P1Value::Finite(v));
        if best.as_ref().is_none_or(|(o, _)| orbit.len() > o.len()) {
            let regular = stab == 1;
            best = Some((orbit, stab));
            if regular {
                break;
            }
        }
    }
    let Some((orbit, m_v)) = best else {
        return Err(QuotientError::NoRationalOrbit);
    };
    let g = Poly::from_roots(field, orbit.iter().filter_map(|u| u.finite())).pow(m_v as u64);
    let h = Poly::from_roots(field, inf_orbit.iter().filter_map(|u| u.finite())).pow(m_inf as u64);
    let cand = RationalFunction::new(&g, &h)?;
    if cand.degree() != n {
        return Err(QuotientError::NotAGenerator);
    }
    normalize_to_quotient_map(&cand, group)
}

/// Known closed forms for the named subgroup families.
pub fn quotient_map_closed_form(group: &Subgroup) -> Result<QuotientMap, QuotientError> {
    let field = group.field();
    let cand = match group.kind() {
        SubgroupKind::Translations { span } => {
            RationalFunction::polynomial(&Poly::from_roots(field, span.iter().copied()))?
        }
        SubgroupKind::Diagonal { n } => RationalFunction::polynomial(&Poly::monomial(field, Elem::ONE, *n as usize))?,
        SubgroupKind::Borel { q0 } => {
            let (sub, emb) = subfield(field, *q0)?;
            let prod = product_of_irreducibles(&sub, 2)?;
            RationalFunction::polynomial(&emb.apply_poly(&prod))?
        }
        SubgroupKind::FullPgl2 { q0 } => {
            let (sub, emb) = subfield(field, *q0)?;
            let num = product_of_irreducibles(&sub, 3)?;
            let q0 = *q0 as usize;
            let lin = &Poly::monomial(&sub, Elem::ONE, q0) - &Poly::x(&sub);
            let den = lin.pow(((q0 - 1) * q0) as u64);
            RationalFunction::new(&emb.apply_poly(&num), &emb.apply_poly(&den))?
        }
        SubgroupKind::Generated => return Err(QuotientError::NoClosedForm),
    };
    normalize_to_quotient_map(&cand, group)
}

/// Closed form when the subgroup has one, otherwise the coefficient search.
pub fn quotient_map(group: &Subgroup) -> Result<QuotientMap, QuotientError> {
    match quotient_map_closed_form(group) {
        Err(QuotientError::NoClosedForm) => quotient_map_fg(group),
        other => other,
    }
}

/// Product of all monic irreducibles of degree `d`.
pub fn product_of_irreducibles(field: &Field, d: usize) -> Result<Poly, QuotientError> {
    Ok(irreducibles_of_degree(field, d)?
        .iter()
        .fold(Poly::one(field), |acc, g| &acc * g))
}

fn subfield(field: &Field, q0: u128) -> Result<(Field, Embedding), QuotientError> {
    let sub = Field::from_order(q0)?;
    Ok((sub.clone(), Embedding::new(&sub, field)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u128) -> Field {
        Field::from_order(q).unwrap()
    }

    #[test]
    fn rf_examples() {
        let f3 = gf(3);
        let g = Poly::from_ints(&f3, &[1, 0, 1]);
        let x = Poly::x(&f3);
        let q = RationalFunction::new(&g, &x).unwrap();
        assert_eq!((q.num(), q.den()), (&g, &x));
        assert_eq!(q.degree(), 2);
        assert_eq!(q.value_at_infinity(), P1Value::Infinity);
        let a = Poly::from_ints(&f3, &[1, 1]);
        let c = RationalFunction::new(&a.pow(2), &a).unwrap();
        assert_eq!((c.num(), c.den()), (&a, &Poly::one(&f3)));
        let f5 = gf(5);
        let r = RationalFunction::new(&Poly::from_ints(&f5, &[2, 2]), &Poly::from_ints(&f5, &[2])).unwrap();
        assert_eq!(r.num(), &Poly::from_ints(&f5, &[1, 1]));
        assert_eq!(r.den(), &Poly::one(&f5));
        assert_eq!(
            RationalFunction::new(&g, &Poly::zero(&f3)).unwrap_err(),
            QuotientError::ZeroDenominator
        );
        assert_eq!(
            RationalFunction::new(&Poly::zero(&f3), &g).unwrap_err(),
            QuotientError::ZeroNumerator
        );
    }

    #[test]
    fn transform_examples() {
        let f3 = gf(3);
        let q = RationalFunction::new(&Poly::from_ints(&f3, &[1, 0, 1]), &Poly::x(&f3)).unwrap();
        let t = q_transform(&Poly::from_ints(&f3, &[1, 0, 1]), &q).unwrap();
        assert_eq!(t, Poly::from_ints(&f3, &[1, 0, 0, 0, 1]));
        let beta = f3.from_int(2);
        let lin = q_transform(&Poly::linear_root(&f3, beta), &q).unwrap();
        assert_eq!(lin, &Poly::from_ints(&f3, &[1, 0, 1]) - &Poly::x(&f3).scale(beta));
        let bad = RationalFunction::new(&Poly::x(&f3), &Poly::from_ints(&f3, &[1, 1])).unwrap();
        assert_eq!(
            q_transform(&Poly::from_ints(&f3, &[2, 1]), &bad).unwrap_err(),
            QuotientError::ValueAtInfinityIsRoot
        );
    }

    #[test]
    fn fg_examples() {
        let f5 = gf(5);
        let t = Subgroup::translations(&f5, &[Elem::ONE]).unwrap();
        let q = quotient_map_fg(&t).unwrap();
        assert_eq!(q.num(), &Poly::from_ints(&f5, &[0, 4, 0, 0, 0, 1]));
        assert!(q.den().is_one());
        let d = Subgroup::diagonal(&f5, 4).unwrap();
        assert_eq!(quotient_map_fg(&d).unwrap().num(), &Poly::monomial(&f5, Elem::ONE, 4));
        let s = Subgroup::cyclic(&f5, ProjElement::swap()).unwrap();
        let q = quotient_map_fg(&s).unwrap();
        assert_eq!(q.num(), &Poly::from_ints(&f5, &[1, 0, 1]));
        assert_eq!(q.den(), &Poly::x(&f5));
    }

    #[test]
    fn normalization_examples() {
        let f3 = gf(3);
        let s = Subgroup::cyclic(&f3, ProjElement::swap()).unwrap();
        let inv = RationalFunction::new(&Poly::x(&f3), &Poly::from_ints(&f3, &[1, 0, 1])).unwrap();
        let q = normalize_to_quotient_map(&inv, &s).unwrap();
        assert_eq!(q.num(), &Poly::from_ints(&f3, &[1, 0, 1]));
        assert_eq!(q.den(), &Poly::x(&f3));
        let again = normalize_to_quotient_map(q.rf(), &s).unwrap();
        assert_eq!(again, q);
        let f5 = gf(5);
        let neg = Subgroup::diagonal(&f5, 2).unwrap();
        let p = RationalFunction::polynomial(&Poly::from_ints(&f5, &[1, 0, 3])).unwrap();
        let q = normalize_to_quotient_map(&p, &neg).unwrap();
        assert_eq!(q.num(), &Poly::from_ints(&f5, &[2, 0, 1]));
        assert!(q.den().is_one());
    }

    #[test]
    fn generator_checks() {
        let f2 = gf(2);
        let t = Subgroup::translations(&f2, &[Elem::ONE]).unwrap();
        let x2 = RationalFunction::polynomial(&Poly::monomial(&f2, Elem::ONE, 2)).unwrap();
        assert!(!verify_generator(&x2, &t));
        let x2x = RationalFunction::polynomial(&Poly::from_ints(&f2, &[0, 1, 1])).unwrap();
        assert!(verify_generator(&x2x, &t));
        assert!(verify_generator(
            &RationalFunction::identity(&f2),
            &Subgroup::trivial(&f2)
        ));
    }

    #[test]
    fn compose_examples() {
        let f7 = gf(7);
        let a = ProjElement::from_ints(&f7, 2, 3, 1, 4).unwrap();
        let id = RationalFunction::identity(&f7);
        let moved = id.compose_mobius(&a);
        let expect = RationalFunction::new(&Poly::from_ints(&f7, &[3, 2]), &Poly::from_ints(&f7, &[4, 1])).unwrap();
        assert_eq!(moved, expect);
        let q = RationalFunction::new(&Poly::from_ints(&f7, &[1, 0, 1]), &Poly::x(&f7)).unwrap();
        assert_eq!(q.compose_mobius(&ProjElement::swap()), q);
        let x3 = RationalFunction::polynomial(&Poly::monomial(&f7, Elem::ONE, 3)).unwrap();
        let w = ProjElement::scaling(&f7, f7.from_int(2));
        assert_eq!(x3.compose_mobius(&w), x3);
    }

    #[test]
    fn bluher_and_closed_forms_agree_with_fg() {
        for q in [2u128, 3, 4, 5] {
            let f = gf(q);
            let b = Subgroup::borel(&f, q).unwrap();
            let fg = quotient_map_fg(&b).unwrap();
            let closed = quotient_map_closed_form(&b).unwrap();
            assert!(fg.affinely_equivalent(closed.rf()), "q={q}");
            let bl = quotient_map_bluher(&b).unwrap();
            assert!(bl.affinely_equivalent(closed.rf()), "q={q}");
        }
        let f3 = gf(3);
        let g = Subgroup::full_pgl2(&f3, 3).unwrap();
        assert_eq!(quotient_map_bluher(&g).unwrap_err(), QuotientError::NoRationalOrbit);
    }

    #[test]
    fn bluher_over_cubic_extension_matches_closed_form() {
        let f8 = gf(8);
        let g = Subgroup::full_pgl2(&f8, 2).unwrap();
        let bl = quotient_map_bluher(&g).unwrap();
        let closed = quotient_map_closed_form(&g).unwrap();
        assert_eq!(bl, closed);
    }
}
