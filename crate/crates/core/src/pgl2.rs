//! Projective linear group PGL2 over a finite field: classes, Möbius action,
//! the star action on monic polynomials, and finite subgroups.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::factor;
use crate::field::{Elem, Embedding, Field, FieldError};
use crate::poly::{P1Value, Poly, PolyError};

/// Default bound on subgroup sizes.
pub const DEFAULT_CAP: usize = 2000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("degree drops: the polynomial vanishes at the image of infinity")]
    DegreeDrop,
    #[error("group exceeds the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("bad subgroup parameters: {0}")]
    BadParams(String),
    #[error("identity has every point fixed")]
    IdentityInput,
    #[error("generators belong to different fields")]
    FieldMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Class `[A]` of an invertible 2x2 matrix, scaled so the first nonzero entry
/// of `(a, b, c, d)` is one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjElement {
    entries: [Elem; 4],
}

impl ProjElement {
    pub fn canonicalize(field: &Field, a: Elem, b: Elem, c: Elem, d: Elem) -> Result<Self, GroupError> {
        let det = field.sub(field.mul(a, d), field.mul(b, c));
        if det.is_zero() {
            return Err(GroupError::SingularMatrix);
        }
        let lead = [a, b, c, d]
            .into_iter()
            .find(|e| !e.is_zero())
            .expect("nonsingular matrix has a nonzero entry");
        let s = field.inv(lead)?;
        Ok(ProjElement {
            entries: [a, b, c, d].map(|e| field.mul(e, s)),
        })
    }

    /// Canonicalize from integer entries in the prime subfield.
    pub fn from_ints(field: &Field, a: i64, b: i64, c: i64, d: i64) -> Result<Self, GroupError> {
        Self::canonicalize(
            field,
            field.from_int(a),
            field.from_int(b),
            field.from_int(c),
            field.from_int(d),
        )
    }

    pub fn identity() -> Self {
        ProjElement {
            entries: [Elem::ONE, Elem::ZERO, Elem::ZERO, Elem::ONE],
        }
    }

    /// `x -> x + v`.
    pub fn translation(v: Elem) -> Self {
        ProjElement {
            entries: [Elem::ONE, v, Elem::ZERO, Elem::ONE],
        }
    }

    /// `x -> a*x`, `a` nonzero.
    pub fn scaling(field: &Field, a: Elem) -> Self {
        Self::canonicalize(field, a, Elem::ZERO, Elem::ZERO, Elem::ONE).expect("scaling by zero")
    }

    /// `x -> 1/x`.
    pub fn swap() -> Self {
        ProjElement {
            entries: [Elem::ZERO, Elem::ONE, Elem::ONE, Elem::ZERO],
        }
    }

    pub fn entries(&self) -> [Elem; 4] {
        self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn mul(&self, other: &ProjElement, field: &Field) -> ProjElement {
        let [a, b, c, d] = self.entries;
        let [e, f, g, h] = other.entries;
        let m = |x: Elem, y: Elem, z: Elem, w: Elem| field.add(field.mul(x, y), field.mul(z, w));
        Self::canonicalize(field, m(a, e, b, g), m(a, f, b, h), m(c, e, d, g), m(c, f, d, h))
            .expect("product of invertible classes is invertible")
    }

    pub fn inverse(&self, field: &Field) -> ProjElement {
        let [a, b, c, d] = self.entries;
        Self::canonicalize(field, d, field.neg(b), field.neg(c), a).expect("inverse of an invertible class")
    }

    pub fn pow(&self, mut e: u64, field: &Field) -> ProjElement {
        let mut acc = Self::identity();
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, field);
            }
            base = base.mul(&base, field);
            e >>= 1;
        }
        acc
    }

    /// `(a*v + b) / (c*v + d)` on the projective line.
    pub fn mobius_apply(&self, v: P1Value, field: &Field) -> P1Value {
        let [a, b, c, d] = self.entries;
        match v {
            P1Value::Infinity => {
                if c.is_zero() {
                    P1Value::Infinity
                } else {
                    P1Value::Finite(field.div(a, c).expect("c nonzero"))
                }
            }
            P1Value::Finite(v) => {
                let num = field.add(field.mul(a, v), b);
                let den = field.add(field.mul(c, v), d);
                if den.is_zero() {
                    P1Value::Infinity
                } else {
                    P1Value::Finite(field.div(num, den).expect("den nonzero"))
                }
            }
        }
    }

    /// Monic `sum f_i (a x + b)^i (c x + d)^(deg f - i)`.
    pub fn star_transform(&self, f: &Poly) -> Result<Poly, GroupError> {
        let field = f.field();
        let n = match f.degree() {
            Some(n) if n >= 1 => n,
            _ => return Ok(f.monic()),
        };
        let [a, b, c, d] = self.entries;
        let num = Poly::new(field, vec![b, a]);
        let den = Poly::new(field, vec![d, c]);
        let out = f.compose_homogeneous(&num, &den, n);
        if out.degree() != Some(n) {
            return Err(GroupError::DegreeDrop);
        }
        Ok(out.monic())
    }

    /// Least `k >= 1` with `A^k` the identity.
    pub fn order(&self, field: &Field) -> u64 {
        let mut k = 1;
        let mut acc = *self;
        while !acc.is_identity() {
            acc = acc.mul(self, field);
            k += 1;
        }
        k
    }

    /// Fixed points on the projective line, as minimal polynomials over the
    /// base field plus a flag for infinity.
    pub fn fixed_points(&self, field: &Field) -> Result<FixedPoints, GroupError> {
        if self.is_identity() {
            return Err(GroupError::IdentityInput);
        }
        let [a, b, c, d] = self.entries;
        // c v^2 + (d - a) v - b = 0
        let eq = Poly::new(field, vec![field.neg(b), field.sub(d, a), c]);
        let mut minpolys = Vec::new();
        if eq.degree().unwrap_or(0) >= 1 {
            let fac = factor::factor(&eq, 0).expect("nonconstant");
            minpolys = fac.factors.into_iter().map(|(g, _)| g).collect();
        }
        Ok(FixedPoints {
            infinity: c.is_zero(),
            minpolys,
        })
    }

    pub fn embed(&self, emb: &Embedding) -> ProjElement {
        ProjElement {
            entries: self.entries.map(|e| emb.apply(e)),
        }
    }

    pub fn format(&self, field: &Field) -> String {
        let [a, b, c, d] = self.entries.map(|e| field.format(e));
        format!("[[{a},{b}],[{c},{d}]]")
    }

    pub fn to_json(&self, field: &Field) -> serde_json::Value {
        let [a, b, c, d] = self.entries.map(|e| field.to_json(e));
        serde_json::json!([[a, b], [c, d]])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoints {
    pub infinity: bool,
    pub minpolys: Vec<Poly>,
}

/// How a subgroup was built; quotient maps use it to pick closed forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupKind {
    Generated,
    Translations { span: Vec<Elem> },
    Diagonal { n: u64 },
    Borel { q0: u128 },
    FullPgl2 { q0: u128 },
}

/// A finite subgroup, stored as its sorted element list.
#[derive(Clone, Debug)]
pub struct Subgroup {
    field: Field,
    elements: Vec<ProjElement>,
    generators: Vec<ProjElement>,
    kind: SubgroupKind,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    /// Breadth-first closure of the generators under multiplication.
    pub fn closure(field: &Field, generators: &[ProjElement], cap: usize) -> Result<Subgroup, GroupError> {
        let mut seen = BTreeSet::new();
        seen.insert(ProjElement::identity());
        let mut queue = VecDeque::from([ProjElement::identity()]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = x.mul(g, field);
                if seen.insert(y) {
                    if seen.len() > cap {
                        return Err(GroupError::CapExceeded { cap });
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(Subgroup {
            field: field.clone(),
            elements: seen.into_iter().collect(),
            generators: generators.to_vec(),
            kind: SubgroupKind::Generated,
        })
    }

    pub fn trivial(field: &Field) -> Subgroup {
        Self::closure(field, &[], 1).expect("trivial group")
    }

    pub fn cyclic(field: &Field, a: ProjElement) -> Result<Subgroup, GroupError> {
        Self::closure(field, &[a], DEFAULT_CAP)
    }

    /// Translations by the `F_p`-span of `vectors`.
    pub fn translations(field: &Field, vectors: &[Elem]) -> Result<Subgroup, GroupError> {
        let span = f_p_span(field, vectors, DEFAULT_CAP)?;
        let elements: BTreeSet<_> = span.iter().map(|&v| ProjElement::translation(v)).collect();
        let basis = independent_subset(field, vectors);
        Self::from_elements(
            field,
            elements,
            basis.iter().map(|&v| ProjElement::translation(v)).collect(),
            SubgroupKind::Translations { span },
        )
    }

    /// `x -> a x` for the `n`-th roots of unity `a`.
    pub fn diagonal(field: &Field, n: u64) -> Result<Subgroup, GroupError> {
        let q = field.order();
        if n == 0 || !(q - 1).is_multiple_of(n as u128) {
            return Err(GroupError::BadParams(format!("{n} does not divide {}", q - 1)));
        }
        if n as usize > DEFAULT_CAP {
            return Err(GroupError::CapExceeded { cap: DEFAULT_CAP });
        }
        let w = field.pow(primitive_element(field), (q - 1) / n as u128);
        let mut elements = BTreeSet::new();
        let mut a = Elem::ONE;
        for _ in 0..n {
            elements.insert(ProjElement::scaling(field, a));
            a = field.mul(a, w);
        }
        Self::from_elements(
            field,
            elements,
            vec![ProjElement::scaling(field, w)],
            SubgroupKind::Diagonal { n },
        )
    }

    /// Upper-triangular classes over the subfield of order `q0`.
    pub fn borel(field: &Field, q0: u128) -> Result<Subgroup, GroupError> {
        let (sub, emb) = subfield(field, q0)?;
        let size = q0 * (q0 - 1);
        if size > DEFAULT_CAP as u128 {
            return Err(GroupError::CapExceeded { cap: DEFAULT_CAP });
        }
        let mut elements = BTreeSet::new();
        for a in sub.elements().filter(|a| !a.is_zero()) {
            for b in sub.elements() {
                let m = ProjElement::canonicalize(&sub, a, b, Elem::ZERO, Elem::ONE)?;
                elements.insert(m.embed(&emb));
            }
        }
        let mut gens = vec![ProjElement::scaling(field, emb.apply(primitive_element(&sub)))];
        let mut basis = Elem::ONE;
        for _ in 0..sub.degree() {
            gens.push(ProjElement::translation(emb.apply(basis)));
            basis = sub.mul(basis, sub.generator());
        }
        gens.retain(|g| !g.is_identity());
        Self::from_elements(field, elements, gens, SubgroupKind::Borel { q0 })
    }

    /// `PGL2` of the subfield of order `q0`.
    pub fn full_pgl2(field: &Field, q0: u128) -> Result<Subgroup, GroupError> {
        let (sub, emb) = subfield(field, q0)?;
        let size = q0 * q0 * q0 - q0;
        if size > DEFAULT_CAP as u128 {
            return Err(GroupError::CapExceeded { cap: DEFAULT_CAP });
        }
        let elems: Vec<Elem> = sub.elements().collect();
        let mut elements = BTreeSet::new();
        for &a in &elems {
            for &b in &elems {
                for &c in &elems {
                    for &d in &elems {
                        if let Ok(m) = ProjElement::canonicalize(&sub, a, b, c, d) {
                            elements.insert(m.embed(&emb));
                        }
                    }
                }
            }
        }
        let borel = Self::borel(field, q0)?;
        let mut gens = borel.generators.clone();
        gens.push(ProjElement::swap());
        Self::from_elements(field, elements, gens, SubgroupKind::FullPgl2 { q0 })
    }

    fn from_elements(
        field: &Field,
        elements: BTreeSet<ProjElement>,
        generators: Vec<ProjElement>,
        kind: SubgroupKind,
    ) -> Result<Subgroup, GroupError> {
        let g = Subgroup {
            field: field.clone(),
            elements: elements.into_iter().collect(),
            generators,
            kind,
        };
        if !g.is_closed() {
            return Err(GroupError::BadParams("element set is not a group".into()));
        }
        Ok(g)
    }

    /// Identity present, closed under products and inverses.
    pub fn is_closed(&self) -> bool {
        let set: BTreeSet<_> = self.elements.iter().copied().collect();
        set.contains(&ProjElement::identity())
            && self.elements.iter().all(|x| {
                set.contains(&x.inverse(&self.field))
                    && self.elements.iter().all(|y| set.contains(&x.mul(y, &self.field)))
            })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn elements(&self) -> &[ProjElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[ProjElement] {
        &self.generators
    }

    pub fn kind(&self) -> &SubgroupKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, a: &ProjElement) -> bool {
        self.elements.binary_search(a).is_ok()
    }

    /// Orbit (sorted) and stabilizer size of a point.
    pub fn point_orbit(&self, v: P1Value) -> (Vec<P1Value>, usize) {
        let orbit: BTreeSet<_> = self.elements.iter().map(|a| a.mobius_apply(v, &self.field)).collect();
        let size = orbit.len();
        (orbit.into_iter().collect(), self.order() / size)
    }

    /// `prod (x - v)` over the finite points of the orbit of infinity.
    pub fn infinity_orbit_poly(&self) -> Poly {
        let (orbit, _) = self.point_orbit(P1Value::Infinity);
        Poly::from_roots(&self.field, orbit.into_iter().filter_map(P1Value::finite))
    }

    /// Largest element order.
    pub fn max_element_order(&self) -> u64 {
        self.elements.iter().map(|a| a.order(&self.field)).max().unwrap_or(1)
    }

    /// Elements fixing `f` under the star action.
    pub fn stabilizer_of(&self, f: &Poly) -> Result<Vec<ProjElement>, GroupError> {
        let mut out = Vec::new();
        for a in &self.elements {
            if a.star_transform(f)? == *f {
                out.push(*a);
            }
        }
        Ok(out)
    }

    /// The same subgroup with entries pushed into an extension field.
    pub fn lift(&self, target: &Field) -> Result<Subgroup, GroupError> {
        let emb = Embedding::new(&self.field, target)?;
        let kind = match &self.kind {
            SubgroupKind::Translations { span } => SubgroupKind::Translations {
                span: span.iter().map(|&v| emb.apply(v)).collect(),
            },
            other => other.clone(),
        };
        let mut elements: Vec<_> = self.elements.iter().map(|a| a.embed(&emb)).collect();
        elements.sort();
        Ok(Subgroup {
            field: target.clone(),
            elements,
            generators: self.generators.iter().map(|a| a.embed(&emb)).collect(),
            kind,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "order": self.order(),
            "generators": self.generators.iter().map(|a| a.to_json(&self.field)).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "subgroup of PGL2({}) of order {}", self.field, self.order())
    }
}

/// Uniformly random invertible class.
pub fn random_element<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> ProjElement {
    loop {
        let [a, b, c, d] = [(); 4].map(|_| factor::random_elem(field, rng));
        if let Ok(m) = ProjElement::canonicalize(field, a, b, c, d) {
            return m;
        }
    }
}

/// Subgroup generated by one or two random classes, resampled until the
/// closure fits under `cap`.
pub fn random_subgroup<R: Rng + ?Sized>(field: &Field, cap: usize, rng: &mut R) -> Subgroup {
    loop {
        let count = rng.gen_range(1..=2);
        let gens: Vec<_> = (0..count).map(|_| random_element(field, rng)).collect();
        if let Ok(g) = Subgroup::closure(field, &gens, cap) {
            return g;
        }
    }
}

/// Smallest-code generator of the multiplicative group.
pub fn primitive_element(field: &Field) -> Elem {
    let q = field.order();
    if q == 2 {
        return Elem::ONE;
    }
    let mut code = 2u64;
    loop {
        let a = field.from_code(code).expect("code in range");
        if field.multiplicative_order(a) == Some(q - 1) {
            return a;
        }
        code += 1;
    }
}

fn subfield(field: &Field, q0: u128) -> Result<(Field, Embedding), GroupError> {
    let bad = || GroupError::BadParams(format!("{q0} is not the order of a subfield of {field}"));
    let sub = Field::from_order(q0).map_err(|_| bad())?;
    let emb = Embedding::new(&sub, field).map_err(|_| bad())?;
    Ok((sub, emb))
}

fn f_p_span(field: &Field, vectors: &[Elem], cap: usize) -> Result<Vec<Elem>, GroupError> {
    let p = field.characteristic();
    let mut span: BTreeSet<Elem> = BTreeSet::from([Elem::ZERO]);
    for &v in vectors {
        if span.contains(&v) {
            continue;
        }
        let mut next = BTreeSet::new();
        for &s in &span {
            let mut t = s;
            for _ in 0..p {
                next.insert(t);
                t = field.add(t, v);
            }
        }
        if next.len() > cap {
            return Err(GroupError::CapExceeded { cap });
        }
        span = next;
    }
    Ok(span.into_iter().collect())
}

fn independent_subset(field: &Field, vectors: &[Elem]) -> Vec<Elem> {
    let mut basis = Vec::new();
    let mut size = 1;
    for &v in vectors {
        let mut trial = basis.clone();
        trial.push(v);
        let n = f_p_span(field, &trial, usize::MAX).map(|s| s.len()).unwrap_or(0);
        if n > size {
            basis = trial;
            size = n;
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u128) -> Field {
        Field::from_order(q).unwrap()
    }

    #[test]
    fn canonical_forms() {
        let f = gf(5);
        assert_eq!(ProjElement::from_ints(&f, 2, 0, 0, 2).unwrap(), ProjElement::identity());
        assert_eq!(ProjElement::from_ints(&f, 0, 2, 2, 0).unwrap(), ProjElement::swap());
        assert_eq!(
            ProjElement::from_ints(&f, 1, 2, 2, 4).unwrap_err(),
            GroupError::SingularMatrix
        );
    }

    #[test]
    fn mobius_infinity_rules() {
        let f = gf(7);
        let s = ProjElement::swap();
        assert_eq!(s.mobius_apply(P1Value::Infinity, &f), P1Value::Finite(Elem::ZERO));
        assert_eq!(s.mobius_apply(P1Value::Finite(Elem::ZERO), &f), P1Value::Infinity);
        let t = ProjElement::translation(f.from_int(3));
        assert_eq!(
            t.mobius_apply(P1Value::Finite(f.from_int(5)), &f),
            P1Value::Finite(f.from_int(1))
        );
        assert_eq!(t.mobius_apply(P1Value::Infinity, &f), P1Value::Infinity);
    }

    #[test]
    fn star_examples() {
        let f = gf(5);
        let r = Poly::from_ints(&f, &[2, 1, 1]);
        let shifted = ProjElement::translation(f.from_int(1)).star_transform(&r).unwrap();
        assert_eq!(shifted, Poly::from_ints(&f, &[4, 3, 1]));
        // reciprocal: a0^{-1} x^2 r(1/x) = 3*(2x^2+x+1) = x^2+3x+3
        let rec = ProjElement::swap().star_transform(&r).unwrap();
        assert_eq!(rec, Poly::from_ints(&f, &[3, 3, 1]));
        let x = Poly::x(&f);
        assert_eq!(
            ProjElement::swap().star_transform(&x).unwrap_err(),
            GroupError::DegreeDrop
        );
    }

    #[test]
    fn closure_sizes() {
        let f3 = gf(3);
        assert_eq!(Subgroup::trivial(&f3).order(), 1);
        assert_eq!(Subgroup::cyclic(&f3, ProjElement::swap()).unwrap().order(), 2);
        let t = ProjElement::translation(Elem::ONE);
        assert_eq!(Subgroup::cyclic(&f3, t).unwrap().order(), 3);
        assert_eq!(Subgroup::translations(&gf(2), &[Elem::ONE]).unwrap().order(), 2);
        assert_eq!(Subgroup::borel(&f3, 3).unwrap().order(), 6);
        assert_eq!(Subgroup::full_pgl2(&gf(2), 2).unwrap().order(), 6);
        assert_eq!(Subgroup::borel(&gf(9), 3).unwrap().order(), 6);
        assert_eq!(Subgroup::full_pgl2(&gf(4), 4).unwrap().order(), 60);
        assert!(matches!(Subgroup::diagonal(&gf(7), 4), Err(GroupError::BadParams(_))));
        assert!(matches!(Subgroup::borel(&gf(9), 9 * 9), Err(GroupError::BadParams(_))));
    }

    #[test]
    fn orbits_and_orders() {
        let f = gf(5);
        let b = Subgroup::borel(&f, 5).unwrap();
        assert_eq!(b.point_orbit(P1Value::Infinity), (vec![P1Value::Infinity], 20));
        let g = Subgroup::full_pgl2(&f, 5).unwrap();
        let (orbit, stab) = g.point_orbit(P1Value::Finite(Elem::ONE));
        assert_eq!(orbit.len(), 6);
        assert_eq!(stab, 20);
        assert_eq!(ProjElement::translation(Elem::ONE).order(&f), 5);
        assert_eq!(ProjElement::swap().order(&f), 2);
        assert_eq!(ProjElement::identity().order(&f), 1);
    }

    #[test]
    fn fixed_point_examples() {
        let f3 = gf(3);
        let t = ProjElement::translation(Elem::ONE).fixed_points(&f3).unwrap();
        assert!(t.infinity && t.minpolys.is_empty());
        let d = ProjElement::scaling(&f3, f3.from_int(2)).fixed_points(&f3).unwrap();
        assert!(d.infinity);
        assert_eq!(d.minpolys, vec![Poly::x(&f3)]);
        let s = ProjElement::swap().fixed_points(&f3).unwrap();
        assert!(!s.infinity);
        assert_eq!(
            s.minpolys,
            vec![Poly::from_ints(&f3, &[1, 1]), Poly::from_ints(&f3, &[2, 1])]
        );
        assert_eq!(
            ProjElement::identity().fixed_points(&f3).unwrap_err(),
            GroupError::IdentityInput
        );
    }
}
