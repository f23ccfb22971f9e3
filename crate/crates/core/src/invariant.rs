//! Invariant polynomials, orbit certificates, the exceptional locus, and
//! decomposition of invariant polynomials.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;
use thiserror::Error;

use crate::factor::{self, FactorError};
use crate::pgl2::{GroupError, ProjElement, Subgroup, SubgroupKind};
use crate::poly::{Poly, PolyError};
use crate::quotient::{QuotientError, QuotientMap};
use crate::resultant::resultant_in_y;

/// Seed for the internal factorizations; outputs are seed-independent.
const FACTOR_SEED: u64 = 0x5eed;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("polynomial has a root in the orbit of infinity")]
    OutsideNR,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("polynomial is not invariant under the group")]
    NotInvariant,
    #[error("an orbit of factors occurs with different multiplicities")]
    MultiplicityMismatch,
    #[error("certificate violation: {0}")]
    CertificateViolation(String),
    #[error("transformed polynomial is not separable")]
    NotSeparable,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn violation(what: impl Into<String>) -> InvariantError {
    InvariantError::CertificateViolation(what.into())
}

/// No roots at the finite points of the orbit of infinity.
pub fn in_nr(f: &Poly, group: &Subgroup) -> bool {
    !f.is_zero() && f.gcd(&group.infinity_orbit_poly()).map(|g| g.is_one()).unwrap_or(false)
}

fn require_nr(f: &Poly, group: &Subgroup) -> Result<(), InvariantError> {
    if in_nr(f, group) {
        Ok(())
    } else {
        Err(InvariantError::OutsideNR)
    }
}

fn require_irreducible(f: &Poly) -> Result<(), InvariantError> {
    match factor::is_irreducible(f) {
        Ok(true) => Ok(()),
        _ => Err(InvariantError::NotIrreducible),
    }
}

/// Star-invariance of `monic(f)` under every element of the group.
pub fn is_invariant(f: &Poly, group: &Subgroup) -> Result<bool, InvariantError> {
    require_nr(f, group)?;
    let f = f.monic();
    if f.is_constant() {
        return Ok(true);
    }
    for a in group.generators() {
        if a.star_transform(&f)? != f {
            return Ok(false);
        }
    }
    debug_assert!(group
        .elements()
        .iter()
        .all(|a| a.star_transform(&f).ok().as_ref() == Some(&f)));
    Ok(true)
}

/// Sorted, deduplicated star-orbit of `r`.
fn star_orbit(r: &Poly, group: &Subgroup) -> Result<Vec<Poly>, InvariantError> {
    let set: BTreeSet<Poly> = group
        .elements()
        .iter()
        .map(|a| a.star_transform(r))
        .collect::<Result<_, _>>()?;
    Ok(set.into_iter().collect())
}

fn product(polys: &[Poly], field: &crate::field::Field) -> Poly {
    polys.iter().fold(Poly::one(field), |acc, p| &acc * p)
}

/// Orbit of an irreducible and the product of its members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPoly {
    pub orbit: Vec<Poly>,
    pub product: Poly,
}

pub fn orbit_poly(r: &Poly, group: &Subgroup) -> Result<OrbitPoly, InvariantError> {
    require_irreducible(r)?;
    require_nr(r, group)?;
    let orbit = star_orbit(&r.monic(), group)?;
    let product = product(&orbit, group.field());
    Ok(OrbitPoly { orbit, product })
}

/// Minimal polynomials of fixed points of non-identity elements, excluding
/// those with a root in the orbit of infinity; and whether infinity is fixed.
pub fn exceptional_minpolys(group: &Subgroup) -> Result<(bool, Vec<Poly>), InvariantError> {
    let inf_poly = group.infinity_orbit_poly();
    let mut infinity = false;
    let mut set = BTreeSet::new();
    for a in group.elements().iter().filter(|a| !a.is_identity()) {
        let fp = a.fixed_points(group.field())?;
        infinity |= fp.infinity;
        for m in fp.minpolys {
            if m.gcd(&inf_poly)?.is_one() {
                set.insert(m);
            }
        }
    }
    Ok((infinity, set.into_iter().collect()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateChecks {
    pub single_orbit: bool,
    pub uniform_multiplicity: bool,
    pub product: bool,
    pub degree_div: bool,
    pub count: bool,
}

impl CertificateChecks {
    pub fn all(&self) -> bool {
        self.single_orbit && self.uniform_multiplicity && self.product && self.degree_div && self.count
    }
}

/// Witness that `F^Q = (prod orbit)^k` for one orbit of irreducibles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCertificate {
    pub f: Poly,
    pub r: Poly,
    pub orbit: Vec<Poly>,
    pub k: u64,
    pub checks: CertificateChecks,
    /// The transform avoids every exceptional minimal polynomial and the orbit of infinity.
    pub gcd_criterion: bool,
    /// `k = 1` whenever the gcd criterion holds.
    pub k1_ok: bool,
}

impl OrbitCertificate {
    pub fn is_valid(&self) -> bool {
        self.checks.all() && self.k1_ok
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "F": self.f.to_json(),
            "r": self.r.to_json(),
            "orbit": self.orbit.iter().map(Poly::to_json).collect::<Vec<_>>(),
            "k": self.k,
            "checks": {
                "single_orbit": self.checks.single_orbit,
                "uniform_multiplicity": self.checks.uniform_multiplicity,
                "product": self.checks.product,
                "degree_div": self.checks.degree_div,
                "count": self.checks.count,
                "k1_criterion": self.k1_ok,
            },
        })
    }
}

/// Builds the certificate for `F` against a given transform, recording every
/// check rather than failing on the first.
pub fn certify_transform(f: &Poly, q: &QuotientMap, transform: &Poly) -> Result<OrbitCertificate, InvariantError> {
    let group = q.group();
    let fac = factor::factor(transform, FACTOR_SEED)?;
    let (r, first_mult) = fac.factors[0].clone();
    let orbit = star_orbit(&r, group)?;
    let factor_set: BTreeSet<&Poly> = fac.factors.iter().map(|(g, _)| g).collect();
    let orbit_set: BTreeSet<&Poly> = orbit.iter().collect();
    let single_orbit = factor_set == orbit_set;
    let uniform_multiplicity = fac.factors.iter().all(|(_, m)| *m == first_mult);
    let k = first_mult;
    let product_check = product(&orbit, group.field()).pow(k) == *transform;
    let deg_f = f.deg();
    let degree_div = deg_f > 0 && r.deg() % deg_f == 0;
    let count = orbit.len() * r.deg() * k as usize == group.order() * deg_f;
    let (_, minpolys) = exceptional_minpolys(group)?;
    let guard = &product(&minpolys, group.field()) * &group.infinity_orbit_poly();
    let gcd_criterion = transform.gcd(&guard)?.is_one();
    Ok(OrbitCertificate {
        f: f.clone(),
        r,
        orbit,
        k,
        checks: CertificateChecks {
            single_orbit,
            uniform_multiplicity,
            product: product_check,
            degree_div,
            count,
        },
        gcd_criterion,
        k1_ok: !gcd_criterion || k == 1,
    })
}

/// Factors `F^Q` and certifies it is a power of a single orbit polynomial.
pub fn main_factorization(f: &Poly, q: &QuotientMap) -> Result<OrbitCertificate, InvariantError> {
    require_irreducible(f)?;
    let f = f.monic();
    let transform = q.transform(&f)?;
    let cert = certify_transform(&f, q, &transform)?;
    if !cert.is_valid() {
        return Err(violation(format!(
            "orbit certificate for {} failed: {:?}",
            f, cert.checks
        )));
    }
    Ok(cert)
}

/// The irreducible `F` with `r | F^Q`.
pub fn pushforward_minpoly(r: &Poly, q: &QuotientMap) -> Result<Poly, InvariantError> {
    require_irreducible(r)?;
    require_nr(r, q.group())?;
    let r = r.monic();
    let res = resultant_in_y(&r, q.num(), q.den()).map_err(|e| match e {
        PolyError::NotCoprime => InvariantError::OutsideNR,
        other => other.into(),
    })?;
    let fac = factor::factor(&res, FACTOR_SEED)?;
    if fac.factors.len() != 1 {
        return Err(violation(format!("resultant for {r} is not a prime power")));
    }
    let f = fac.factors[0].0.clone();
    if !r.deg().is_multiple_of(f.deg()) || !r.divides(&q.transform(&f)?) {
        return Err(violation(format!("{r} does not divide the transform of {f}")));
    }
    Ok(f)
}

/// One orbit of exceptional minimal polynomials and its image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalClass {
    pub orbit: Vec<Poly>,
    pub image: Poly,
    pub k: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalLocus {
    pub includes_infinity_class: bool,
    pub minpolys: Vec<Poly>,
    pub classes: Vec<ExceptionalClass>,
    /// `(F, n)` with `F^Q` an `n`-th power of an orbit polynomial, `n >= 2`.
    pub nonconformal: Vec<(Poly, u64)>,
}

impl ExceptionalLocus {
    /// Number of distinct points of the locus other than infinity.
    pub fn root_count(&self) -> usize {
        self.minpolys.iter().map(Poly::deg).sum()
    }

    pub fn orbit_partition(&self) -> Vec<Vec<Poly>> {
        self.classes.iter().map(|c| c.orbit.clone()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "includes_infinity_class": self.includes_infinity_class,
            "minpolys": self.minpolys.iter().map(Poly::to_json).collect::<Vec<_>>(),
            "orbit_partition": self
                .classes
                .iter()
                .map(|c| c.orbit.iter().map(Poly::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "nonconformal": self
                .nonconformal
                .iter()
                .map(|(f, n)| json!({"F": f.to_json(), "n": n}))
                .collect::<Vec<_>>(),
        })
    }
}

pub fn exceptional_locus(q: &QuotientMap) -> Result<ExceptionalLocus, InvariantError> {
    let group = q.group();
    let (includes_infinity_class, minpolys) = exceptional_minpolys(group)?;
    let mut remaining: BTreeSet<Poly> = minpolys.iter().cloned().collect();
    let mut classes = Vec::new();
    while let Some(rep) = remaining.iter().next().cloned() {
        let orbit = star_orbit(&rep, group)?;
        for m in &orbit {
            if !remaining.remove(m) {
                return Err(violation(format!("orbit of {rep} leaves the exceptional set")));
            }
        }
        let image = pushforward_minpoly(&rep, q)?;
        let cert = main_factorization(&image, q)?;
        classes.push(ExceptionalClass {
            orbit,
            image,
            k: cert.k,
        });
    }
    let nonconformal = classes
        .iter()
        .filter(|c| c.k >= 2)
        .map(|c| (c.image.clone(), c.k))
        .collect();
    Ok(ExceptionalLocus {
        includes_infinity_class,
        minpolys,
        classes,
        nonconformal,
    })
}

/// `input = prod (orbit product_i)^k_i * F^Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub input: Poly,
    pub f: Poly,
    /// Indexed like `ExceptionalLocus::nonconformal`.
    pub exceptional_exponents: BTreeMap<usize, u64>,
}

impl Decomposition {
    pub fn recompose(&self, q: &QuotientMap, locus: &ExceptionalLocus) -> Result<Poly, InvariantError> {
        let field = q.field();
        let mut out = q.transform(&self.f)?;
        let nc_classes: Vec<&ExceptionalClass> = locus.classes.iter().filter(|c| c.k >= 2).collect();
        for (&i, &k) in &self.exceptional_exponents {
            let class = nc_classes
                .get(i)
                .ok_or_else(|| violation("exponent index outside the non-conformal list"))?;
            out = &out * &product(&class.orbit, field).pow(k);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "input": self.input.to_json(),
            "F": self.f.to_json(),
            "exceptional_exponents": self
                .exceptional_exponents
                .iter()
                .map(|(i, k)| json!({"index": i, "k": k}))
                .collect::<Vec<_>>(),
        })
    }
}

pub fn decompose_invariant(
    f: &Poly,
    q: &QuotientMap,
    locus: &ExceptionalLocus,
) -> Result<Decomposition, InvariantError> {
    let group = q.group();
    let field = group.field();
    if !is_invariant(f, group)? {
        return Err(InvariantError::NotInvariant);
    }
    let input = f.monic();
    let nc_classes: Vec<&ExceptionalClass> = locus.classes.iter().filter(|c| c.k >= 2).collect();
    let mut exceptional_exponents: BTreeMap<usize, u64> = (0..nc_classes.len()).map(|i| (i, 0)).collect();
    let mut big_f = Poly::one(field);
    if !input.is_constant() {
        let fac = factor::factor(&input, FACTOR_SEED)?;
        let mult: BTreeMap<&Poly, u64> = fac.factors.iter().map(|(g, m)| (g, *m)).collect();
        let mut done: BTreeSet<Poly> = BTreeSet::new();
        for (g, m) in &fac.factors {
            if done.contains(g) {
                continue;
            }
            let orbit = star_orbit(g, group)?;
            for member in &orbit {
                if mult.get(member) != Some(m) {
                    return Err(InvariantError::MultiplicityMismatch);
                }
                done.insert(member.clone());
            }
            let class = locus.classes.iter().position(|c| c.orbit.contains(g));
            match class {
                Some(ci) => {
                    let c = &locus.classes[ci];
                    let (a, rem) = (m / c.k, m % c.k);
                    big_f = &big_f * &c.image.pow(a);
                    if c.k >= 2 {
                        let i = nc_classes
                            .iter()
                            .position(|nc| std::ptr::eq(*nc, c))
                            .expect("class with k >= 2 is non-conformal");
                        exceptional_exponents.insert(i, rem);
                    }
                }
                None => {
                    big_f = &big_f * &pushforward_minpoly(g, q)?.pow(*m);
                }
            }
        }
    }
    let out = Decomposition {
        input: input.clone(),
        f: big_f,
        exceptional_exponents,
    };
    if out.recompose(q, locus)? != input {
        return Err(violation("recomposition does not reproduce the input"));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorReport {
    pub degree: usize,
    pub stabilizer_order: usize,
    /// `None` when the factor has degree below 3.
    pub stabilizer_cyclic: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacfinReport {
    pub group_order: usize,
    pub mu: u64,
    pub factor_count: usize,
    pub max_factor_degree: usize,
    pub factors: Vec<FactorReport>,
    pub count_bound: bool,
    pub degree_bound: bool,
    /// For the full group over a subfield of order `q0`: at least `q0^2 - q0` factors.
    pub pgl2_count_bound: Option<bool>,
}

impl FacfinReport {
    pub fn holds(&self) -> bool {
        self.count_bound
            && self.degree_bound
            && self.pgl2_count_bound.unwrap_or(true)
            && self.factors.iter().all(|f| f.stabilizer_cyclic.unwrap_or(true))
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "group_order": self.group_order,
            "mu": self.mu,
            "factor_count": self.factor_count,
            "max_factor_degree": self.max_factor_degree,
            "stabilizer_orders": self.factors.iter().map(|f| f.stabilizer_order).collect::<Vec<_>>(),
            "count_bound": self.count_bound,
            "degree_bound": self.degree_bound,
            "pgl2_count_bound": self.pgl2_count_bound,
            "cyclic_stabilizers": self.factors.iter().all(|f| f.stabilizer_cyclic.unwrap_or(true)),
        })
    }
}

fn is_cyclic(elements: &[ProjElement], group: &Subgroup) -> bool {
    let n = elements.len() as u64;
    elements.iter().any(|a| a.order(group.field()) == n)
}

/// Factor-count and factor-degree bounds for a separable transform.
pub fn facfin_check(f: &Poly, q: &QuotientMap) -> Result<FacfinReport, InvariantError> {
    require_irreducible(f)?;
    let f = f.monic();
    let group = q.group();
    let transform = q.transform(&f)?;
    if !transform.gcd(&transform.derivative())?.is_one() {
        return Err(InvariantError::NotSeparable);
    }
    let mu = group.max_element_order();
    let fac = factor::factor(&transform, FACTOR_SEED)?;
    let mut factors = Vec::new();
    for (r, _) in &fac.factors {
        let stab = group.stabilizer_of(r)?;
        let stabilizer_cyclic = (r.deg() >= 3).then(|| is_cyclic(&stab, group));
        if stab.len() * f.deg() != r.deg() {
            return Err(violation(format!("stabilizer of {r} has order {}", stab.len())));
        }
        factors.push(FactorReport {
            degree: r.deg(),
            stabilizer_order: stab.len(),
            stabilizer_cyclic,
        });
    }
    let factor_count = fac.factors.len();
    let max_factor_degree = factors.iter().map(|r| r.degree).max().unwrap_or(0);
    let pgl2_count_bound = match group.kind() {
        SubgroupKind::FullPgl2 { q0 } => Some(factor_count as u128 >= q0 * q0 - q0),
        _ => None,
    };
    Ok(FacfinReport {
        group_order: group.order(),
        mu,
        factor_count,
        max_factor_degree,
        count_bound: factor_count as u64 * mu >= group.order() as u64,
        degree_bound: max_factor_degree as u64 <= mu * f.deg() as u64,
        pgl2_count_bound,
        factors,
    })
}
