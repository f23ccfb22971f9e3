//! Acceptance suite: nine end-to-end criteria, each with a wall-clock limit.
//! Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use invpoly::factor::{irreducibles_of_degree, random_irreducible_with};
use invpoly::invariant::{certify_transform, exceptional_locus};
use invpoly::pgl2::random_subgroup;
use invpoly::quotient::{affine_relation, quotient_map_bluher, quotient_map_closed_form};
use invpoly::{
    decompose_invariant, facfin_check, main_factorization, pushforward_minpoly, quotient_map, quotient_map_fg, Elem,
    Field, InvariantError, P1Value, Poly, ProjElement, RationalFunction, Subgroup,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240917;

fn gf(q: u128) -> Field {
    Field::from_order(q).unwrap()
}

/// `x^k - x`.
fn frob_minus_x(field: &Field, k: usize) -> Poly {
    &Poly::monomial(field, Elem::ONE, k) - &Poly::x(field)
}

/// Product of the monic irreducibles of prime degree `d` over F_q, from
/// `x^(q^d) - x = (x^q - x) * prod I_q^d`.
fn prime_degree_product(field: &Field, d: u32) -> Poly {
    let q = field.order() as usize;
    frob_minus_x(field, q.pow(d))
        .exact_div(&frob_minus_x(field, q))
        .unwrap()
}

fn affine(lhs: &RationalFunction, rhs: &RationalFunction) -> bool {
    affine_relation(lhs, rhs).is_some()
}

/// Product of the monic irreducibles of degree 2 minus one equals (x^q - x)^(q - 1).
fn quadratic_product_identity() -> Result<(), String> {
    for q in [2u128, 3, 4, 5, 7, 8, 9] {
        let f = gf(q);
        let prod = irreducibles_of_degree(&f, 2)
            .unwrap()
            .iter()
            .fold(Poly::one(&f), |acc, g| &acc * g);
        if prod != prime_degree_product(&f, 2) {
            return Err(format!("q={q}: enumerated product disagrees with the division oracle"));
        }
        let lhs = &prod - &Poly::one(&f);
        let rhs = frob_minus_x(&f, q as usize).pow(q as u64 - 1);
        if lhs != rhs {
            return Err(format!("q={q}: {lhs} != {rhs}"));
        }
    }
    Ok(())
}

/// The coefficient-search quotient maps match the known closed forms.
fn named_quotient_maps() -> Result<(), String> {
    let check = |label: &str, group: &Subgroup, expected: RationalFunction| -> Result<(), String> {
        let fg = quotient_map_fg(group).map_err(|e| format!("{label}: {e}"))?;
        if !affine(fg.rf(), &expected) {
            return Err(format!("{label}: got {}, expected {}", fg.rf(), expected));
        }
        Ok(())
    };
    for p in [2u128, 3, 5, 7] {
        let f = gf(p);
        let g = Subgroup::translations(&f, &[Elem::ONE]).unwrap();
        check(
            &format!("translations p={p}"),
            &g,
            RationalFunction::polynomial(&frob_minus_x(&f, p as usize)).unwrap(),
        )?;
        let bl = quotient_map_bluher(&g).map_err(|e| e.to_string())?;
        if !affine(
            bl.rf(),
            &RationalFunction::polynomial(&frob_minus_x(&f, p as usize)).unwrap(),
        ) {
            return Err(format!("translations p={p}: orbit formula gave {}", bl.rf()));
        }
    }
    for (q, n) in [(4u128, 3u64), (5, 4), (7, 3), (9, 8), (13, 6)] {
        let f = gf(q);
        let g = Subgroup::diagonal(&f, n).unwrap();
        let xn = RationalFunction::polynomial(&Poly::monomial(&f, Elem::ONE, n as usize)).unwrap();
        check(&format!("diagonal n={n} q={q}"), &g, xn)?;
    }
    for q in [3u128, 4, 5, 7] {
        let f = gf(q);
        let g = Subgroup::cyclic(&f, ProjElement::swap()).unwrap();
        let expected = RationalFunction::new(&Poly::from_ints(&f, &[1, 0, 1]), &Poly::x(&f)).unwrap();
        check(&format!("swap q={q}"), &g, expected)?;
    }
    for q in [2u128, 3, 4] {
        let f = gf(q);
        let g = Subgroup::borel(&f, q).unwrap();
        let expected = RationalFunction::polynomial(&prime_degree_product(&f, 2)).unwrap();
        check(&format!("borel q={q}"), &g, expected.clone())?;
        let closed = quotient_map_closed_form(&g).map_err(|e| e.to_string())?;
        if closed.rf() != &expected {
            return Err(format!("borel q={q}: closed form {} differs", closed.rf()));
        }
        let bl = quotient_map_bluher(&g).map_err(|e| e.to_string())?;
        if !affine(bl.rf(), &expected) {
            return Err(format!("borel q={q}: orbit formula gave {}", bl.rf()));
        }
    }
    for q in [2u128, 3] {
        let f = gf(q);
        let g = Subgroup::full_pgl2(&f, q).unwrap();
        let den = frob_minus_x(&f, q as usize).pow(((q - 1) * q) as u64);
        let expected = RationalFunction::new(&prime_degree_product(&f, 3), &den).unwrap();
        check(&format!("pgl2 q={q}"), &g, expected)?;
    }
    Ok(())
}

/// Non-conformal sets of the three families.
fn nonconformal_sets() -> Result<(), String> {
    for (q, basis) in [(4u128, 2usize), (9, 1), (8, 3)] {
        let f = gf(q);
        let mut vs = vec![Elem::ONE];
        let mut t = Elem::ONE;
        for _ in 1..basis {
            t = f.mul(t, f.generator());
            vs.push(t);
        }
        let g = Subgroup::translations(&f, &vs).unwrap();
        let locus = exceptional_locus(&quotient_map(&g).unwrap()).map_err(|e| e.to_string())?;
        if !locus.minpolys.is_empty() || !locus.nonconformal.is_empty() {
            return Err(format!(
                "translations over GF({q}): nonempty locus {:?}",
                locus.nonconformal
            ));
        }
    }
    for q in [3u128, 4, 5] {
        let f = gf(q);
        let g = Subgroup::borel(&f, q).unwrap();
        let locus = exceptional_locus(&quotient_map(&g).unwrap()).map_err(|e| e.to_string())?;
        let expected = vec![(Poly::from_ints(&f, &[-1, 1]), q as u64 - 1)];
        if locus.nonconformal != expected {
            return Err(format!("borel q={q}: {:?}", locus.nonconformal));
        }
    }
    for q in [2u128, 3] {
        let f = gf(q);
        let g = Subgroup::full_pgl2(&f, q).unwrap();
        let locus = exceptional_locus(&quotient_map(&g).unwrap()).map_err(|e| e.to_string())?;
        let expected = vec![(Poly::from_ints(&f, &[1, 1]), q as u64 + 1)];
        if locus.nonconformal != expected {
            return Err(format!("pgl2 q={q}: {:?}", locus.nonconformal));
        }
    }
    Ok(())
}

/// Random subgroups and irreducibles: every certificate passes.
fn orbit_certificate_sweep() -> Result<(), String> {
    let qs = [2u128, 3, 4, 5];
    let fields: Vec<Field> = qs.iter().map(|&q| gf(q)).collect();
    let mut k_gt_1 = 0;
    for trial in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED.wrapping_add(trial));
        let f = &fields[trial as usize % qs.len()];
        let group = random_subgroup(f, 60, &mut rng);
        let deg = rng.gen_range(1..=4);
        let big_f = random_irreducible_with(f, deg, &mut rng);
        let q = quotient_map_fg(&group).map_err(|e| format!("trial {trial}: {e}"))?;
        let transform = q.transform(&big_f).map_err(|e| e.to_string())?;
        let cert = certify_transform(&big_f, &q, &transform).map_err(|e| e.to_string())?;
        if !cert.is_valid() {
            return Err(format!(
                "trial {trial}: GF({}) |G|={} F={}: {:?} k={} gcd_criterion={}",
                f.order(),
                group.order(),
                big_f,
                cert.checks,
                cert.k,
                cert.gcd_criterion
            ));
        }
        if cert.k > 1 {
            k_gt_1 += 1;
        }
    }
    println!("    sweep: 200 certificates, {k_gt_1} with k > 1");
    Ok(())
}

/// F -> orbit is injective and pushforward inverts it.
fn pushforward_bijection() -> Result<(), String> {
    let f = gf(3);
    let g = Subgroup::translations(&f, &[Elem::ONE]).unwrap();
    let q = quotient_map(&g).unwrap();
    let inf_poly = g.infinity_orbit_poly();
    let mut irreducibles = Vec::new();
    for d in 1..=3 {
        irreducibles.extend(irreducibles_of_degree(&f, d).unwrap());
    }
    let mut seen: BTreeMap<Vec<Poly>, Poly> = BTreeMap::new();
    for big_f in &irreducibles {
        let cert = main_factorization(big_f, &q).map_err(|e| e.to_string())?;
        if let Some(prev) = seen.insert(cert.orbit.clone(), big_f.clone()) {
            return Err(format!("{prev} and {big_f} share an orbit"));
        }
    }
    let mut checked = 0;
    for r in irreducibles.iter().filter(|r| r.gcd(&inf_poly).unwrap().is_one()) {
        let big_f = pushforward_minpoly(r, &q).map_err(|e| e.to_string())?;
        let cert = main_factorization(&big_f, &q).map_err(|e| e.to_string())?;
        if !cert.orbit.contains(r) {
            return Err(format!("{r} -> {big_f} does not come back"));
        }
        checked += 1;
    }
    if checked != irreducibles.len() {
        return Err("orbit of infinity should be trivial here".into());
    }
    Ok(())
}

/// Invariant inputs built from exceptional orbit powers and a transform decompose uniquely.
fn invariant_decomposition() -> Result<(), String> {
    let b3 = {
        let f = gf(3);
        Subgroup::borel(&f, 3).unwrap()
    };
    let v4 = {
        let f = gf(4);
        Subgroup::translations(&f, &[Elem::ONE, f.generator()]).unwrap()
    };
    for (label, group) in [("borel(3)", b3), ("translations over GF(4)", v4)] {
        let f = group.field().clone();
        let q = quotient_map(&group).unwrap();
        let locus = exceptional_locus(&q).map_err(|e| e.to_string())?;
        let nc_orbits: Vec<(Poly, u64)> = locus
            .classes
            .iter()
            .filter(|c| c.k >= 2)
            .map(|c| (c.orbit.iter().fold(Poly::one(&f), |acc, p| &acc * p), c.k))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xdec0);
        for trial in 0..50 {
            let mut big_f = Poly::one(&f);
            for _ in 0..rng.gen_range(0..=3) {
                let d = rng.gen_range(1..=2);
                big_f = &big_f * &random_irreducible_with(&f, d, &mut rng);
            }
            let exps: Vec<u64> = nc_orbits.iter().map(|(_, n)| rng.gen_range(0..*n)).collect();
            let mut input = q.transform(&big_f).unwrap();
            for ((orbit, _), e) in nc_orbits.iter().zip(&exps) {
                input = &input * &orbit.pow(*e);
            }
            let d = decompose_invariant(&input, &q, &locus).map_err(|e| format!("{label} trial {trial}: {e}"))?;
            if d.f != big_f {
                return Err(format!("{label} trial {trial}: F = {} expected {}", d.f, big_f));
            }
            let got: Vec<u64> = d.exceptional_exponents.values().copied().collect();
            if got != exps {
                return Err(format!("{label} trial {trial}: exponents {got:?} expected {exps:?}"));
            }
            let back = d.recompose(&q, &locus).map_err(|e| e.to_string())?;
            if back != input {
                return Err(format!("{label} trial {trial}: recomposition differs"));
            }
            let again = decompose_invariant(&back, &q, &locus).map_err(|e| e.to_string())?;
            if again != d {
                return Err(format!("{label} trial {trial}: second decomposition differs"));
            }
        }
    }
    Ok(())
}

/// Factor-count and degree bounds in terms of the largest element order.
fn factor_count_bounds() -> Result<(), String> {
    let f16 = gf(16);
    let f4 = gf(4);
    // F_16 as a 2-dimensional F_4-space: basis 1, t with t outside F_4
    let emb = invpoly::Embedding::new(&f4, &f16).unwrap();
    let t = f16
        .elements()
        .find(|&e| !f4.elements().any(|a| emb.apply(a) == e))
        .unwrap();
    let mut span = Vec::new();
    for a in f4.elements() {
        span.push(emb.apply(a));
        span.push(f16.mul(emb.apply(a), t));
    }
    let cases = [
        (
            "translations F_16 over F_4",
            Subgroup::translations(&f16, &span).unwrap(),
        ),
        ("borel(4)", Subgroup::borel(&f4, 4).unwrap()),
        ("pgl2(2)", Subgroup::full_pgl2(&gf(2), 2).unwrap()),
    ];
    let expected_sizes = [16usize, 12, 6];
    for ((label, group), size) in cases.iter().zip(expected_sizes) {
        if group.order() != size {
            return Err(format!("{label}: order {} != {size}", group.order()));
        }
        let q = quotient_map(group).unwrap();
        let f = group.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ size as u64);
        let mut done = 0;
        let mut attempts = 0;
        while done < 50 {
            attempts += 1;
            if attempts > 2000 {
                return Err(format!("{label}: not enough separable cases"));
            }
            let d = rng.gen_range(1..=3);
            let big_f = random_irreducible_with(&f, d, &mut rng);
            let rep = match facfin_check(&big_f, &q) {
                Ok(rep) => rep,
                Err(InvariantError::NotSeparable) => continue,
                Err(e) => return Err(format!("{label}: {e}")),
            };
            done += 1;
            let mu = rep.mu as usize;
            if rep.factor_count * mu < group.order() || rep.max_factor_degree > mu * big_f.deg() || !rep.holds() {
                return Err(format!("{label}: F={big_f} report {rep:?}"));
            }
            if *label == "pgl2(2)" && rep.factor_count < 2 {
                return Err(format!("{label}: F={big_f} has {} factors", rep.factor_count));
            }
        }
    }
    Ok(())
}

/// `x^deg * r(1/x)` made monic.
fn reciprocal(r: &Poly) -> Poly {
    let mut c = r.coeffs().to_vec();
    c.reverse();
    Poly::new(r.field(), c).monic()
}

/// With Q = (x^2+1)/x every quadratic irreducible transforms to a self-reciprocal
/// irreducible or a reciprocal pair.
fn reciprocal_pairs() -> Result<(), String> {
    for p in [5u128, 7] {
        let f = gf(p);
        let q = RationalFunction::new(&Poly::from_ints(&f, &[1, 0, 1]), &Poly::x(&f)).unwrap();
        for big_f in irreducibles_of_degree(&f, 2).unwrap() {
            let t = invpoly::q_transform(&big_f, &q).unwrap();
            let fac = invpoly::factor(&t, 1).unwrap();
            let ok = match fac.factors.as_slice() {
                [(r, 1)] => reciprocal(r) == *r,
                [(r, 1), (s, 1)] => reciprocal(r) == *s && r != s,
                _ => false,
            };
            if !ok {
                return Err(format!("p={p} F={big_f}: {:?}", fac.factors));
            }
        }
    }
    Ok(())
}

/// Every fiber of the quotient map on P^1(F_{3^m}) is exactly one orbit.
fn fiber_structure() -> Result<(), String> {
    let base = gf(3);
    let groups = [
        ("translations", Subgroup::translations(&base, &[Elem::ONE]).unwrap()),
        ("swap", Subgroup::cyclic(&base, ProjElement::swap()).unwrap()),
    ];
    for (label, group) in &groups {
        let q = quotient_map(group).unwrap();
        for m in 1..=3u32 {
            let big = Field::new(3, m).unwrap();
            let lq = q.lift(&big).map_err(|e| e.to_string())?;
            let lg = lq.group();
            let points: Vec<P1Value> = big.elements().map(P1Value::Finite).chain([P1Value::Infinity]).collect();
            let mut fibers: BTreeMap<P1Value, BTreeSet<P1Value>> = BTreeMap::new();
            for &v in &points {
                fibers.entry(lq.eval(v)).or_default().insert(v);
            }
            let mut covered = BTreeSet::new();
            for (value, fiber) in &fibers {
                let first = *fiber.iter().next().unwrap();
                let (orbit, _) = lg.point_orbit(first);
                let orbit: BTreeSet<P1Value> = orbit.into_iter().collect();
                if orbit != *fiber {
                    return Err(format!(
                        "{label} m={m}: fiber over {} has {} points, orbit {}",
                        value.format(&big),
                        fiber.len(),
                        orbit.len()
                    ));
                }
                for v in fiber {
                    if !covered.insert(*v) {
                        return Err(format!("{label} m={m}: fibers overlap"));
                    }
                }
            }
            if covered.len() != points.len() {
                return Err(format!("{label} m={m}: fibers do not cover the line"));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    type Criterion = (usize, &'static str, fn() -> Result<(), String>, u64);
    let criteria: [Criterion; 9] = [
        (1, "quadratic product identity", quadratic_product_identity, 2),
        (2, "named quotient maps", named_quotient_maps, 10),
        (3, "non-conformal sets", nonconformal_sets, 30),
        (4, "orbit certificate sweep", orbit_certificate_sweep, 60),
        (5, "pushforward bijection", pushforward_bijection, 10),
        (6, "invariant decomposition round-trip", invariant_decomposition, 30),
        (7, "factor count bounds", factor_count_bounds, 60),
        (8, "reciprocal pairs", reciprocal_pairs, 5),
        (9, "fiber structure", fiber_structure, 20),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (id, name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed > Duration::from_secs(limit) {
                Err(format!("took {:.2}s, limit {limit}s", elapsed.as_secs_f64()))
            } else {
                Ok(())
            }
        });
        match outcome {
            Ok(()) => println!("PASS [{id}] {name} ({:.2}s, limit {limit}s)", elapsed.as_secs_f64()),
            Err(why) => {
                failures += 1;
                println!(
                    "FAIL [{id}] {name} ({:.2}s, limit {limit}s): {why}",
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 9 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
