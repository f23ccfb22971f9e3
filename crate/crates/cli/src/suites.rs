//! Seeded verification suites behind `invpoly verify`.

use std::collections::BTreeSet;

use clap::ValueEnum;
use invpoly::factor::random_irreducible_with;
use invpoly::invariant::{certify_transform, in_nr};
use invpoly::pgl2::random_subgroup;
use invpoly::quotient::product_of_irreducibles;
use invpoly::{
    decompose_invariant, exceptional_locus, facfin_check, irreducibles_of_degree, main_factorization,
    pushforward_minpoly, quotient_map, quotient_map_closed_form, quotient_map_fg, Elem, Field, InvariantError, Poly,
    Subgroup,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Suite {
    Identities,
    MainTheorem,
    Facfin,
    Decompose,
    Bijection,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::MainTheorem => "main-theorem",
            Suite::Facfin => "facfin",
            Suite::Decompose => "decompose",
            Suite::Bijection => "bijection",
        }
    }
}

pub struct Row {
    q: u128,
    check: String,
    passed: usize,
    total: usize,
    first_failure: Option<String>,
}

impl Row {
    fn new(q: u128, check: &str) -> Row {
        Row {
            q,
            check: check.to_string(),
            passed: 0,
            total: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.first_failure.is_none() {
            self.first_failure = Some(detail());
        }
    }

    fn ok(&self) -> bool {
        self.total > 0 && self.passed == self.total
    }
}

pub struct SuiteRun {
    suite: Suite,
    seed: u64,
    rows: Vec<Row>,
}

impl SuiteRun {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(Row::ok)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "seed": self.seed,
            "passed": self.passed(),
            "rows": self.rows.iter().map(|r| json!({
                "q": r.q,
                "check": r.check,
                "passed": r.passed,
                "total": r.total,
                "ok": r.ok(),
                "first_failure": r.first_failure,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{:<6} {:<28} {:>9}  result\n", "q", "check", "passed");
        for r in &self.rows {
            let status = if r.ok() { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{:<6} {:<28} {:>9}  {status}\n",
                r.q,
                r.check,
                format!("{}/{}", r.passed, r.total)
            ));
            if let Some(f) = &r.first_failure {
                out.push_str(&format!("       first failure: {f}\n"));
            }
        }
        out.push_str(if self.passed() {
            "all checks passed"
        } else {
            "some checks failed"
        });
        out
    }
}

/// Per-trial stream so results do not depend on the order trials run in.
fn trial_rng(seed: u64, qi: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((qi as u64) << 32) | trial as u64);
    rng
}

fn field(q: u128) -> Result<Field, String> {
    if q > 1 << 16 {
        return Err(format!("q = {q} is above the suite budget 65536"));
    }
    Field::from_order(q).map_err(|e| e.to_string())
}

fn x_pow_minus_x(f: &Field, k: usize) -> Poly {
    &Poly::monomial(f, Elem::ONE, k) - &Poly::x(f)
}

/// Translations by the prime subfield span of `1, t, ..., t^(n-1)`.
fn full_translations(f: &Field) -> Subgroup {
    let mut basis = vec![Elem::ONE];
    for _ in 1..f.degree() {
        basis.push(f.mul(*basis.last().unwrap(), f.generator()));
    }
    Subgroup::translations(f, &basis).expect("translations")
}

pub fn run(suite: Suite, qs: &[u128], trials: usize, seed: u64, fault: bool) -> Result<SuiteRun, String> {
    let mut rows = Vec::new();
    for (qi, &q) in qs.iter().enumerate() {
        let f = field(q)?;
        match suite {
            Suite::Identities => identities(&f, fault, &mut rows)?,
            Suite::MainTheorem => main_theorem(&f, qi, trials, seed, fault, &mut rows),
            Suite::Facfin => facfin(&f, qi, trials, seed, fault, &mut rows),
            Suite::Decompose => decompose(&f, qi, trials, seed, fault, &mut rows)?,
            Suite::Bijection => bijection(&f, fault, &mut rows)?,
        }
    }
    Ok(SuiteRun { suite, seed, rows })
}

fn identities(f: &Field, fault: bool, rows: &mut Vec<Row>) -> Result<(), String> {
    let q = f.order();
    let mut row = Row::new(q, "quadratic product identity");
    let prod = product_of_irreducibles(f, 2).map_err(|e| e.to_string())?;
    let mut lhs = &prod - &Poly::one(f);
    if fault {
        lhs = &lhs + &Poly::one(f);
    }
    let rhs = x_pow_minus_x(f, q as usize).pow(q as u64 - 1);
    row.record(lhs == rhs, || format!("{lhs} != {rhs}"));
    rows.push(row);

    if q <= 9 {
        let mut row = Row::new(q, "borel closed form");
        let b = Subgroup::borel(f, q).map_err(|e| e.to_string())?;
        let closed = quotient_map_closed_form(&b).map_err(|e| e.to_string())?;
        let fg = quotient_map_fg(&b).map_err(|e| e.to_string())?;
        row.record(closed.num() == &prod && fg.affinely_equivalent(closed.rf()), || {
            format!("closed form {} vs search {}", closed.rf(), fg.rf())
        });
        rows.push(row);
    }
    Ok(())
}

fn main_theorem(f: &Field, qi: usize, trials: usize, seed: u64, fault: bool, rows: &mut Vec<Row>) {
    let mut row = Row::new(f.order(), "orbit certificate");
    let mut k1 = Row::new(f.order(), "k = 1 under gcd criterion");
    for t in 0..trials {
        let mut rng = trial_rng(seed, qi, t);
        let group = random_subgroup(f, 60, &mut rng);
        let big_f = random_irreducible_with(f, rng.gen_range(1..=4), &mut rng);
        let outcome = quotient_map_fg(&group).map_err(|e| e.to_string()).and_then(|q| {
            let mut transform = q.transform(&big_f).map_err(|e| e.to_string())?;
            if fault {
                transform = &transform * &Poly::x(f);
            }
            certify_transform(&big_f, &q, &transform).map_err(|e| e.to_string())
        });
        match outcome {
            Ok(cert) => {
                row.record(cert.checks.all(), || {
                    format!("trial {t}: F = {big_f}, |G| = {}, {:?}", group.order(), cert.checks)
                });
                k1.record(cert.k1_ok, || format!("trial {t}: F = {big_f}, k = {}", cert.k));
            }
            Err(e) => {
                row.record(false, || format!("trial {t}: {e}"));
                k1.record(false, || format!("trial {t}: {e}"));
            }
        }
    }
    rows.push(row);
    rows.push(k1);
}

fn facfin(f: &Field, qi: usize, trials: usize, seed: u64, fault: bool, rows: &mut Vec<Row>) {
    let q = f.order();
    let mut groups = vec![("translations", full_translations(f))];
    if q <= 9 {
        groups.push(("borel", Subgroup::borel(f, q).expect("borel")));
    }
    if q <= 5 {
        groups.push(("pgl2", Subgroup::full_pgl2(f, q).expect("pgl2")));
    }
    for (gi, (label, group)) in groups.iter().enumerate() {
        let mut row = Row::new(q, &format!("{label} bounds"));
        let qm = quotient_map(group).expect("quotient map");
        let mut attempt = 0;
        while row.total < trials && attempt < trials * 40 {
            let mut rng = trial_rng(seed, qi, (gi << 24) | attempt);
            attempt += 1;
            let big_f = random_irreducible_with(f, rng.gen_range(1..=3), &mut rng);
            let rep = match facfin_check(&big_f, &qm) {
                Ok(rep) => rep,
                Err(InvariantError::NotSeparable) => continue,
                Err(e) => {
                    row.record(false, || format!("F = {big_f}: {e}"));
                    continue;
                }
            };
            let count = if fault { 0 } else { rep.factor_count };
            let mu = rep.mu as usize;
            let ok = count * mu >= group.order() && rep.max_factor_degree <= mu * big_f.deg() && rep.holds();
            row.record(ok, || format!("F = {big_f}: {} factors, mu = {mu}", count));
        }
        rows.push(row);
    }
}

fn decompose(f: &Field, qi: usize, trials: usize, seed: u64, fault: bool, rows: &mut Vec<Row>) -> Result<(), String> {
    let q = f.order();
    let mut groups = vec![("translations", full_translations(f))];
    if q <= 9 {
        groups.push(("borel", Subgroup::borel(f, q).map_err(|e| e.to_string())?));
    }
    for (gi, (label, group)) in groups.iter().enumerate() {
        let mut row = Row::new(q, &format!("{label} round trip"));
        let qm = quotient_map(group).map_err(|e| e.to_string())?;
        let locus = exceptional_locus(&qm).map_err(|e| e.to_string())?;
        let classes: Vec<(Poly, u64)> = locus
            .classes
            .iter()
            .filter(|c| c.k >= 2)
            .map(|c| (c.orbit.iter().fold(Poly::one(f), |acc, p| &acc * p), c.k))
            .collect();
        for t in 0..trials {
            let mut rng = trial_rng(seed, qi, (gi << 24) | t);
            let mut big_f = Poly::one(f);
            for _ in 0..rng.gen_range(0..=3) {
                big_f = &big_f * &random_irreducible_with(f, rng.gen_range(1..=2), &mut rng);
            }
            let exps: Vec<u64> = classes.iter().map(|(_, k)| rng.gen_range(0..*k)).collect();
            let mut input = qm.transform(&big_f).map_err(|e| e.to_string())?;
            for ((orbit, _), e) in classes.iter().zip(&exps) {
                input = &input * &orbit.pow(*e);
            }
            let outcome = decompose_invariant(&input, &qm, &locus).and_then(|d| {
                let mut back = d.recompose(&qm, &locus)?;
                if fault {
                    back = &back * &Poly::x(f);
                }
                Ok((d, back))
            });
            match outcome {
                Ok((d, back)) => {
                    let got: Vec<u64> = d.exceptional_exponents.values().copied().collect();
                    row.record(d.f == big_f && got == exps && back == input, || {
                        format!("trial {t}: F = {big_f}, got {}", d.f)
                    });
                }
                Err(e) => row.record(false, || format!("trial {t}: {e}")),
            }
        }
        rows.push(row);
    }
    Ok(())
}

fn bijection(f: &Field, fault: bool, rows: &mut Vec<Row>) -> Result<(), String> {
    let q = f.order();
    let group = Subgroup::translations(f, &[Elem::ONE]).map_err(|e| e.to_string())?;
    let qm = quotient_map(&group).map_err(|e| e.to_string())?;
    let max_deg = (1..=3).take_while(|&d| q.pow(d) <= 4096).last().unwrap_or(1) as usize;
    let mut irreducibles = Vec::new();
    for d in 1..=max_deg {
        irreducibles.extend(irreducibles_of_degree(f, d).map_err(|e| e.to_string())?);
    }

    let mut inj = Row::new(q, &format!("injective up to degree {max_deg}"));
    let mut seen = BTreeSet::new();
    for big_f in &irreducibles {
        match main_factorization(big_f, &qm) {
            Ok(cert) => {
                let fresh = seen.insert(cert.orbit.clone());
                inj.record(fresh, || format!("orbit of {big_f} already hit"));
            }
            Err(e) => inj.record(false, || format!("{big_f}: {e}")),
        }
    }
    rows.push(inj);

    let mut round = Row::new(q, "pushforward round trip");
    for r in irreducibles.iter().filter(|r| in_nr(r, &group)) {
        let outcome = pushforward_minpoly(r, &qm).and_then(|big_f| main_factorization(&big_f, &qm));
        match outcome {
            Ok(cert) => {
                let target = if fault { r * &Poly::x(f) } else { r.clone() };
                round.record(cert.orbit.contains(&target), || {
                    format!("{r} not in the orbit of its pushforward")
                });
            }
            Err(e) => round.record(false, || format!("{r}: {e}")),
        }
    }
    rows.push(round);
    Ok(())
}
