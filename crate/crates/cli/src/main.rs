mod suites;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use invpoly::quotient::normalize_to_quotient_map;
use invpoly::text::{parse_field, parse_group, parse_poly, parse_rf};
use invpoly::{
    decompose_invariant, exceptional_locus, is_invariant, main_factorization, q_transform, quotient_map,
    quotient_map_bluher, quotient_map_closed_form, quotient_map_fg, Field, InvariantError, Poly, QuotientMap, Subgroup,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "invpoly",
    version,
    about = "Quotient maps of PGL2 subgroups and invariant polynomials over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Base field, `GF(q)` with q a prime power.
    #[arg(long, global = true, default_value = "GF(2)")]
    field: String,

    /// Defining polynomial over the prime field, overriding the canonical one.
    #[arg(long, global = true)]
    modulus: Option<String>,

    /// Subgroup: trivial, cyclic:M, gens:M;M, translations:v,..,
    /// diagonal:n, borel:q0, pgl2:q0.
    #[arg(long, global = true)]
    group: Option<String>,

    /// Polynomial input.
    #[arg(long = "F", global = true)]
    f: Option<String>,

    /// Rational function `g/h` used instead of a computed quotient map.
    #[arg(long = "Q", global = true)]
    q: Option<String>,

    #[arg(long, global = true, env = "INVPOLY_SEED", default_value_t = 0)]
    seed: u64,

    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[arg(long, global = true, value_enum, default_value_t = Method::Auto)]
    method: Method,
}

#[derive(Subcommand)]
enum Command {
    /// Quotient map of the group.
    QuotientMap,
    /// Q-transform of F.
    Transform,
    /// Orbit certificate for the factorization of the transform of F.
    FactorOrbit,
    /// Whether F is invariant under the group.
    InvariantCheck,
    /// Split an invariant polynomial into exceptional orbit powers and a transform.
    Decompose,
    /// Exceptional points and non-conformal factors of the quotient map.
    Exceptional,
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: suites::Suite,
        /// Comma-separated field orders.
        #[arg(long = "q", value_delimiter = ',', default_value = "2,3,4,5")]
        qs: Vec<u128>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Fg,
    Bluher,
    Closed,
    Auto,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Failure(String),
}

impl From<invpoly::Error> for CliError {
    fn from(e: invpoly::Error) -> Self {
        match e {
            invpoly::Error::Parse(p) => CliError::Input(p.render()),
            invpoly::Error::Invariant(InvariantError::CertificateViolation(m)) => CliError::Failure(m),
            other => CliError::Input(other.to_string()),
        }
    }
}

macro_rules! lib_err {
    ($e:expr) => {
        $e.map_err(|e| CliError::from(invpoly::Error::from(e)))
    };
}

/// Command output: a JSON document and its text rendering.
struct Report {
    json: Value,
    text: String,
    ok: bool,
}

impl Cli {
    fn field(&self) -> Result<Field, CliError> {
        lib_err!(parse_field(&self.field, self.modulus.as_deref()))
    }

    fn group(&self, field: &Field) -> Result<Subgroup, CliError> {
        let text = self
            .group
            .as_deref()
            .ok_or_else(|| CliError::Input("--group is required".into()))?;
        lib_err!(parse_group(field, text))
    }

    fn poly(&self, field: &Field) -> Result<Poly, CliError> {
        let text = self
            .f
            .as_deref()
            .ok_or_else(|| CliError::Input("--F is required".into()))?;
        lib_err!(parse_poly(field, text))
    }

    fn quotient(&self, group: &Subgroup) -> Result<QuotientMap, CliError> {
        if let Some(text) = &self.q {
            let rf = lib_err!(parse_rf(group.field(), text))?;
            return lib_err!(normalize_to_quotient_map(&rf, group));
        }
        lib_err!(match self.method {
            Method::Fg => quotient_map_fg(group),
            Method::Bluher => quotient_map_bluher(group),
            Method::Closed => quotient_map_closed_form(group),
            Method::Auto => quotient_map(group),
        })
    }
}

fn field_json(field: &Field) -> Value {
    json!({
        "p": field.characteristic(),
        "n": field.degree(),
        "modulus": field.modulus(),
    })
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let field = cli.field()?;
    let ok = |json: Value, text: String| Report { json, text, ok: true };
    let report = match &cli.command {
        Command::QuotientMap => {
            let group = cli.group(&field)?;
            let q = cli.quotient(&group)?;
            ok(json!({"quotient_map": q.to_json()}), q.rf().to_text())
        }
        Command::Transform => {
            let f = cli.poly(&field)?;
            let rf = match (&cli.q, &cli.group) {
                (Some(text), _) => lib_err!(parse_rf(&field, text))?,
                (None, Some(_)) => cli.quotient(&cli.group(&field)?)?.rf().clone(),
                (None, None) => return Err(CliError::Input("--Q or --group is required".into())),
            };
            let t = lib_err!(q_transform(&f, &rf))?;
            ok(json!({"Q": rf.to_text(), "transform": t.to_json()}), t.to_text())
        }
        Command::FactorOrbit => {
            let group = cli.group(&field)?;
            let q = cli.quotient(&group)?;
            let cert = lib_err!(main_factorization(&cli.poly(&field)?, &q))?;
            let orbit: Vec<String> = cert.orbit.iter().map(|r| format!("({r})")).collect();
            let text = format!("{}^{} = {}", orbit.join("*"), cert.k, cert.f);
            ok(
                json!({"Q": q.rf().to_text(), "certificate": cert.to_json()}),
                format!("k = {}\norbit: {}", cert.k, text),
            )
        }
        Command::InvariantCheck => {
            let group = cli.group(&field)?;
            let inv = lib_err!(is_invariant(&cli.poly(&field)?, &group))?;
            ok(json!({"invariant": inv}), inv.to_string())
        }
        Command::Decompose => {
            let group = cli.group(&field)?;
            let q = cli.quotient(&group)?;
            let locus = lib_err!(exceptional_locus(&q))?;
            let d = lib_err!(decompose_invariant(&cli.poly(&field)?, &q, &locus))?;
            let mut text = format!("F = {}", d.f);
            for (i, k) in &d.exceptional_exponents {
                text.push_str(&format!("\nclass {i}: exponent {k}"));
            }
            ok(json!({"Q": q.rf().to_text(), "decomposition": d.to_json()}), text)
        }
        Command::Exceptional => {
            let group = cli.group(&field)?;
            let q = cli.quotient(&group)?;
            let locus = lib_err!(exceptional_locus(&q))?;
            let nc: Vec<String> = locus.nonconformal.iter().map(|(f, n)| format!("({f}, {n})")).collect();
            let text = format!(
                "points: {}{}\nnonconformal: [{}]",
                locus
                    .minpolys
                    .iter()
                    .map(|p| p.to_text())
                    .collect::<Vec<_>>()
                    .join(", "),
                if locus.includes_infinity_class {
                    " (and the class of infinity)"
                } else {
                    ""
                },
                nc.join(", ")
            );
            ok(json!({"Q": q.rf().to_text(), "exceptional": locus.to_json()}), text)
        }
        Command::Verify {
            suite,
            qs,
            trials,
            inject_fault,
        } => {
            let run = suites::run(*suite, qs, *trials, cli.seed, *inject_fault).map_err(CliError::Input)?;
            Report {
                json: run.to_json(),
                text: run.to_text(),
                ok: run.passed(),
            }
        }
    };
    Ok(report)
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                let field = cli.field().map(|f| field_json(&f)).unwrap_or(Value::Null);
                let mut doc = json!({"field": field, "seed": cli.seed});
                if let (Value::Object(doc), Value::Object(body)) = (&mut doc, report.json) {
                    doc.extend(body);
                }
                emit(&serde_json::to_string_pretty(&doc).expect("json"));
            } else {
                emit(&report.text);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}
