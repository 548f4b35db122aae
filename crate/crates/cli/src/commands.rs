use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};
use u2split_core::factor::{
    boxed_product, gl_decide, gl_factor, hyperbolic_ext, hyperbolic_ext_factored, orth_decide,
    orth_factor2, sp_decide, sp_factor2, sp_factor3, twisted_model, verify_factorization,
    U2Factorization,
};
use u2split_core::forms::BilForm;
use u2split_core::io::{
    factorization_json, gl_invariants_json, isopair_json, parse_factorization, parse_matrix,
    parse_problem, verdict_json, wall_json, FieldDesc, Problem, SCHEMA,
};
use u2split_core::isopair::{wall_data, Eps, Isopair};
use u2split_core::{Error, FieldCtx, Matrix};
use u2split_oracle::{theorem_check, Ceiling, GroupSpec, Theorem};

use crate::{human, DecideMode, FactorMode, ModelKind, Report};

pub const EXIT_NOT_SPLITTABLE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;
pub const EXIT_TRANSPORT: u8 = 4;
pub const EXIT_ORACLE_BUDGET: u8 = 5;
pub const EXIT_INTERNAL: u8 = 6;

pub struct Failure {
    pub code: u8,
    pub message: String,
    pub certificate: Option<Value>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) | Error::InvalidModulus(_) => EXIT_PARSE,
            Error::NotSplittable(_) => EXIT_NOT_SPLITTABLE,
            Error::TransportBudgetExceeded { .. } => EXIT_TRANSPORT,
            Error::BudgetExceeded(_) => EXIT_ORACLE_BUDGET,
            Error::VerificationFailed(_) => EXIT_INTERNAL,
            _ => EXIT_VALIDATION,
        };
        Failure {
            code,
            message: e.to_string(),
            certificate: None,
        }
    }
}

type Outcome = Result<Report, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    };
    text.map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("{}: {e}", path.display()),
        certificate: None,
    })
}

fn load(path: &Path) -> Result<Problem, Failure> {
    Ok(parse_problem(&read(path)?)?)
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_VALIDATION,
        message: message.into(),
        certificate: None,
    }
}

fn pair_with(problem: &Problem, eps: Eps, what: &str) -> Result<Isopair, Failure> {
    match problem.pair() {
        Some(p) if p.eps() == eps => Ok(p.clone()),
        Some(p) => Err(invalid(format!(
            "{what} needs eps = {}, the file has eps = {}",
            eps.sign(),
            p.eps().sign()
        ))),
        None => Err(invalid(format!("{what} needs a form: give eps and gram"))),
    }
}

fn ok(json: Value, human: String) -> Outcome {
    Ok(Report {
        json,
        human,
        code: 0,
    })
}

pub fn invariants(path: &Path) -> Outcome {
    match load(path)? {
        Problem::Gl(u) => {
            let json = gl_invariants_json(&u)?;
            let text = human::jordan(&json["jordan"]);
            ok(json, text)
        }
        Problem::Pair(p) => {
            let w = wall_data(&p)?;
            ok(wall_json(&w), human::wall(&w))
        }
    }
}

pub fn decide(path: &Path, mode: DecideMode) -> Outcome {
    let problem = load(path)?;
    let (name, verdict) = match mode {
        DecideMode::Gl => ("gl", gl_decide(problem.u())?),
        DecideMode::Sp => (
            "sp",
            sp_decide(&pair_with(&problem, Eps::Minus, "sp mode")?)?,
        ),
        DecideMode::Orth => (
            "orth",
            orth_decide(&pair_with(&problem, Eps::Plus, "orth mode")?)?,
        ),
    };
    let code = if verdict.splittable {
        0
    } else {
        EXIT_NOT_SPLITTABLE
    };
    Ok(Report {
        json: verdict_json(name, &verdict),
        human: human::verdict(name, &verdict),
        code,
    })
}

pub fn factor(path: &Path, mode: FactorMode, budget: u64, seed: u64) -> Outcome {
    let problem = load(path)?;
    let (name, pair, result) = match mode {
        FactorMode::Gl => ("gl", None, gl_factor(problem.u())),
        FactorMode::Sp2 => {
            let p = pair_with(&problem, Eps::Minus, "sp2 mode")?;
            ("sp2", Some(p.clone()), sp_factor2(&p, budget))
        }
        FactorMode::Sp3 => {
            let p = pair_with(&problem, Eps::Minus, "sp3 mode")?;
            ("sp3", Some(p.clone()), sp_factor3(&p, budget))
        }
        FactorMode::Orth2 => {
            let p = pair_with(&problem, Eps::Plus, "orth2 mode")?;
            ("orth2", Some(p.clone()), orth_factor2(&p, budget))
        }
    };
    let fac = match result {
        Ok(fac) => fac,
        Err(e @ Error::TransportBudgetExceeded { .. }) => {
            let certificate = pair.as_ref().and_then(|p| wall_data(p).ok()).map(|w| {
                json!({ "schema": SCHEMA, "mode": name, "error": e.to_string(), "budget": budget, "invariants": wall_json(&w) })
            });
            return Err(Failure {
                certificate,
                ..Failure::from(e)
            });
        }
        Err(e) => return Err(e.into()),
    };
    let report = verify_factorization(problem.pair(), problem.u(), &fac);
    if !report.ok() {
        return Err(Failure {
            code: EXIT_INTERNAL,
            message: format!(
                "constructed factorization failed verification: {}",
                report.summary()
            ),
            certificate: None,
        });
    }
    let mut json = factorization_json(&problem, name, &fac, &report);
    json["seed"] = json!(seed);
    json["transport_budget"] = json!(budget);
    let text = human::factorization(name, &fac, &report);
    ok(json, text)
}

pub fn verify(path: &Path) -> Outcome {
    let (problem, fac) = parse_factorization(&read(path)?)?;
    let report = verify_factorization(problem.pair(), problem.u(), &fac);
    let json = json!({
        "schema": SCHEMA,
        "verified": report.ok(),
        "summary": report.summary(),
        "diagnostics": serde_json::to_value(&report).expect("report serializes"),
    });
    let code = if report.ok() { 0 } else { EXIT_VALIDATION };
    Ok(Report {
        json,
        human: format!("verified: {} ({})\n", report.ok(), report.summary()),
        code,
    })
}

pub fn oracle(
    group: &str,
    p: u64,
    depth: Option<usize>,
    theorem: Option<&str>,
    max_group: usize,
    max_params: u64,
) -> Outcome {
    let spec = GroupSpec::parse(group, p)?;
    let theorem = match theorem {
        Some(name) => {
            let th = Theorem::parse(name)?;
            if depth.is_some_and(|d| d != th.depth()) {
                return Err(invalid(format!(
                    "{name} is a depth-{} statement",
                    th.depth()
                )));
            }
            th
        }
        None => Theorem::for_group(&spec, depth.unwrap_or(2))?,
    };
    let rep = theorem_check(
        &spec,
        theorem,
        &Ceiling {
            group: max_group,
            params: max_params,
        },
    )?;
    let mut json = serde_json::to_value(&rep).expect("report serializes");
    json["schema"] = json!(SCHEMA);
    let code = if rep.agree { 0 } else { EXIT_NOT_SPLITTABLE };
    Ok(Report {
        human: human::oracle(&rep),
        json,
        code,
    })
}

fn eps_arg(e: i64) -> Result<Eps, Failure> {
    match e {
        1 => Ok(Eps::Plus),
        -1 => Ok(Eps::Minus),
        _ => Err(invalid(format!("eps must be 1 or -1, got {e}"))),
    }
}

/// `F3`, `F_3`, `3` or `Q`.
fn field_arg(s: &str) -> Result<FieldCtx, Failure> {
    if s == "Q" {
        return Ok(FieldCtx::Rational);
    }
    let digits = s.trim_start_matches('F').trim_start_matches('_');
    let p = digits
        .parse::<u64>()
        .map_err(|_| Failure::from(Error::Parse(format!("unknown field {s:?}"))))?;
    Ok(FieldCtx::prime(p)?)
}

#[derive(Deserialize)]
struct FormPairFile {
    field: FieldDesc,
    b: Vec<Vec<Value>>,
    c: Vec<Vec<Value>>,
}

fn form_pair(path: &Path, eps: Eps) -> Result<(BilForm, BilForm), Failure> {
    let file: FormPairFile =
        serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(e.to_string()))?;
    let ctx = file.field.ctx().map_err(|e| Error::Parse(e.to_string()))?;
    let (b, c) = (parse_matrix(ctx, &file.b)?, parse_matrix(ctx, &file.c)?);
    let kind = eps.flip().kind();
    Ok((BilForm::new(kind, b)?, BilForm::new(kind, c)?))
}

pub fn model(kind: &ModelKind, with_factors: bool) -> Outcome {
    let (pair, fac): (Isopair, U2Factorization) = match kind {
        ModelKind::HyperbolicExt { file, eps } => {
            let eps = eps_arg(*eps)?;
            let v: Matrix = match load(file)? {
                Problem::Gl(v) => v,
                Problem::Pair(_) => return Err(invalid("hyperbolic-ext takes a GL problem file")),
            };
            if !with_factors {
                let pair = hyperbolic_ext(&v, eps)?;
                return ok(isopair_json(&pair), human::pair(&pair));
            }
            hyperbolic_ext_factored(&v, &gl_factor(&v)?, eps)?
        }
        ModelKind::Boxed { file, eps } => {
            let eps = eps_arg(*eps)?;
            let (b, c) = form_pair(file, eps)?;
            boxed_product(&b, &c, eps)?
        }
        ModelKind::Twisted { k, scale, field } => {
            let ctx = field_arg(field)?;
            twisted_model(*k, &ctx.parse(scale)?)?
        }
    };
    let problem = Problem::Pair(pair);
    if with_factors {
        let report = verify_factorization(problem.pair(), problem.u(), &fac);
        let json = factorization_json(&problem, "model", &fac, &report);
        let text = human::factorization("model", &fac, &report);
        return ok(json, text);
    }
    let Problem::Pair(pair) = &problem else {
        unreachable!()
    };
    ok(isopair_json(pair), human::pair(pair))
}
