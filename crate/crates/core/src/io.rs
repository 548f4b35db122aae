//! Canonical JSON for problems, invariants, verdicts and factorizations
//! (schema `u2split/1`). Field elements are decimal strings; polynomials are
//! coefficient lists from the constant term up.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactfield::{FieldCtx, FieldElem};
use crate::factor::{U2Factorization, Verdict, VerifyReport};
use crate::forms::BilForm;
use crate::isopair::{Eps, Isopair, WallData};
use crate::linal::{JordanData, Matrix};
use crate::poly::Poly;

pub const SCHEMA: &str = "u2split/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "field")]
pub enum FieldDesc {
    Fp { p: u64 },
    Q,
}

impl FieldDesc {
    pub fn ctx(self) -> Result<FieldCtx> {
        match self {
            FieldDesc::Fp { p } => FieldCtx::prime(p),
            FieldDesc::Q => Ok(FieldCtx::Rational),
        }
    }

    pub fn of(ctx: FieldCtx) -> FieldDesc {
        match ctx {
            FieldCtx::Prime(p) => FieldDesc::Fp { p },
            FieldCtx::Rational => FieldDesc::Q,
        }
    }
}

/// The raw file: `gram` and `eps` are absent for problems in `GL(V)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub field: FieldDesc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<Value>>>,
    pub u: Vec<Vec<Value>>,
}

#[derive(Clone, Debug)]
pub enum Problem {
    Gl(Matrix),
    Pair(Isopair),
}

impl Problem {
    pub fn u(&self) -> &Matrix {
        match self {
            Problem::Gl(u) => u,
            Problem::Pair(p) => p.u(),
        }
    }

    pub fn ctx(&self) -> FieldCtx {
        self.u().ctx()
    }

    pub fn pair(&self) -> Option<&Isopair> {
        match self {
            Problem::Gl(_) => None,
            Problem::Pair(p) => Some(p),
        }
    }
}

fn parse_elem(ctx: FieldCtx, v: &Value) -> Result<FieldElem> {
    match v {
        Value::String(s) => ctx.parse(s),
        Value::Number(n) => ctx.parse(&n.to_string()),
        other => Err(Error::Parse(format!(
            "field element must be a string or integer, got {other}"
        ))),
    }
}

pub fn parse_matrix(ctx: FieldCtx, rows: &[Vec<Value>]) -> Result<Matrix> {
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::Parse("ragged matrix rows".into()));
    }
    let rows = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| parse_elem(ctx, v))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(Matrix::zeros(ctx, 0, 0));
    }
    Matrix::from_rows(ctx, rows)
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

pub fn poly_json(p: &Poly) -> Value {
    Value::Array(
        p.coeffs()
            .iter()
            .map(|c| Value::String(c.to_string()))
            .collect(),
    )
}

fn eps_of(e: i64) -> Result<Eps> {
    match e {
        1 => Ok(Eps::Plus),
        -1 => Ok(Eps::Minus),
        _ => Err(Error::Validation(format!("eps must be 1 or -1, got {e}"))),
    }
}

/// Parses and validates; syntax problems are `Parse`, violated invariants `Validation`.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    problem_from_file(&file)
}

pub fn problem_from_file(file: &ProblemFile) -> Result<Problem> {
    if let Some(s) = &file.schema {
        if s != SCHEMA {
            return Err(Error::Parse(format!("unknown schema {s:?}")));
        }
    }
    let ctx = file.field.ctx().map_err(|e| Error::Parse(e.to_string()))?;
    let u = parse_matrix(ctx, &file.u)?;
    match (file.eps, &file.gram) {
        (None, None) => {
            if !u.is_square() {
                return Err(Error::Validation("u must be square".into()));
            }
            Ok(Problem::Gl(u))
        }
        (Some(e), Some(g)) => {
            let eps = eps_of(e)?;
            let gram = parse_matrix(ctx, g)?;
            Ok(Problem::Pair(Isopair::from_gram(eps, gram, u)?))
        }
        _ => Err(Error::Validation(
            "eps and gram must be given together".into(),
        )),
    }
}

pub fn problem_json(p: &Problem) -> Value {
    let mut v = json!({
        "schema": SCHEMA,
        "field": FieldDesc::of(p.ctx()),
    });
    if let Problem::Pair(pair) = p {
        v["eps"] = json!(pair.eps().sign());
        v["gram"] = matrix_json(pair.gram());
    }
    v["u"] = matrix_json(p.u());
    v
}

pub fn isopair_json(p: &Isopair) -> Value {
    problem_json(&Problem::Pair(p.clone()))
}

pub fn jordan_json(j: &JordanData) -> Value {
    Value::Array(
        j.iter()
            .map(|(p, r, n)| json!({ "p": poly_json(p), "r": r, "n": n }))
            .collect(),
    )
}

fn form_json(b: &BilForm) -> Value {
    matrix_json(b.gram())
}

pub fn wall_json(w: &WallData) -> Value {
    let quad: Vec<Value> = w
        .quad
        .iter()
        .map(|((eta, r), b)| json!({ "eta": eta, "r": r, "gram": form_json(b) }))
        .collect();
    let herm: Vec<Value> = w
        .herm
        .iter()
        .map(|e| {
            let gram: Vec<Value> = e
                .form
                .gram()
                .iter()
                .map(|row| Value::Array(row.iter().map(poly_json).collect()))
                .collect();
            json!({ "p": poly_json(&e.p), "r": e.r, "flavor": e.form.flavor(), "gram": gram })
        })
        .collect();
    json!({
        "schema": SCHEMA,
        "field": FieldDesc::of(w.ctx),
        "eps": w.eps.sign(),
        "jordan": jordan_json(&w.jordan),
        "quad": quad,
        "herm": herm,
    })
}

/// Invariants of a problem in `GL(V)`: Jordan numbers only.
pub fn gl_invariants_json(u: &Matrix) -> Result<Value> {
    Ok(json!({
        "schema": SCHEMA,
        "field": FieldDesc::of(u.ctx()),
        "jordan": jordan_json(&crate::linal::jordan_numbers(u)?),
    }))
}

pub fn verdict_json(mode: &str, v: &Verdict) -> Value {
    json!({
        "schema": SCHEMA,
        "mode": mode,
        "splittable": v.splittable,
        "failed_conditions": v.failed_conditions,
    })
}

/// The problem itself plus its factors, so the output re-verifies on its own.
pub fn factorization_json(
    problem: &Problem,
    mode: &str,
    fac: &U2Factorization,
    report: &VerifyReport,
) -> Value {
    let mut v = problem_json(problem);
    v["mode"] = json!(mode);
    v["factors"] = Value::Array(fac.factors.iter().map(matrix_json).collect());
    v["verified"] = json!(report.ok());
    v["diagnostics"] = serde_json::to_value(report).expect("report serializes");
    v
}

#[derive(Deserialize)]
struct FactorFile {
    #[serde(flatten)]
    problem: ProblemFile,
    factors: Vec<Vec<Vec<Value>>>,
}

/// Reads back a factorization file written by [`factorization_json`].
pub fn parse_factorization(text: &str) -> Result<(Problem, U2Factorization)> {
    let file: FactorFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let problem = problem_from_file(&file.problem)?;
    let ctx = problem.ctx();
    let factors = file
        .factors
        .iter()
        .map(|m| parse_matrix(ctx, m))
        .collect::<Result<Vec<_>>>()?;
    if factors.is_empty() {
        return Err(Error::Validation("no factors".into()));
    }
    Ok((problem, U2Factorization { factors }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = r#"{"field":{"field":"Fp","p":7},"eps":-1,"gram":[["0","1"],["-1","0"]],"u":[[1,1],[0,1]]}"#;
        let p = parse_problem(text).unwrap();
        let again = parse_problem(&problem_json(&p).to_string()).unwrap();
        assert_eq!(p.pair(), again.pair());
        assert_eq!(problem_json(&p)["gram"][1][0], json!("6"));
    }

    #[test]
    fn errors_are_classified() {
        assert!(matches!(parse_problem("{"), Err(Error::Parse(_))));
        let bad_elem = r#"{"field":{"field":"Fp","p":3},"u":[["x"]]}"#;
        assert!(matches!(parse_problem(bad_elem), Err(Error::Parse(_))));
        let not_iso =
            r#"{"field":{"field":"Fp","p":3},"eps":1,"gram":[[1,0],[0,1]],"u":[[1,1],[0,1]]}"#;
        assert!(matches!(parse_problem(not_iso), Err(Error::Validation(_))));
        let q = r#"{"field":{"field":"Q"},"u":[["1/2","0"],["0","2"]]}"#;
        assert!(matches!(parse_problem(q), Ok(Problem::Gl(_))));
    }
}
