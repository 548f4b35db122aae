//! Plain-text renderings. Quadratic invariants are shown as tuples of square
//! classes of a diagonalization: `1` for squares, `d` for the nonsquare class.

use std::fmt::Write;

use serde_json::Value;
use u2split_core::factor::{U2Factorization, Verdict, VerifyReport};
use u2split_core::forms::{diagonalize, BilForm};
use u2split_core::isopair::{Isopair, WallData};
use u2split_oracle::TheoremReport;

fn poly_text(coeffs: &Value) -> String {
    let cs: Vec<&str> = coeffs
        .as_array()
        .map(|a| a.iter().filter_map(Value::as_str).collect())
        .unwrap_or_default();
    let terms: Vec<String> = cs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| **c != "0")
        .map(|(i, c)| match (i, *c) {
            (0, c) => c.to_string(),
            (1, "1") => "t".into(),
            (1, c) => format!("{c}t"),
            (i, "1") => format!("t^{i}"),
            (i, c) => format!("{c}t^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub fn jordan(j: &Value) -> String {
    let mut out = String::from("Jordan numbers\n");
    for e in j.as_array().into_iter().flatten() {
        let _ = writeln!(
            out,
            "  p = {:<20} r = {:<3} n = {}",
            poly_text(&e["p"]),
            e["r"],
            e["n"]
        );
    }
    out
}

/// Square classes of a diagonalization, e.g. `(1, 1, d)`.
pub fn square_classes(b: &BilForm) -> String {
    let (_, d) = diagonalize(b.gram());
    let classes: Vec<&str> = d
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| {
            if x.is_square().unwrap_or(true) {
                "1"
            } else {
                "d"
            }
        })
        .collect();
    format!("({})", classes.join(", "))
}

pub fn wall(w: &WallData) -> String {
    let mut out = format!("field {}  eps {}\n", w.ctx, w.eps.sign());
    out += &jordan(&u2split_core::io::jordan_json(&w.jordan));
    if !w.quad.is_empty() {
        out += "Quadratic invariants\n";
        for ((eta, r), b) in &w.quad {
            let _ = writeln!(
                out,
                "  eta = {eta:<3} r = {r:<3} dim {}  {}",
                b.dim(),
                square_classes(b)
            );
        }
    }
    if !w.herm.is_empty() {
        out += "Hermitian invariants\n";
        for e in &w.herm {
            let _ = writeln!(
                out,
                "  p = {:<20} r = {:<3} dim {}  {:?}",
                e.p.to_string(),
                e.r,
                e.form.dim(),
                e.form.flavor()
            );
        }
    }
    out
}

pub fn verdict(mode: &str, v: &Verdict) -> String {
    if v.splittable {
        format!("{mode}: splittable\n")
    } else {
        format!(
            "{mode}: not splittable, failed {}\n",
            v.failed_conditions.join(", ")
        )
    }
}

pub fn factorization(mode: &str, fac: &U2Factorization, report: &VerifyReport) -> String {
    let mut out = format!(
        "{mode}: {} factors, verified {} ({})\n",
        fac.factors.len(),
        report.ok(),
        report.summary()
    );
    for (i, f) in fac.factors.iter().enumerate() {
        let _ = writeln!(out, "factor {}\n{f}", i + 1);
    }
    out
}

pub fn oracle(r: &TheoremReport) -> String {
    format!(
        "{} {:?} depth {}: |G| = {}, |U2| = {}, product set {}, predicate set {}, agree {} ({} counterexamples)\n",
        r.group, r.theorem, r.depth, r.group_order, r.u2_count, r.set_size, r.predicate_size, r.agree, r.counterexample_count
    )
}

pub fn pair(p: &Isopair) -> String {
    format!(
        "field {}  eps {}\ngram\n{}\nu\n{}\n",
        p.ctx(),
        p.eps().sign(),
        p.gram(),
        p.u()
    )
}

pub fn certificate(c: &Value) -> String {
    format!(
        "certificate for {} mode: {}\n",
        c["mode"].as_str().unwrap_or("?"),
        c["error"].as_str().unwrap_or("?")
    )
}
