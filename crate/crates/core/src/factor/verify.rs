use serde::Serialize;

use super::U2Factorization;
use crate::isopair::Isopair;
use crate::linal::{Matrix, Subspace};

/// Outcome of every check run on a factorization. The commutation and
/// stabilization diagnostics only apply to two-factor splittings and are
/// `None` otherwise.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub shapes_ok: bool,
    pub square_zero: Vec<bool>,
    /// Empty outside an isopair context.
    pub isometries: Vec<bool>,
    pub product_ok: bool,
    pub commutation: Option<bool>,
    pub commutes_with_v: Option<bool>,
    pub stabilization: Option<bool>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.shapes_ok
            && self.square_zero.iter().all(|&b| b)
            && self.isometries.iter().all(|&b| b)
            && self.product_ok
            && self.commutation != Some(false)
            && self.commutes_with_v != Some(false)
            && self.stabilization != Some(false)
    }

    pub fn summary(&self) -> String {
        let mut bad = Vec::new();
        if !self.shapes_ok {
            bad.push("shapes".to_string());
        }
        for (i, ok) in self.square_zero.iter().enumerate() {
            if !ok {
                bad.push(format!("factor {i} is not U2"));
            }
        }
        for (i, ok) in self.isometries.iter().enumerate() {
            if !ok {
                bad.push(format!("factor {i} is not an isometry"));
            }
        }
        if !self.product_ok {
            bad.push("product differs from u".into());
        }
        for (name, v) in [
            ("commutation", self.commutation),
            ("commutes with u+u^-1", self.commutes_with_v),
            ("stabilization", self.stabilization),
        ] {
            if v == Some(false) {
                bad.push(name.into());
            }
        }
        if bad.is_empty() {
            "ok".into()
        } else {
            bad.join(", ")
        }
    }
}

/// Checks a factorization of `u`, as isometries of `pair` when given.
pub fn verify_factorization(
    pair: Option<&Isopair>,
    u: &Matrix,
    fac: &U2Factorization,
) -> VerifyReport {
    let n = u.rows();
    let shapes_ok = u.is_square()
        && !fac.factors.is_empty()
        && fac
            .factors
            .iter()
            .all(|f| f.rows() == n && f.cols() == n && f.ctx() == u.ctx())
        && pair.map_or(true, |p| p.dim() == n);
    if !shapes_ok {
        return VerifyReport {
            shapes_ok,
            square_zero: vec![],
            isometries: vec![],
            product_ok: false,
            commutation: None,
            commutes_with_v: None,
            stabilization: None,
        };
    }
    let ctx = u.ctx();
    let id = Matrix::identity(ctx, n);
    let square_zero = fac
        .factors
        .iter()
        .map(|f| {
            let a = f - &id;
            (&a * &a).is_zero()
        })
        .collect();
    let isometries = pair
        .map(|p| {
            fac.factors
                .iter()
                .map(|f| &(&f.transpose() * p.gram()) * f == *p.gram())
                .collect()
        })
        .unwrap_or_default();
    let product_ok = fac.product() == *u;
    let (mut commutation, mut commutes_with_v, mut stabilization) = (None, None, None);
    if product_ok && fac.factors.len() == 2 {
        if let Ok(uinv) = u.inverse() {
            let (u1, u2) = (&fac.factors[0], &fac.factors[1]);
            let a = u - &id;
            let inv_ok = match (u1.inverse(), u2.inverse()) {
                (Ok(u1i), Ok(u2i)) => &u1i * &a == &a * &u2i,
                _ => false,
            };
            commutation = Some(&(u1 * &a) == &(&a * u2) && inv_ok);
            let v = u + &uinv;
            commutes_with_v = Some(fac.factors.iter().all(|f| &(f * &v) == &(&v * f)));
            stabilization = Some(stable_chains(&a, &fac.factors));
        }
    }
    VerifyReport {
        shapes_ok,
        square_zero,
        isometries,
        product_ok,
        commutation,
        commutes_with_v,
        stabilization,
    }
}

fn stable_chains(a: &Matrix, factors: &[Matrix]) -> bool {
    let n = a.rows();
    let mut pw = Matrix::identity(a.ctx(), n);
    for _ in 0..=n {
        pw = &pw * a;
        let ker = Subspace::kernel_of(&pw);
        let im = Subspace::image_of(&pw);
        if !factors
            .iter()
            .all(|f| ker.is_stable_under(f) && im.is_stable_under(f))
        {
            return false;
        }
    }
    true
}
