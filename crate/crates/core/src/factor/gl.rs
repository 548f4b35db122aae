use super::{block_model, shift_cell, verify_factorization, U2Factorization, Verdict};
use crate::error::{Error, Result};
use crate::linal::{jordan_numbers, similarity_transform, JordanData, Matrix};
use crate::poly::Poly;

pub(crate) fn is_eta(p: &Poly, eta: i64) -> bool {
    p.deg() == 1 && p.coeff(0) == p.ctx().from_i64(-eta)
}

pub(crate) fn odd_minus_one_cells(j: &JordanData) -> bool {
    j.iter()
        .any(|(p, r, n)| n > 0 && r % 2 == 1 && is_eta(p, -1))
}

pub(crate) fn similar_to_inverse(j: &JordanData) -> Result<bool> {
    for (p, r, n) in j.iter() {
        if j.get(&p.reciprocal()?, r) != n {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Product of two U2 elements of `GL(V)` iff similar to its inverse with no
/// odd Jordan cell at `-1`; both parts are reported under label `(ii)`.
pub fn gl_decide(a: &Matrix) -> Result<Verdict> {
    if !a.is_square() {
        return Err(Error::NonSquare);
    }
    if a.rank() != a.rows() {
        return Err(Error::NotInvertible);
    }
    let j = jordan_numbers(a)?;
    let ok = similar_to_inverse(&j)? && !odd_minus_one_cells(&j);
    Ok(Verdict::from_failures(if ok {
        vec![]
    } else {
        vec!["(ii)".into()]
    }))
}

/// Block models realizing the Jordan structure `j`, each with its factorization.
fn model_blocks(j: &JordanData) -> Result<Vec<(Matrix, U2Factorization)>> {
    let mut out = Vec::new();
    for (p, r, n) in j.iter() {
        let ctx = p.ctx();
        let q = if is_eta(p, 1) {
            None
        } else if is_eta(p, -1) {
            Some(Poly::from_i64s(ctx, &[2, 1]).pow(r / 2))
        } else {
            let ps = p.reciprocal()?;
            if &ps == p {
                Some(p.r_inverse()?.pow(r))
            } else if p < &ps {
                Some((p * &ps).r_inverse()?.pow(r))
            } else {
                continue; // handled with its partner
            }
        };
        for _ in 0..n {
            out.push(match &q {
                None => shift_cell(ctx, r),
                Some(q) => block_model(q),
            });
        }
    }
    Ok(out)
}

pub fn gl_factor(a: &Matrix) -> Result<U2Factorization> {
    let verdict = gl_decide(a)?;
    if !verdict.splittable {
        return Err(Error::NotSplittable(verdict.failed_conditions));
    }
    let ctx = a.ctx();
    let blocks = model_blocks(&jordan_numbers(a)?)?;
    let model = Matrix::block_diag(
        ctx,
        &blocks.iter().map(|(m, _)| m.clone()).collect::<Vec<_>>(),
    );
    let parts: Vec<(usize, U2Factorization)> =
        blocks.into_iter().map(|(m, f)| (m.rows(), f)).collect();
    let fac = U2Factorization::direct_sum(ctx, &parts);
    let g = similarity_transform(&model, a)?;
    let fac = fac.conjugate(&g)?;
    let rep = verify_factorization(None, a, &fac);
    if !rep.ok() {
        return Err(Error::VerificationFailed(format!(
            "gl_factor: {}",
            rep.summary()
        )));
    }
    Ok(fac)
}
