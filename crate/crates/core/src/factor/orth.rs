use super::gl::{is_eta, odd_minus_one_cells};
use super::{
    gl_factor, hyperbolic_ext_factored, transport_factorization, twisted_model, FactoredModel,
    U2Factorization, Verdict,
};
use crate::error::{Error, Result};
use crate::exactfield::FieldCtx;
use crate::forms::{
    diagonalize, form_equivalent, form_with_invariants, herm_is_hyperbolic, witt_index,
    witt_simplifies, BilForm,
};
use crate::isopair::{quad_wall, wall_data, Eps, Isopair, WallData};
use crate::linal::{companion, Matrix};
use crate::poly::Poly;

fn require_orthogonal(p: &Isopair) -> Result<()> {
    if p.eps() != Eps::Plus {
        return Err(Error::WrongKind);
    }
    if !p.ctx().is_finite() {
        return Err(Error::UnsupportedField("Q"));
    }
    Ok(())
}

fn signed(b: &BilForm, k: usize) -> BilForm {
    if k % 2 == 0 {
        b.clone()
    } else {
        b.neg()
    }
}

/// Largest `k` with `B_k` nonzero, if any.
fn top_index(w: &WallData) -> Option<usize> {
    w.quad
        .keys()
        .filter(|(eta, r)| *eta == 1 && r % 2 == 1)
        .map(|(_, r)| (r - 1) / 2)
        .max()
}

/// `(-1)^k B_k` Witt-simplifies `_|_{i>k} (-1)^i B_i` for every `k`.
fn witt_condition(ctx: FieldCtx, b: &[BilForm]) -> Result<bool> {
    for k in 0..b.len() {
        let tail: Vec<BilForm> = (k + 1..b.len()).map(|i| signed(&b[i], i)).collect();
        let tail = BilForm::orth_sum_all(ctx, crate::forms::FormKind::Symmetric, &tail)?;
        if !witt_simplifies(&signed(&b[k], k), &tail)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn b_forms(w: &WallData) -> Vec<BilForm> {
    match top_index(w) {
        None => vec![],
        Some(l) => (0..=l).map(|k| w.b_k(k)).collect(),
    }
}

pub fn orth_decide(p: &Isopair) -> Result<Verdict> {
    require_orthogonal(p)?;
    let w = wall_data(p)?;
    let mut failed = Vec::new();
    if odd_minus_one_cells(&w.jordan) {
        failed.push("(i)".to_string());
    }
    if w.jordan.iter().any(|(q, _, n)| !is_eta(q, 1) && n % 2 == 1) {
        failed.push("(ii)".into());
    }
    let mut herm_ok = true;
    for e in &w.herm {
        herm_ok &= herm_is_hyperbolic(&e.form)?;
    }
    if !herm_ok {
        failed.push("(iii)".into());
    }
    if !witt_condition(p.ctx(), &b_forms(&w))? {
        failed.push("(iv)".into());
    }
    Ok(Verdict::from_failures(failed))
}

fn h1_block(v: &Matrix) -> Result<FactoredModel> {
    let (pair, factorization) = hyperbolic_ext_factored(v, &gl_factor(v)?, Eps::Plus)?;
    Ok(FactoredModel {
        pair,
        factorization,
    })
}

fn discriminant(b: &BilForm) -> crate::FieldElem {
    if b.dim() == 0 {
        b.ctx().one()
    } else {
        b.determinant()
    }
}

/// Blocks realizing the odd unipotent cells with invariants `b`, peeling the
/// top invariant: an isotropic `B_l` sheds a hyperbolic twin `H_1(J_{2l+1})`;
/// an anisotropic one is absorbed by twisted pairs into `B_{l-1}`.
fn odd_unipotent_blocks(ctx: FieldCtx, mut b: Vec<BilForm>) -> Result<Vec<FactoredModel>> {
    let mut out = Vec::new();
    let one = Poly::linear(&ctx.one());
    while let Some(l) = (1..b.len()).rev().find(|&k| b[k].dim() > 0) {
        let top = &b[l];
        if top.dim() >= 2 && witt_index(top)? >= 1 {
            out.push(h1_block(&companion(&one.pow(2 * l + 1)))?);
            let disc = -&discriminant(top);
            b[l] = form_with_invariants(ctx, top.dim() - 2, &disc)?;
            continue;
        }
        let (base, _) = twisted_model(l, &ctx.one())?;
        let beta = quad_wall(&base, 1, 2 * l + 1)?.gram()[(0, 0)].clone();
        let (_, values) = diagonalize(top.gram());
        for a in &values {
            let (pair, factorization) = twisted_model(l, &(a / &beta))?;
            out.push(FactoredModel {
                pair,
                factorization,
            });
        }
        let below = &b[l - 1];
        if below.dim() < top.dim() {
            return Err(Error::VerificationFailed(format!(
                "B_{} is too small to absorb B_{l}",
                l - 1
            )));
        }
        let disc = &discriminant(below) / &discriminant(top);
        let phi = form_with_invariants(ctx, below.dim() - top.dim(), &disc)?;
        if !form_equivalent(below, &top.orth_sum(&phi)?)? {
            return Err(Error::VerificationFailed(format!(
                "B_{} does not split off B_{l}",
                l - 1
            )));
        }
        b[l - 1] = phi;
        b[l] = BilForm::zero(ctx, crate::forms::FormKind::Symmetric);
    }
    if let Some(b0) = b.first().filter(|f| f.dim() > 0) {
        let n = b0.dim();
        let pair = Isopair::new(Eps::Plus, b0.clone(), Matrix::identity(ctx, n))?;
        out.push(FactoredModel {
            pair,
            factorization: U2Factorization::trivial(ctx, n, 2),
        });
    }
    Ok(out)
}

/// A factored model isometric to `p`, which must be splittable.
pub fn orth_model(p: &Isopair) -> Result<FactoredModel> {
    let verdict = orth_decide(p)?;
    if !verdict.splittable {
        return Err(Error::NotSplittable(verdict.failed_conditions));
    }
    let ctx = p.ctx();
    let w = wall_data(p)?;
    let mut parts = Vec::new();
    let mut halves = Vec::new();
    for (q, r, n) in w.jordan.iter() {
        let block = companion(&q.pow(r));
        if is_eta(q, 1) {
            if r % 2 == 0 {
                for _ in 0..n / 2 {
                    parts.push(h1_block(&block)?);
                }
            }
            continue;
        }
        halves.extend(std::iter::repeat(block).take(n / 2));
    }
    if !halves.is_empty() {
        parts.push(h1_block(&Matrix::block_diag(ctx, &halves))?);
    }
    parts.extend(odd_unipotent_blocks(ctx, b_forms(&w))?);
    let model = FactoredModel::sum(ctx, Eps::Plus, parts)?;
    model.check()?;
    Ok(model)
}

pub fn orth_factor2(p: &Isopair, budget: u64) -> Result<U2Factorization> {
    let model = orth_model(p)?;
    transport_factorization(&model, p, budget)
}
