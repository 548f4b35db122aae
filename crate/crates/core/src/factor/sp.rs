use super::gl::{is_eta, odd_minus_one_cells};
use super::{
    boxed_product, gl_factor, hyp_map, hyperbolic_ext, hyperbolic_ext_factored,
    transport_factorization, u_adapted, FactoredModel, U2Factorization, Verdict,
};
use crate::error::{Error, Result};
use crate::exactfield::FieldElem;
use crate::forms::diagonalize;
use crate::isopair::{model_sym_pair, quad_wall, Eps, Isopair};
use crate::linal::{companion, jordan_numbers, Matrix};
use crate::poly::Poly;

fn require_symplectic(p: &Isopair) -> Result<()> {
    if p.eps() != Eps::Minus {
        return Err(Error::WrongKind);
    }
    Ok(())
}

/// Splittable iff no Jordan cell of odd size at `-1` (label `(iii)`).
pub fn sp_decide(p: &Isopair) -> Result<Verdict> {
    require_symplectic(p)?;
    let j = jordan_numbers(p.u())?;
    Ok(Verdict::from_failures(if odd_minus_one_cells(&j) {
        vec!["(iii)".into()]
    } else {
        vec![]
    }))
}

/// Boxed product over the Hankel pair for `m^r`, i.e. a cyclic block with
/// invariant factor `R(m)^r`.
fn boxed_block(m: &Poly, r: usize) -> Result<FactoredModel> {
    let sp = model_sym_pair(m, r, &Poly::one(m.ctx()))?;
    let (pair, factorization) = boxed_product(&sp.b, &sp.c, Eps::Minus)?;
    Ok(FactoredModel {
        pair,
        factorization,
    })
}

/// `H_{-1}(v)` with `h` applied to `gl_factor(v)`.
fn hyperbolic_block(v: &Matrix) -> Result<FactoredModel> {
    let (pair, factorization) = hyperbolic_ext_factored(v, &gl_factor(v)?, Eps::Minus)?;
    Ok(FactoredModel {
        pair,
        factorization,
    })
}

/// Cyclic `(t - eta)^r`, `r` even, with `quad(eta, r)` equal to `alpha` on a generator.
fn eta_cyclic_block(eta: i64, r: usize, alpha: &FieldElem) -> Result<FactoredModel> {
    let ctx = alpha.ctx();
    let m = Poly::linear(&ctx.from_i64(2 * eta));
    let base = boxed_block(&m, r / 2)?;
    let beta = quad_wall(&base.pair, eta, r)?.gram()[(0, 0)].clone();
    Ok(FactoredModel {
        pair: base.pair.scale_form(&(alpha / &beta))?,
        factorization: base.factorization,
    })
}

/// Model blocks for everything except odd twin cells at `-1`, which are
/// returned as a count of `(r, copies)`.
fn model_parts(p: &Isopair) -> Result<(Vec<FactoredModel>, Vec<(usize, usize)>)> {
    let ctx = p.ctx();
    let j = jordan_numbers(p.u())?;
    let mut parts = Vec::new();
    let mut odd_minus = Vec::new();
    for (prime, r, n) in j.iter() {
        for eta in [1i64, -1] {
            if !is_eta(prime, eta) {
                continue;
            }
            if r % 2 == 1 {
                if n % 2 == 1 {
                    return Err(Error::VerificationFailed(
                        "odd number of odd cells at +-1".into(),
                    ));
                }
                if eta == -1 {
                    odd_minus.push((r, n / 2));
                    continue;
                }
                let jr = companion(&Poly::linear(&ctx.one()).pow(r));
                for _ in 0..n / 2 {
                    parts.push(hyperbolic_block(&jr)?);
                }
            } else {
                let (_, values) = diagonalize(quad_wall(p, eta, r)?.gram());
                for a in &values {
                    parts.push(eta_cyclic_block(eta, r, a)?);
                }
            }
        }
        if prime.deg() == 1 && (is_eta(prime, 1) || is_eta(prime, -1)) {
            continue;
        }
        let sharp = prime.reciprocal()?;
        let m = if &sharp == prime {
            prime.r_inverse()?
        } else if prime < &sharp {
            (prime * &sharp).r_inverse()?
        } else {
            continue;
        };
        for _ in 0..n {
            parts.push(boxed_block(&m, r)?);
        }
    }
    Ok((parts, odd_minus))
}

/// A factored model isometric to `p`, which must be splittable.
pub fn sp_model(p: &Isopair) -> Result<FactoredModel> {
    let verdict = sp_decide(p)?;
    if !verdict.splittable {
        return Err(Error::NotSplittable(verdict.failed_conditions));
    }
    let (parts, _) = model_parts(p)?;
    let model = FactoredModel::sum(p.ctx(), Eps::Minus, parts)?;
    model.check()?;
    Ok(model)
}

pub fn sp_factor2(p: &Isopair, budget: u64) -> Result<U2Factorization> {
    let model = sp_model(p)?;
    transport_factorization(&model, p, budget)
}

/// Three factors for `H_{-1}(-J_r)`, `r` odd.
fn odd_minus_block(ctx: crate::FieldCtx, r: usize, budget: u64) -> Result<FactoredModel> {
    let v = companion(&Poly::linear(&ctx.from_i64(-1)).pow(r));
    let pair = hyperbolic_ext(&v, Eps::Minus)?;
    let (u1, rest) = if r == 1 {
        let u1 = Matrix::from_i64(ctx, &[&[1, 1], &[0, 1]]);
        let rest = u1.inverse()?.scale(&ctx.from_i64(-1));
        (u1, rest)
    } else {
        // t^r - t + 1 has p(0) = 1 = q(0) and p(-1) = 1
        let target = {
            let mut c = vec![0i64; r + 1];
            c[0] = 1;
            c[1] = -1;
            c[r] = 1;
            Poly::from_i64s(ctx, &c)
        };
        let a = u_adapted(&v, &target)?;
        let rest = &a.inverse()? * &v;
        (hyp_map(&a)?, hyp_map(&rest)?)
    };
    let rest_pair = Isopair::new(Eps::Minus, pair.b().clone(), rest)?;
    let tail = sp_factor2(&rest_pair, budget)?;
    let mut factors = vec![u1];
    factors.extend(tail.factors);
    let model = FactoredModel {
        pair,
        factorization: U2Factorization { factors },
    };
    model.check()?;
    Ok(model)
}

pub fn sp_factor3(p: &Isopair, budget: u64) -> Result<U2Factorization> {
    require_symplectic(p)?;
    let ctx = p.ctx();
    let n = p.dim();
    if sp_decide(p)?.splittable {
        return Ok(sp_factor2(p, budget)?.padded(ctx, n, 3));
    }
    let (mut parts, odd_minus) = model_parts(p)?;
    for (r, copies) in odd_minus {
        let block = odd_minus_block(ctx, r, budget)?;
        parts.extend(std::iter::repeat(block).take(copies));
    }
    let mut model = FactoredModel::sum(ctx, Eps::Minus, parts)?;
    model.factorization = model.factorization.padded(ctx, n, 3);
    transport_factorization(&model, p, budget)
}
