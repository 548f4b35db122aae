//! Deciding and constructing factorizations into two or three U2 elements.

mod construct;
mod gl;
mod orth;
mod sp;
mod transport;
mod verify;

pub use construct::{
    block_model, boxed_product, hyp_map, hyperbolic_ext, hyperbolic_ext_factored, hyperbolic_gram,
    pencil_operator, shift_cell, twisted_model, u_adapted,
};
pub use gl::{gl_decide, gl_factor};
pub use orth::{orth_decide, orth_factor2, orth_model};
pub use sp::{sp_decide, sp_factor2, sp_factor3, sp_model};
pub use transport::{isometry_find, DEFAULT_TRANSPORT_BUDGET};
pub use verify::{verify_factorization, VerifyReport};

use crate::error::{Error, Result};
use crate::exactfield::FieldCtx;
use crate::isopair::Isopair;
use crate::linal::Matrix;

/// An ordered list of U2 factors whose left-to-right product is the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct U2Factorization {
    pub factors: Vec<Matrix>,
}

impl U2Factorization {
    pub fn trivial(ctx: FieldCtx, n: usize, len: usize) -> Self {
        U2Factorization {
            factors: vec![Matrix::identity(ctx, n); len],
        }
    }

    pub fn product(&self) -> Matrix {
        let mut it = self.factors.iter();
        let first = it.next().expect("at least one factor").clone();
        it.fold(first, |acc, f| &acc * f)
    }

    /// Factors `g f g^{-1}`, a factorization of `g u g^{-1}`.
    pub fn conjugate(&self, g: &Matrix) -> Result<U2Factorization> {
        let gi = g.inverse()?;
        Ok(U2Factorization {
            factors: self.factors.iter().map(|f| &(g * f) * &gi).collect(),
        })
    }

    /// Blockwise direct sum; shorter lists are padded with identities.
    pub fn direct_sum(ctx: FieldCtx, parts: &[(usize, U2Factorization)]) -> U2Factorization {
        let len = parts
            .iter()
            .map(|(_, f)| f.factors.len())
            .max()
            .unwrap_or(2);
        let factors = (0..len)
            .map(|i| {
                let blocks: Vec<Matrix> = parts
                    .iter()
                    .map(|(n, f)| {
                        f.factors
                            .get(i)
                            .cloned()
                            .unwrap_or_else(|| Matrix::identity(ctx, *n))
                    })
                    .collect();
                Matrix::block_diag(ctx, &blocks)
            })
            .collect();
        U2Factorization { factors }
    }

    pub fn padded(mut self, ctx: FieldCtx, n: usize, len: usize) -> U2Factorization {
        while self.factors.len() < len {
            self.factors.push(Matrix::identity(ctx, n));
        }
        self
    }
}

/// Outcome of a decision procedure.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub splittable: bool,
    pub failed_conditions: Vec<String>,
    pub witness: Option<U2Factorization>,
}

impl Verdict {
    fn from_failures(failed: Vec<String>) -> Verdict {
        Verdict {
            splittable: failed.is_empty(),
            failed_conditions: failed,
            witness: None,
        }
    }
}

/// A model isopair isometric to the input, built block by block, with the
/// explicit factorization of its isometry.
#[derive(Clone, Debug)]
pub struct FactoredModel {
    pub pair: Isopair,
    pub factorization: U2Factorization,
}

impl FactoredModel {
    pub fn sum(
        ctx: FieldCtx,
        eps: crate::isopair::Eps,
        parts: Vec<FactoredModel>,
    ) -> Result<FactoredModel> {
        let pair = Isopair::orth_sum_all(
            ctx,
            eps,
            &parts.iter().map(|m| m.pair.clone()).collect::<Vec<_>>(),
        )?;
        let blocks: Vec<(usize, U2Factorization)> = parts
            .into_iter()
            .map(|m| (m.pair.dim(), m.factorization))
            .collect();
        let factorization = U2Factorization::direct_sum(ctx, &blocks);
        Ok(FactoredModel {
            pair,
            factorization,
        })
    }

    fn check(&self) -> Result<()> {
        let rep = verify_factorization(Some(&self.pair), self.pair.u(), &self.factorization);
        if rep.ok() {
            Ok(())
        } else {
            Err(Error::VerificationFailed(format!(
                "model factorization: {}",
                rep.summary()
            )))
        }
    }
}

/// Moves a model factorization onto `target` through an isometry and verifies it.
fn transport_factorization(
    model: &FactoredModel,
    target: &Isopair,
    budget: u64,
) -> Result<U2Factorization> {
    model.check()?;
    let g = isometry_find(&model.pair, target, budget)?;
    let fac = model.factorization.conjugate(&g)?;
    let rep = verify_factorization(Some(target), target.u(), &fac);
    if !rep.ok() {
        return Err(Error::VerificationFailed(rep.summary()));
    }
    Ok(fac)
}
