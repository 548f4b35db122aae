//! Pairs `(b, u)` of a regular symmetric or symplectic form and an isometry.

mod model;
mod wall;

pub use model::{
    herm_represents, model_isopair, model_sym_pair, odd_unipotent_cell, BlockShape, BlockValue,
    SymPairModel,
};
pub use wall::{
    herm_value, herm_wall, isometric, quad_wall, wall_data, HermEntry, HermWall, WallData,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfield::FieldCtx;
use crate::forms::{BilForm, FormKind};
use crate::linal::{Matrix, QuotientCtx, Subspace};

/// `+1` for symmetric forms, `-1` for symplectic ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum Eps {
    Plus,
    Minus,
}

impl Eps {
    pub fn sign(self) -> i64 {
        match self {
            Eps::Plus => 1,
            Eps::Minus => -1,
        }
    }

    pub fn kind(self) -> FormKind {
        match self {
            Eps::Plus => FormKind::Symmetric,
            Eps::Minus => FormKind::Skewsymmetric,
        }
    }

    pub fn flip(self) -> Eps {
        match self {
            Eps::Plus => Eps::Minus,
            Eps::Minus => Eps::Plus,
        }
    }

    pub fn of_kind(kind: FormKind) -> Eps {
        match kind {
            FormKind::Symmetric => Eps::Plus,
            FormKind::Skewsymmetric => Eps::Minus,
        }
    }
}

impl TryFrom<i64> for Eps {
    type Error = Error;
    fn try_from(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Eps::Plus),
            -1 => Ok(Eps::Minus),
            _ => Err(Error::Parse(format!("eps must be 1 or -1, got {v}"))),
        }
    }
}

impl From<Eps> for i64 {
    fn from(e: Eps) -> i64 {
        e.sign()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isopair {
    eps: Eps,
    b: BilForm,
    u: Matrix,
}

/// Every violated isopair invariant, as human-readable lines.
pub fn validate_isopair(eps: Eps, gram: &Matrix, u: &Matrix) -> Vec<String> {
    let mut out = Vec::new();
    if !gram.is_square() || !u.is_square() {
        out.push("gram and u must be square".into());
        return out;
    }
    if gram.rows() != u.rows() {
        out.push(format!(
            "gram is {}x{} but u is {}x{}",
            gram.rows(),
            gram.cols(),
            u.rows(),
            u.cols()
        ));
        return out;
    }
    if gram.ctx() != u.ctx() {
        out.push("gram and u live over different fields".into());
        return out;
    }
    match BilForm::new(eps.kind(), gram.clone()) {
        Err(_) => out.push(format!(
            "gram is not {}",
            if eps == Eps::Plus {
                "symmetric"
            } else {
                "skewsymmetric"
            }
        )),
        Ok(b) if !b.is_regular() => out.push("form is degenerate".into()),
        Ok(_) => {}
    }
    if eps == Eps::Minus && gram.rows() % 2 == 1 {
        out.push("symplectic space of odd dimension".into());
    }
    if u.rank() != u.rows() {
        out.push("u is not invertible".into());
    }
    if &(&u.transpose() * gram) * u != *gram {
        out.push("u is not an isometry: u^T G u != G".into());
    }
    out
}

impl Isopair {
    pub fn new(eps: Eps, b: BilForm, u: Matrix) -> Result<Self> {
        let report = validate_isopair(eps, b.gram(), &u);
        if !report.is_empty() {
            return Err(Error::Validation(report.join("; ")));
        }
        Ok(Isopair { eps, b, u })
    }

    pub fn from_gram(eps: Eps, gram: Matrix, u: Matrix) -> Result<Self> {
        let report = validate_isopair(eps, &gram, &u);
        if !report.is_empty() {
            return Err(Error::Validation(report.join("; ")));
        }
        let b = BilForm::new(eps.kind(), gram)?;
        Ok(Isopair { eps, b, u })
    }

    pub fn zero(ctx: FieldCtx, eps: Eps) -> Self {
        Isopair {
            eps,
            b: BilForm::zero(ctx, eps.kind()),
            u: Matrix::zeros(ctx, 0, 0),
        }
    }

    pub fn eps(&self) -> Eps {
        self.eps
    }

    pub fn b(&self) -> &BilForm {
        &self.b
    }

    pub fn gram(&self) -> &Matrix {
        self.b.gram()
    }

    pub fn u(&self) -> &Matrix {
        &self.u
    }

    pub fn ctx(&self) -> FieldCtx {
        self.u.ctx()
    }

    pub fn dim(&self) -> usize {
        self.u.rows()
    }

    /// Same isometry for the form scaled by `a`.
    pub fn scale_form(&self, a: &crate::FieldElem) -> Result<Isopair> {
        Isopair::new(self.eps, self.b.scale(a), self.u.clone())
    }

    pub fn orth_sum(&self, other: &Isopair) -> Result<Isopair> {
        if self.eps != other.eps {
            return Err(Error::EpsMismatch);
        }
        if self.ctx() != other.ctx() {
            return Err(Error::FieldMismatch);
        }
        let b = self.b.orth_sum(&other.b)?;
        let u = Matrix::block_diag(self.ctx(), &[self.u.clone(), other.u.clone()]);
        Ok(Isopair {
            eps: self.eps,
            b,
            u,
        })
    }

    pub fn orth_sum_all(ctx: FieldCtx, eps: Eps, parts: &[Isopair]) -> Result<Isopair> {
        parts
            .iter()
            .try_fold(Isopair::zero(ctx, eps), |acc, p| acc.orth_sum(p))
    }

    /// The same pair written in the basis given by the columns of `q`:
    /// `(q^T G q, q^{-1} u q)`.
    pub fn change_basis(&self, q: &Matrix) -> Result<Isopair> {
        let qi = q.inverse()?;
        Isopair::new(self.eps, self.b.pullback(q), &(&qi * &self.u) * q)
    }

    pub fn is_unipotent(&self) -> bool {
        let n = self.dim();
        (&self.u - &Matrix::identity(self.ctx(), n))
            .pow(n)
            .is_zero()
    }

    fn require_unipotent(&self) -> Result<()> {
        if self.is_unipotent() {
            Ok(())
        } else {
            Err(Error::NotUnipotent)
        }
    }

    /// `u - I`.
    pub fn nilpart(&self) -> Matrix {
        &self.u - &Matrix::identity(self.ctx(), self.dim())
    }
}

/// The pair induced on `W / (W ∩ W^⊥)` for a `u`-stable `W`.
pub fn induced(p: &Isopair, w: &Subspace) -> Result<Isopair> {
    induced_with_ctx(p, w).map(|(q, _)| q)
}

pub fn induced_with_ctx(p: &Isopair, w: &Subspace) -> Result<(Isopair, QuotientCtx)> {
    if !w.is_stable_under(p.u()) {
        return Err(Error::NotStable);
    }
    let rad = w.intersection(&w.orthogonal(p.gram()));
    let q = QuotientCtx::of(&rad, w)?;
    let gram = q.induced_form(p.gram())?;
    let u = q.induced_map(p.u())?;
    Ok((Isopair::from_gram(p.eps(), gram, u)?, q))
}

/// Induced pair on `Im(u - I)`.
pub fn descent(p: &Isopair) -> Result<Isopair> {
    p.require_unipotent()?;
    induced(p, &Subspace::image_of(&p.nilpart()))
}

/// Induced pair on `Ker(u - I) + Im(u - I)`.
pub fn twisted_descent(p: &Isopair) -> Result<Isopair> {
    p.require_unipotent()?;
    let a = p.nilpart();
    induced(p, &Subspace::kernel_of(&a).sum(&Subspace::image_of(&a)))
}

/// Induced pair on `Ker(u - I)^k`.
pub fn folding(p: &Isopair, k: usize) -> Result<Isopair> {
    p.require_unipotent()?;
    induced(p, &Subspace::kernel_of(&p.nilpart().pow(k)))
}
