use crate::error::{Error, Result};
use crate::exactfield::FieldCtx;

use super::matrix::{Matrix, Vector};
use super::subspace::Subspace;

/// Coordinates on `outer / sub` through fixed representatives.
#[derive(Clone, Debug)]
pub struct QuotientCtx {
    ctx: FieldCtx,
    sub: Subspace,
    outer: Subspace,
    reps: Vec<Vector>,
    // rows of M selected by `sel`, inverted; M = [reps | sub basis]
    sel: Vec<usize>,
    sel_inv: Matrix,
}

impl QuotientCtx {
    /// Quotient of the whole space by `sub`; representatives are standard basis vectors.
    pub fn new(sub: &Subspace) -> Result<Self> {
        QuotientCtx::of(sub, &Subspace::full(sub.ctx(), sub.ambient_dim()))
    }

    pub fn of(sub: &Subspace, outer: &Subspace) -> Result<Self> {
        let reps = sub.complement_in(outer)?;
        QuotientCtx::with_reps(sub, outer, reps)
    }

    pub fn with_reps(sub: &Subspace, outer: &Subspace, reps: Vec<Vector>) -> Result<Self> {
        let ctx = sub.ctx();
        let n = sub.ambient_dim();
        let mut cols = reps.clone();
        cols.extend(sub.basis().iter().cloned());
        if cols.len() != outer.dim() {
            return Err(Error::DimensionMismatch(
                "representatives do not complete the subspace".into(),
            ));
        }
        let m = Matrix::from_cols(ctx, n, &cols);
        let (_, sel) = m.transpose().rref();
        if sel.len() != cols.len() {
            return Err(Error::DimensionMismatch(
                "representatives are dependent".into(),
            ));
        }
        let all: Vec<usize> = (0..cols.len()).collect();
        let sel_inv = m.submatrix(&sel, &all).inverse()?;
        Ok(QuotientCtx {
            ctx,
            sub: sub.clone(),
            outer: outer.clone(),
            reps,
            sel,
            sel_inv,
        })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[Vector] {
        &self.reps
    }

    pub fn sub(&self) -> &Subspace {
        &self.sub
    }

    pub fn outer(&self) -> &Subspace {
        &self.outer
    }

    /// Coordinates of the class of `v` (which must lie in `outer`).
    pub fn project(&self, v: &[super::FieldElem]) -> Vector {
        let xr: Vector = self.sel.iter().map(|&i| v[i].clone()).collect();
        let c = self.sel_inv.apply(&xr);
        c[..self.reps.len()].to_vec()
    }

    pub fn lift(&self, c: &[super::FieldElem]) -> Vector {
        let n = self.sub.ambient_dim();
        let mut v = vec![self.ctx.zero(); n];
        for (ci, r) in c.iter().zip(&self.reps) {
            if !ci.is_zero() {
                for (a, b) in v.iter_mut().zip(r) {
                    *a += &(ci * b);
                }
            }
        }
        v
    }

    /// Matrix of the map induced by `a` on the quotient.
    pub fn induced_map(&self, a: &Matrix) -> Result<Matrix> {
        if !self.sub.is_stable_under(a) || !self.outer.is_stable_under(a) {
            return Err(Error::NotStable);
        }
        let cols: Vec<Vector> = self
            .reps
            .iter()
            .map(|r| self.project(&a.apply(r)))
            .collect();
        Ok(Matrix::from_cols(self.ctx, self.dim(), &cols))
    }

    /// Gram matrix of the form `(x, y) -> x^T g y` on the representatives;
    /// errors unless `sub` lies in the radical of the form restricted to `outer`.
    pub fn induced_form(&self, g: &Matrix) -> Result<Matrix> {
        let ob = self.outer.basis();
        for w in self.sub.basis() {
            for x in ob {
                if !g.bilinear(w, x).is_zero() || !g.bilinear(x, w).is_zero() {
                    return Err(Error::NotStable);
                }
            }
        }
        Ok(self.gram_on_reps(g))
    }

    pub fn gram_on_reps(&self, g: &Matrix) -> Matrix {
        let k = self.dim();
        let mut m = Matrix::zeros(self.ctx, k, k);
        for i in 0..k {
            for j in 0..k {
                m[(i, j)] = g.bilinear(&self.reps[i], &self.reps[j]);
            }
        }
        m
    }
}
