use crate::error::{Error, Result};
use crate::exactfield::FieldCtx;

use super::matrix::{Matrix, Vector};

/// A subspace of `F^n`, stored as the rows of its reduced echelon basis so
/// that equality of subspaces is equality of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ctx: FieldCtx,
    n: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn span(ctx: FieldCtx, n: usize, vectors: &[Vector]) -> Self {
        if vectors.is_empty() {
            return Subspace::zero(ctx, n);
        }
        let m = Matrix::from_rows(ctx, vectors.to_vec()).expect("vectors of equal length");
        let (r, piv) = m.rref();
        let basis = (0..piv.len()).map(|i| r.row(i)).collect();
        Subspace { ctx, n, basis }
    }

    pub fn zero(ctx: FieldCtx, n: usize) -> Self {
        Subspace {
            ctx,
            n,
            basis: vec![],
        }
    }

    pub fn full(ctx: FieldCtx, n: usize) -> Self {
        Subspace::span(ctx, n, &Matrix::identity(ctx, n).to_rows())
    }

    pub fn kernel_of(m: &Matrix) -> Self {
        Subspace::span(m.ctx(), m.cols(), &m.kernel())
    }

    pub fn image_of(m: &Matrix) -> Self {
        Subspace::span(m.ctx(), m.rows(), &m.columns())
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Basis vectors as the columns of an `n x dim` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_cols(self.ctx, self.n, &self.basis)
    }

    pub fn contains(&self, v: &[super::FieldElem]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Subspace::span(self.ctx, self.n, &rows).dim() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        other.sum(self).dim() == other.dim()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(self.ctx, self.n, &rows)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.ctx, self.n);
        }
        // x = A a = B b  <=>  [A | -B] (a, b) = 0
        let a = self.basis_matrix();
        let b = other.basis_matrix();
        let m = a.hstack(&-&b);
        let vecs: Vec<Vector> = m
            .kernel()
            .iter()
            .map(|k| a.apply(&k[..self.dim()]))
            .collect();
        Subspace::span(self.ctx, self.n, &vecs)
    }

    /// Image under a linear map.
    pub fn map(&self, m: &Matrix) -> Subspace {
        let vecs: Vec<Vector> = self.basis.iter().map(|v| m.apply(v)).collect();
        Subspace::span(self.ctx, m.rows(), &vecs)
    }

    pub fn is_stable_under(&self, m: &Matrix) -> bool {
        self.map(m).is_subspace_of(self)
    }

    /// Preimage `{x : m x in self}`.
    pub fn preimage(&self, m: &Matrix) -> Subspace {
        // x with m x = B c: [m | -B](x, c) = 0
        let b = self.basis_matrix();
        let big = if self.dim() == 0 {
            m.clone()
        } else {
            m.hstack(&-&b)
        };
        let vecs: Vec<Vector> = big
            .kernel()
            .iter()
            .map(|k| k[..m.cols()].to_vec())
            .collect();
        Subspace::span(self.ctx, m.cols(), &vecs)
    }

    /// `{x : x^T g y = 0 for all y in self}` for a square `g`.
    pub fn orthogonal(&self, g: &Matrix) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ctx, self.n);
        }
        let b = self.basis_matrix();
        Subspace::kernel_of(&(g * &b).transpose())
    }

    /// Vectors of `outer`'s echelon basis that complete `self` to `outer`,
    /// picked greedily in order.
    pub fn complement_in(&self, outer: &Subspace) -> Result<Vec<Vector>> {
        if !self.is_subspace_of(outer) {
            return Err(Error::DimensionMismatch("subspace not contained".into()));
        }
        let mut cur = self.clone();
        let mut out = Vec::new();
        for v in &outer.basis {
            if cur.dim() == outer.dim() {
                break;
            }
            if !cur.contains(v) {
                out.push(v.clone());
                cur = cur.sum(&Subspace::span(self.ctx, self.n, &[v.clone()]));
            }
        }
        Ok(out)
    }
}
