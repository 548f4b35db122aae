use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exactfield::{FieldCtx, FieldElem};
use crate::poly::Poly;

pub type Vector = Vec<FieldElem>;

/// Dense row-major matrix over an exact field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    ctx: FieldCtx,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(ctx: FieldCtx, rows: usize, cols: usize) -> Self {
        Matrix {
            ctx,
            rows,
            cols,
            data: vec![ctx.zero(); rows * cols],
        }
    }

    pub fn identity(ctx: FieldCtx, n: usize) -> Self {
        let mut m = Matrix::zeros(ctx, n, n);
        for i in 0..n {
            m[(i, i)] = ctx.one();
        }
        m
    }

    pub fn from_fn(
        ctx: FieldCtx,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElem,
    ) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix {
            ctx,
            rows,
            cols,
            data,
        }
    }

    pub fn scalar(ctx: FieldCtx, n: usize, a: &FieldElem) -> Self {
        let mut m = Matrix::zeros(ctx, n, n);
        for i in 0..n {
            m[(i, i)] = a.clone();
        }
        m
    }

    pub fn from_rows(ctx: FieldCtx, rows: Vec<Vec<FieldElem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            ctx,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Square or rectangular matrix from integer rows; panics on ragged input.
    pub fn from_i64(ctx: FieldCtx, rows: &[&[i64]]) -> Self {
        let v = rows
            .iter()
            .map(|r| r.iter().map(|&x| ctx.from_i64(x)).collect())
            .collect();
        Matrix::from_rows(ctx, v).expect("ragged integer rows")
    }

    /// Matrix whose columns are the given vectors (of length `n`).
    pub fn from_cols(ctx: FieldCtx, n: usize, cols: &[Vector]) -> Self {
        let mut m = Matrix::zeros(ctx, n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn diag(ctx: FieldCtx, entries: &[FieldElem]) -> Self {
        let mut m = Matrix::zeros(ctx, entries.len(), entries.len());
        for (i, a) in entries.iter().enumerate() {
            m[(i, i)] = a.clone();
        }
        m
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn scale(&self, a: &FieldElem) -> Matrix {
        Matrix {
            data: self.data.iter().map(|x| x * a).collect(),
            ..self.clone()
        }
    }

    pub fn apply(&self, v: &[FieldElem]) -> Vector {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).fold(self.ctx.zero(), |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        acc + a * b
                    }
                })
            })
            .collect()
    }

    /// `x^T self y`
    pub fn bilinear(&self, x: &[FieldElem], y: &[FieldElem]) -> FieldElem {
        dot(x, &self.apply(y))
    }

    pub fn pow(&self, e: usize) -> Matrix {
        let mut acc = Matrix::identity(self.ctx, self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates a polynomial at a square matrix by Horner's rule.
    pub fn eval_poly(&self, f: &Poly) -> Matrix {
        let n = self.rows;
        f.coeffs()
            .iter()
            .rev()
            .fold(Matrix::zeros(self.ctx, n, n), |acc, a| {
                &(&acc * self) + &Matrix::scalar(self.ctx, n, a)
            })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.ctx, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn block_diag(ctx: FieldCtx, blocks: &[Matrix]) -> Matrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(ctx, r, c);
        let (mut oi, mut oj) = (0, 0);
        for b in blocks {
            m.set_block(oi, oj, b);
            oi += b.rows;
            oj += b.cols;
        }
        m
    }

    /// Assembles a 2x2 block matrix.
    pub fn blocks2(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(a.ctx, a.rows + c.rows, a.cols + b.cols);
        m.set_block(0, 0, a);
        m.set_block(0, a.cols, b);
        m.set_block(a.rows, 0, c);
        m.set_block(a.rows, a.cols, d);
        m
    }

    pub fn set_block(&mut self, i0: usize, j0: usize, b: &Matrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(i0 + i, j0 + j)] = b[(i, j)].clone();
            }
        }
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.ctx, self.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, other);
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(piv, r);
            let inv = m[(r, c)].inv();
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let d = &f * &m[(r, j)];
                        m[(i, j)] -= &d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Result<FieldElem> {
        if !self.is_square() {
            return Err(Error::NonSquare);
        }
        let mut m = self.clone();
        let mut det = self.ctx.one();
        for c in 0..m.cols {
            let Some(piv) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(self.ctx.zero());
            };
            if piv != c {
                m.swap_rows(piv, c);
                det = -det;
            }
            det = &det * &m[(c, c)];
            let inv = m[(c, c)].inv();
            for i in c + 1..m.rows {
                if !m[(i, c)].is_zero() {
                    let f = &m[(i, c)] * &inv;
                    for j in c..m.cols {
                        let d = &f * &m[(c, j)];
                        m[(i, j)] -= &d;
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NonSquare);
        }
        let n = self.rows;
        let (r, piv) = self.hstack(&Matrix::identity(self.ctx, n)).rref();
        if n == 0 {
            return Ok(self.clone());
        }
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(Error::NotInvertible);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(r.submatrix(&(0..n).collect::<Vec<_>>(), &cols))
    }

    /// Basis of the right kernel `{x : self x = 0}`.
    pub fn kernel(&self) -> Vec<Vector> {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.ctx.zero(); self.cols];
                v[f] = self.ctx.one();
                for (k, &p) in piv.iter().enumerate() {
                    v[p] = -&r[(k, f)];
                }
                v
            })
            .collect()
    }

    /// Some solution of `self x = b`, if one exists.
    pub fn solve(&self, b: &[FieldElem]) -> Option<Vector> {
        let aug = self.hstack(&Matrix::from_cols(self.ctx, self.rows, &[b.to_vec()]));
        let (r, piv) = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.ctx.zero(); self.cols];
        for (k, &p) in piv.iter().enumerate() {
            x[p] = r[(k, self.cols)].clone();
        }
        Some(x)
    }

    /// Solves `self X = B` column by column.
    pub fn solve_matrix(&self, b: &Matrix) -> Option<Matrix> {
        let aug = self.hstack(b);
        let (r, piv) = aug.rref();
        if piv.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.ctx, self.cols, b.cols);
        for (k, &p) in piv.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = r[(k, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn is_skew(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| self[(i, i)].is_zero() && (0..i).all(|j| self[(i, j)] == -&self[(j, i)]))
    }
}

pub fn dot(x: &[FieldElem], y: &[FieldElem]) -> FieldElem {
    let ctx = x.first().or(y.first()).map(|a| a.ctx());
    let Some(ctx) = ctx else {
        panic!("dot product of empty vectors has no field")
    };
    x.iter().zip(y).fold(ctx.zero(), |acc, (a, b)| acc + a * b)
}

pub fn vec_add(x: &[FieldElem], y: &[FieldElem]) -> Vector {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn vec_sub(x: &[FieldElem], y: &[FieldElem]) -> Vector {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn vec_scale(x: &[FieldElem], c: &FieldElem) -> Vector {
    x.iter().map(|a| a * c).collect()
}

pub fn unit_vector(ctx: FieldCtx, n: usize, i: usize) -> Vector {
    let mut v = vec![ctx.zero(); n];
    v[i] = ctx.one();
    v
}

pub fn is_zero_vec(x: &[FieldElem]) -> bool {
    x.iter().all(|a| a.is_zero())
}

impl Index<(usize, usize)> for Matrix {
    type Output = FieldElem;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElem {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElem {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        let mut m = Matrix::zeros(self.ctx, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        m[(i, j)] += &(a * b);
                    }
                }
            }
        }
        m
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, o: &Matrix) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (o.rows, o.cols),
            "matrix sum dimension mismatch"
        );
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect();
        Matrix {
            data,
            ..self.clone()
        }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, o: &Matrix) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (o.rows, o.cols),
            "matrix difference dimension mismatch"
        );
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        Matrix {
            data,
            ..self.clone()
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            data: self.data.iter().map(|a| -a).collect(),
            ..self.clone()
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}
