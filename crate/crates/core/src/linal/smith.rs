//! Smith normal form of `tI - A` over F[t], and what it gives: invariant
//! factors, cyclic generators, Jordan numbers and similarity transport.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactfield::FieldCtx;
use crate::poly::{factorize, Poly, DEFAULT_FACTOR_SEED};

use super::matrix::{Matrix, Vector};
use super::subspace::Subspace;

/// Invariant factors `d_1 | ... | d_a` (nonconstant, monic) together with
/// vectors `w_k` generating `V` as the direct sum of the cyclic modules
/// `F[A] w_k`, the annihilator of `w_k` being `d_k`.
#[derive(Clone, Debug)]
pub struct Frobenius {
    pub factors: Vec<Poly>,
    pub generators: Vec<Vector>,
}

/// `f(A) v` without forming `f(A)`.
pub fn poly_apply(a: &Matrix, f: &Poly, v: &[crate::FieldElem]) -> Vector {
    let ctx = a.ctx();
    let mut acc = vec![ctx.zero(); v.len()];
    for c in f.coeffs().iter().rev() {
        acc = a.apply(&acc);
        if !c.is_zero() {
            for (x, y) in acc.iter_mut().zip(v) {
                *x += &(c * y);
            }
        }
    }
    acc
}

pub fn frobenius(a: &Matrix) -> Result<Frobenius> {
    if !a.is_square() {
        return Err(Error::NonSquare);
    }
    let ctx = a.ctx();
    let n = a.rows();
    let mut m: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = -&a[(i, j)];
                    if i == j {
                        Poly::new(ctx, vec![c, ctx.one()])
                    } else {
                        Poly::constant(c)
                    }
                })
                .collect()
        })
        .collect();
    let mut pinv: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Poly::one(ctx)
                    } else {
                        Poly::zero(ctx)
                    }
                })
                .collect()
        })
        .collect();

    for k in 0..n {
        loop {
            let Some((pi, pj)) = min_degree_entry(&m, k) else {
                break;
            };
            if pi != k {
                m.swap(pi, k);
                for row in pinv.iter_mut() {
                    row.swap(pi, k);
                }
            }
            if pj != k {
                for row in m.iter_mut() {
                    row.swap(pj, k);
                }
            }
            let mut clean = true;
            for i in k + 1..n {
                if m[i][k].is_zero() {
                    continue;
                }
                let (q, _) = m[i][k].div_rem(&m[k][k]);
                for j in k..n {
                    let d = &q * &m[k][j];
                    m[i][j] = &m[i][j] - &d;
                }
                for row in pinv.iter_mut() {
                    let d = &q * &row[i];
                    row[k] = &row[k] + &d;
                }
                clean &= m[i][k].is_zero();
            }
            for j in k + 1..n {
                if m[k][j].is_zero() {
                    continue;
                }
                let (q, _) = m[k][j].div_rem(&m[k][k]);
                for row in m.iter_mut().skip(k) {
                    let d = &q * &row[k];
                    row[j] = &row[j] - &d;
                }
                clean &= m[k][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (k + 1..n).find(|&i| (k + 1..n).any(|j| !m[k][k].divides(&m[i][j])));
            match bad {
                Some(i) => {
                    for j in k..n {
                        m[k][j] = &m[k][j] + &m[i][j].clone();
                    }
                    for row in pinv.iter_mut() {
                        let d = row[k].clone();
                        row[i] = &row[i] - &d;
                    }
                }
                None => break,
            }
        }
        let c = m[k][k].lead();
        if !c.is_one() {
            let ci = c.inv();
            for j in k..n {
                m[k][j] = m[k][j].scale(&ci);
            }
            for row in pinv.iter_mut() {
                row[k] = row[k].scale(&c);
            }
        }
    }

    // cofactors may only be reduced modulo the minimal polynomial
    let minpoly = m
        .last()
        .map(|r| r[n - 1].clone())
        .unwrap_or_else(|| Poly::one(ctx));
    let mut factors = Vec::new();
    let mut generators = Vec::new();
    for k in 0..n {
        if m[k][k].deg() == 0 {
            continue;
        }
        let d = m[k][k].clone();
        let mut w = vec![ctx.zero(); n];
        for (j, row) in pinv.iter().enumerate() {
            let f = row[k].rem(&minpoly);
            if f.is_zero() {
                continue;
            }
            let e = super::matrix::unit_vector(ctx, n, j);
            for (x, y) in w.iter_mut().zip(poly_apply(a, &f, &e)) {
                *x += &y;
            }
        }
        factors.push(d);
        generators.push(w);
    }
    Ok(Frobenius {
        factors,
        generators,
    })
}

fn min_degree_entry(m: &[Vec<Poly>], k: usize) -> Option<(usize, usize)> {
    let n = m.len();
    let mut best: Option<(usize, usize, usize)> = None;
    for i in k..n {
        for j in k..n {
            if m[i][j].is_zero() {
                continue;
            }
            let d = m[i][j].deg();
            // prefer the current pivot on ties so the loop makes progress
            let better = match best {
                None => true,
                Some((bd, bi, bj)) => d < bd || (d == bd && (i, j) == (k, k) && (bi, bj) != (k, k)),
            };
            if better {
                best = Some((d, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

pub fn invariant_factors(a: &Matrix) -> Result<Vec<Poly>> {
    Ok(frobenius(a)?.factors)
}

/// Columns `w_k, A w_k, ..., A^{deg d_k - 1} w_k` for each generator in turn.
pub fn frobenius_basis(a: &Matrix, fr: &Frobenius) -> Matrix {
    let n = a.rows();
    let mut cols = Vec::with_capacity(n);
    for (d, w) in fr.factors.iter().zip(&fr.generators) {
        let mut v = w.clone();
        for _ in 0..d.deg() {
            let next = a.apply(&v);
            cols.push(std::mem::replace(&mut v, next));
        }
    }
    Matrix::from_cols(a.ctx(), n, &cols)
}

/// Companion matrix with `C e_i = e_{i+1}`, last column `-(c_0, ..., c_{d-1})`.
pub fn companion(p: &Poly) -> Matrix {
    let ctx = p.ctx();
    let d = p.deg();
    let p = p.monic();
    let mut c = Matrix::zeros(ctx, d, d);
    for i in 0..d.saturating_sub(1) {
        c[(i + 1, i)] = ctx.one();
    }
    for i in 0..d {
        c[(i, d - 1)] = -&p.coeff(i);
    }
    c
}

pub fn rational_canonical_form(a: &Matrix) -> Result<Matrix> {
    let fr = frobenius(a)?;
    let blocks: Vec<Matrix> = fr.factors.iter().map(companion).collect();
    Ok(Matrix::block_diag(a.ctx(), &blocks))
}

/// Invertible `g` with `g a g^{-1} = b`.
pub fn similarity_transform(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if !a.is_square() || !b.is_square() {
        return Err(Error::NonSquare);
    }
    if a.rows() != b.rows() {
        return Err(Error::NotSimilar);
    }
    if a == b {
        return Ok(Matrix::identity(a.ctx(), a.rows()));
    }
    let fa = frobenius(a)?;
    let fb = frobenius(b)?;
    if fa.factors != fb.factors {
        return Err(Error::NotSimilar);
    }
    let pa = frobenius_basis(a, &fa);
    let pb = frobenius_basis(b, &fb);
    let g = &pb * &pa.inverse()?;
    if &g * a != b * &g {
        return Err(Error::VerificationFailed("similarity transform".into()));
    }
    Ok(g)
}

/// Jordan numbers `n_{p,r}`: the number of invariant factors exactly divisible by `p^r`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JordanData(pub BTreeMap<(Poly, usize), usize>);

impl JordanData {
    pub fn get(&self, p: &Poly, r: usize) -> usize {
        self.0.get(&(p.clone(), r)).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Poly, usize, usize)> {
        self.0.iter().map(|((p, r), n)| (p, *r, *n))
    }

    /// Irreducible polynomials that occur.
    pub fn primes(&self) -> Vec<Poly> {
        let mut v: Vec<Poly> = self.0.keys().map(|(p, _)| p.clone()).collect();
        v.dedup();
        v
    }

    /// `sum n_{p,r} r deg p`
    pub fn dimension(&self) -> usize {
        self.iter().map(|(p, r, n)| n * r * p.deg()).sum()
    }

    pub fn add(&self, other: &JordanData) -> JordanData {
        let mut m = self.0.clone();
        for (k, v) in &other.0 {
            *m.entry(k.clone()).or_default() += v;
        }
        JordanData(m)
    }

    /// Sizes `r` with `n_{p,r} > 0`, ascending.
    pub fn sizes(&self, p: &Poly) -> Vec<usize> {
        self.iter()
            .filter(|(q, _, _)| *q == p)
            .map(|(_, r, _)| r)
            .collect()
    }
}

pub fn jordan_from_factors(factors: &[Poly]) -> Result<JordanData> {
    let mut m = BTreeMap::new();
    for d in factors {
        for (p, r) in factorize(d, DEFAULT_FACTOR_SEED)? {
            *m.entry((p, r)).or_default() += 1;
        }
    }
    Ok(JordanData(m))
}

pub fn jordan_numbers(a: &Matrix) -> Result<JordanData> {
    jordan_from_factors(&invariant_factors(a)?)
}

/// `Ker f(A)^k` for `k = 0..=kmax`.
pub fn poly_kernel_chain(a: &Matrix, f: &Poly, kmax: usize) -> Vec<Subspace> {
    let ctx = a.ctx();
    let n = a.rows();
    let fa = a.eval_poly(f);
    let mut pw = Matrix::identity(ctx, n);
    let mut out = Vec::with_capacity(kmax + 1);
    for _ in 0..=kmax {
        out.push(Subspace::kernel_of(&pw));
        pw = &pw * &fa;
    }
    out
}

/// `Im f(A)^k` for `k = 0..=kmax`.
pub fn poly_image_chain(a: &Matrix, f: &Poly, kmax: usize) -> Vec<Subspace> {
    let n = a.rows();
    let fa = a.eval_poly(f);
    let mut pw = Matrix::identity(a.ctx(), n);
    let mut out = Vec::with_capacity(kmax + 1);
    for _ in 0..=kmax {
        out.push(Subspace::image_of(&pw));
        pw = &pw * &fa;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FittingSplit {
    pub co: Subspace,
    pub nil: Subspace,
}

/// Fitting decomposition of `A - I`.
pub fn fitting_split(a: &Matrix) -> Result<FittingSplit> {
    if !a.is_square() {
        return Err(Error::NonSquare);
    }
    let ctx = a.ctx();
    let n = a.rows();
    let m = (a - &Matrix::identity(ctx, n)).pow(n);
    Ok(FittingSplit {
        co: Subspace::image_of(&m),
        nil: Subspace::kernel_of(&m),
    })
}

/// `t - a` for a scalar.
pub fn linear_poly(ctx: FieldCtx, a: i64) -> Poly {
    Poly::linear(&ctx.from_i64(a))
}
