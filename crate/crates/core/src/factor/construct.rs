//! Explicit constructions of isometries together with U2 factorizations:
//! hyperbolic extensions, boxed products, twisted pairs and the
//! square-zero shift models.

use super::U2Factorization;
use crate::error::{Error, Result};
use crate::exactfield::{FieldCtx, FieldElem};
use crate::forms::{BilForm, FormKind};
use crate::isopair::{Eps, Isopair};
use crate::linal::{companion, frobenius, similarity_transform, Matrix};
use crate::poly::Poly;

/// Gram of `H_eps` on `V x V*` in coordinates `(x, phi)`:
/// `((x,phi),(y,psi)) -> phi(y) + eps psi(x)`, i.e. `[[0, eps I], [I, 0]]`.
pub fn hyperbolic_gram(ctx: FieldCtx, n: usize, eps: Eps) -> Matrix {
    let i = Matrix::identity(ctx, n);
    let z = Matrix::zeros(ctx, n, n);
    Matrix::blocks2(&z, &i.scale(&ctx.from_i64(eps.sign())), &i, &z)
}

/// `h(v) = v ⊕ (v^{-1})^T`.
pub fn hyp_map(v: &Matrix) -> Result<Matrix> {
    let vit = v.inverse()?.transpose();
    Ok(Matrix::block_diag(v.ctx(), &[v.clone(), vit]))
}

/// The hyperbolic extension `H_eps(v)`.
pub fn hyperbolic_ext(v: &Matrix, eps: Eps) -> Result<Isopair> {
    let ctx = v.ctx();
    let g = hyperbolic_gram(ctx, v.rows(), eps);
    Isopair::new(eps, BilForm::new(eps.kind(), g)?, hyp_map(v)?)
}

/// `H_eps(v)` with the factorization `h(f_1) h(f_2)` of a factorization of `v`.
pub fn hyperbolic_ext_factored(
    v: &Matrix,
    fac: &U2Factorization,
    eps: Eps,
) -> Result<(Isopair, U2Factorization)> {
    let p = hyperbolic_ext(v, eps)?;
    let factors = fac
        .factors
        .iter()
        .map(hyp_map)
        .collect::<Result<Vec<_>>>()?;
    Ok((p, U2Factorization { factors }))
}

/// `b ⊠ c = (I + v_c)(I + w_b)` on `H_eps`, with `v_c(x,phi) = (0, L_c x)` and
/// `w_b(x,phi) = (L_b^{-1} phi, 0)`.
pub fn boxed_product(b: &BilForm, c: &BilForm, eps: Eps) -> Result<(Isopair, U2Factorization)> {
    let want = match eps {
        Eps::Minus => FormKind::Symmetric,
        Eps::Plus => FormKind::Skewsymmetric,
    };
    if b.kind() != want || c.kind() != want {
        return Err(Error::KindMismatch(format!(
            "boxed product with eps={} needs {:?} forms",
            eps.sign(),
            want
        )));
    }
    if b.dim() != c.dim() {
        return Err(Error::DimensionMismatch("boxed product".into()));
    }
    let ctx = b.ctx();
    let n = b.dim();
    let gb_inv = b.gram().inverse().map_err(|_| Error::DegenerateForm)?;
    let i = Matrix::identity(ctx, n);
    let z = Matrix::zeros(ctx, n, n);
    let f1 = Matrix::blocks2(&i, &z, c.gram(), &i);
    let f2 = Matrix::blocks2(&i, &gb_inv, &z, &i);
    let u = &f1 * &f2;
    let g = hyperbolic_gram(ctx, n, eps);
    let p = Isopair::new(eps, BilForm::new(eps.kind(), g)?, u)?;
    Ok((
        p,
        U2Factorization {
            factors: vec![f1, f2],
        },
    ))
}

/// `L_b^{-1} L_c = G_b^{-1} G_c`.
pub fn pencil_operator(b: &BilForm, c: &BilForm) -> Result<Matrix> {
    let gb_inv = b.gram().inverse().map_err(|_| Error::DegenerateForm)?;
    Ok(&gb_inv * c.gram())
}

/// Square-zero shift model of a single unipotent Jordan cell of size `r`:
/// `a1: e_{2i} -> e_{2i-1}`, `a2: e_{2i+1} -> e_{2i}` (1-based), product `(I+a1)(I+a2)`.
pub fn shift_cell(ctx: FieldCtx, r: usize) -> (Matrix, U2Factorization) {
    let mut a1 = Matrix::zeros(ctx, r, r);
    let mut a2 = Matrix::zeros(ctx, r, r);
    for j in 1..r {
        // 0-based column j is e_{j+1}
        if (j + 1) % 2 == 0 {
            a1[(j - 1, j)] = ctx.one();
        } else {
            a2[(j - 1, j)] = ctx.one();
        }
    }
    let i = Matrix::identity(ctx, r);
    let f1 = &i + &a1;
    let f2 = &i + &a2;
    (
        &f1 * &f2,
        U2Factorization {
            factors: vec![f1, f2],
        },
    )
}

/// Block model `[[I + A0, A0], [I, I]] = (I + [[0,A0],[0,0]])(I + [[0,0],[I,0]])`
/// with `A0 = C_q - 2I`; its only invariant factor is `R(q)`.
pub fn block_model(q: &Poly) -> (Matrix, U2Factorization) {
    let ctx = q.ctx();
    let n = q.deg();
    let i = Matrix::identity(ctx, n);
    let z = Matrix::zeros(ctx, n, n);
    let a0 = &companion(q) - &i.scale(&ctx.from_i64(2));
    let f1 = Matrix::blocks2(&i, &a0, &z, &i);
    let f2 = Matrix::blocks2(&i, &z, &i, &i);
    (
        &f1 * &f2,
        U2Factorization {
            factors: vec![f1, f2],
        },
    )
}

/// The pair with two unipotent cells of sizes `2k+1` and `2k-1` on a
/// `4k`-dimensional hyperbolic space, with its explicit factorization.
/// Basis order `e_1..e_{2k}, f_1..f_{2k}`; the form is `scale * [[0,I],[I,0]]`.
pub fn twisted_model(k: usize, scale: &FieldElem) -> Result<(Isopair, U2Factorization)> {
    if k == 0 {
        return Err(Error::BadParameters("twisted model needs k >= 1".into()));
    }
    if scale.is_zero() {
        return Err(Error::BadParameters("scale must be nonzero".into()));
    }
    let ctx = scale.ctx();
    let m = 2 * k;
    let n = 2 * m;
    let e = |i: usize| i - 1;
    let f = |i: usize| m + i - 1;
    let one = ctx.one();
    let mone = -&one;
    let mut a1 = Matrix::zeros(ctx, n, n);
    let mut a2 = Matrix::zeros(ctx, n, n);
    // column = source vector, row = image coordinate
    for i in 1..=k {
        a1[(e(2 * i - 1), e(2 * i))] = one.clone();
        a1[(f(2 * i), f(2 * i - 1))] = mone.clone();
    }
    for i in 1..k {
        a2[(e(2 * i), e(2 * i + 1))] = one.clone();
        a2[(f(2 * i + 1), f(2 * i))] = mone.clone();
    }
    a2[(e(m), f(1))] = one.clone();
    a2[(e(1), f(m))] = mone;
    let id = Matrix::identity(ctx, n);
    let f1 = &id + &a1;
    let f2 = &id + &a2;
    let u = &f1 * &f2;
    let b = BilForm::hyperbolic(ctx, m).scale(scale);
    let p = Isopair::new(Eps::Plus, b, u)?;
    Ok((
        p,
        U2Factorization {
            factors: vec![f1, f2],
        },
    ))
}

/// A U2 automorphism `u1` with `u1^{-1} v` cyclic of minimal polynomial `p`,
/// from the closed form `C_q C_p^{-1}` in a cyclic basis of `v`.
pub fn u_adapted(v: &Matrix, p: &Poly) -> Result<Matrix> {
    let fr = frobenius(v)?;
    if fr.factors.len() != 1 {
        return Err(Error::NotCyclic);
    }
    let q = &fr.factors[0];
    let p = p.monic();
    if p.deg() != q.deg() {
        return Err(Error::BadParameters(
            "degree of p must equal the dimension".into(),
        ));
    }
    if p.coeff(0) != q.coeff(0) {
        return Err(Error::DeterminantMismatch);
    }
    let cq = companion(q);
    let g = similarity_transform(&cq, v)?;
    let local = &cq * &companion(&p).inverse()?;
    let u1 = &(&g * &local) * &g.inverse()?;
    let n = v.rows();
    let id = Matrix::identity(v.ctx(), n);
    let a = &u1 - &id;
    if !(&a * &a).is_zero() {
        return Err(Error::VerificationFailed(
            "u_adapted factor is not U2".into(),
        ));
    }
    let rest = &u1.inverse()? * v;
    let rf = frobenius(&rest)?;
    if rf.factors != vec![p] {
        return Err(Error::VerificationFailed(
            "u_adapted residual has the wrong minimal polynomial".into(),
        ));
    }
    Ok(u1)
}
