//! Seeded random instances over prime fields: forms, U2 elements, products of
//! two U2 elements, regular form pairs and unipotent symmetric pairs.

use rand::Rng;

use crate::error::{Error, Result};
use crate::exactfield::{FieldCtx, FieldElem};
use crate::factor::{hyperbolic_ext, U2Factorization};
use crate::forms::{BilForm, FormKind};
use crate::isopair::{odd_unipotent_cell, Eps, Isopair};
use crate::linal::{companion, Matrix, Subspace, Vector};
use crate::poly::Poly;

pub fn elem<R: Rng>(rng: &mut R, ctx: FieldCtx) -> FieldElem {
    let q = ctx.modulus().expect("sampling needs a prime field");
    ctx.from_u64(rng.gen_range(0..q))
}

pub fn nonzero<R: Rng>(rng: &mut R, ctx: FieldCtx) -> FieldElem {
    let q = ctx.modulus().expect("sampling needs a prime field");
    ctx.from_u64(rng.gen_range(1..q))
}

pub fn vector<R: Rng>(rng: &mut R, ctx: FieldCtx, n: usize) -> Vector {
    (0..n).map(|_| elem(rng, ctx)).collect()
}

pub fn matrix<R: Rng>(rng: &mut R, ctx: FieldCtx, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(ctx, rows, cols, |_, _| elem(rng, ctx))
}

pub fn invertible<R: Rng>(rng: &mut R, ctx: FieldCtx, n: usize) -> Matrix {
    loop {
        let m = matrix(rng, ctx, n, n);
        if m.rank() == n {
            return m;
        }
    }
}

/// Random symmetric (`Plus`) or skewsymmetric (`Minus`) `n x n` matrix.
pub fn form_matrix<R: Rng>(rng: &mut R, ctx: FieldCtx, eps: Eps, n: usize) -> Matrix {
    let mut m = Matrix::zeros(ctx, n, n);
    for i in 0..n {
        for j in i..n {
            let x = elem(rng, ctx);
            match eps {
                Eps::Plus => {
                    m[(j, i)] = x.clone();
                    m[(i, j)] = x;
                }
                Eps::Minus if i != j => {
                    m[(j, i)] = -&x;
                    m[(i, j)] = x;
                }
                Eps::Minus => {}
            }
        }
    }
    m
}

/// A regular form; symmetric ones range over both discriminant classes.
pub fn regular_form<R: Rng>(rng: &mut R, ctx: FieldCtx, eps: Eps, n: usize) -> BilForm {
    let base = match eps {
        Eps::Minus => BilForm::symplectic(ctx, n / 2),
        Eps::Plus => BilForm::diag(ctx, &(0..n).map(|_| nonzero(rng, ctx)).collect::<Vec<_>>()),
    };
    base.pullback(&invertible(rng, ctx, n))
}

/// `k` independent vectors spanning a totally isotropic subspace, if found.
pub fn isotropic_basis<R: Rng>(rng: &mut R, b: &BilForm, k: usize) -> Option<Vec<Vector>> {
    let ctx = b.ctx();
    let n = b.dim();
    let q = ctx.modulus().ok()? as usize;
    let mut basis: Vec<Vector> = Vec::new();
    while basis.len() < k {
        let w = Subspace::span(ctx, n, &basis);
        let perp = w.orthogonal(b.gram());
        let found = (0..64 * q).find_map(|_| {
            let coeffs = vector(rng, ctx, perp.dim());
            let v = perp.basis_matrix().apply(&coeffs);
            (b.eval(&v, &v).is_zero() && !w.contains(&v)).then_some(v)
        });
        basis.push(found?);
    }
    Some(basis)
}

/// A random U2 isometry `I + X M X^T G`, where `X` spans a totally isotropic
/// subspace and `M` is skewsymmetric (`eps = 1`) or symmetric (`eps = -1`).
pub fn u2_isometry<R: Rng>(rng: &mut R, b: &BilForm) -> Matrix {
    let ctx = b.ctx();
    let n = b.dim();
    let eps = Eps::of_kind(b.kind());
    let mut k = rng.gen_range(0..=n / 2);
    loop {
        if let Some(xs) = isotropic_basis(rng, b, k) {
            let x = Matrix::from_cols(ctx, n, &xs);
            let m = form_matrix(rng, ctx, eps.flip(), k);
            let a = &(&(&x * &m) * &x.transpose()) * b.gram();
            return &Matrix::identity(ctx, n) + &a;
        }
        k -= 1;
    }
}

/// A random square-zero perturbation of the identity in `GL_n`: `I + XY` with `YX = 0`.
pub fn u2_gl<R: Rng>(rng: &mut R, ctx: FieldCtx, n: usize) -> Matrix {
    let k = rng.gen_range(0..=n / 2);
    let x = matrix(rng, ctx, n, k);
    let left = Subspace::kernel_of(&x.transpose());
    let rows: Vec<Vector> = (0..k)
        .map(|_| left.basis_matrix().apply(&vector(rng, ctx, left.dim())))
        .collect();
    let y = Matrix::from_cols(ctx, n, &rows).transpose();
    &Matrix::identity(ctx, n) + &(&x * &y)
}

/// A product of two random U2 isometries of `b`, with the factors.
pub fn splittable_pair<R: Rng>(rng: &mut R, b: &BilForm) -> Result<(Isopair, U2Factorization)> {
    let f1 = u2_isometry(rng, b);
    let f2 = u2_isometry(rng, b);
    let pair = Isopair::new(Eps::of_kind(b.kind()), b.clone(), &f1 * &f2)?;
    Ok((
        pair,
        U2Factorization {
            factors: vec![f1, f2],
        },
    ))
}

/// Forms `(B, C)` of the kind required by the boxed product for `eps`, with `B` regular.
pub fn regular_pair<R: Rng>(rng: &mut R, ctx: FieldCtx, eps: Eps, n: usize) -> (BilForm, BilForm) {
    let kind = match eps {
        Eps::Minus => FormKind::Symmetric,
        Eps::Plus => FormKind::Skewsymmetric,
    };
    let inner = Eps::of_kind(kind);
    loop {
        let gb = form_matrix(rng, ctx, inner, n);
        if gb.rank() != n {
            continue;
        }
        let gc = form_matrix(rng, ctx, inner, n);
        let b = BilForm::new(kind, gb).expect("kind by construction");
        let c = BilForm::new(kind, gc).expect("kind by construction");
        return (b, c);
    }
}

/// A unipotent pair with symmetric form: an orthogonal sum of odd cells with
/// random values and twin even cells, in a random basis.
pub fn unipotent_pair<R: Rng>(rng: &mut R, ctx: FieldCtx, max_dim: usize) -> Result<Isopair> {
    if max_dim == 0 {
        return Err(Error::BadParameters("max_dim must be positive".into()));
    }
    let target = rng.gen_range(1..=max_dim);
    let mut parts: Vec<Isopair> = Vec::new();
    let mut dim = 0;
    while dim < target {
        let room = target - dim;
        let even = room >= 4 && rng.gen_bool(0.3);
        let part = if even {
            let r = if room >= 8 && rng.gen_bool(0.5) { 4 } else { 2 };
            let j = companion(&Poly::linear(&ctx.one()).pow(r));
            hyperbolic_ext(&j, Eps::Plus)?
        } else {
            let sizes: Vec<usize> = [1, 3, 5].into_iter().filter(|&r| r <= room).collect();
            let r = sizes[rng.gen_range(0..sizes.len())];
            odd_unipotent_cell(ctx, r, 1, &nonzero(rng, ctx))?
        };
        dim += part.dim();
        parts.push(part);
    }
    let p = Isopair::orth_sum_all(ctx, Eps::Plus, &parts)?;
    p.change_basis(&invertible(rng, ctx, dim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_produce_what_they_claim() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for &q in &[3u64, 5] {
            let k = FieldCtx::prime(q).unwrap();
            for n in 1..=6 {
                for eps in [Eps::Plus, Eps::Minus] {
                    if eps == Eps::Minus && n % 2 == 1 {
                        continue;
                    }
                    let b = regular_form(&mut rng, k, eps, n);
                    let (p, fac) = splittable_pair(&mut rng, &b).unwrap();
                    for f in &fac.factors {
                        let a = f - &Matrix::identity(k, n);
                        assert!((&a * &a).is_zero());
                    }
                    assert_eq!(fac.product(), *p.u());
                }
                let g = u2_gl(&mut rng, k, n);
                let a = &g - &Matrix::identity(k, n);
                assert!((&a * &a).is_zero());
                let u = unipotent_pair(&mut rng, k, n).unwrap();
                assert!(u.is_unipotent() && u.dim() <= n);
            }
        }
    }
}
