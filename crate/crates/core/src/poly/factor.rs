//! Factorization over F_p: squarefree decomposition, distinct-degree
//! factorization, then Cantor-Zassenhaus equal-degree splitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Poly;
use crate::error::{Error, Result};
use crate::exactfield::FieldCtx;

pub const DEFAULT_FACTOR_SEED: u64 = 0x7532_7370;

/// Monic irreducible factors with multiplicities, in canonical order.
pub fn factorize(f: &Poly, seed: u64) -> Result<Vec<(Poly, usize)>> {
    let p = f.ctx().modulus()?;
    if f.is_zero() {
        return Err(Error::BadParameters(
            "cannot factor the zero polynomial".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (g, mult) in squarefree(&f.monic(), p) {
        for (h, d) in distinct_degree(&g, p) {
            for irr in equal_degree(&h, d, p, &mut rng) {
                out.push((irr, mult));
            }
        }
    }
    out.sort();
    Ok(out)
}

pub fn is_irreducible(f: &Poly) -> Result<bool> {
    if f.deg() == 0 {
        return Ok(false);
    }
    let fac = factorize(f, DEFAULT_FACTOR_SEED)?;
    Ok(fac.len() == 1 && fac[0].1 == 1)
}

/// Squarefree parts with multiplicities, handling p-th powers.
fn squarefree(f: &Poly, p: u64) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.exact_div(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.exact_div(&y);
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w);
    }
    if !c.is_one() {
        let root = pth_root(&c, p);
        for (g, j) in squarefree(&root, p) {
            out.push((g, j * p as usize));
        }
    }
    out
}

/// For `c(t) = g(t^p)` over F_p, returns `g`.
fn pth_root(c: &Poly, p: u64) -> Poly {
    let coeffs = c.coeffs().iter().step_by(p as usize).cloned().collect();
    Poly::new(c.ctx(), coeffs)
}

/// Splits a squarefree monic polynomial into products of irreducibles of equal degree.
fn distinct_degree(f: &Poly, p: u64) -> Vec<(Poly, usize)> {
    let ctx = f.ctx();
    let t = Poly::t(ctx);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = t.rem(&rest);
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(p, &rest);
        let g = (&h - &t).gcd(&rest);
        if !g.is_one() {
            rest = rest.exact_div(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    if rest.deg() > 0 {
        let d = rest.deg();
        out.push((rest, d));
    }
    out
}

fn random_poly(ctx: FieldCtx, n: usize, p: u64, rng: &mut ChaCha8Rng) -> Poly {
    Poly::new(
        ctx,
        (0..n).map(|_| ctx.from_u64(rng.gen_range(0..p))).collect(),
    )
}

/// Cantor-Zassenhaus for odd p. The exponent `(p^d - 1)/2` is applied as
/// the norm `a * a^p * ... * a^(p^(d-1))` raised to `(p-1)/2`.
fn equal_degree(f: &Poly, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.deg();
    if n == d {
        return vec![f.clone()];
    }
    let ctx = f.ctx();
    loop {
        let a = random_poly(ctx, n, p, rng);
        if a.deg() == 0 {
            continue;
        }
        let g = a.gcd(f);
        let split = if !g.is_one() {
            g
        } else {
            let mut norm = a.clone();
            let mut frob = a.clone();
            for _ in 1..d {
                frob = frob.pow_mod(p, f);
                norm = (&norm * &frob).rem(f);
            }
            let b = &norm.pow_mod((p - 1) / 2, f) - &Poly::one(ctx);
            b.gcd(f)
        };
        if split.deg() > 0 && split.deg() < n {
            let other = f.exact_div(&split);
            let mut out = equal_degree(&split, d, p, rng);
            out.extend(equal_degree(&other, d, p, rng));
            return out;
        }
    }
}
