//! Univariate polynomials over a [`FieldCtx`], reciprocal polynomials,
//! palindromials and the R-transform `R(m) = t^d m(t + 1/t)`.

mod factor;

pub use factor::{factorize, is_irreducible, DEFAULT_FACTOR_SEED};

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exactfield::{FieldCtx, FieldElem};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    ctx: FieldCtx,
    c: Vec<FieldElem>,
}

impl Poly {
    /// Builds a polynomial from coefficients, lowest degree first.
    pub fn new(ctx: FieldCtx, coeffs: Vec<FieldElem>) -> Self {
        let mut p = Poly { ctx, c: coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(ctx: FieldCtx, coeffs: &[i64]) -> Self {
        Poly::new(ctx, coeffs.iter().map(|&x| ctx.from_i64(x)).collect())
    }

    pub fn zero(ctx: FieldCtx) -> Self {
        Poly { ctx, c: Vec::new() }
    }

    pub fn one(ctx: FieldCtx) -> Self {
        Poly::constant(ctx.one())
    }

    pub fn constant(a: FieldElem) -> Self {
        Poly::new(a.ctx(), vec![a])
    }

    /// The monomial `a t^k`.
    pub fn monomial(a: FieldElem, k: usize) -> Self {
        let ctx = a.ctx();
        let mut c = vec![ctx.zero(); k + 1];
        c[k] = a;
        Poly::new(ctx, c)
    }

    /// The indeterminate `t`.
    pub fn t(ctx: FieldCtx) -> Self {
        Poly::monomial(ctx.one(), 1)
    }

    /// `t - a`
    pub fn linear(a: &FieldElem) -> Self {
        let ctx = a.ctx();
        Poly::new(ctx, vec![-a, ctx.one()])
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.c.get(i).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> FieldElem {
        self.c.last().cloned().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().is_some_and(|x| x.is_one())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inv();
        self.scale(&inv)
    }

    pub fn scale(&self, a: &FieldElem) -> Poly {
        Poly::new(self.ctx, self.c.iter().map(|x| x * a).collect())
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.ctx.zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { ctx: self.ctx, c }
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        self.c
            .iter()
            .rev()
            .fold(self.ctx.zero(), |acc, a| &(&acc * x) + a)
    }

    pub fn derivative(&self) -> Poly {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a * &self.ctx.from_u64(i as u64))
            .collect();
        Poly::new(self.ctx, c)
    }

    /// Quotient and remainder; panics if `d` is zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let Some(n) = self.degree() else {
            return (Poly::zero(self.ctx), Poly::zero(self.ctx));
        };
        if n < dd {
            return (Poly::zero(self.ctx), self.clone());
        }
        let inv = d.lead().inv();
        let mut r = self.c.clone();
        let mut q = vec![self.ctx.zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let coef = &r[k + dd] * &inv;
            if coef.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                r[k + j] -= &(&coef * dj);
            }
            q[k] = coef;
        }
        r.truncate(dd);
        (Poly::new(self.ctx, q), Poly::new(self.ctx, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Exact division; panics if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `g = s*self + t*other`, `g` monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let ctx = self.ctx;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(ctx), Poly::zero(ctx));
        let (mut t0, mut t1) = (Poly::zero(ctx), Poly::one(ctx));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lead().inv();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Inverse modulo `m`, if coprime.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.ext_gcd(m);
        g.is_one().then(|| s.rem(m))
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one(self.ctx);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(self.ctx).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(m);
            }
            base = (&base * &base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// `self(g(t))`
    pub fn compose(&self, g: &Poly) -> Poly {
        self.c.iter().rev().fold(Poly::zero(self.ctx), |acc, a| {
            &(&acc * g) + &Poly::constant(a.clone())
        })
    }

    /// `p^#(t) = p(0)^{-1} t^d p(1/t)`.
    pub fn reciprocal(&self) -> Result<Poly> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let inv = c0.inv();
        Ok(Poly::new(
            self.ctx,
            self.c.iter().rev().map(|x| x * &inv).collect(),
        ))
    }

    pub fn is_palindromial(&self) -> Result<bool> {
        Ok(self.is_monic() && self.reciprocal()? == *self)
    }

    /// `R(m) = t^d m(t + 1/t)`, a palindromial of degree `2d`.
    pub fn r_transform(&self) -> Poly {
        let d = self.deg();
        let t2p1 = Poly::from_i64s(self.ctx, &[1, 0, 1]);
        let mut acc = Poly::zero(self.ctx);
        let mut pw = Poly::one(self.ctx);
        for (j, a) in self.c.iter().enumerate() {
            acc = &acc + &pw.shift(d - j).scale(a);
            pw = &pw * &t2p1;
        }
        acc
    }

    /// The unique monic `m` with `R(m) = self`.
    pub fn r_inverse(&self) -> Result<Poly> {
        let n = self.degree().ok_or(Error::NotPalindromial)?;
        if n % 2 == 1 {
            return Err(Error::OddDegree);
        }
        if !self.is_monic() {
            return Err(Error::NotPalindromial);
        }
        let d = n / 2;
        let t2p1 = Poly::from_i64s(self.ctx, &[1, 0, 1]);
        let mut rest = self.clone();
        let mut m = vec![self.ctx.zero(); d + 1];
        for j in (0..=d).rev() {
            let a = rest.coeff(d + j);
            if !a.is_zero() {
                rest = &rest - &t2p1.pow(j).shift(d - j).scale(&a);
            }
            m[j] = a;
        }
        if !rest.is_zero() {
            return Err(Error::NotPalindromial);
        }
        Ok(Poly::new(self.ctx, m))
    }

    /// Canonical order: by degree, then lexicographic on coefficients from the
    /// constant term up, residues compared in the symmetric range (-p/2, p/2].
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.c.len().cmp(&other.c.len()).then_with(|| {
            self.c
                .iter()
                .zip(&other.c)
                .map(|(a, b)| elem_cmp(a, b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

fn elem_cmp(a: &FieldElem, b: &FieldElem) -> Ordering {
    match (a, b) {
        (FieldElem::Fp { .. }, FieldElem::Fp { .. }) => a.signed_residue().cmp(&b.signed_residue()),
        (FieldElem::Q(x), FieldElem::Q(y)) => x.cmp(y),
        _ => Ordering::Equal,
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_cmp(other)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect();
        Poly::new(self.ctx, c)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect();
        Poly::new(self.ctx, c)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.ctx);
        }
        let mut c = vec![self.ctx.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += &(a * b);
            }
        }
        Poly::new(self.ctx, c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.ctx, self.c.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coef = if a.is_one() && i > 0 {
                String::new()
            } else {
                a.to_string()
            };
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{coef}t")?,
                _ => write!(f, "{coef}t^{i}")?,
            }
        }
        Ok(())
    }
}

/// A Laurent polynomial `sum c_k t^k` for `k` from `low` upward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    pub low: i64,
    pub coeffs: Vec<FieldElem>,
}

impl Laurent {
    pub fn new(low: i64, coeffs: Vec<FieldElem>) -> Self {
        Laurent { low, coeffs }
    }

    fn coeff(&self, k: i64, ctx: FieldCtx) -> FieldElem {
        usize::try_from(k - self.low)
            .ok()
            .and_then(|i| self.coeffs.get(i).cloned())
            .unwrap_or_else(|| ctx.zero())
    }

    fn support(&self) -> Option<(i64, i64)> {
        let nz: Vec<i64> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| self.low + i as i64)
            .collect();
        Some((*nz.first()?, *nz.last()?))
    }
}

/// `q(t) = even(t + 1/t) + t * odd(t + 1/t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSplit {
    pub even_part: Poly,
    pub odd_part: Poly,
}

/// Coefficients of `t^a (t + 1/t)^j` as a Laurent polynomial.
fn shifted_s_power(ctx: FieldCtx, a: i64, j: usize) -> Laurent {
    let binom = Poly::from_i64s(ctx, &[1, 0, 1]).pow(j);
    Laurent::new(a - j as i64, binom.coeffs().to_vec())
}

fn laurent_sub_scaled(q: &mut Laurent, other: &Laurent, c: &FieldElem, ctx: FieldCtx) {
    let lo = q.low.min(other.low);
    let hi = (q.low + q.coeffs.len() as i64).max(other.low + other.coeffs.len() as i64);
    let coeffs = (lo..hi)
        .map(|k| q.coeff(k, ctx) - c * &other.coeff(k, ctx))
        .collect();
    *q = Laurent::new(lo, coeffs);
}

/// Splits a Laurent polynomial by peeling the extreme terms: the term at
/// `t^{-K}` with `s^K`, then the term at `t^K` with `t s^{K-1}`.
pub fn laurent_split(q: &Laurent, ctx: FieldCtx) -> LaurentSplit {
    let mut rest = q.clone();
    let mut even = vec![];
    let mut odd = vec![];
    let set = |v: &mut Vec<FieldElem>, j: usize, c: FieldElem| {
        if v.len() <= j {
            v.resize(j + 1, ctx.zero());
        }
        v[j] = c;
    };
    while let Some((lo, hi)) = rest.support() {
        let k = hi.max(-lo);
        let c = rest.coeff(-k, ctx);
        if !c.is_zero() {
            laurent_sub_scaled(&mut rest, &shifted_s_power(ctx, 0, k as usize), &c, ctx);
            set(&mut even, k as usize, c);
        }
        let c = rest.coeff(k, ctx);
        if k >= 1 && !c.is_zero() {
            laurent_sub_scaled(&mut rest, &shifted_s_power(ctx, 1, k as usize - 1), &c, ctx);
            set(&mut odd, k as usize - 1, c);
        }
    }
    LaurentSplit {
        even_part: Poly::new(ctx, even),
        odd_part: Poly::new(ctx, odd),
    }
}

impl LaurentSplit {
    /// Substitutes back, returning the Laurent polynomial on `[-K, K]`.
    pub fn recombine(&self, ctx: FieldCtx) -> Laurent {
        let mut acc = Laurent::new(0, vec![]);
        let neg_one = -ctx.one();
        for (j, c) in self.even_part.coeffs().iter().enumerate() {
            laurent_sub_scaled(&mut acc, &shifted_s_power(ctx, 0, j), &(&neg_one * c), ctx);
        }
        for (j, c) in self.odd_part.coeffs().iter().enumerate() {
            laurent_sub_scaled(&mut acc, &shifted_s_power(ctx, 1, j), &(&neg_one * c), ctx);
        }
        acc
    }
}

impl Laurent {
    /// Equality as Laurent polynomials, ignoring padding.
    pub fn same_as(&self, other: &Laurent, ctx: FieldCtx) -> bool {
        let lo = self.low.min(other.low);
        let hi = (self.low + self.coeffs.len() as i64).max(other.low + other.coeffs.len() as i64);
        (lo..hi).all(|k| self.coeff(k, ctx) == other.coeff(k, ctx))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(ctx: FieldCtx, c: &[i64]) -> Poly {
        Poly::from_i64s(ctx, c)
    }

    #[test]
    fn reciprocal_examples() {
        let f5 = FieldCtx::prime(5).unwrap();
        let q = FieldCtx::Rational;
        assert_eq!(p(f5, &[1, 1]).reciprocal().unwrap(), p(f5, &[1, 1]));
        let r = p(q, &[-2, 1]).reciprocal().unwrap();
        assert_eq!(r.coeff(0).to_string(), "-1/2");
        assert!(r.is_monic());
        assert_eq!(p(f5, &[1, 0, 1]).reciprocal().unwrap(), p(f5, &[1, 0, 1]));
        assert_eq!(p(f5, &[0, 1]).reciprocal(), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn palindromial_examples() {
        let q = FieldCtx::Rational;
        assert!(p(q, &[-1, 1]).is_palindromial().unwrap());
        assert!(!p(q, &[-2, 1]).is_palindromial().unwrap());
        assert!(p(q, &[1, 1, 0, 1, 1]).is_palindromial().unwrap());
    }

    #[test]
    fn r_transform_examples() {
        let q = FieldCtx::Rational;
        assert_eq!(p(q, &[-2, 1]).r_transform(), p(q, &[1, -2, 1]));
        assert_eq!(p(q, &[2, 1]).r_transform(), p(q, &[1, 2, 1]));
        assert_eq!(p(q, &[0, 1]).r_transform(), p(q, &[1, 0, 1]));
        assert_eq!(p(q, &[1, 2, 1]).r_inverse().unwrap(), p(q, &[2, 1]));
        assert_eq!(p(q, &[1, 0, 1]).r_inverse().unwrap(), p(q, &[0, 1]));
        assert_eq!(p(q, &[1, -2, 1]).r_inverse().unwrap(), p(q, &[-2, 1]));
        assert_eq!(p(q, &[1, 1, 1]).r_transform(), p(q, &[1, 1, 3, 1, 1]));
        assert_eq!(p(q, &[1, 1]).r_inverse(), Err(Error::OddDegree));
        assert_eq!(p(q, &[-1, 0, 1]).r_inverse(), Err(Error::NotPalindromial));
    }

    #[test]
    fn pentagon_palindromial() {
        let f3 = FieldCtx::prime(3).unwrap();
        let m = p(f3, &[-1, 1, 1]);
        assert_eq!(m.r_transform(), p(f3, &[1, 1, 1, 1, 1]));
        assert_eq!(p(f3, &[1, 1, 1, 1, 1]).r_inverse().unwrap(), m);
    }

    #[test]
    fn division_and_gcd() {
        let f7 = FieldCtx::prime(7).unwrap();
        let a = p(f7, &[1, 2, 3, 4]);
        let b = p(f7, &[5, 0, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        let g = (&a * &b).gcd(&(&b * &p(f7, &[1, 1])));
        assert_eq!(g, b.monic());
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    #[test]
    fn laurent_examples() {
        let q = FieldCtx::Rational;
        let one = laurent_split(&Laurent::new(0, vec![q.one()]), q);
        assert_eq!(one.even_part, Poly::one(q));
        assert!(one.odd_part.is_zero());
        let t2 = laurent_split(&Laurent::new(2, vec![q.one()]), q);
        assert_eq!(t2.even_part, p(q, &[-1]));
        assert_eq!(t2.odd_part, p(q, &[0, 1]));
        let tinv = laurent_split(&Laurent::new(-1, vec![q.one()]), q);
        assert_eq!(tinv.even_part, p(q, &[0, 1]));
        assert_eq!(tinv.odd_part, p(q, &[-1]));
    }
}
