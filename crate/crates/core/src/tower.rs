//! The field `L = F[t]/(p)` for an irreducible palindromial `p`, its
//! involution `t -> 1/t`, the fixed subfield `K = F[s]/(m)` with `s = t + 1/t`,
//! and the linear form `f_p`.

use crate::error::{Error, Result};
use crate::exactfield::{FieldCtx, FieldElem};
use crate::linal::{Matrix, Vector};
use crate::poly::{is_irreducible, Poly};

/// Elements of `L` are residues mod `p`, i.e. polynomials of degree `< 2d`.
pub type LElem = Poly;

#[derive(Clone, Debug)]
pub struct Tower {
    p: Poly,
    m: Poly,
    tinv: Poly,
    eta: Poly,
    s: Poly,
    // selected rows and inverse for coordinates in the basis s^j
    sel: Vec<usize>,
    sel_inv: Matrix,
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Tower {
    pub fn new(p: &Poly) -> Result<Self> {
        let ctx = p.ctx();
        let p = p.monic();
        if p.deg() == 1 {
            let c = p.coeff(0);
            if c.is_one() || (-&c).is_one() {
                return Err(Error::DegenerateModulus);
            }
        }
        if !p.is_palindromial()? {
            return Err(Error::NotPalindromial);
        }
        if !is_irreducible(&p)? {
            return Err(Error::NotIrreducible);
        }
        if p.deg() % 2 == 1 {
            return Err(Error::OddDegree);
        }
        let m = p.r_inverse()?;
        let d = m.deg();
        let t = Poly::t(ctx);
        let tinv = t.inv_mod(&p).ok_or(Error::DegenerateModulus)?;
        let s = (&t + &tinv).rem(&p);
        let eta = (&t - &tinv).rem(&p);
        let mut cols: Vec<Vector> = Vec::with_capacity(d);
        let mut pw = Poly::one(ctx);
        for _ in 0..d {
            cols.push(coeff_vec(&pw, 2 * d));
            pw = (&pw * &s).rem(&p);
        }
        let sm = Matrix::from_cols(ctx, 2 * d, &cols);
        let (_, sel) = sm.transpose().rref();
        let all: Vec<usize> = (0..d).collect();
        let sel_inv = sm.submatrix(&sel, &all).inverse()?;
        Ok(Tower {
            p,
            m,
            tinv,
            eta,
            s,
            sel,
            sel_inv,
        })
    }

    pub fn ctx(&self) -> FieldCtx {
        self.p.ctx()
    }

    pub fn p(&self) -> &Poly {
        &self.p
    }

    pub fn m(&self) -> &Poly {
        &self.m
    }

    /// `d = deg m`; `L` has dimension `2d` over `F`.
    pub fn d(&self) -> usize {
        self.m.deg()
    }

    pub fn eta(&self) -> &LElem {
        &self.eta
    }

    /// The class of `t + 1/t`.
    pub fn s(&self) -> &LElem {
        &self.s
    }

    pub fn t(&self) -> LElem {
        Poly::t(self.ctx()).rem(&self.p)
    }

    pub fn t_inv(&self) -> &LElem {
        &self.tinv
    }

    pub fn zero(&self) -> LElem {
        Poly::zero(self.ctx())
    }

    pub fn one(&self) -> LElem {
        Poly::one(self.ctx())
    }

    pub fn reduce(&self, x: &Poly) -> LElem {
        x.rem(&self.p)
    }

    pub fn mul(&self, a: &LElem, b: &LElem) -> LElem {
        (a * b).rem(&self.p)
    }

    pub fn add(&self, a: &LElem, b: &LElem) -> LElem {
        a + b
    }

    pub fn sub(&self, a: &LElem, b: &LElem) -> LElem {
        a - b
    }

    pub fn inv(&self, a: &LElem) -> Result<LElem> {
        a.inv_mod(&self.p).ok_or(Error::DivisionByZero)
    }

    pub fn scalar(&self, a: &FieldElem) -> LElem {
        Poly::constant(a.clone())
    }

    /// The involution `lambda(t) -> lambda(1/t)`.
    pub fn bar(&self, a: &LElem) -> LElem {
        a.compose(&self.tinv).rem(&self.p)
    }

    /// Coordinates of a selfadjoint element in the basis `s^j`; that is `psi`.
    pub fn psi(&self, x: &LElem) -> Result<Vector> {
        if self.bar(x) != *x {
            return Err(Error::BadParameters("element is not selfadjoint".into()));
        }
        let v = coeff_vec(x, 2 * self.d());
        let xr: Vector = self.sel.iter().map(|&i| v[i].clone()).collect();
        Ok(self.sel_inv.apply(&xr))
    }

    /// Image of `k(s)` for a polynomial `k` (an element of `F[s]/(m)`).
    pub fn from_k(&self, k: &Poly) -> LElem {
        k.compose(&self.s).rem(&self.p)
    }

    /// `e_m`: the constant coordinate in the basis `s^j`.
    pub fn e_m(&self, x: &LElem) -> Result<FieldElem> {
        Ok(self.psi(x)?[0].clone())
    }

    /// `f_p(lambda) = e_m(psi(lambda + lambda^bar))`.
    pub fn f_p(&self, a: &LElem) -> FieldElem {
        let x = a + &self.bar(a);
        self.e_m(&x).expect("lambda + bar(lambda) is selfadjoint")
    }

    /// `F`-basis `1, t, ..., t^{2d-1}` of `L`.
    pub fn basis(&self) -> Vec<LElem> {
        let ctx = self.ctx();
        (0..2 * self.d())
            .map(|i| Poly::monomial(ctx.one(), i))
            .collect()
    }

    /// Coordinates in the basis `t^i`.
    pub fn coords(&self, a: &LElem) -> Vector {
        coeff_vec(a, 2 * self.d())
    }

    pub fn from_coords(&self, v: &[FieldElem]) -> LElem {
        Poly::new(self.ctx(), v.to_vec())
    }
}

fn coeff_vec(x: &Poly, n: usize) -> Vector {
    (0..n).map(|i| x.coeff(i)).collect()
}
