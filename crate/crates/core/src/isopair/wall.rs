use std::collections::BTreeMap;

use super::{Eps, Isopair};
use crate::error::{Error, Result};
use crate::exactfield::FieldCtx;
use crate::forms::{form_equivalent, BilForm, Flavor, FormKind, HermForm};
use crate::linal::{jordan_numbers, JordanData, Matrix, QuotientCtx, Subspace, Vector};
use crate::poly::Poly;
use crate::tower::{LElem, Tower};

fn check_parity(eps: Eps, r: usize) -> Result<()> {
    let ok = match eps {
        Eps::Plus => r % 2 == 1,
        Eps::Minus => r >= 2 && r % 2 == 0,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::ParityMismatch)
    }
}

/// `Ker f^r / (Ker f^{r-1} + (Im f ∩ Ker f^r))` for `f = a`.
fn wall_quotient(a: &Matrix, r: usize) -> Result<QuotientCtx> {
    let kr = Subspace::kernel_of(&a.pow(r));
    let kr1 = Subspace::kernel_of(&a.pow(r - 1));
    let im = Subspace::image_of(a);
    let den = kr1.sum(&im.intersection(&kr));
    QuotientCtx::of(&den, &kr)
}

/// The quadratic Wall invariant `(b,u)_{t-eta, r}`.
pub fn quad_wall(p: &Isopair, eta: i64, r: usize) -> Result<BilForm> {
    check_parity(p.eps(), r)?;
    if eta != 1 && eta != -1 {
        return Err(Error::BadParameters("eta must be 1 or -1".into()));
    }
    let ctx = p.ctx();
    let n = p.dim();
    let id = Matrix::identity(ctx, n);
    let eta_e = ctx.from_i64(eta);
    let a = p.u() - &id.scale(&eta_e);
    let q = wall_quotient(&a, r)?;
    let uinv = p.u().inverse()?;
    let v = p.u() + &uinv;
    let w = &v - &id.scale(&ctx.from_i64(2 * eta));
    let k = (r - 1) / 2;
    let op = match p.eps() {
        Eps::Plus => w.pow(k),
        Eps::Minus => &(p.u() - &uinv) * &w.pow((r - 2) / 2),
    };
    let gram = q
        .induced_form(&(p.gram() * &op))
        .map_err(|_| Error::VerificationFailed("quadratic Wall form not well defined".into()))?;
    BilForm::new(FormKind::Symmetric, gram)
        .map_err(|_| Error::VerificationFailed("quadratic Wall form not symmetric".into()))
}

/// Data needed to evaluate the hermitian Wall form `(b,u)_{p,r}` on vectors.
#[derive(Clone, Debug)]
pub struct HermWall {
    tower: Tower,
    form_op: Matrix,
    u: Matrix,
    t_inv: Matrix,
    basis: Vec<Vector>,
    flavor: Flavor,
}

impl HermWall {
    pub fn new(p: &Isopair, pal: &Poly, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::BadParameters("r must be positive".into()));
        }
        let tower = Tower::new(pal).map_err(|_| Error::BadModulus)?;
        let ctx = p.ctx();
        let n = p.dim();
        let uinv = p.u().inverse()?;
        let v = p.u() + &uinv;
        let mv = v.eval_poly(tower.m());
        let q = wall_quotient(&mv, r)?;
        let form_op = p.gram() * &mv.pow(r - 1);
        let d2 = 2 * tower.d();
        let mut t = Matrix::zeros(ctx, d2, d2);
        let tpow: Vec<LElem> = (0..2 * d2)
            .map(|k| tower.reduce(&Poly::monomial(ctx.one(), k)))
            .collect();
        for k in 0..d2 {
            for l in 0..d2 {
                t[(k, l)] = tower.f_p(&tpow[k + l]);
            }
        }
        let t_inv = t.inverse()?;
        // greedy L-basis of the quotient, t acting as u
        let mut span = q.sub().clone();
        let mut basis = Vec::new();
        for x in q.reps() {
            if span.contains(x) {
                continue;
            }
            let mut orbit = Vec::with_capacity(d2);
            let mut y = x.clone();
            for _ in 0..d2 {
                let next = p.u().apply(&y);
                orbit.push(std::mem::replace(&mut y, next));
            }
            let before = span.dim();
            span = span.sum(&Subspace::span(ctx, n, &orbit));
            if span.dim() != before + d2 {
                return Err(Error::VerificationFailed(
                    "quotient is not an L-vector space".into(),
                ));
            }
            basis.push(x.clone());
        }
        let flavor = match p.eps() {
            Eps::Plus => Flavor::Hermitian,
            Eps::Minus => Flavor::SkewHermitian,
        };
        Ok(HermWall {
            tower,
            form_op,
            u: p.u().clone(),
            t_inv,
            basis,
            flavor,
        })
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    /// Representatives of an L-basis of the quotient.
    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// `H(x, y)` for ambient vectors `x, y` in `Ker m(v)^r`.
    pub fn value(&self, x: &[crate::FieldElem], y: &[crate::FieldElem]) -> LElem {
        let d2 = 2 * self.tower.d();
        let mut c = Vec::with_capacity(d2);
        let mut uy = y.to_vec();
        for _ in 0..d2 {
            c.push(self.form_op.bilinear(x, &uy));
            uy = self.u.apply(&uy);
        }
        self.tower.from_coords(&self.t_inv.apply(&c))
    }

    pub fn form(&self) -> Result<HermForm> {
        let gram: Vec<Vec<LElem>> = self
            .basis
            .iter()
            .map(|x| self.basis.iter().map(|y| self.value(x, y)).collect())
            .collect();
        HermForm::new(self.tower.clone(), gram, self.flavor).map_err(|_| {
            Error::VerificationFailed("hermitian Wall form has the wrong symmetry".into())
        })
    }
}

/// The hermitian (eps = 1) or skew-hermitian (eps = -1) Wall invariant `(b,u)_{p,r}`.
pub fn herm_wall(p: &Isopair, pal: &Poly, r: usize) -> Result<HermForm> {
    HermWall::new(p, pal, r)?.form()
}

/// `(b,u)_{p,r}(x, y)` evaluated on representatives.
pub fn herm_value(
    p: &Isopair,
    pal: &Poly,
    r: usize,
    x: &[crate::FieldElem],
    y: &[crate::FieldElem],
) -> Result<LElem> {
    Ok(HermWall::new(p, pal, r)?.value(x, y))
}

#[derive(Clone, Debug)]
pub struct HermEntry {
    pub p: Poly,
    pub r: usize,
    pub form: HermForm,
}

/// Jordan numbers together with all nonzero Wall invariants.
#[derive(Clone, Debug)]
pub struct WallData {
    pub ctx: FieldCtx,
    pub eps: Eps,
    pub jordan: JordanData,
    /// Keyed by `(eta, r)`.
    pub quad: BTreeMap<(i64, usize), BilForm>,
    pub herm: Vec<HermEntry>,
}

impl WallData {
    /// The quadratic invariant at `(eta, r)`; zero-dimensional when absent,
    /// including at parities where it is not defined.
    pub fn quad(&self, eta: i64, r: usize) -> BilForm {
        self.quad
            .get(&(eta, r))
            .cloned()
            .unwrap_or_else(|| BilForm::zero(self.ctx, FormKind::Symmetric))
    }

    /// `B_k = (b,u)_{t-1, 2k+1}`.
    pub fn b_k(&self, k: usize) -> BilForm {
        self.quad(1, 2 * k + 1)
    }

    pub fn herm(&self, p: &Poly, r: usize) -> Option<&HermForm> {
        self.herm
            .iter()
            .find(|e| &e.p == p && e.r == r)
            .map(|e| &e.form)
    }
}

pub(crate) fn is_special_palindromial(p: &Poly) -> bool {
    p.deg() % 2 == 0 && p.reciprocal().map(|q| &q == p).unwrap_or(false)
}

pub fn wall_data(p: &Isopair) -> Result<WallData> {
    let ctx = p.ctx();
    ctx.modulus()?;
    let jordan = jordan_numbers(p.u())?;
    let mut quad = BTreeMap::new();
    let mut herm = Vec::new();
    for (prime, r, n) in jordan.iter() {
        if n == 0 {
            continue;
        }
        if prime.deg() == 1 {
            let root = -&prime.coeff(0);
            let eta = if root.is_one() {
                1
            } else if (-&root).is_one() {
                -1
            } else {
                continue;
            };
            if check_parity(p.eps(), r).is_err() {
                continue;
            }
            let f = quad_wall(p, eta, r)?;
            if f.dim() != n {
                return Err(Error::VerificationFailed(format!(
                    "rank of quad({eta},{r}) is {} not {n}",
                    f.dim()
                )));
            }
            quad.insert((eta, r), f);
        } else if is_special_palindromial(prime) {
            let h = herm_wall(p, prime, r)?;
            if h.dim() != n {
                return Err(Error::VerificationFailed(format!(
                    "rank of herm({prime},{r}) is {} not {n}",
                    h.dim()
                )));
            }
            herm.push(HermEntry {
                p: prime.clone(),
                r,
                form: h,
            });
        }
    }
    Ok(WallData {
        ctx,
        eps: p.eps(),
        jordan,
        quad,
        herm,
    })
}

/// Wall's classification over a finite field: equal Jordan numbers and
/// equivalent quadratic invariants (hermitian ones are classified by rank).
pub fn isometric(p: &Isopair, q: &Isopair) -> Result<bool> {
    p.ctx().modulus()?;
    if p.eps() != q.eps() || p.ctx() != q.ctx() || p.dim() != q.dim() {
        return Ok(false);
    }
    let a = wall_data(p)?;
    let b = wall_data(q)?;
    if a.jordan != b.jordan {
        return Ok(false);
    }
    for key in a.quad.keys().chain(b.quad.keys()) {
        let (fa, fb) = (a.quad(key.0, key.1), b.quad(key.0, key.1));
        if fa.dim() != fb.dim() {
            return Ok(false);
        }
        if fa.dim() > 0 && !form_equivalent(&fa, &fb)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    #[test]
    fn identity_pair() {
        let k = f(5);
        let b = BilForm::diag_i64(k, &[1, 2, 3]);
        let p = Isopair::new(Eps::Plus, b.clone(), Matrix::identity(k, 3)).unwrap();
        assert_eq!(quad_wall(&p, 1, 1).unwrap(), b);
        let s = Isopair::new(
            Eps::Minus,
            BilForm::symplectic(k, 1),
            Matrix::identity(k, 2),
        )
        .unwrap();
        let w = wall_data(&s).unwrap();
        assert_eq!(w.jordan.get(&Poly::from_i64s(k, &[-1, 1]), 1), 2);
        assert!(w.quad.is_empty() && w.herm.is_empty());
        assert_eq!(quad_wall(&s, 1, 1).err(), Some(Error::ParityMismatch));
    }

    #[test]
    fn minus_identity_symplectic_has_no_quad() {
        let k = f(3);
        let s = Isopair::new(
            Eps::Minus,
            BilForm::symplectic(k, 1),
            Matrix::scalar(k, 2, &k.from_i64(-1)),
        )
        .unwrap();
        assert!(wall_data(&s).unwrap().quad.is_empty());
        assert_eq!(quad_wall(&s, -1, 2).unwrap().dim(), 0);
    }

    #[test]
    fn minus_identity_discriminants() {
        let k = f(5);
        let m = Matrix::scalar(k, 2, &k.from_i64(-1));
        let a = Isopair::new(Eps::Plus, BilForm::diag_i64(k, &[1, 1]), m.clone()).unwrap();
        let b = Isopair::new(Eps::Plus, BilForm::diag_i64(k, &[1, 2]), m).unwrap();
        assert!(isometric(&a, &a).unwrap());
        assert!(!isometric(&a, &b).unwrap());
    }

    #[test]
    fn rotation_herm_invariant() {
        // rotation by 90 degrees over F_3 has char poly t^2 + 1, a palindromial
        let k = f(3);
        let p = Isopair::new(
            Eps::Plus,
            BilForm::diag_i64(k, &[1, 1]),
            Matrix::from_i64(k, &[&[0, -1], &[1, 0]]),
        )
        .unwrap();
        let w = wall_data(&p).unwrap();
        assert_eq!(w.herm.len(), 1);
        assert_eq!(w.herm[0].form.dim(), 1);
    }
}
