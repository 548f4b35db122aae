//! Concrete models of the indecomposable isopairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{herm_wall, quad_wall, Eps, Isopair};
use crate::error::{Error, Result};
use crate::exactfield::{FieldCtx, FieldElem};
use crate::forms::{represent, BilForm, HermForm};
use crate::linal::{companion, jordan_numbers, Matrix};
use crate::poly::Poly;
use crate::tower::{LElem, Tower};

/// A pair of symmetric forms `(b, c)` with `u0 = 2I + G_b^{-1} G_c` cyclic of
/// minimal polynomial `m^r`, whose quadratic invariant at `(m, r)` represents `alpha`.
#[derive(Clone, Debug)]
pub struct SymPairModel {
    pub b: BilForm,
    pub c: BilForm,
    pub u0: Matrix,
}

/// Hankel model on `F[t]/(m^r)` with basis `t^i`: `b(t^i, t^j) = l(t^{i+j})`, where
/// `l(g) = e_m(alpha * top(g))` and `top(g)` is the leading `m`-adic digit of `g mod m^r`.
/// Then `b(1, q m^{r-1}) = e_m(alpha q)` for every `q`.
pub fn model_sym_pair(m: &Poly, r: usize, alpha: &Poly) -> Result<SymPairModel> {
    let ctx = m.ctx();
    if r == 0 || m.deg() == 0 || !m.is_monic() {
        return Err(Error::BadParameters(
            "m must be monic of positive degree and r >= 1".into(),
        ));
    }
    if ctx.is_finite() && !crate::poly::is_irreducible(m)? {
        return Err(Error::BadParameters("m must be irreducible".into()));
    }
    let alpha = alpha.rem(m);
    if alpha.is_zero() {
        return Err(Error::BadParameters("alpha must be nonzero mod m".into()));
    }
    let mr = m.pow(r);
    let top = m.pow(r - 1);
    let n = mr.deg();
    let ell = |g: &Poly| -> FieldElem {
        let digit = g.rem(&mr).div_rem(&top).0;
        (&alpha * &digit).rem(m).coeff(0)
    };
    let h: Vec<FieldElem> = (0..2 * n)
        .map(|k| ell(&Poly::monomial(ctx.one(), k)))
        .collect();
    let mut g = Matrix::zeros(ctx, n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = h[i + j].clone();
        }
    }
    let u0 = companion(&mr);
    let id = Matrix::identity(ctx, n);
    let cg = &g * &(&u0 - &id.scale(&ctx.from_i64(2)));
    let b = BilForm::symmetric(g)
        .map_err(|_| Error::VerificationFailed("Hankel gram not symmetric".into()))?;
    if !b.is_regular() {
        return Err(Error::VerificationFailed(
            "Hankel gram is degenerate".into(),
        ));
    }
    let c = BilForm::symmetric(cg)
        .map_err(|_| Error::VerificationFailed("u0 is not b-selfadjoint".into()))?;
    let model = SymPairModel { b, c, u0 };
    model.check(m, r, &alpha)?;
    Ok(model)
}

impl SymPairModel {
    fn check(&self, m: &Poly, r: usize, alpha: &Poly) -> Result<()> {
        let ctx = m.ctx();
        let n = self.u0.rows();
        let e0 = crate::linal::unit_vector(ctx, n, 0);
        let top = m.pow(r - 1);
        for j in 0..m.deg() {
            let q = &Poly::monomial(ctx.one(), j) * &top;
            let y = self.u0.eval_poly(&q).apply(&e0);
            let want = (alpha * &Poly::monomial(ctx.one(), j)).rem(m).coeff(0);
            if self.b.eval(&e0, &y) != want {
                return Err(Error::VerificationFailed(
                    "pair invariant does not represent alpha".into(),
                ));
            }
        }
        Ok(())
    }

    /// `G_b^{-1} G_c = u0 - 2I`.
    pub fn pencil(&self) -> Matrix {
        let ctx = self.u0.ctx();
        &self.u0 - &Matrix::identity(ctx, self.u0.rows()).scale(&ctx.from_i64(2))
    }
}

/// The indecomposable shapes: cyclic palindromial `p^r`, twin primaries
/// `p^r, (p#)^r`, cyclic `(t - eta)^r`, and twin `(t - eta)^r` cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockShape {
    PalCyclic { p: Poly, r: usize },
    Paired { p: Poly, r: usize },
    EtaCyclic { eta: i64, r: usize },
    EtaTwin { eta: i64, r: usize },
}

/// Prescribed invariant value: a scalar for quadratic blocks, an element of
/// `L` for hermitian ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockValue {
    Scalar(FieldElem),
    L(LElem),
}

fn eta_elem(ctx: FieldCtx, eta: i64) -> Result<FieldElem> {
    if eta != 1 && eta != -1 {
        return Err(Error::InadmissibleShape("eta must be 1 or -1".into()));
    }
    Ok(ctx.from_i64(eta))
}

/// Cyclic `(t - eta)^r`, `r` odd, for a symmetric form: a Cayley transform of the
/// shift, skew-adjoint for the alternating anti-diagonal Gram, then rescaled so
/// that `quad(eta, r)` takes the value `value` on a generator.
pub fn odd_unipotent_cell(ctx: FieldCtx, r: usize, eta: i64, value: &FieldElem) -> Result<Isopair> {
    if r % 2 == 0 {
        return Err(Error::InadmissibleShape(format!(
            "cyclic cell of even size {r} in an orthogonal pair"
        )));
    }
    if value.is_zero() {
        return Err(Error::BadParameters("value must be nonzero".into()));
    }
    let e = eta_elem(ctx, eta)?;
    let mut g = Matrix::zeros(ctx, r, r);
    let mut nil = Matrix::zeros(ctx, r, r);
    for i in 0..r {
        g[(i, r - 1 - i)] = ctx.from_i64(if i % 2 == 0 { 1 } else { -1 });
        if i + 1 < r {
            nil[(i + 1, i)] = ctx.one();
        }
    }
    let id = Matrix::identity(ctx, r);
    let cay = &(&id + &nil) * &(&id - &nil).inverse()?;
    let p = Isopair::from_gram(Eps::Plus, g, cay.scale(&e))?;
    let w = quad_wall(&p, eta, r)?;
    let scale = value / &w.gram()[(0, 0)];
    p.scale_form(&scale)
}

/// `(value / beta) * H`, where `beta` is the value of the 1-dimensional
/// invariant `quad(eta, r)` of `p` on its first quotient representative.
fn rescale_to(p: &Isopair, eta: i64, r: usize, value: &FieldElem) -> Result<Isopair> {
    let w = quad_wall(p, eta, r)?;
    if w.dim() != 1 {
        return Err(Error::VerificationFailed(
            "expected a 1-dimensional invariant".into(),
        ));
    }
    p.scale_form(&(value / &w.gram()[(0, 0)]))
}

/// `alpha` with `alpha(t + 1/t) = beta (1 + t)(1 - t)^{-1}` as a polynomial mod `m`.
fn alpha_for(tw: &Tower, beta: &LElem) -> Result<Poly> {
    let one = tw.one();
    let t = tw.t();
    let ratio = tw.mul(&tw.add(&one, &t), &tw.inv(&tw.sub(&one, &t))?);
    let k = tw.reduce(&tw.mul(beta, &ratio));
    let coords = tw
        .psi(&k)
        .map_err(|_| Error::BadParameters("value must be skew-hermitian".into()))?;
    Ok(Poly::new(tw.ctx(), coords))
}

/// A nondegenerate symmetric `g` with `u^T g u = g`, chosen from the solution
/// space with a fixed seed.
fn invariant_symmetric_form(u: &Matrix) -> Result<Matrix> {
    let ctx = u.ctx();
    let n = u.rows();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let sym = |coeffs: &[FieldElem]| {
        let mut g = Matrix::zeros(ctx, n, n);
        for ((i, j), c) in pairs.iter().zip(coeffs) {
            g[(*i, *j)] = c.clone();
            g[(*j, *i)] = c.clone();
        }
        g
    };
    // columns: vec(u^T E u - E) for each symmetric unit E
    let mut sys = Matrix::zeros(ctx, n * n, pairs.len());
    for (k, _) in pairs.iter().enumerate() {
        let mut unit = vec![ctx.zero(); pairs.len()];
        unit[k] = ctx.one();
        let e = sym(&unit);
        let d = &(&(&u.transpose() * &e) * u) - &e;
        for (idx, x) in d.entries().iter().enumerate() {
            sys[(idx, k)] = x.clone();
        }
    }
    let kernel = sys.kernel();
    if kernel.is_empty() {
        return Err(Error::VerificationFailed(
            "no invariant symmetric form".into(),
        ));
    }
    let q = ctx.modulus()?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..256 {
        let mut coeffs = vec![ctx.zero(); pairs.len()];
        for v in &kernel {
            let c = ctx.from_u64(rng.gen_range(0..q));
            for (a, b) in coeffs.iter_mut().zip(v) {
                *a += &(&c * b);
            }
        }
        let g = sym(&coeffs);
        if g.rank() == n {
            return Ok(g);
        }
    }
    Err(Error::VerificationFailed(
        "no nondegenerate invariant form found".into(),
    ))
}

/// Some `x` with `H(x, x) = value` on a 1-dimensional hermitian form, by
/// searching the scalars of `L`.
pub fn herm_represents(h: &HermForm, value: &LElem) -> Result<bool> {
    if h.dim() != 1 {
        return Err(Error::BadParameters(
            "only 1-dimensional hermitian forms are searched".into(),
        ));
    }
    let tw = h.tower();
    let q = tw.ctx().modulus()?;
    let n = 2 * tw.d();
    let target = tw.reduce(value);
    let total = q
        .checked_pow(n as u32)
        .ok_or_else(|| Error::BudgetExceeded("L too large".into()))?;
    let ctx = tw.ctx();
    for idx in 0..total {
        let mut k = idx;
        let coords: Vec<FieldElem> = (0..n)
            .map(|_| {
                let c = ctx.from_u64(k % q);
                k /= q;
                c
            })
            .collect();
        let lam = tw.from_coords(&coords);
        if h.value(&[lam.clone()], &[lam]) == target {
            return Ok(true);
        }
    }
    Ok(false)
}

fn expected_jordan(ctx: FieldCtx, shape: &BlockShape) -> Result<Vec<(Poly, usize, usize)>> {
    Ok(match shape {
        BlockShape::PalCyclic { p, r } => vec![(p.monic(), *r, 1)],
        BlockShape::Paired { p, r } => vec![(p.monic(), *r, 1), (p.reciprocal()?, *r, 1)],
        BlockShape::EtaCyclic { eta, r } => vec![(Poly::linear(&eta_elem(ctx, *eta)?), *r, 1)],
        BlockShape::EtaTwin { eta, r } => vec![(Poly::linear(&eta_elem(ctx, *eta)?), *r, 2)],
    })
}

/// A concrete isopair of the given indecomposable shape whose invariant
/// represents `value` (1 by default); jordan numbers and the value are verified.
pub fn model_isopair(
    ctx: FieldCtx,
    eps: Eps,
    shape: &BlockShape,
    value: Option<&BlockValue>,
) -> Result<Isopair> {
    ctx.modulus()?;
    let inadmissible = |why: &str| Err(Error::InadmissibleShape(why.into()));
    let pair = match shape {
        BlockShape::Paired { p, r } => {
            let p = p.monic();
            if *r == 0 || p.coeff(0).is_zero() || !crate::poly::is_irreducible(&p)? {
                return inadmissible(
                    "paired shape needs an irreducible p with p(0) != 0 and r >= 1",
                );
            }
            if p.reciprocal()? == p {
                return inadmissible("paired shape needs p != p#");
            }
            let v = companion(&p.pow(*r));
            crate::factor::hyperbolic_ext(&v, eps)?
        }
        BlockShape::EtaTwin { eta, r } => {
            let ok = match eps {
                Eps::Plus => r % 2 == 0,
                Eps::Minus => r % 2 == 1,
            };
            if !ok || *r == 0 {
                return inadmissible("twin (t-eta)^r cells need r even (eps=1) or odd (eps=-1)");
            }
            let e = eta_elem(ctx, *eta)?;
            crate::factor::hyperbolic_ext(&companion(&Poly::linear(&e).pow(*r)), eps)?
        }
        BlockShape::EtaCyclic { eta, r } => {
            let value = match value {
                None => ctx.one(),
                Some(BlockValue::Scalar(a)) if !a.is_zero() => a.clone(),
                Some(_) => {
                    return Err(Error::BadParameters(
                        "cyclic (t-eta)^r needs a nonzero scalar value".into(),
                    ))
                }
            };
            match eps {
                Eps::Plus => {
                    if r % 2 == 0 {
                        return inadmissible("cyclic (t-eta)^r with r even in an orthogonal pair");
                    }
                    odd_unipotent_cell(ctx, *r, *eta, &value)?
                }
                Eps::Minus => {
                    if r % 2 == 1 {
                        return inadmissible("cyclic (t-eta)^r with r odd in a symplectic pair");
                    }
                    let e = eta_elem(ctx, *eta)?;
                    let m = Poly::linear(&(&e + &e));
                    let sp = model_sym_pair(&m, r / 2, &Poly::one(ctx))?;
                    let (p, _) = crate::factor::boxed_product(&sp.b, &sp.c, Eps::Minus)?;
                    rescale_to(&p, *eta, *r, &value)?
                }
            }
        }
        BlockShape::PalCyclic { p, r } => {
            let p = p.monic();
            let tw = Tower::new(&p).map_err(|e| Error::InadmissibleShape(format!("{p}: {e}")))?;
            if *r == 0 {
                return inadmissible("r must be positive");
            }
            match eps {
                Eps::Minus => {
                    let alpha = match value {
                        None => Poly::one(ctx),
                        Some(BlockValue::L(beta)) => alpha_for(&tw, beta)?,
                        Some(_) => {
                            return Err(Error::BadParameters(
                                "palindromial block needs an L value".into(),
                            ))
                        }
                    };
                    let sp = model_sym_pair(tw.m(), *r, &alpha)?;
                    crate::factor::boxed_product(&sp.b, &sp.c, Eps::Minus)?.0
                }
                Eps::Plus => {
                    let u0 = companion(&p.pow(*r));
                    Isopair::from_gram(Eps::Plus, invariant_symmetric_form(&u0)?, u0)?
                }
            }
        }
    };
    verify_model(ctx, &pair, shape, value)?;
    Ok(pair)
}

fn verify_model(
    ctx: FieldCtx,
    pair: &Isopair,
    shape: &BlockShape,
    value: Option<&BlockValue>,
) -> Result<()> {
    let jd = jordan_numbers(pair.u())?;
    let want = expected_jordan(ctx, shape)?;
    let total: usize = want.iter().map(|(p, r, n)| p.deg() * r * n).sum();
    if total != pair.dim() || want.iter().any(|(p, r, n)| jd.get(p, *r) != *n) {
        return Err(Error::VerificationFailed(format!(
            "model jordan numbers do not match {shape:?}"
        )));
    }
    match (shape, value) {
        (BlockShape::EtaCyclic { eta, r }, Some(BlockValue::Scalar(a))) => {
            let w = quad_wall(pair, *eta, *r)?;
            if represent(&w, a)?.is_none() {
                return Err(Error::VerificationFailed(
                    "model does not represent the prescribed value".into(),
                ));
            }
        }
        (BlockShape::PalCyclic { p, r }, Some(BlockValue::L(beta))) => {
            let h = herm_wall(pair, &p.monic(), *r)?;
            if !herm_represents(&h, beta)? {
                return Err(Error::VerificationFailed(
                    "model does not represent the prescribed value".into(),
                ));
            }
        }
        _ => {}
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isopair::wall_data;

    fn f(p: u64) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    #[test]
    fn sym_pair_examples() {
        let k = f(5);
        let m = Poly::from_i64s(k, &[-2, 1]);
        let sp = model_sym_pair(&m, 1, &Poly::one(k)).unwrap();
        assert_eq!(sp.b.gram(), &Matrix::from_i64(k, &[&[1]]));
        assert_eq!(sp.c.gram(), &Matrix::from_i64(k, &[&[0]]));
        assert_eq!(sp.u0, Matrix::from_i64(k, &[&[2]]));
        let k3 = f(3);
        let sp = model_sym_pair(&Poly::t(k3), 1, &Poly::one(k3)).unwrap();
        assert_eq!(sp.pencil(), Matrix::from_i64(k3, &[&[-2]]));
        let sp2 = model_sym_pair(&m, 2, &Poly::from_i64s(k, &[3])).unwrap();
        assert_eq!(sp2.u0.rows(), 2);
        assert!(sp2.b.is_regular());
    }

    #[test]
    fn sym_pair_rejects_bad_input() {
        let k = f(3);
        let reducible = Poly::from_i64s(k, &[-1, 0, 1]);
        assert!(model_sym_pair(&reducible, 1, &Poly::one(k)).is_err());
        assert!(model_sym_pair(&Poly::t(k), 1, &Poly::t(k)).is_err());
    }

    #[test]
    fn odd_cells_carry_their_value() {
        let k = f(5);
        for r in [1, 3, 5] {
            for eta in [1, -1] {
                let v = k.from_i64(2);
                let p = odd_unipotent_cell(k, r, eta, &v).unwrap();
                assert_eq!(quad_wall(&p, eta, r).unwrap().gram()[(0, 0)], v);
            }
        }
    }

    #[test]
    fn all_shapes() {
        let k = f(3);
        let pal = Poly::from_i64s(k, &[1, 0, 1]);
        let shapes = [
            (Eps::Minus, BlockShape::EtaTwin { eta: 1, r: 3 }),
            (Eps::Minus, BlockShape::EtaCyclic { eta: -1, r: 2 }),
            (Eps::Minus, BlockShape::EtaCyclic { eta: 1, r: 4 }),
            (
                Eps::Minus,
                BlockShape::PalCyclic {
                    p: pal.clone(),
                    r: 1,
                },
            ),
            (
                Eps::Minus,
                BlockShape::PalCyclic {
                    p: pal.clone(),
                    r: 2,
                },
            ),
            (
                Eps::Plus,
                BlockShape::PalCyclic {
                    p: pal.clone(),
                    r: 1,
                },
            ),
            (Eps::Plus, BlockShape::PalCyclic { p: pal, r: 2 }),
            (Eps::Plus, BlockShape::EtaCyclic { eta: 1, r: 3 }),
            (Eps::Plus, BlockShape::EtaTwin { eta: -1, r: 2 }),
            (
                Eps::Plus,
                BlockShape::Paired {
                    p: Poly::from_i64s(k, &[2, 1, 1]),
                    r: 2,
                },
            ),
        ];
        for (eps, s) in shapes {
            let p = model_isopair(k, eps, &s, None).unwrap();
            assert!(wall_data(&p).is_ok(), "{s:?}");
        }
        assert!(matches!(
            model_isopair(
                k,
                Eps::Minus,
                &BlockShape::EtaCyclic { eta: -1, r: 1 },
                None
            ),
            Err(Error::InadmissibleShape(_))
        ));
    }

    #[test]
    fn scalar_values_are_represented() {
        let k = f(5);
        let v = BlockValue::Scalar(k.from_i64(2));
        let p = model_isopair(
            k,
            Eps::Minus,
            &BlockShape::EtaCyclic { eta: 1, r: 2 },
            Some(&v),
        )
        .unwrap();
        assert_eq!(quad_wall(&p, 1, 2).unwrap().gram()[(0, 0)], k.from_i64(2));
    }
}
