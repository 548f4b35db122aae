use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfield::{FieldCtx, FieldElem};
use crate::linal::{unit_vector, vec_add, vec_scale, vec_sub, Matrix, Subspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    Symmetric,
    Skewsymmetric,
}

/// A bilinear form `(x, y) -> x^T G y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilForm {
    kind: FormKind,
    gram: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    Regular,
    Degenerate(Subspace),
}

impl BilForm {
    pub fn new(kind: FormKind, gram: Matrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NonSquare);
        }
        let ok = match kind {
            FormKind::Symmetric => gram.is_symmetric(),
            FormKind::Skewsymmetric => gram.is_skew(),
        };
        if !ok {
            return Err(Error::KindMismatch(
                format!("gram is not {:?}", kind).to_lowercase(),
            ));
        }
        Ok(BilForm { kind, gram })
    }

    pub fn symmetric(gram: Matrix) -> Result<Self> {
        BilForm::new(FormKind::Symmetric, gram)
    }

    pub fn skew(gram: Matrix) -> Result<Self> {
        BilForm::new(FormKind::Skewsymmetric, gram)
    }

    pub fn zero(ctx: FieldCtx, kind: FormKind) -> Self {
        BilForm {
            kind,
            gram: Matrix::zeros(ctx, 0, 0),
        }
    }

    pub fn diag(ctx: FieldCtx, entries: &[FieldElem]) -> Self {
        BilForm {
            kind: FormKind::Symmetric,
            gram: Matrix::diag(ctx, entries),
        }
    }

    pub fn diag_i64(ctx: FieldCtx, entries: &[i64]) -> Self {
        let e: Vec<FieldElem> = entries.iter().map(|&a| ctx.from_i64(a)).collect();
        BilForm::diag(ctx, &e)
    }

    /// The standard symplectic Gram `[[0, I], [-I, 0]]` of dimension `2n`.
    pub fn symplectic(ctx: FieldCtx, n: usize) -> Self {
        let i = Matrix::identity(ctx, n);
        let z = Matrix::zeros(ctx, n, n);
        BilForm {
            kind: FormKind::Skewsymmetric,
            gram: Matrix::blocks2(&z, &i, &-&i, &z),
        }
    }

    /// The hyperbolic Gram `[[0, I], [I, 0]]` of dimension `2n`.
    pub fn hyperbolic(ctx: FieldCtx, n: usize) -> Self {
        let i = Matrix::identity(ctx, n);
        let z = Matrix::zeros(ctx, n, n);
        BilForm {
            kind: FormKind::Symmetric,
            gram: Matrix::blocks2(&z, &i, &i, &z),
        }
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn ctx(&self) -> FieldCtx {
        self.gram.ctx()
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn eval(&self, x: &[FieldElem], y: &[FieldElem]) -> FieldElem {
        self.gram.bilinear(x, y)
    }

    pub fn radical(&self) -> Subspace {
        Subspace::kernel_of(&self.gram)
    }

    pub fn validate(&self) -> Validity {
        let rad = self.radical();
        if rad.dim() == 0 {
            Validity::Regular
        } else {
            Validity::Degenerate(rad)
        }
    }

    pub fn is_regular(&self) -> bool {
        self.gram.rank() == self.dim()
    }

    pub fn rank(&self) -> usize {
        self.gram.rank()
    }

    pub fn scale(&self, a: &FieldElem) -> BilForm {
        BilForm {
            kind: self.kind,
            gram: self.gram.scale(a),
        }
    }

    pub fn neg(&self) -> BilForm {
        BilForm {
            kind: self.kind,
            gram: -&self.gram,
        }
    }

    /// Gram matrix `P^T G P` of the form pulled back along `P`.
    pub fn pullback(&self, p: &Matrix) -> BilForm {
        BilForm {
            kind: self.kind,
            gram: &(&p.transpose() * &self.gram) * p,
        }
    }

    pub fn orth_sum(&self, other: &BilForm) -> Result<BilForm> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch(
                "orthogonal sum of different kinds".into(),
            ));
        }
        Ok(BilForm {
            kind: self.kind,
            gram: Matrix::block_diag(self.ctx(), &[self.gram.clone(), other.gram.clone()]),
        })
    }

    pub fn orth_sum_all(ctx: FieldCtx, kind: FormKind, forms: &[BilForm]) -> Result<BilForm> {
        forms
            .iter()
            .try_fold(BilForm::zero(ctx, kind), |acc, f| acc.orth_sum(f))
    }

    pub fn determinant(&self) -> FieldElem {
        self.gram.det().expect("square gram")
    }

    fn require_symmetric_regular_fp(&self) -> Result<()> {
        if self.kind != FormKind::Symmetric {
            return Err(Error::WrongKind);
        }
        self.ctx().modulus()?;
        if !self.is_regular() {
            return Err(Error::DegenerateForm);
        }
        Ok(())
    }
}

/// The `b`-adjoint `G^{-1} u^T G`.
pub fn adjoint(u: &Matrix, f: &BilForm) -> Result<Matrix> {
    if u.rows() != f.dim() || u.cols() != f.dim() {
        return Err(Error::DimensionMismatch("adjoint".into()));
    }
    let gi = f.gram.inverse().map_err(|_| Error::DegenerateForm)?;
    Ok(&(&gi * &u.transpose()) * &f.gram)
}

/// Congruence diagonalization of a symmetric Gram: returns `(P, d)` with
/// `P^T G P = diag(d)`. Zero entries of `d` come last.
pub fn diagonalize(g: &Matrix) -> (Matrix, Vec<FieldElem>) {
    let ctx = g.ctx();
    let n = g.rows();
    let mut m = g.clone();
    let mut p = Matrix::identity(ctx, n);
    let col_add = |m: &mut Matrix, p: &mut Matrix, dst: usize, src: usize, c: &FieldElem| {
        // column then row operation: dst += c * src
        for r in 0..n {
            let v = &m[(r, src)] * c;
            m[(r, dst)] += &v;
            let w = &p[(r, src)] * c;
            p[(r, dst)] += &w;
        }
        for col in 0..n {
            let v = &m[(src, col)] * c;
            m[(dst, col)] += &v;
        }
    };
    let swap = |m: &mut Matrix, p: &mut Matrix, a: usize, b: usize| {
        if a == b {
            return;
        }
        m.swap_rows(a, b);
        for r in 0..n {
            let t = m[(r, a)].clone();
            m[(r, a)] = m[(r, b)].clone();
            m[(r, b)] = t;
            let t = p[(r, a)].clone();
            p[(r, a)] = p[(r, b)].clone();
            p[(r, b)] = t;
        }
    };
    for k in 0..n {
        let piv = (k..n).find(|&i| !m[(i, i)].is_zero());
        let piv = match piv {
            Some(i) => i,
            None => {
                let off = (k..n)
                    .flat_map(|i| (k..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !m[(i, j)].is_zero());
                match off {
                    None => break,
                    Some((i, j)) => {
                        col_add(&mut m, &mut p, i, j, &ctx.one());
                        i
                    }
                }
            }
        };
        swap(&mut m, &mut p, k, piv);
        let inv = m[(k, k)].inv();
        for j in k + 1..n {
            if m[(j, k)].is_zero() {
                continue;
            }
            let c = -&(&m[(j, k)] * &inv);
            col_add(&mut m, &mut p, j, k, &c);
        }
    }
    let d = (0..n).map(|i| m[(i, i)].clone()).collect();
    (p, d)
}

/// Output of [`witt_decompose`].
#[derive(Clone, Debug)]
pub struct WittDecomposition {
    pub witt_index: usize,
    /// Pairs `(v, w)` with `b(v,v) = b(w,w) = 0`, `b(v,w) = 1`, mutually orthogonal.
    pub hyperbolic_basis: Vec<(Vector, Vector)>,
    pub anisotropic_basis: Vec<Vector>,
    pub anisotropic: BilForm,
}

impl WittDecomposition {
    /// Change of basis `[v_1, w_1, ..., aniso...]` as columns.
    pub fn basis_matrix(&self, ctx: FieldCtx, n: usize) -> Matrix {
        let mut cols = Vec::new();
        for (v, w) in &self.hyperbolic_basis {
            cols.push(v.clone());
            cols.push(w.clone());
        }
        cols.extend(self.anisotropic_basis.iter().cloned());
        Matrix::from_cols(ctx, n, &cols)
    }
}

/// Solves `a x^2 + b y^2 = c` over F_p with `a, b` nonzero by scanning `x`.
fn solve_binary(
    a: &FieldElem,
    b: &FieldElem,
    c: &FieldElem,
) -> Result<Option<(FieldElem, FieldElem)>> {
    let ctx = a.ctx();
    let binv = b.inv();
    for x in ctx.elements()? {
        let rest = &(c - &(a * &(&x * &x))) * &binv;
        if let Some(y) = rest.sqrt()? {
            return Ok(Some((x, y)));
        }
    }
    Ok(None)
}

/// A nonzero isotropic vector in diagonal coordinates, if one exists.
fn isotropic_in_diag(d: &[FieldElem]) -> Result<Option<Vector>> {
    let ctx = match d.first() {
        Some(a) => a.ctx(),
        None => return Ok(None),
    };
    let n = d.len();
    if n >= 3 {
        // z = 1 on the third coordinate, solve the binary remainder
        let rhs = -&d[2];
        if let Some((x, y)) = solve_binary(&d[0], &d[1], &rhs)? {
            let mut v = vec![ctx.zero(); n];
            v[0] = x;
            v[1] = y;
            v[2] = ctx.one();
            return Ok(Some(v));
        }
        return Err(Error::VerificationFailed(
            "ternary form without isotropic vector".into(),
        ));
    }
    if n == 2 {
        let r = -&(&d[1] * &d[0].inv());
        if let Some(x) = r.sqrt()? {
            return Ok(Some(vec![x, ctx.one()]));
        }
    }
    Ok(None)
}

/// Witt index from rank and discriminant.
pub fn witt_index_closed_form(f: &BilForm) -> Result<usize> {
    f.require_symmetric_regular_fp()?;
    let r = f.dim();
    if r % 2 == 1 {
        return Ok((r - 1) / 2);
    }
    let sign = if (r / 2) % 2 == 0 {
        f.ctx().one()
    } else {
        -&f.ctx().one()
    };
    let x = &sign * &f.determinant();
    Ok(if x.is_square()? {
        r / 2
    } else {
        (r / 2).saturating_sub(1)
    })
}

/// Splits off hyperbolic planes around isotropic vectors until the rest is
/// anisotropic; the index is cross-checked against the closed form.
pub fn witt_decompose(f: &BilForm) -> Result<WittDecomposition> {
    f.require_symmetric_regular_fp()?;
    let ctx = f.ctx();
    let n = f.dim();
    let g = f.gram();
    let mut cur: Vec<Vector> = (0..n).map(|i| unit_vector(ctx, n, i)).collect();
    let mut pairs = Vec::new();
    let two_inv = ctx.from_i64(2).inv();
    loop {
        let b = Matrix::from_cols(ctx, n, &cur);
        let local = &(&b.transpose() * g) * &b;
        let (p, d) = diagonalize(&local);
        let diag_basis: Vec<Vector> = (0..cur.len()).map(|j| b.apply(&p.col(j))).collect();
        let Some(c) = isotropic_in_diag(&d)? else {
            let aniso = BilForm::symmetric(Matrix::diag(ctx, &d))?;
            let out = WittDecomposition {
                witt_index: pairs.len(),
                hyperbolic_basis: pairs,
                anisotropic_basis: diag_basis,
                anisotropic: aniso,
            };
            if out.witt_index != witt_index_closed_form(f)? {
                return Err(Error::VerificationFailed(
                    "Witt index disagrees with closed form".into(),
                ));
            }
            return Ok(out);
        };
        let v = combine(ctx, n, &diag_basis, &c);
        let j = (0..d.len())
            .find(|&j| !(&c[j] * &d[j]).is_zero())
            .expect("regular restriction");
        // b(v, e_j) = c_j d_j
        let w = vec_scale(&diag_basis[j], &(&c[j] * &d[j]).inv());
        let w = vec_sub(&w, &vec_scale(&v, &(&g.bilinear(&w, &w) * &two_inv)));
        let rest: Vec<Vector> = diag_basis
            .iter()
            .map(|x| {
                let x1 = vec_sub(x, &vec_scale(&v, &g.bilinear(x, &w)));
                vec_sub(&x1, &vec_scale(&w, &g.bilinear(x, &v)))
            })
            .collect();
        cur = Subspace::span(ctx, n, &rest).basis().to_vec();
        pairs.push((v, w));
    }
}

fn combine(ctx: FieldCtx, n: usize, basis: &[Vector], c: &[FieldElem]) -> Vector {
    let mut v = vec![ctx.zero(); n];
    for (ci, b) in c.iter().zip(basis) {
        if ci.is_zero() {
            continue;
        }
        for (x, y) in v.iter_mut().zip(b) {
            *x += &(ci * y);
        }
    }
    v
}

pub fn witt_index(f: &BilForm) -> Result<usize> {
    Ok(witt_decompose(f)?.witt_index)
}

/// `T` with `T^T G T = diag(1, ..., 1, d)` where `d` is 1 or the smallest non-square.
pub fn canonical_transform(f: &BilForm) -> Result<(Matrix, Vec<FieldElem>)> {
    f.require_symmetric_regular_fp()?;
    let ctx = f.ctx();
    let n = f.dim();
    let (p, d) = diagonalize(f.gram());
    let mut cols: Vec<Vector> = p.columns();
    let mut vals = d;
    let mut pending: Option<usize> = None;
    for i in 0..n {
        if let Some(s) = vals[i].sqrt()? {
            cols[i] = vec_scale(&cols[i], &s.inv());
            vals[i] = ctx.one();
            continue;
        }
        match pending.take() {
            None => pending = Some(i),
            Some(j) => {
                let (a, b) = (vals[j].clone(), vals[i].clone());
                let (x, y) =
                    solve_binary(&a, &b, &ctx.one())?.expect("binary forms are universal over F_p");
                let v1 = vec_add(&vec_scale(&cols[j], &x), &vec_scale(&cols[i], &y));
                let v2 = vec_sub(
                    &vec_scale(&cols[j], &(&b * &y)),
                    &vec_scale(&cols[i], &(&a * &x)),
                );
                let s = (&a * &b)
                    .sqrt()?
                    .expect("product of non-squares is a square");
                cols[j] = v1;
                cols[i] = vec_scale(&v2, &s.inv());
                vals[j] = ctx.one();
                vals[i] = ctx.one();
            }
        }
    }
    if let Some(j) = pending {
        let delta = ctx.nonsquare()?;
        let s = (&delta * &vals[j].inv())
            .sqrt()?
            .expect("ratio of non-squares is a square");
        let last = n - 1;
        cols.swap(j, last);
        vals.swap(j, last);
        cols[last] = vec_scale(&cols[last], &s);
        vals[last] = delta;
    }
    let t = Matrix::from_cols(ctx, n, &cols);
    let check = &(&t.transpose() * f.gram()) * &t;
    if check != Matrix::diag(ctx, &vals) {
        return Err(Error::VerificationFailed("canonical transform".into()));
    }
    Ok((t, vals))
}

/// `P` with `P^T G_g P = G_f` when `f` and `g` are equivalent.
pub fn equivalence_witness(f: &BilForm, g: &BilForm) -> Result<Option<Matrix>> {
    f.require_symmetric_regular_fp()?;
    g.require_symmetric_regular_fp()?;
    if f.dim() != g.dim() {
        return Ok(None);
    }
    let (tf, cf) = canonical_transform(f)?;
    let (tg, cg) = canonical_transform(g)?;
    if cf != cg {
        return Ok(None);
    }
    let p = &tg * &tf.inverse()?;
    if g.pullback(&p).gram() != f.gram() {
        return Err(Error::VerificationFailed("equivalence witness".into()));
    }
    Ok(Some(p))
}

/// Same rank and same discriminant square class.
pub fn form_equivalent(f: &BilForm, g: &BilForm) -> Result<bool> {
    f.require_symmetric_regular_fp()?;
    g.require_symmetric_regular_fp()?;
    if f.dim() != g.dim() {
        return Ok(false);
    }
    let ratio = &f.determinant() * &g.determinant().inv();
    Ok(ratio.is_square()?)
}

pub fn is_hyperbolic(f: &BilForm) -> Result<bool> {
    let r = f.dim();
    if r == 0 {
        return Ok(true);
    }
    Ok(r % 2 == 0 && witt_index(f)? == r / 2)
}

/// `nu(B') + nu(B' + B) >= rk(B')`.
pub fn witt_simplifies(b: &BilForm, b_prime: &BilForm) -> Result<bool> {
    if b_prime.dim() == 0 {
        return Ok(true);
    }
    let nu1 = witt_index(b_prime)?;
    let sum = b_prime.orth_sum(b)?;
    let nu2 = if sum.dim() == 0 { 0 } else { witt_index(&sum)? };
    Ok(nu1 + nu2 >= b_prime.dim())
}

/// Anisotropic part, as a (possibly zero-dimensional) diagonal form.
pub fn anisotropic_part(f: &BilForm) -> Result<BilForm> {
    if f.dim() == 0 {
        return Ok(f.clone());
    }
    Ok(witt_decompose(f)?.anisotropic)
}

/// Equality of Witt classes: equivalent anisotropic parts.
pub fn witt_equivalent(f: &BilForm, g: &BilForm) -> Result<bool> {
    let a = anisotropic_part(f)?;
    let b = anisotropic_part(g)?;
    if a.dim() != b.dim() {
        return Ok(false);
    }
    if a.dim() == 0 {
        return Ok(true);
    }
    form_equivalent(&a, &b)
}

/// A vector `x` with `b(x, x) = a`, if any.
pub fn represent(f: &BilForm, a: &FieldElem) -> Result<Option<Vector>> {
    f.require_symmetric_regular_fp()?;
    let (p, d) = diagonalize(f.gram());
    let ctx = f.ctx();
    let n = f.dim();
    for i in 0..n {
        if let Some(s) = (a * &d[i].inv()).sqrt()? {
            return Ok(Some(vec_scale(&p.col(i), &s)));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if let Some((x, y)) = solve_binary(&d[i], &d[j], a)? {
                let mut c = vec![ctx.zero(); n];
                c[i] = x;
                c[j] = y;
                return Ok(Some(p.apply(&c)));
            }
        }
    }
    Ok(None)
}

/// A symmetric form of the given rank and discriminant class: `diag(1, ..., 1, d)`.
pub fn form_with_invariants(ctx: FieldCtx, rank: usize, disc: &FieldElem) -> Result<BilForm> {
    if rank == 0 {
        return Ok(BilForm::zero(ctx, FormKind::Symmetric));
    }
    let mut e = vec![ctx.one(); rank];
    e[rank - 1] = if disc.is_square()? {
        ctx.one()
    } else {
        ctx.nonsquare()?
    };
    Ok(BilForm::diag(ctx, &e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    #[test]
    fn validate_examples() {
        let k = f(3);
        assert_eq!(BilForm::diag_i64(k, &[1, 1]).validate(), Validity::Regular);
        assert_eq!(BilForm::symplectic(k, 1).validate(), Validity::Regular);
        match BilForm::diag_i64(k, &[1, 0]).validate() {
            Validity::Degenerate(r) => assert_eq!(r, Subspace::span(k, 2, &[unit_vector(k, 2, 1)])),
            Validity::Regular => panic!("expected degenerate"),
        }
        assert!(matches!(
            BilForm::symmetric(Matrix::from_i64(k, &[&[0, 1], &[2, 0]])),
            Err(Error::KindMismatch(_))
        ));
    }

    #[test]
    fn adjoint_examples() {
        let k = f(5);
        let plane = BilForm::symplectic(k, 1);
        let u = Matrix::from_i64(k, &[&[2, 0], &[0, 1]]);
        assert_eq!(
            adjoint(&u, &plane).unwrap(),
            Matrix::from_i64(k, &[&[1, 0], &[0, 2]])
        );
        let id = Matrix::identity(k, 2);
        assert_eq!(adjoint(&id, &plane).unwrap(), id);
    }

    #[test]
    fn witt_examples() {
        assert_eq!(witt_index(&BilForm::diag_i64(f(5), &[1, -1])).unwrap(), 1);
        assert_eq!(witt_index(&BilForm::diag_i64(f(5), &[1, 1])).unwrap(), 1);
        assert_eq!(witt_index(&BilForm::diag_i64(f(3), &[1, 1])).unwrap(), 0);
        assert_eq!(
            witt_index(&BilForm::diag_i64(f(3), &[1, 1, 1, 1, 1])).unwrap(),
            2
        );
        assert!(matches!(
            witt_index(&BilForm::diag_i64(FieldCtx::Rational, &[1])),
            Err(Error::UnsupportedField(_))
        ));
        assert_eq!(
            witt_index(&BilForm::diag_i64(f(3), &[1, 0])).err(),
            Some(Error::DegenerateForm)
        );
    }

    #[test]
    fn equivalence_examples() {
        let k = f(5);
        let a = BilForm::diag_i64(k, &[1, 1]);
        let b = BilForm::diag_i64(k, &[2, 2]);
        assert!(form_equivalent(&a, &b).unwrap());
        let p = equivalence_witness(&a, &b).unwrap().unwrap();
        assert_eq!(b.pullback(&p).gram(), a.gram());
        assert!(
            !form_equivalent(&BilForm::diag_i64(k, &[1]), &BilForm::diag_i64(k, &[2])).unwrap()
        );
        let g =
            BilForm::symmetric(Matrix::from_i64(k, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 3]])).unwrap();
        assert!(equivalence_witness(&g, &g).unwrap().is_some());
    }

    #[test]
    fn hyperbolic_and_simplifies() {
        assert!(is_hyperbolic(&BilForm::diag_i64(f(3), &[1, -1])).unwrap());
        assert!(is_hyperbolic(&BilForm::zero(f(3), FormKind::Symmetric)).unwrap());
        assert!(!is_hyperbolic(&BilForm::diag_i64(f(3), &[1, 1])).unwrap());
        assert!(witt_simplifies(
            &BilForm::diag_i64(f(3), &[1]),
            &BilForm::diag_i64(f(3), &[-1])
        )
        .unwrap());
        assert!(!witt_simplifies(
            &BilForm::diag_i64(f(5), &[1]),
            &BilForm::diag_i64(f(5), &[2])
        )
        .unwrap());
        assert!(witt_simplifies(
            &BilForm::diag_i64(f(5), &[2]),
            &BilForm::zero(f(5), FormKind::Symmetric)
        )
        .unwrap());
    }

    #[test]
    fn decomposition_reconstructs() {
        let k = f(7);
        let g = BilForm::diag_i64(k, &[1, 3, 5, 6, 2]);
        let w = witt_decompose(&g).unwrap();
        let t = w.basis_matrix(k, 5);
        let pulled = g.pullback(&t);
        let mut model = BilForm::hyperbolic(k, 0);
        for _ in 0..w.witt_index {
            model = model
                .orth_sum(&BilForm::symmetric(Matrix::from_i64(k, &[&[0, 1], &[1, 0]])).unwrap())
                .unwrap();
        }
        model = model.orth_sum(&w.anisotropic).unwrap();
        assert_eq!(pulled.gram(), model.gram());
    }
}
