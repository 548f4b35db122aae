//! Explicit isometries between isometric isopairs over a prime field.
//!
//! Write `u_M` (source) as a sum of cyclic modules `F[u] w_k` with annihilators
//! `d_k`. An isometry is fixed by the images `y_k` of the generators: each `y_k`
//! lies in `Ker d_k(u_P)`, must reproduce the values `b(w_l, u^e w_k)` for the
//! finitely many relevant `e`, and the resulting Krylov blocks must stay
//! independent. The generators are placed one at a time: the cross terms with
//! earlier choices are linear in `y_k`, so only the solution set of a linear
//! system is enumerated and filtered by the quadratic self terms.

use crate::error::{Error, Result};
use crate::isopair::{isometric, Isopair};
use crate::linal::{frobenius, Matrix, Subspace, Vector};

pub const DEFAULT_TRANSPORT_BUDGET: u64 = 1_000_000;

type Raw = Vec<u64>;

struct Gen {
    deg: usize,
    /// Columns span `Ker d_k(u_P)`.
    kernel: Matrix,
    krylov: Vec<Vector>,
}

struct Search<'a> {
    q: u64,
    n: usize,
    to: &'a Isopair,
    gens: Vec<Gen>,
    /// `G_P u_P^e` for `e` in `[-(D-1), D-1]`, indexed by `e + D - 1`.
    g_pow: Vec<Matrix>,
    g_pow_raw: Vec<Raw>,
    /// `b_M(w_l, u_M^e w_k)`, same indexing in `e`.
    target: Vec<Vec<Vec<u64>>>,
    offset: usize,
    chosen: Vec<Vector>,
    span: Subspace,
    evaluated: u64,
    budget: u64,
}

fn raw(v: &[crate::FieldElem]) -> Raw {
    v.iter()
        .map(|x| x.residue().expect("prime field"))
        .collect()
}

fn quad_raw(g: &[u64], y: &[u64], q: u64) -> u64 {
    let n = y.len();
    let mut acc = 0u64;
    for i in 0..n {
        if y[i] == 0 {
            continue;
        }
        let row = &g[i * n..(i + 1) * n];
        let s = row.iter().zip(y).fold(0u64, |s, (a, b)| (s + a * b) % q);
        acc = (acc + y[i] * s) % q;
    }
    acc
}

impl Search<'_> {
    fn krylov_of(&self, y: &[crate::FieldElem], deg: usize) -> Vec<Vector> {
        let mut out = Vec::with_capacity(deg);
        let mut v = y.to_vec();
        for _ in 0..deg {
            let next = self.to.u().apply(&v);
            out.push(std::mem::replace(&mut v, next));
        }
        out
    }

    fn dfs(&mut self, k: usize) -> Result<bool> {
        if k == self.gens.len() {
            return Ok(true);
        }
        let ctx = self.to.ctx();
        let q = self.q;
        let n = self.n;
        let deg = self.gens[k].deg;
        let kernel = self.gens[k].kernel.clone();
        let m = kernel.cols();
        if m == 0 {
            return Ok(false);
        }
        // linear constraints from earlier generators
        let mut rows: Vec<Vector> = Vec::new();
        let mut rhs: Vector = Vec::new();
        for l in 0..k {
            let dl = self.gens[l].deg;
            for e in (self.offset + 1 - dl)..(self.offset + deg) {
                let row = &self.g_pow[e].transpose().apply(&self.chosen[l]);
                let row_k = kernel.transpose().apply(row);
                rows.push(row_k);
                rhs.push(ctx.from_u64(self.target[l][k][e]));
            }
        }
        let (z0, null) = if rows.is_empty() {
            (vec![ctx.zero(); m], Matrix::identity(ctx, m).columns())
        } else {
            let a = Matrix::from_rows(ctx, rows)?;
            match a.solve(&rhs) {
                None => return Ok(false),
                Some(z0) => (z0, a.kernel()),
            }
        };
        let base = raw(&kernel.apply(&z0));
        let dirs: Vec<Raw> = null.iter().map(|v| raw(&kernel.apply(v))).collect();
        let f = dirs.len();
        let want: Vec<u64> = (0..deg)
            .map(|e| self.target[k][k][self.offset + e])
            .collect();
        let mut y = base;
        let mut digits = vec![0u64; f];
        loop {
            self.evaluated += 1;
            if self.evaluated > self.budget {
                return Err(Error::TransportBudgetExceeded {
                    evaluated: self.evaluated - 1,
                });
            }
            let fits =
                (0..deg).all(|e| quad_raw(&self.g_pow_raw[self.offset + e], &y, q) == want[e]);
            if fits {
                let yv: Vector = y.iter().map(|&x| ctx.from_u64(x)).collect();
                let kr = self.krylov_of(&yv, deg);
                let grown = self.span.sum(&Subspace::span(ctx, n, &kr));
                if grown.dim() == self.span.dim() + deg {
                    let saved = std::mem::replace(&mut self.span, grown);
                    self.chosen.push(yv);
                    self.gens[k].krylov = kr;
                    if self.dfs(k + 1)? {
                        return Ok(true);
                    }
                    self.chosen.pop();
                    self.span = saved;
                }
            }
            // odometer step; a wrapped digit has added its direction q times
            let mut i = 0;
            loop {
                if i == f {
                    return Ok(false);
                }
                for (a, b) in y.iter_mut().zip(&dirs[i]) {
                    *a = (*a + b) % q;
                }
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }
}

/// Some `g` with `g u_from = u_to g` and `g^T G_to g = G_from`; at most
/// `budget` candidate generator images are examined.
pub fn isometry_find(from: &Isopair, to: &Isopair, budget: u64) -> Result<Matrix> {
    let ctx = from.ctx();
    let q = ctx.modulus()?;
    if from.eps() != to.eps() || from.dim() != to.dim() || to.ctx() != ctx {
        return Err(Error::NotIsometric);
    }
    let n = from.dim();
    if from.gram() == to.gram() && from.u() == to.u() {
        return Ok(Matrix::identity(ctx, n));
    }
    if !isometric(from, to)? {
        return Err(Error::NotIsometric);
    }
    let fr = frobenius(from.u())?;
    let mut order: Vec<(crate::Poly, Vector)> = fr.factors.into_iter().zip(fr.generators).collect();
    order.reverse();
    let dmax = order.iter().map(|(d, _)| d.deg()).max().unwrap_or(1);
    let offset = dmax - 1;
    let pow_range = |u: &Matrix| -> Result<Vec<Matrix>> {
        let ui = u.inverse()?;
        let mut out = Vec::with_capacity(2 * dmax - 1);
        for e in 0..(2 * dmax - 1) {
            out.push(if e >= offset {
                u.pow(e - offset)
            } else {
                ui.pow(offset - e)
            });
        }
        Ok(out)
    };
    let g_pow: Vec<Matrix> = pow_range(to.u())?.iter().map(|p| to.gram() * p).collect();
    let gm_pow: Vec<Matrix> = pow_range(from.u())?
        .iter()
        .map(|p| from.gram() * p)
        .collect();
    let g_pow_raw = g_pow.iter().map(|g| raw(g.entries())).collect();
    let ws: Vec<&Vector> = order.iter().map(|(_, w)| w).collect();
    let target = ws
        .iter()
        .map(|wl| {
            ws.iter()
                .map(|wk| {
                    gm_pow
                        .iter()
                        .map(|g| g.bilinear(wl, wk).residue().expect("prime field"))
                        .collect()
                })
                .collect()
        })
        .collect();
    let gens = order
        .iter()
        .map(|(d, _)| {
            let kernel = Subspace::kernel_of(&to.u().eval_poly(d));
            Gen {
                deg: d.deg(),
                kernel: Matrix::from_cols(ctx, n, kernel.basis()),
                krylov: vec![],
            }
        })
        .collect();
    let mut search = Search {
        q,
        n,
        to,
        gens,
        g_pow,
        g_pow_raw,
        target,
        offset,
        chosen: vec![],
        span: Subspace::zero(ctx, n),
        evaluated: 0,
        budget,
    };
    if !search.dfs(0)? {
        return Err(Error::VerificationFailed(
            "exhaustive transport search found no isometry".into(),
        ));
    }
    let mut src = Vec::with_capacity(n);
    let mut dst = Vec::with_capacity(n);
    for ((d, w), gen) in order.iter().zip(&search.gens) {
        let mut v = w.clone();
        for _ in 0..d.deg() {
            let next = from.u().apply(&v);
            src.push(std::mem::replace(&mut v, next));
        }
        dst.extend(gen.krylov.iter().cloned());
    }
    let s = Matrix::from_cols(ctx, n, &src);
    let t = Matrix::from_cols(ctx, n, &dst);
    let g = &t * &s.inverse()?;
    if &g * from.u() != to.u() * &g || &(&g.transpose() * to.gram()) * &g != *from.gram() {
        return Err(Error::VerificationFailed(
            "transport result is not an isometry".into(),
        ));
    }
    Ok(g)
}
