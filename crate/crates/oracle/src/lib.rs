//! Ground truth by brute force: all U2 elements of a small group, the sets of
//! their two- and three-fold products, and element-by-element comparison with
//! the decision procedures.

pub mod raw;

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;
use u2split_core::factor::{gl_decide, orth_decide, sp_decide};
use u2split_core::forms::BilForm;
use u2split_core::isopair::{Eps, Isopair};
use u2split_core::{Error, FieldCtx, Matrix, Result};

pub use raw::{Elem, RawCtx};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Gl,
    Isometry { eps: Eps, gram: Matrix },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub ctx: FieldCtx,
    pub n: usize,
}

/// Enumeration limits: group order and number of raw candidates examined.
#[derive(Clone, Copy, Debug)]
pub struct Ceiling {
    pub group: usize,
    pub params: u64,
}

impl Default for Ceiling {
    fn default() -> Self {
        Ceiling {
            group: 1_000_000,
            params: 100_000_000,
        }
    }
}

impl GroupSpec {
    pub fn gl(q: u64, n: usize) -> Result<Self> {
        Ok(GroupSpec {
            kind: GroupKind::Gl,
            ctx: FieldCtx::prime(q)?,
            n,
        })
    }

    pub fn isometry(eps: Eps, gram: Matrix) -> Result<Self> {
        let b = BilForm::new(eps.kind(), gram.clone())?;
        if !b.is_regular() {
            return Err(Error::DegenerateForm);
        }
        let ctx = gram.ctx();
        ctx.modulus()?;
        Ok(GroupSpec {
            kind: GroupKind::Isometry { eps, gram },
            ctx,
            n: b.dim(),
        })
    }

    /// `Sp_n` for the standard symplectic form, `n` even.
    pub fn symplectic(q: u64, n: usize) -> Result<Self> {
        if n % 2 == 1 {
            return Err(Error::BadParameters(
                "symplectic dimension must be even".into(),
            ));
        }
        let k = FieldCtx::prime(q)?;
        GroupSpec::isometry(Eps::Minus, BilForm::symplectic(k, n / 2).gram().clone())
    }

    pub fn orthogonal(q: u64, diag: &[i64]) -> Result<Self> {
        let k = FieldCtx::prime(q)?;
        GroupSpec::isometry(Eps::Plus, BilForm::diag_i64(k, diag).gram().clone())
    }

    /// Orthogonal group of the hyperbolic form of dimension `n`.
    pub fn orthogonal_hyperbolic(q: u64, n: usize) -> Result<Self> {
        if n % 2 == 1 {
            return Err(Error::BadParameters(
                "hyperbolic dimension must be even".into(),
            ));
        }
        let k = FieldCtx::prime(q)?;
        GroupSpec::isometry(Eps::Plus, BilForm::hyperbolic(k, n / 2).gram().clone())
    }

    /// `gl<n>`, `sp<n>`, `o<n>` (identity form), `o:a,b,..` (diagonal form),
    /// `ohyp<n>` (hyperbolic form).
    pub fn parse(name: &str, q: u64) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown group {name:?}"));
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        if let Some(rest) = name.strip_prefix("o:") {
            let diag = rest
                .split(',')
                .map(|s| s.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            return GroupSpec::orthogonal(q, &diag);
        }
        if let Some(n) = name.strip_prefix("gl") {
            return GroupSpec::gl(q, num(n)?);
        }
        if let Some(n) = name.strip_prefix("sp") {
            return GroupSpec::symplectic(q, num(n)?);
        }
        if let Some(n) = name.strip_prefix("ohyp") {
            return GroupSpec::orthogonal_hyperbolic(q, num(n)?);
        }
        if let Some(n) = name.strip_prefix('o') {
            return GroupSpec::orthogonal(q, &vec![1; num(n)?]);
        }
        Err(bad())
    }

    pub fn q(&self) -> u64 {
        self.ctx.modulus().expect("prime field by construction")
    }

    pub fn raw(&self) -> RawCtx {
        RawCtx::new(self.n, self.q())
    }

    pub fn name(&self) -> String {
        let q = self.q();
        match &self.kind {
            GroupKind::Gl => format!("GL_{}(F_{q})", self.n),
            GroupKind::Isometry {
                eps: Eps::Minus, ..
            } => format!("Sp_{}(F_{q})", self.n),
            GroupKind::Isometry {
                eps: Eps::Plus,
                gram,
            } => {
                let rows: Vec<String> = gram
                    .to_rows()
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect();
                format!("O_{}(F_{q}; [{}])", self.n, rows.join("; "))
            }
        }
    }

    fn isopair(&self, u: Matrix) -> Result<Option<Isopair>> {
        match &self.kind {
            GroupKind::Gl => Ok(None),
            GroupKind::Isometry { eps, gram } => {
                Ok(Some(Isopair::from_gram(*eps, gram.clone(), u)?))
            }
        }
    }
}

fn check_params(count: u64, ceiling: &Ceiling, what: &str) -> Result<()> {
    if count > ceiling.params {
        return Err(Error::BudgetExceeded(format!(
            "{what}: {count} candidates exceed the ceiling {}",
            ceiling.params
        )));
    }
    Ok(())
}

fn checked_pow(q: u64, e: usize) -> u64 {
    u32::try_from(e)
        .ok()
        .and_then(|e| q.checked_pow(e))
        .unwrap_or(u64::MAX)
}

/// Every U2 element `I + a` of the group, in the order of their parameters.
pub fn enumerate_u2_raw(spec: &GroupSpec, ceiling: &Ceiling) -> Result<Vec<Elem>> {
    let rc = spec.raw();
    let n = spec.n;
    let q = spec.q();
    let id = rc.identity();
    match &spec.kind {
        GroupKind::Gl => {
            let total = checked_pow(q, n * n);
            check_params(total, ceiling, "square-zero matrices")?;
            Ok((0..total)
                .into_par_iter()
                .filter_map(|code| {
                    let a = rc.from_code(code);
                    rc.is_zero(&rc.mul(&a, &a)).then(|| rc.add(&id, &a))
                })
                .collect())
        }
        GroupKind::Isometry { eps, gram } => {
            // a = G^{-1} S with S symmetric (eps = -1) or skewsymmetric (eps = 1)
            let slots: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i..n).map(move |j| (i, j)))
                .filter(|(i, j)| *eps == Eps::Minus || i != j)
                .collect();
            let total = checked_pow(q, slots.len());
            check_params(total, ceiling, "form-parameterized candidates")?;
            let ginv = rc.from_matrix(&gram.inverse()?);
            let qq = q as u8;
            let neg = |x: u8| (qq - x) % qq;
            Ok((0..total)
                .into_par_iter()
                .filter_map(|mut code| {
                    let mut s = vec![0u8; n * n];
                    for &(i, j) in &slots {
                        let d = (code % q) as u8;
                        code /= q;
                        s[i * n + j] = d;
                        s[j * n + i] = if *eps == Eps::Minus { d } else { neg(d) };
                    }
                    let a = rc.mul(&ginv, &Elem(s.into_boxed_slice()));
                    rc.is_zero(&rc.mul(&a, &a)).then(|| rc.add(&id, &a))
                })
                .collect())
        }
    }
}

pub fn enumerate_u2(spec: &GroupSpec, ceiling: &Ceiling) -> Result<Vec<Matrix>> {
    let rc = spec.raw();
    Ok(enumerate_u2_raw(spec, ceiling)?
        .iter()
        .map(|e| rc.to_matrix(spec.ctx, e))
        .collect())
}

/// Reflections in all anisotropic vectors of a symmetric form.
fn reflections(spec: &GroupSpec, gram: &Matrix) -> Vec<Elem> {
    let rc = spec.raw();
    let k = spec.ctx;
    let n = spec.n;
    let b = BilForm::new(Eps::Plus.kind(), gram.clone()).expect("symmetric by construction");
    let total = spec.q().pow(n as u32);
    (1..total)
        .filter_map(|mut code| {
            let v: Vec<_> = (0..n)
                .map(|_| {
                    let d = code % spec.q();
                    code /= spec.q();
                    k.from_u64(d)
                })
                .collect();
            let bv = b.eval(&v, &v);
            if bv.is_zero() {
                return None;
            }
            let gv = gram.apply(&v);
            let c = &k.from_i64(2) / &bv;
            let r = Matrix::from_fn(k, n, n, |i, j| {
                let d = &(&c * &v[i]) * &gv[j];
                if i == j {
                    &k.one() - &d
                } else {
                    -&d
                }
            });
            Some(rc.from_matrix(&r))
        })
        .collect()
}

/// All group elements. `GL` is enumerated directly; isometry groups are closed
/// up from U2 elements and, for symmetric forms, reflections.
pub fn enumerate_group_raw(spec: &GroupSpec, ceiling: &Ceiling) -> Result<Vec<Elem>> {
    let rc = spec.raw();
    let n = spec.n;
    let q = spec.q();
    let mut out: Vec<Elem> = match &spec.kind {
        GroupKind::Gl => {
            let total = checked_pow(q, n * n);
            check_params(total, ceiling, "matrices")?;
            (0..total)
                .into_par_iter()
                .map(|c| rc.from_code(c))
                .filter(|a| rc.rank(a) == n)
                .collect()
        }
        GroupKind::Isometry { eps, gram } => {
            let mut gens = enumerate_u2_raw(spec, ceiling)?;
            if *eps == Eps::Plus {
                check_params(checked_pow(q, n), ceiling, "reflection vectors")?;
                gens.extend(reflections(spec, gram));
            }
            let id = rc.identity();
            gens.retain(|g| *g != id);
            gens.sort();
            gens.dedup();
            let mut seen: HashSet<Elem> = HashSet::from([id.clone()]);
            let mut queue = VecDeque::from([id]);
            while let Some(x) = queue.pop_front() {
                for g in &gens {
                    let y = rc.mul(&x, g);
                    if seen.insert(y.clone()) {
                        if seen.len() > ceiling.group {
                            return Err(Error::BudgetExceeded(format!(
                                "group order exceeds the ceiling {}",
                                ceiling.group
                            )));
                        }
                        queue.push_back(y);
                    }
                }
            }
            seen.into_iter().collect()
        }
    };
    if out.len() > ceiling.group {
        return Err(Error::BudgetExceeded(format!(
            "group order {} exceeds the ceiling {}",
            out.len(),
            ceiling.group
        )));
    }
    out.sort();
    Ok(out)
}

/// `{f_1 f_2}` or `{f_1 f_2 f_3}` over U2 elements, sorted canonically.
pub fn product_set_raw(spec: &GroupSpec, depth: usize, ceiling: &Ceiling) -> Result<Vec<Elem>> {
    if !(1..=3).contains(&depth) {
        return Err(Error::BadParameters(format!(
            "depth must be 1, 2 or 3, got {depth}"
        )));
    }
    let rc = spec.raw();
    let u2 = enumerate_u2_raw(spec, ceiling)?;
    let mut level: Vec<Elem> = u2.clone();
    for _ in 1..depth {
        let work = (level.len() as u64).saturating_mul(u2.len() as u64);
        check_params(work, ceiling, "products")?;
        let set: HashSet<Elem> = level
            .par_iter()
            .fold(HashSet::new, |mut acc, x| {
                acc.extend(u2.iter().map(|f| rc.mul(x, f)));
                acc
            })
            .reduce(HashSet::new, |a, b| {
                let (mut big, small) = if a.len() < b.len() { (b, a) } else { (a, b) };
                big.extend(small);
                big
            });
        if set.len() > ceiling.group {
            return Err(Error::BudgetExceeded(format!(
                "product set exceeds the ceiling {}",
                ceiling.group
            )));
        }
        level = set.into_iter().collect();
        level.sort();
    }
    Ok(level)
}

pub fn product_set(spec: &GroupSpec, depth: usize, ceiling: &Ceiling) -> Result<Vec<Matrix>> {
    let rc = spec.raw();
    Ok(product_set_raw(spec, depth, ceiling)?
        .iter()
        .map(|e| rc.to_matrix(spec.ctx, e))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// Products of two U2 elements in `GL(V)`.
    Botha,
    /// Products of two U2 elements in `Sp(b)`.
    Symplectic2,
    /// Every element of `Sp(b)` is a product of three U2 elements.
    Symplectic3,
    /// Products of two U2 elements in `O(b)`.
    Orthogonal2,
}

impl Theorem {
    pub fn parse(s: &str) -> Result<Theorem> {
        match s {
            "botha" => Ok(Theorem::Botha),
            "symplectic2" => Ok(Theorem::Symplectic2),
            "symplectic3" => Ok(Theorem::Symplectic3),
            "orthogonal2" => Ok(Theorem::Orthogonal2),
            _ => Err(Error::Parse(format!("unknown theorem {s:?}"))),
        }
    }

    pub fn depth(self) -> usize {
        match self {
            Theorem::Symplectic3 => 3,
            _ => 2,
        }
    }

    /// The theorem matching a group: two factors unless `three` is asked for.
    pub fn for_group(spec: &GroupSpec, depth: usize) -> Result<Theorem> {
        match (&spec.kind, depth) {
            (GroupKind::Gl, 2) => Ok(Theorem::Botha),
            (
                GroupKind::Isometry {
                    eps: Eps::Minus, ..
                },
                2,
            ) => Ok(Theorem::Symplectic2),
            (
                GroupKind::Isometry {
                    eps: Eps::Minus, ..
                },
                3,
            ) => Ok(Theorem::Symplectic3),
            (GroupKind::Isometry { eps: Eps::Plus, .. }, 2) => Ok(Theorem::Orthogonal2),
            _ => Err(Error::BadParameters(format!(
                "no theorem for {} at depth {depth}",
                spec.name()
            ))),
        }
    }

    fn fits(self, spec: &GroupSpec) -> bool {
        matches!(
            (self, &spec.kind),
            (Theorem::Botha, GroupKind::Gl)
                | (
                    Theorem::Symplectic2 | Theorem::Symplectic3,
                    GroupKind::Isometry {
                        eps: Eps::Minus,
                        ..
                    }
                )
                | (
                    Theorem::Orthogonal2,
                    GroupKind::Isometry { eps: Eps::Plus, .. }
                )
        )
    }

    /// The decision procedure's answer for one group element.
    pub fn predicate(self, spec: &GroupSpec, u: &Matrix) -> Result<bool> {
        let pair = spec.isopair(u.clone())?;
        Ok(match (self, pair) {
            (Theorem::Botha, _) => gl_decide(u)?.splittable,
            (Theorem::Symplectic2, Some(p)) => sp_decide(&p)?.splittable,
            (Theorem::Symplectic3, Some(_)) => true,
            (Theorem::Orthogonal2, Some(p)) => orth_decide(&p)?.splittable,
            _ => return Err(Error::WrongKind),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub u: Vec<Vec<String>>,
    pub in_product_set: bool,
    pub predicate: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub group: String,
    pub theorem: Theorem,
    pub depth: usize,
    pub group_order: usize,
    pub u2_count: usize,
    pub set_size: usize,
    pub predicate_size: usize,
    pub agree: bool,
    pub counterexample_count: usize,
    /// At most the first 20, in canonical order.
    pub counterexamples: Vec<Counterexample>,
}

/// Compares the product set with the decision procedure on every group element.
pub fn theorem_check(
    spec: &GroupSpec,
    theorem: Theorem,
    ceiling: &Ceiling,
) -> Result<TheoremReport> {
    if !theorem.fits(spec) {
        return Err(Error::BadParameters(format!(
            "{theorem:?} does not apply to {}",
            spec.name()
        )));
    }
    let rc = spec.raw();
    let depth = theorem.depth();
    let group = enumerate_group_raw(spec, ceiling)?;
    let u2_count = enumerate_u2_raw(spec, ceiling)?.len();
    let products: HashSet<Elem> = product_set_raw(spec, depth, ceiling)?.into_iter().collect();
    let members: HashSet<&Elem> = group.iter().collect();
    if let Some(stray) = products.iter().find(|e| !members.contains(e)) {
        return Err(Error::VerificationFailed(format!(
            "product {:?} lies outside the enumerated group",
            stray.0
        )));
    }
    let verdicts: Vec<(bool, bool)> = group
        .par_iter()
        .map(|e| {
            Ok((
                products.contains(e),
                theorem.predicate(spec, &rc.to_matrix(spec.ctx, e))?,
            ))
        })
        .collect::<Result<_>>()?;
    let bad: Vec<usize> = (0..group.len())
        .filter(|&i| verdicts[i].0 != verdicts[i].1)
        .collect();
    let counterexamples = bad
        .iter()
        .take(20)
        .map(|&i| Counterexample {
            u: rc
                .to_matrix(spec.ctx, &group[i])
                .to_rows()
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect(),
            in_product_set: verdicts[i].0,
            predicate: verdicts[i].1,
        })
        .collect();
    Ok(TheoremReport {
        group: spec.name(),
        theorem,
        depth,
        group_order: group.len(),
        u2_count,
        set_size: products.len(),
        predicate_size: verdicts.iter().filter(|v| v.1).count(),
        agree: bad.is_empty(),
        counterexample_count: bad.len(),
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        assert_eq!(GroupSpec::parse("sp4", 3).unwrap().n, 4);
        assert_eq!(
            GroupSpec::parse("o:1,2", 3).unwrap(),
            GroupSpec::orthogonal(3, &[1, 2]).unwrap()
        );
        assert_eq!(GroupSpec::parse("ohyp4", 3).unwrap().n, 4);
        assert!(GroupSpec::parse("sp3", 3).is_err());
        assert!(GroupSpec::parse("x", 3).is_err());
    }

    #[test]
    fn ceilings_are_enforced() {
        let sp6 = GroupSpec::symplectic(3, 6).unwrap();
        assert!(matches!(
            enumerate_u2(&sp6, &Ceiling::default()),
            Err(Error::BudgetExceeded(_))
        ));
        let tiny = Ceiling {
            group: 10,
            params: 100_000_000,
        };
        let sp2 = GroupSpec::symplectic(3, 2).unwrap();
        assert!(matches!(
            enumerate_group_raw(&sp2, &tiny),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
