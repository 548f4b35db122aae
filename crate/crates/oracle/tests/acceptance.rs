//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use u2split_core::factor::{
    boxed_product, gl_decide, gl_factor, orth_decide, orth_factor2, pencil_operator, sp_decide,
    sp_factor2, sp_factor3, verify_factorization, U2Factorization, DEFAULT_TRANSPORT_BUDGET,
};
use u2split_core::forms::{
    form_equivalent, herm_is_hyperbolic, is_hyperbolic, witt_equivalent, witt_simplifies, BilForm,
    FormKind,
};
use u2split_core::io::wall_json;
use u2split_core::isopair::{
    descent, folding, herm_value, model_sym_pair, twisted_descent, wall_data, Eps, Isopair,
    WallData,
};
use u2split_core::linal::{invariant_factors, unit_vector};
use u2split_core::tower::Tower;
use u2split_core::{sample, FieldCtx, Matrix, Poly};
use u2split_oracle::{enumerate_group_raw, theorem_check, Ceiling, GroupKind, GroupSpec, Theorem};

type Outcome = Result<String, String>;

/// A factorization produced somewhere in the suite, kept for the diagnostics criterion.
struct Produced {
    origin: String,
    pair: Option<Isopair>,
    u: Matrix,
    fac: U2Factorization,
}

#[derive(Default)]
struct Suite {
    produced: Vec<Produced>,
}

impl Suite {
    fn keep(
        &mut self,
        origin: impl Into<String>,
        pair: Option<&Isopair>,
        u: &Matrix,
        fac: &U2Factorization,
    ) {
        self.produced.push(Produced {
            origin: origin.into(),
            pair: pair.cloned(),
            u: u.clone(),
            fac: fac.clone(),
        });
    }
}

fn f(q: u64) -> FieldCtx {
    FieldCtx::prime(q).expect("prime")
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn certificate(p: &Isopair) -> String {
    match wall_data(p) {
        Ok(w) => wall_json(&w).to_string(),
        Err(e) => format!("<no wall data: {e}>"),
    }
}

fn sign_form(b: &BilForm, sign: i64) -> BilForm {
    if sign < 0 {
        b.neg()
    } else {
        b.clone()
    }
}

fn orth_sum(a: &BilForm, b: &BilForm) -> BilForm {
    a.orth_sum(b).expect("same field and kind")
}

fn check_theorem(label: &str, groups: &[(GroupSpec, Theorem)], full_group: bool) -> Outcome {
    let ceiling = Ceiling::default();
    let mut lines = Vec::new();
    for (spec, th) in groups {
        let start = Instant::now();
        let rep =
            theorem_check(spec, *th, &ceiling).map_err(|e| format!("{}: {e}", spec.name()))?;
        let took = start.elapsed();
        if !rep.agree {
            return Err(format!(
                "{}: {} counterexamples, first {:?}",
                spec.name(),
                rep.counterexample_count,
                rep.counterexamples.first()
            ));
        }
        if full_group && rep.set_size != rep.group_order {
            return Err(format!(
                "{}: depth-{} set has {} of {} elements",
                spec.name(),
                rep.depth,
                rep.set_size,
                rep.group_order
            ));
        }
        if took > Duration::from_secs(600) {
            return Err(format!("{}: took {}", spec.name(), secs(took)));
        }
        lines.push(format!(
            "{} |G|={} |U2|={} |set|={} in {}",
            spec.name(),
            rep.group_order,
            rep.u2_count,
            rep.set_size,
            secs(took)
        ));
    }
    Ok(format!("{label}: {}", lines.join("; ")))
}

fn criterion_1() -> Outcome {
    let groups = [
        (GroupSpec::symplectic(3, 2).unwrap(), Theorem::Symplectic2),
        (GroupSpec::symplectic(5, 2).unwrap(), Theorem::Symplectic2),
        (GroupSpec::symplectic(3, 4).unwrap(), Theorem::Symplectic2),
    ];
    check_theorem("depth-2 set = sp_decide set", &groups, false)
}

fn criterion_2(suite: &mut Suite) -> Outcome {
    let groups = [
        (GroupSpec::symplectic(3, 2).unwrap(), Theorem::Symplectic3),
        (GroupSpec::symplectic(3, 4).unwrap(), Theorem::Symplectic3),
    ];
    let head = check_theorem("depth-3 set = group", &groups, true)?;
    let mut r = rng(2);
    for (spec, _) in &groups {
        let GroupKind::Isometry { eps, gram } = &spec.kind else {
            unreachable!()
        };
        let group = enumerate_group_raw(spec, &Ceiling::default()).map_err(|e| e.to_string())?;
        let rc = spec.raw();
        for _ in 0..100 {
            let u = rc.to_matrix(spec.ctx, &group[r.gen_range(0..group.len())]);
            let p = Isopair::from_gram(*eps, gram.clone(), u).map_err(|e| e.to_string())?;
            let fac = sp_factor3(&p, DEFAULT_TRANSPORT_BUDGET)
                .map_err(|e| format!("{}: {e}; {}", spec.name(), certificate(&p)))?;
            let rep = verify_factorization(Some(&p), p.u(), &fac);
            if fac.factors.len() != 3 || !rep.ok() {
                return Err(format!("{}: bad witness ({})", spec.name(), rep.summary()));
            }
            suite.keep(
                format!("criterion 2 {}", spec.name()),
                Some(&p),
                p.u(),
                &fac,
            );
        }
    }
    Ok(format!("{head}; 200 sp_factor3 witnesses verified"))
}

fn criterion_3() -> Outcome {
    let mut groups: Vec<(GroupSpec, Theorem)> = [&[1, 1][..], &[1, 2], &[1, 1, 1], &[1, 1, 2]]
        .iter()
        .map(|d| (GroupSpec::orthogonal(3, d).unwrap(), Theorem::Orthogonal2))
        .collect();
    groups.push((
        GroupSpec::orthogonal_hyperbolic(3, 4).unwrap(),
        Theorem::Orthogonal2,
    ));
    check_theorem("depth-2 set = orth_decide set", &groups, false)
}

fn criterion_4() -> Outcome {
    let groups = [
        (GroupSpec::gl(3, 2).unwrap(), Theorem::Botha),
        (GroupSpec::gl(5, 2).unwrap(), Theorem::Botha),
        (GroupSpec::gl(3, 3).unwrap(), Theorem::Botha),
    ];
    check_theorem("depth-2 set = similarity predicate set", &groups, false)
}

#[derive(Clone, Copy, Debug)]
enum Mode {
    Gl,
    Sp2,
    Sp3,
    Orth2,
}

fn criterion_5(suite: &mut Suite) -> Outcome {
    const PER_MODE: usize = 1000;
    let mut r = rng(5);
    let mut summary = Vec::new();
    for mode in [Mode::Gl, Mode::Sp2, Mode::Sp3, Mode::Orth2] {
        let start = Instant::now();
        for i in 0..PER_MODE {
            let k = f(if r.gen_bool(0.5) { 3 } else { 5 });
            let fail =
                |what: String, cert: String| format!("{mode:?} #{i}: {what}; certificate {cert}");
            match mode {
                Mode::Gl => {
                    let n = r.gen_range(1..=6);
                    let u = &sample::u2_gl(&mut r, k, n) * &sample::u2_gl(&mut r, k, n);
                    let cert = || {
                        u2split_core::io::gl_invariants_json(&u)
                            .map(|v| v.to_string())
                            .unwrap_or_default()
                    };
                    let v = gl_decide(&u).map_err(|e| fail(e.to_string(), cert()))?;
                    if !v.splittable {
                        return Err(fail(
                            format!("declared not splittable {:?}", v.failed_conditions),
                            cert(),
                        ));
                    }
                    let fac = gl_factor(&u).map_err(|e| fail(e.to_string(), cert()))?;
                    if !verify_factorization(None, &u, &fac).ok() {
                        return Err(fail("witness does not verify".into(), cert()));
                    }
                    suite.keep(format!("criterion 5 {mode:?}"), None, &u, &fac);
                }
                Mode::Sp2 | Mode::Sp3 | Mode::Orth2 => {
                    let (eps, n) = match mode {
                        Mode::Orth2 => (Eps::Plus, r.gen_range(1..=6)),
                        _ => (Eps::Minus, 2 * r.gen_range(1..=3)),
                    };
                    let b = sample::regular_form(&mut r, k, eps, n);
                    let (p, _) = sample::splittable_pair(&mut r, &b).map_err(|e| e.to_string())?;
                    let v = match mode {
                        Mode::Orth2 => orth_decide(&p),
                        _ => sp_decide(&p),
                    }
                    .map_err(|e| fail(e.to_string(), certificate(&p)))?;
                    if !v.splittable {
                        return Err(fail(
                            format!("declared not splittable {:?}", v.failed_conditions),
                            certificate(&p),
                        ));
                    }
                    let fac = match mode {
                        Mode::Sp2 => sp_factor2(&p, DEFAULT_TRANSPORT_BUDGET),
                        Mode::Sp3 => sp_factor3(&p, DEFAULT_TRANSPORT_BUDGET),
                        _ => orth_factor2(&p, DEFAULT_TRANSPORT_BUDGET),
                    }
                    .map_err(|e| fail(e.to_string(), certificate(&p)))?;
                    if !verify_factorization(Some(&p), p.u(), &fac).ok() {
                        return Err(fail("witness does not verify".into(), certificate(&p)));
                    }
                    suite.keep(format!("criterion 5 {mode:?}"), Some(&p), p.u(), &fac);
                }
            }
        }
        summary.push(format!("{mode:?} {PER_MODE} in {}", secs(start.elapsed())));
    }
    Ok(format!(
        "decide and factor succeeded on every instance, 0 transport failures ({})",
        summary.join(", ")
    ))
}

fn criterion_6(suite: &mut Suite) -> Outcome {
    let mut r = rng(6);
    for eps in [Eps::Minus, Eps::Plus] {
        for i in 0..500 {
            let k = f(if r.gen_bool(0.5) { 3 } else { 5 });
            let n = match eps {
                Eps::Minus => r.gen_range(1..=4),
                Eps::Plus => 2 * r.gen_range(1..=2),
            };
            let (b, c) = sample::regular_pair(&mut r, k, eps, n);
            let (p, fac) = boxed_product(&b, &c, eps).map_err(|e| e.to_string())?;
            let u0 = &pencil_operator(&b, &c).map_err(|e| e.to_string())?
                + &Matrix::identity(k, n).scale(&k.from_i64(2));
            let want: Vec<Poly> = invariant_factors(&u0)
                .map_err(|e| e.to_string())?
                .iter()
                .map(Poly::r_transform)
                .collect();
            let got = invariant_factors(p.u()).map_err(|e| e.to_string())?;
            if got != want {
                return Err(format!(
                    "eps={} #{i}: got {got:?}, want {want:?}",
                    eps.sign()
                ));
            }
            suite.keep("criterion 6", Some(&p), p.u(), &fac);
        }
    }
    Ok("invariant factors match on 500 pairs per eps".into())
}

fn criterion_7(suite: &mut Suite) -> Outcome {
    let mut r = rng(7);
    for i in 0..200 {
        let k = f(if r.gen_bool(0.5) { 3 } else { 5 });
        let n = 2 * r.gen_range(1..=2);
        let (b, c) = sample::regular_pair(&mut r, k, Eps::Plus, n);
        let (p, fac) = boxed_product(&b, &c, Eps::Plus).map_err(|e| e.to_string())?;
        let w = wall_data(&p).map_err(|e| e.to_string())?;
        let fail = |what: &str| Err(format!("#{i}: {what}; {}", wall_json(&w)));
        if w.jordan.iter().any(|(_, _, m)| m % 2 == 1) {
            return fail("odd Jordan number");
        }
        for form in w.quad.values() {
            if !is_hyperbolic(form).map_err(|e| e.to_string())? {
                return fail("quadratic invariant not hyperbolic");
            }
        }
        for e in &w.herm {
            if !herm_is_hyperbolic(&e.form).map_err(|e| e.to_string())? {
                return fail("hermitian invariant not hyperbolic");
            }
        }
        suite.keep("criterion 7", Some(&p), p.u(), &fac);
    }
    Ok("200 skew boxed products: even Jordan numbers, hyperbolic invariants".into())
}

fn criterion_8(suite: &mut Suite) -> Outcome {
    let k = f(3);
    let mut r = rng(8);
    let mut checked = 0;
    for pal in [&[1, 0, 1][..], &[1, 1, 1, 1, 1]] {
        let p = Poly::from_i64s(k, pal);
        let tw = Tower::new(&p).map_err(|e| e.to_string())?;
        let m = tw.m().clone();
        let one = tw.one();
        let t = tw.t();
        let factor = tw.mul(
            &tw.sub(&one, &t),
            &tw.inv(&tw.add(&one, &t)).map_err(|e| e.to_string())?,
        );
        for rr in [1usize, 2] {
            for _ in 0..20 {
                let alpha = loop {
                    let a = Poly::new(k, sample::vector(&mut r, k, m.deg()));
                    if !a.is_zero() {
                        break a;
                    }
                };
                let model = model_sym_pair(&m, rr, &alpha).map_err(|e| e.to_string())?;
                let (pair, fac) =
                    boxed_product(&model.b, &model.c, Eps::Minus).map_err(|e| e.to_string())?;
                let w = wall_data(&pair).map_err(|e| e.to_string())?;
                let sole = w.quad.is_empty()
                    && w.herm.len() == 1
                    && w.herm[0].p == p
                    && w.herm[0].r == rr
                    && w.herm[0].form.dim() == 1;
                if !sole {
                    return Err(format!(
                        "p={p} r={rr}: unexpected invariants {}",
                        wall_json(&w)
                    ));
                }
                let x = unit_vector(k, pair.dim(), 0);
                let got = herm_value(&pair, &p, rr, &x, &x).map_err(|e| e.to_string())?;
                let want = tw.reduce(&tw.mul(&factor, &tw.from_k(&alpha)));
                if tw.reduce(&got) != want {
                    return Err(format!(
                        "p={p} r={rr} alpha={alpha}: value {got}, expected {want}"
                    ));
                }
                suite.keep("criterion 8", Some(&pair), pair.u(), &fac);
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} boxed models represent the predicted value"
    ))
}

/// The unipotent corpus shared by the relation and Witt-class criteria.
fn unipotent_corpus() -> Result<Vec<Isopair>, String> {
    let mut r = rng(9);
    (0..300)
        .map(|_| {
            let k = f(if r.gen_bool(0.5) { 3 } else { 5 });
            sample::unipotent_pair(&mut r, k, 6).map_err(|e| e.to_string())
        })
        .collect()
}

fn equivalent(a: &BilForm, b: &BilForm) -> Result<bool, String> {
    form_equivalent(a, b).map_err(|e| e.to_string())
}

fn relations(p: &Isopair) -> Result<(), String> {
    let w = wall_data(p).map_err(|e| e.to_string())?;
    let bq = |w: &WallData, r: usize| w.quad(1, r);
    let max_r = w.jordan.iter().map(|(_, r, _)| r).max().unwrap_or(0);
    let odd = |lo: usize, hi: usize| (lo..=hi).filter(|r| r % 2 == 1).collect::<Vec<_>>();

    let d = wall_data(&descent(p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    for r in odd(1, max_r) {
        if !equivalent(&bq(&d, r), &bq(&w, r + 2).neg())? {
            return Err(format!("descent fails at r={r}"));
        }
    }

    let t =
        wall_data(&twisted_descent(p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    for r in odd(3, max_r) {
        if !equivalent(&bq(&t, r), &bq(&w, r + 2).neg())? {
            return Err(format!("twisted descent fails at r={r}"));
        }
    }
    if !equivalent(&bq(&t, 1), &orth_sum(&bq(&w, 1), &bq(&w, 3).neg()))? {
        return Err("twisted descent fails at r=1".into());
    }

    for kk in 1..=max_r + 1 {
        let fw =
            wall_data(&folding(p, kk).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        for r in odd(1, kk - 1) {
            let sign = if (kk + r) % 2 == 0 { 1 } else { -1 };
            let want = orth_sum(&bq(&w, r), &sign_form(&bq(&w, 2 * kk - r), sign));
            if !equivalent(&bq(&fw, r), &want)? {
                return Err(format!("folding k={kk} fails at r={r}"));
            }
        }
        if kk % 2 == 1 && !equivalent(&bq(&fw, kk), &bq(&w, kk))? {
            return Err(format!("folding k={kk} fails at r=k"));
        }
        for r in odd(kk + 1, max_r + 2) {
            if bq(&fw, r).dim() != 0 {
                return Err(format!("folding k={kk} leaves an invariant at r={r}"));
            }
        }
    }
    Ok(())
}

fn criterion_9(corpus: &[Isopair]) -> Outcome {
    for (i, p) in corpus.iter().enumerate() {
        relations(p).map_err(|e| format!("#{i}: {e}; {}", certificate(p)))?;
    }
    Ok(format!(
        "descent, twisted descent and folding relations hold on {} pairs",
        corpus.len()
    ))
}

fn criterion_10(corpus: &[Isopair]) -> Outcome {
    for (i, p) in corpus.iter().enumerate() {
        let w = wall_data(p).map_err(|e| e.to_string())?;
        let max_l = w.jordan.iter().map(|(_, r, _)| r / 2).max().unwrap_or(0);
        let mut total = BilForm::zero(p.ctx(), FormKind::Symmetric);
        for l in 0..=max_l {
            total = orth_sum(
                &total,
                &sign_form(&w.b_k(l), if l % 2 == 0 { 1 } else { -1 }),
            );
        }
        if !witt_equivalent(p.b(), &total).map_err(|e| e.to_string())? {
            return Err(format!("#{i}: Witt classes differ; {}", certificate(p)));
        }
    }
    Ok(format!(
        "Witt class identity holds on {} pairs",
        corpus.len()
    ))
}

fn criterion_11() -> Outcome {
    const WANT: usize = 500;
    const MAX_TRIES: usize = 400_000;
    let mut r = rng(11);
    let mut found = 0;
    let mut tries = 0;
    while found < WANT {
        tries += 1;
        if tries > MAX_TRIES {
            return Err(format!(
                "only {found} qualifying pairs in {MAX_TRIES} draws"
            ));
        }
        let k = f(if r.gen_bool(0.5) { 3 } else { 5 });
        let n = r.gen_range(3..=6);
        let b = sample::regular_form(&mut r, k, Eps::Plus, n);
        let (p, _) = sample::splittable_pair(&mut r, &b).map_err(|e| e.to_string())?;
        if !p.is_unipotent() {
            continue;
        }
        let a = p.nilpart();
        if !a.pow(3).is_zero() || a.pow(2).is_zero() {
            continue;
        }
        let w = wall_data(&p).map_err(|e| e.to_string())?;
        if w.b_k(1).dim() == 0 {
            continue;
        }
        if !witt_simplifies(&w.b_k(0), &w.b_k(1).neg()).map_err(|e| e.to_string())? {
            return Err(format!(
                "draw {tries}: simplification fails; {}",
                wall_json(&w)
            ));
        }
        found += 1;
    }
    Ok(format!(
        "{WANT} pairs with (u-I)^2 != 0 = (u-I)^3 and nonzero B_3 ({tries} draws)"
    ))
}

fn criterion_12(suite: &Suite) -> Outcome {
    let mut two = 0;
    for (i, item) in suite.produced.iter().enumerate() {
        let rep = verify_factorization(item.pair.as_ref(), &item.u, &item.fac);
        if !rep.ok() {
            return Err(format!("{} (#{i}): {}", item.origin, rep.summary()));
        }
        if item.fac.factors.len() == 2 {
            if [rep.commutation, rep.commutes_with_v, rep.stabilization]
                .iter()
                .any(|d| *d != Some(true))
            {
                return Err(format!("{} (#{i}): diagnostics not computed", item.origin));
            }
            two += 1;
        }
    }
    Ok(format!(
        "{} factorizations verified, diagnostics passed on {two} two-factor witnesses",
        suite.produced.len()
    ))
}

fn run(n: usize, name: &str, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    let took = secs(start.elapsed());
    match outcome {
        Ok(detail) => {
            println!("PASS criterion {n:>2} [{name}] ({took}): {detail}");
            true
        }
        Err(detail) => {
            println!("FAIL criterion {n:>2} [{name}] ({took}): {detail}");
            false
        }
    }
}

fn main() -> ExitCode {
    let mut suite = Suite::default();
    let corpus = unipotent_corpus();
    let corpus_ref = || corpus.as_deref().map_err(Clone::clone);
    let results = [
        run(1, "symplectic two-factor sets", criterion_1),
        run(2, "symplectic three-factor sets", || {
            criterion_2(&mut suite)
        }),
        run(3, "orthogonal two-factor sets", criterion_3),
        run(4, "general linear two-factor sets", criterion_4),
        run(5, "constructive soundness", || criterion_5(&mut suite)),
        run(6, "boxed product invariant factors", || {
            criterion_6(&mut suite)
        }),
        run(7, "skew boxed products are hyperbolic", || {
            criterion_7(&mut suite)
        }),
        run(8, "boxed model value", || criterion_8(&mut suite)),
        run(9, "descent and folding relations", || {
            criterion_9(corpus_ref()?)
        }),
        run(10, "Witt class of unipotent pairs", || {
            criterion_10(corpus_ref()?)
        }),
        run(11, "Witt simplification", criterion_11),
        run(12, "commutation and stabilization", || criterion_12(&suite)),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
