use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use u2split_core::factor::{
    gl_decide, gl_factor, orth_decide, orth_factor2, sp_decide, sp_factor2, sp_factor3,
    twisted_model, verify_factorization, DEFAULT_TRANSPORT_BUDGET,
};
use u2split_core::forms::BilForm;
use u2split_core::io::{
    factorization_json, isopair_json, parse_factorization, parse_problem, Problem,
};
use u2split_core::isopair::{Eps, Isopair};
use u2split_core::linal::{jordan_numbers, similarity_transform};
use u2split_core::{sample, Error, FieldCtx, Matrix, Poly};

fn field(r: &mut ChaCha8Rng) -> FieldCtx {
    FieldCtx::prime(if r.gen_bool(0.5) { 3 } else { 5 }).unwrap()
}

/// `g diag(+-1) g^{-1}`.
fn involution(r: &mut ChaCha8Rng, k: FieldCtx, n: usize) -> Matrix {
    let d: Vec<_> = (0..n)
        .map(|_| k.from_i64(if r.gen_bool(0.5) { 1 } else { -1 }))
        .collect();
    let g = sample::invertible(r, k, n);
    &(&g * &Matrix::diag(k, &d)) * &g.inverse().unwrap()
}

/// The reflection in a non-isotropic vector, or the identity.
fn reflection(r: &mut ChaCha8Rng, b: &BilForm) -> Matrix {
    let k = b.ctx();
    let n = b.dim();
    let v = sample::vector(r, k, n);
    let bv = b.eval(&v, &v);
    if bv.is_zero() {
        return Matrix::identity(k, n);
    }
    let gv = b.gram().apply(&v);
    let c = &k.from_i64(2) / &bv;
    Matrix::from_fn(k, n, n, |i, j| {
        let d = &(&c * &v[i]) * &gv[j];
        if i == j {
            &k.one() - &d
        } else {
            -&d
        }
    })
}

#[test]
fn gl_on_matrices_similar_to_their_inverse() {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..500 {
        let k = field(&mut r);
        let n = r.gen_range(1..=5);
        let u = &involution(&mut r, k, n) * &involution(&mut r, k, n);
        assert!(similarity_transform(&u, &u.inverse().unwrap()).is_ok());
        let v = gl_decide(&u).unwrap();
        match gl_factor(&u) {
            Ok(fac) => {
                assert!(v.splittable);
                assert_eq!(fac.factors.len(), 2);
                assert!(verify_factorization(None, &u, &fac).ok());
                yes += 1;
            }
            Err(Error::NotSplittable(failed)) => {
                assert!(!v.splittable);
                assert_eq!(failed, v.failed_conditions);
                no += 1;
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }
    assert!(yes > 50 && no > 50, "yes {yes} no {no}");
}

#[test]
fn gl_rejects_matrices_not_similar_to_their_inverse() {
    let k = FieldCtx::prime(5).unwrap();
    let u = Matrix::from_i64(k, &[&[2]]);
    let v = gl_decide(&u).unwrap();
    assert!(!v.splittable);
}

#[test]
fn symplectic_decide_and_factor_agree() {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let k = field(&mut r);
        let n = 2 * r.gen_range(1..=3);
        let b = sample::regular_form(&mut r, k, Eps::Minus, n);
        let mut u = Matrix::identity(k, n);
        for _ in 0..r.gen_range(1..5) {
            u = &u * &sample::u2_isometry(&mut r, &b);
        }
        if r.gen_bool(0.3) {
            u = u.scale(&k.from_i64(-1));
        }
        let p = Isopair::new(Eps::Minus, b, u).unwrap();
        let verdict = sp_decide(&p).unwrap();
        // the verdict depends only on the isometry class
        let moved = p.change_basis(&sample::invertible(&mut r, k, n)).unwrap();
        assert_eq!(sp_decide(&moved).unwrap().splittable, verdict.splittable);
        match sp_factor2(&p, DEFAULT_TRANSPORT_BUDGET) {
            Ok(fac) => {
                assert!(verdict.splittable);
                assert!(verify_factorization(Some(&p), p.u(), &fac).ok());
            }
            Err(Error::NotSplittable(_)) => assert!(!verdict.splittable),
            Err(e) => panic!("unexpected error {e}"),
        }
        let fac = sp_factor3(&p, DEFAULT_TRANSPORT_BUDGET).unwrap();
        assert_eq!(fac.factors.len(), 3);
        assert!(verify_factorization(Some(&p), p.u(), &fac).ok());
    }
}

#[test]
fn orthogonal_decide_and_factor_agree() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..300 {
        let k = field(&mut r);
        let n = r.gen_range(1..=6);
        let b = sample::regular_form(&mut r, k, Eps::Plus, n);
        let mut u = Matrix::identity(k, n);
        for _ in 0..r.gen_range(0..6) {
            u = &u
                * &if r.gen_bool(0.5) {
                    reflection(&mut r, &b)
                } else {
                    sample::u2_isometry(&mut r, &b)
                };
        }
        let p = Isopair::new(Eps::Plus, b, u).unwrap();
        let verdict = orth_decide(&p).unwrap();
        let moved = p.change_basis(&sample::invertible(&mut r, k, n)).unwrap();
        assert_eq!(
            orth_decide(&moved).unwrap().failed_conditions,
            verdict.failed_conditions
        );
        match orth_factor2(&p, DEFAULT_TRANSPORT_BUDGET) {
            Ok(fac) => {
                assert!(verdict.splittable);
                assert!(verify_factorization(Some(&p), p.u(), &fac).ok());
                yes += 1;
            }
            Err(Error::NotSplittable(_)) => {
                assert!(!verdict.splittable);
                no += 1;
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }
    assert!(yes > 30 && no > 30, "yes {yes} no {no}");
}

#[test]
fn twisted_models_have_the_advertised_cells() {
    let k = FieldCtx::prime(5).unwrap();
    let t_minus_1 = Poly::linear(&k.one());
    for kk in 1..=3 {
        let (p, fac) = twisted_model(kk, &k.from_i64(2)).unwrap();
        let j = jordan_numbers(p.u()).unwrap();
        assert_eq!(j.get(&t_minus_1, 2 * kk + 1), 1);
        assert_eq!(j.get(&t_minus_1, 2 * kk - 1), 1);
        assert!(verify_factorization(Some(&p), p.u(), &fac).ok());
    }
}

#[test]
fn problems_and_factorizations_round_trip() {
    let mut r = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let k = field(&mut r);
        let eps = if r.gen_bool(0.5) {
            Eps::Plus
        } else {
            Eps::Minus
        };
        let n = 2 * r.gen_range(1..=3);
        let b = sample::regular_form(&mut r, k, eps, n);
        let (p, fac) = sample::splittable_pair(&mut r, &b).unwrap();
        let text = isopair_json(&p).to_string();
        let back = parse_problem(&text).unwrap();
        assert_eq!(back.pair(), Some(&p));
        let problem = Problem::Pair(p.clone());
        let report = verify_factorization(Some(&p), p.u(), &fac);
        let written = factorization_json(&problem, "test", &fac, &report).to_string();
        let (again, fac2) = parse_factorization(&written).unwrap();
        assert_eq!(again.pair(), Some(&p));
        assert_eq!(fac2, fac);
    }
}
